use serde::{Deserialize, Serialize};

use super::ProbeError;
use crate::diversity::kde_1d;

/// A density curve over equal-width bins.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PdfCurve {
    pub bin_centers: Vec<f64>,
    pub densities: Vec<f64>,
    pub bin_width: f64,
}

impl PdfCurve {
    pub fn integral(&self) -> f64 {
        self.densities.iter().sum::<f64>() * self.bin_width
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("bin_center,density\n");
        for (c, d) in self.bin_centers.iter().zip(&self.densities) {
            out.push_str(&format!("{c},{d}\n"));
        }
        out
    }
}

fn check(values: &[f64]) -> Result<(f64, f64), ProbeError> {
    if values.is_empty() {
        return Err(ProbeError::EmptyValues);
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(ProbeError::Shape("non-finite value".into()));
    }
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok((lo, hi))
}

/// Histogram density over `bins` equal bins spanning [min, max]; the last bin
/// includes the maximum. A zero-width range gives one bin of width 1 centered
/// on the value.
pub fn histogram_pdf(values: &[f64], bins: usize) -> Result<PdfCurve, ProbeError> {
    if bins == 0 {
        return Err(ProbeError::Shape("bins must be at least 1".into()));
    }
    let (lo, hi) = check(values)?;
    if hi == lo {
        return Ok(PdfCurve { bin_centers: vec![lo], densities: vec![1.0], bin_width: 1.0 });
    }
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    for &v in values {
        let i = (((v - lo) / width).floor() as usize).min(bins - 1);
        counts[i] += 1;
    }
    let n = values.len() as f64;
    Ok(PdfCurve {
        bin_centers: (0..bins).map(|i| lo + (i as f64 + 0.5) * width).collect(),
        densities: counts.iter().map(|&c| c as f64 / (n * width)).collect(),
        bin_width: width,
    })
}

/// Gaussian-smoothed density on `points` grid points over [min − 3h, max + 3h]
/// with Scott's bandwidth, rescaled so the grid sums to 1.
pub fn kde_pdf(values: &[f64], points: usize) -> Result<PdfCurve, ProbeError> {
    if points < 2 {
        return Err(ProbeError::Shape("at least 2 grid points required".into()));
    }
    let (lo, hi) = check(values)?;
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let sd = if values.len() > 1 { (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt() } else { 0.0 };
    let h = if sd > 0.0 { sd * n.powf(-0.2) } else { 0.05 };
    let (a, b) = (lo - 3.0 * h, hi + 3.0 * h);
    let width = (b - a) / points as f64;
    let centers: Vec<f64> = (0..points).map(|i| a + (i as f64 + 0.5) * width).collect();
    let mut densities = kde_1d(values, h, &centers);
    let total: f64 = densities.iter().sum::<f64>() * width;
    densities.iter_mut().for_each(|d| *d /= total);
    Ok(PdfCurve { bin_centers: centers, densities, bin_width: width })
}
