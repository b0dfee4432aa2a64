use serde::{Deserialize, Serialize};

use super::DiversityError;
use crate::Execution;

const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Standard normal density.
pub fn gaussian_kernel(u: f64) -> f64 {
    INV_SQRT_2PI * (-0.5 * u * u).exp()
}

/// One-dimensional Gaussian KDE evaluated at `at`.
pub fn kde_1d(samples: &[f64], bandwidth: f64, at: &[f64]) -> Vec<f64> {
    let n = samples.len() as f64;
    at.iter()
        .map(|&x| samples.iter().map(|&s| gaussian_kernel((x - s) / bandwidth)).sum::<f64>() / (n * bandwidth))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BandwidthRule {
    /// `h = sigma * N^(-1/6)` per dimension.
    Scott,
    Fixed { hx: f64, hy: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KdeOptions {
    pub resolution: [usize; 2],
    pub rule: BandwidthRule,
    /// Used for a dimension whose sample spread is zero.
    pub fallback_bandwidth: f64,
}

impl Default for KdeOptions {
    fn default() -> Self {
        Self { resolution: [100, 100], rule: BandwidthRule::Scott, fallback_bandwidth: 0.05 }
    }
}

/// Gaussian product-kernel density evaluated at cell centers.
///
/// `values` is row-major with `resolution[1]` rows (y) of `resolution[0]`
/// cells (x): the cell at column `ix`, row `iy` is `values[iy * nx + ix]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityGrid {
    pub x_range: [f64; 2],
    pub y_range: [f64; 2],
    pub resolution: [usize; 2],
    pub bandwidth: [f64; 2],
    pub values: Vec<f64>,
    /// Set for dimensions where the fallback bandwidth replaced a zero spread.
    #[serde(default)]
    pub degenerate: [bool; 2],
}

impl DensityGrid {
    pub fn cell_size(&self) -> [f64; 2] {
        [
            (self.x_range[1] - self.x_range[0]) / self.resolution[0] as f64,
            (self.y_range[1] - self.y_range[0]) / self.resolution[1] as f64,
        ]
    }

    pub fn cell_center(&self, ix: usize, iy: usize) -> [f64; 2] {
        let [dx, dy] = self.cell_size();
        [self.x_range[0] + (ix as f64 + 0.5) * dx, self.y_range[0] + (iy as f64 + 0.5) * dy]
    }

    pub fn value(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.resolution[0] + ix]
    }

    /// Midpoint-rule integral of the density over the window.
    pub fn mass(&self) -> f64 {
        let [dx, dy] = self.cell_size();
        self.values.iter().sum::<f64>() * dx * dy
    }

    /// Index `(ix, iy)` of the largest cell (first one on ties).
    pub fn argmax(&self) -> (usize, usize) {
        let mut best = 0;
        for (i, v) in self.values.iter().enumerate() {
            if *v > self.values[best] {
                best = i;
            }
        }
        (best % self.resolution[0], best / self.resolution[0])
    }

    /// Area of cells whose density is at least `threshold`.
    pub fn support_area(&self, threshold: f64) -> f64 {
        let [dx, dy] = self.cell_size();
        self.values.iter().filter(|v| **v >= threshold).count() as f64 * dx * dy
    }

    /// CSV with columns `x,y,density`, one row per cell.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y,density\n");
        for iy in 0..self.resolution[1] {
            for ix in 0..self.resolution[0] {
                let [x, y] = self.cell_center(ix, iy);
                out.push_str(&format!("{x},{y},{}\n", self.value(ix, iy)));
            }
        }
        out
    }
}

fn sample_std(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
}

pub fn kde_grid(points: &[[f64; 2]], opts: &KdeOptions) -> Result<DensityGrid, DiversityError> {
    kde_grid_with(points, opts, Execution::default())
}

/// Evaluates the KDE on a grid spanning the data bounding box widened by
/// three bandwidths on each side.
pub fn kde_grid_with(points: &[[f64; 2]], opts: &KdeOptions, exec: Execution) -> Result<DensityGrid, DiversityError> {
    let n = points.len();
    if n < 2 {
        return Err(DiversityError::TooSmall { rows: n, cols: 2 });
    }
    let [nx, ny] = opts.resolution;
    if nx == 0 || ny == 0 {
        return Err(DiversityError::InvalidOption("grid resolution must be positive".into()));
    }

    let mut bandwidth = [0.0; 2];
    let mut degenerate = [false; 2];
    for dim in 0..2 {
        let h = match opts.rule {
            BandwidthRule::Scott => {
                let col: Vec<f64> = points.iter().map(|p| p[dim]).collect();
                sample_std(&col) * (n as f64).powf(-1.0 / 6.0)
            }
            BandwidthRule::Fixed { hx, hy } => [hx, hy][dim],
        };
        if h > 0.0 && h.is_finite() {
            bandwidth[dim] = h;
        } else {
            log::warn!("zero spread in dimension {dim}; using fallback bandwidth {}", opts.fallback_bandwidth);
            bandwidth[dim] = opts.fallback_bandwidth;
            degenerate[dim] = true;
        }
    }
    let [hx, hy] = bandwidth;

    let lo = |dim: usize| points.iter().map(|p| p[dim]).fold(f64::INFINITY, f64::min);
    let hi = |dim: usize| points.iter().map(|p| p[dim]).fold(f64::NEG_INFINITY, f64::max);
    let x_range = [lo(0) - 3.0 * hx, hi(0) + 3.0 * hx];
    let y_range = [lo(1) - 3.0 * hy, hi(1) + 3.0 * hy];

    let dx = (x_range[1] - x_range[0]) / nx as f64;
    let dy = (y_range[1] - y_range[0]) / ny as f64;
    let xs: Vec<f64> = (0..nx).map(|i| x_range[0] + (i as f64 + 0.5) * dx).collect();

    // Per-point kernel factors along x, reused by every row.
    let kx: Vec<Vec<f64>> = points
        .iter()
        .map(|p| xs.iter().map(|&x| gaussian_kernel((x - p[0]) / hx)).collect())
        .collect();
    let norm = 1.0 / (n as f64 * hx * hy);

    let rows = exec.map_range(ny, |iy| {
        let y = y_range[0] + (iy as f64 + 0.5) * dy;
        let mut row = vec![0.0; nx];
        for (p, kxp) in points.iter().zip(&kx) {
            let ky = gaussian_kernel((y - p[1]) / hy);
            for (cell, k) in row.iter_mut().zip(kxp) {
                *cell += ky * k;
            }
        }
        row.iter_mut().for_each(|v| *v *= norm);
        row
    });

    Ok(DensityGrid {
        x_range,
        y_range,
        resolution: [nx, ny],
        bandwidth,
        values: rows.concat(),
        degenerate,
    })
}
