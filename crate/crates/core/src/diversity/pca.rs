use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::DiversityError;

/// Two-component principal projection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pca2 {
    /// `N x 2` projected points.
    pub points: Vec<[f64; 2]>,
    /// Unit-norm principal axes, each with its largest-magnitude entry positive.
    pub components: [Vec<f64>; 2],
    /// Covariance eigenvalues of the two axes.
    pub explained_variance: [f64; 2],
    /// The eigenvalues as fractions of total variance.
    pub explained_variance_ratio: [f64; 2],
    pub mean: Vec<f64>,
}

fn fix_sign(v: &mut [f64]) {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    if v[best] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// Projects rows of `data` onto the top two eigenvectors of their covariance
/// (sample covariance, `N - 1` denominator), computed by exact symmetric
/// eigendecomposition.
pub fn pca2(data: &DMatrix<f64>) -> Result<Pca2, DiversityError> {
    let (n, d) = data.shape();
    if n < 2 || d < 2 {
        return Err(DiversityError::TooSmall { rows: n, cols: d });
    }
    let mean: Vec<f64> = (0..d).map(|j| data.column(j).sum() / n as f64).collect();
    let mut centered = data.clone();
    for (j, m) in mean.iter().enumerate() {
        centered.column_mut(j).iter_mut().for_each(|x| *x -= m);
    }
    let cov = (centered.transpose() * &centered) / (n as f64 - 1.0);
    let total: f64 = cov.diagonal().sum();
    if total <= 0.0 {
        return Err(DiversityError::ZeroVariance);
    }

    let eig = SymmetricEigen::new(cov);
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .partial_cmp(&eig.eigenvalues[a])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });

    let take = |k: usize| -> (Vec<f64>, f64) {
        let idx = order[k];
        let mut v: Vec<f64> = eig.eigenvectors.column(idx).iter().copied().collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
        fix_sign(&mut v);
        (v, eig.eigenvalues[idx].max(0.0))
    };
    let (c1, l1) = take(0);
    let (c2, l2) = take(1);

    let points = (0..n)
        .map(|i| {
            let row = centered.row(i);
            let p1: f64 = row.iter().zip(&c1).map(|(a, b)| a * b).sum();
            let p2: f64 = row.iter().zip(&c2).map(|(a, b)| a * b).sum();
            [p1, p2]
        })
        .collect();

    Ok(Pca2 {
        points,
        components: [c1, c2],
        explained_variance: [l1, l2],
        explained_variance_ratio: [l1 / total, l2 / total],
        mean,
    })
}
