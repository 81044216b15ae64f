//! Consistency metrics: NEES on the 15 effective axes, and summary
//! statistics.
//!
//! The 20-dim equivariant error carries two structurally noise-free slots
//! (the Δt slot and the virtual time bias) plus the virtual velocity bias;
//! NEES is evaluated on the remaining 15 axes — extended-pose error and
//! real IMU biases — matching the dimension used by the baseline.

use nalgebra::SMatrix;
use preint::checkpoint::EFFECTIVE_AXES;

pub type Matrix15 = SMatrix<f64, 15, 15>;
pub type Vector15 = SMatrix<f64, 15, 1>;

/// Condition-number ceiling for the NEES solve; beyond it the sample is
/// reported as unusable rather than silently regularized.
pub const CONDITION_LIMIT: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum MetricsError {
    #[error("covariance is numerically singular (condition {0:.3e})")]
    IllConditioned(f64),
    #[error("covariance has a non-positive eigenvalue {0:.3e}")]
    NotPositiveDefinite(f64),
}

/// Extracts the 15 effective rows/columns from a 20×20 covariance.
pub fn effective_covariance(sigma: &lie::Matrix20<f64>) -> Matrix15 {
    let mut out = Matrix15::zeros();
    for (ei, &i) in EFFECTIVE_AXES.iter().enumerate() {
        for (ej, &j) in EFFECTIVE_AXES.iter().enumerate() {
            out[(ei, ej)] = sigma[(i, j)];
        }
    }
    out
}

/// Extracts the 15 effective entries from a 20-dim error.
pub fn effective_error(eps: &lie::Vector20<f64>) -> Vector15 {
    Vector15::from_fn(|i, _| eps[EFFECTIVE_AXES[i]])
}

/// `εᵀ Σ⁻¹ ε` through a symmetric eigendecomposition, failing on
/// ill-conditioned or non-PSD covariances.
pub fn nees(eps: &Vector15, sigma: &Matrix15) -> Result<f64, MetricsError> {
    let symmetric = (sigma + sigma.transpose()) * 0.5;
    let eig = nalgebra::SymmetricEigen::new(symmetric);
    let max = eig.eigenvalues.max();
    let min = eig.eigenvalues.min();
    if min <= 0.0 {
        return Err(MetricsError::NotPositiveDefinite(min));
    }
    if max / min > CONDITION_LIMIT {
        return Err(MetricsError::IllConditioned(max / min));
    }
    let rotated = eig.eigenvectors.transpose() * eps;
    let mut acc = 0.0;
    for i in 0..15 {
        acc += rotated[i] * rotated[i] / eig.eigenvalues[i];
    }
    Ok(acc)
}

/// NEES of a 20-dim equivariant error against its 20×20 covariance, on the
/// effective axes.
pub fn nees_effective(
    eps: &lie::Vector20<f64>,
    sigma: &lie::Matrix20<f64>,
) -> Result<f64, MetricsError> {
    nees(&effective_error(eps), &effective_covariance(sigma))
}

/// Summary order statistics of a sample.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SampleStats {
    pub count: usize,
    pub mean: f64,
    pub median: f64,
    pub q25: f64,
    pub q75: f64,
}

impl SampleStats {
    pub fn from_samples(samples: &[f64]) -> Option<Self> {
        if samples.is_empty() {
            return None;
        }
        let mut sorted = samples.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite samples"));
        let quantile = |q: f64| -> f64 {
            // Linear interpolation between closest ranks.
            let pos = q * (sorted.len() - 1) as f64;
            let lo = pos.floor() as usize;
            let hi = pos.ceil() as usize;
            let frac = pos - lo as f64;
            sorted[lo] * (1.0 - frac) + sorted[hi] * frac
        };
        Some(SampleStats {
            count: sorted.len(),
            mean: sorted.iter().sum::<f64>() / sorted.len() as f64,
            median: quantile(0.5),
            q25: quantile(0.25),
            q75: quantile(0.75),
        })
    }
}
