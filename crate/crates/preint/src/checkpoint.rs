//! JSON checkpointing of preintegration states.
//!
//! One record per state, schema (all numbers `f64`):
//!
//! ```json
//! {
//!   "variant": "equivariant" | "baseline",
//!   "upsilon": { "A": [[..3],[..3],[..3]], "a": [..3], "b": [..3], "c": 0.0 },
//!   "bias": [..10],
//!   "sigma": [[..20]; 20],
//!   "j_xi": [[..20]; 20],
//!   "elapsed": 0.0
//! }
//! ```
//!
//! `sigma` and `j_xi` are row-major. Baseline states embed into the same
//! shape: `upsilon.c` carries the accumulated Δt, `bias` is zero-padded to
//! ten channels, the 15×15 covariance occupies the rows/columns of the
//! effective axes (0–8 and 10–15) and `j_xi` is the identity.

use crate::baseline::{BaselineState, Matrix15, Vector6};
use crate::pipeline::PreintState;
use crate::symmetry::{inv_state_action, ManifoldState};
use lie::gal3::Gal3Element;
use lie::so3::Rotation;
use lie::{Matrix20, Matrix3, Vector10, Vector3};
use serde::{Deserialize, Serialize};

/// Rows/columns of the 20-dim error that carry the 15 effective axes
/// (extended-pose error plus real IMU biases).
pub const EFFECTIVE_AXES: [usize; 15] = [0, 1, 2, 3, 4, 5, 6, 7, 8, 10, 11, 12, 13, 14, 15];

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UpsilonRecord {
    #[serde(rename = "A")]
    pub a_matrix: [[f64; 3]; 3],
    pub a: [f64; 3],
    pub b: [f64; 3],
    pub c: f64,
}

/// Serialized preintegration state, either variant.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckpointRecord {
    pub variant: String,
    pub upsilon: UpsilonRecord,
    pub bias: [f64; 10],
    pub sigma: Vec<Vec<f64>>,
    pub j_xi: Vec<Vec<f64>>,
    pub elapsed: f64,
}

fn matrix3_to_rows(m: &Matrix3<f64>) -> [[f64; 3]; 3] {
    std::array::from_fn(|i| std::array::from_fn(|j| m[(i, j)]))
}

fn vec3_to_array(v: &Vector3<f64>) -> [f64; 3] {
    [v[0], v[1], v[2]]
}

fn matrix20_to_rows(m: &Matrix20<f64>) -> Vec<Vec<f64>> {
    (0..20)
        .map(|i| (0..20).map(|j| m[(i, j)]).collect())
        .collect()
}

fn rows_to_matrix20(rows: &[Vec<f64>]) -> Result<Matrix20<f64>, CheckpointError> {
    if rows.len() != 20 || rows.iter().any(|r| r.len() != 20) {
        return Err(CheckpointError::Shape);
    }
    Ok(Matrix20::from_fn(|i, j| rows[i][j]))
}

#[derive(Debug, thiserror::Error)]
pub enum CheckpointError {
    #[error("matrix field is not 20x20")]
    Shape,
    #[error("unknown variant {0:?}")]
    Variant(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CheckpointRecord {
    pub fn from_preint(state: &PreintState<f64>) -> Self {
        let xi = state.manifold_state();
        CheckpointRecord {
            variant: "equivariant".to_owned(),
            upsilon: UpsilonRecord {
                a_matrix: matrix3_to_rows(xi.upsilon.rotation.matrix()),
                a: vec3_to_array(&xi.upsilon.velocity),
                b: vec3_to_array(&xi.upsilon.position),
                c: xi.upsilon.time,
            },
            bias: std::array::from_fn(|i| xi.bias[i]),
            sigma: matrix20_to_rows(&state.sigma),
            j_xi: matrix20_to_rows(&state.j_xi),
            elapsed: state.elapsed,
        }
    }

    pub fn from_baseline(state: &BaselineState<f64>) -> Self {
        let mut sigma = Matrix20::zeros();
        for (ei, &i) in EFFECTIVE_AXES.iter().enumerate() {
            for (ej, &j) in EFFECTIVE_AXES.iter().enumerate() {
                sigma[(i, j)] = state.sigma[(ei, ej)];
            }
        }
        CheckpointRecord {
            variant: "baseline".to_owned(),
            upsilon: UpsilonRecord {
                a_matrix: matrix3_to_rows(state.delta_pose.rotation.matrix()),
                a: vec3_to_array(&state.delta_pose.velocity),
                b: vec3_to_array(&state.delta_pose.position),
                c: state.dt_total,
            },
            bias: std::array::from_fn(|i| if i < 6 { state.bias[i] } else { 0.0 }),
            sigma: matrix20_to_rows(&sigma),
            j_xi: matrix20_to_rows(&Matrix20::identity()),
            elapsed: state.dt_total,
        }
    }

    pub fn to_preint(&self) -> Result<PreintState<f64>, CheckpointError> {
        if self.variant != "equivariant" {
            return Err(CheckpointError::Variant(self.variant.clone()));
        }
        let upsilon = self.upsilon_element();
        let bias = Vector10::from_fn(|i, _| self.bias[i]);
        let mut state = PreintState::new(bias, rows_to_matrix20(&self.sigma)?);
        state.x_hat = inv_state_action(&ManifoldState::new(upsilon, bias));
        state.j_xi = rows_to_matrix20(&self.j_xi)?;
        state.elapsed = self.elapsed;
        Ok(state)
    }

    pub fn to_baseline(&self) -> Result<BaselineState<f64>, CheckpointError> {
        if self.variant != "baseline" {
            return Err(CheckpointError::Variant(self.variant.clone()));
        }
        let full = rows_to_matrix20(&self.sigma)?;
        let mut sigma = Matrix15::zeros();
        for (ei, &i) in EFFECTIVE_AXES.iter().enumerate() {
            for (ej, &j) in EFFECTIVE_AXES.iter().enumerate() {
                sigma[(ei, ej)] = full[(i, j)];
            }
        }
        Ok(BaselineState {
            delta_pose: self.upsilon_element().extended_pose(),
            dt_total: self.upsilon.c,
            bias: Vector6::from_fn(|i, _| self.bias[i]),
            sigma,
        })
    }

    fn upsilon_element(&self) -> Gal3Element<f64> {
        Gal3Element::new(
            Rotation::from_matrix_unchecked(Matrix3::from_fn(|i, j| self.upsilon.a_matrix[i][j])),
            Vector3::from_fn(|i, _| self.upsilon.a[i]),
            Vector3::from_fn(|i, _| self.upsilon.b[i]),
            self.upsilon.c,
        )
    }

    pub fn to_json(&self) -> Result<String, CheckpointError> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self, CheckpointError> {
        Ok(serde_json::from_str(text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::input::{ImuInput, NoiseParams};
    use approx::assert_abs_diff_eq;
    use lie::Vector3;

    #[test]
    fn preint_round_trip() {
        let mut state = PreintState::new(
            Vector10::from_fn(|i, _| if i < 6 { 0.01 * i as f64 } else { 0.0 }),
            Matrix20::from_diagonal_element(1e-6),
        );
        let qd = NoiseParams::isotropic(0.07, 0.19, 1.5e-4, 1.2e-2).qd();
        for k in 0..40 {
            state.step(
                &ImuInput::new(
                    Vector3::new(0.1, -0.2, 0.3 + 0.001 * k as f64),
                    Vector3::new(0.5, 9.6, -0.4),
                    0.005,
                ),
                &qd,
            );
        }
        let json = CheckpointRecord::from_preint(&state).to_json().unwrap();
        let back = CheckpointRecord::from_json(&json)
            .unwrap()
            .to_preint()
            .unwrap();
        assert_abs_diff_eq!(
            back.x_hat.group.matrix(),
            state.x_hat.group.matrix(),
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(back.x_hat.tangent, state.x_hat.tangent, epsilon = 1e-12);
        assert_abs_diff_eq!(back.sigma, state.sigma, epsilon = 0.0);
        assert_abs_diff_eq!(back.j_xi, state.j_xi, epsilon = 0.0);
        assert_eq!(back.elapsed, state.elapsed);
    }

    #[test]
    fn baseline_round_trip_and_variant_tagging() {
        let mut state = BaselineState::new(
            Vector6::from_fn(|i, _| 0.005 * i as f64),
            Matrix15::from_diagonal_element(1e-6),
        );
        let noise = NoiseParams::isotropic(0.07, 0.19, 1.5e-4, 1.2e-2);
        for _ in 0..20 {
            state.step(
                &ImuInput::new(
                    Vector3::new(0.2, 0.1, -0.1),
                    Vector3::new(0.0, 9.8, 0.1),
                    0.005,
                ),
                &noise,
            );
        }
        let record = CheckpointRecord::from_baseline(&state);
        assert_eq!(record.variant, "baseline");
        let json = record.to_json().unwrap();
        let back = CheckpointRecord::from_json(&json).unwrap();
        let restored = back.to_baseline().unwrap();
        assert_abs_diff_eq!(
            restored.delta_pose.matrix(),
            state.delta_pose.matrix(),
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(restored.sigma, state.sigma, epsilon = 0.0);
        assert_eq!(restored.dt_total, state.dt_total);
        // Wrong-variant decode is refused.
        assert!(back.to_preint().is_err());
    }
}
