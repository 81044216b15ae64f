//! Evaluation harness for the preintegration pipelines.
//!
//! Three workflows, all `f64`:
//!
//! - [`sim`] — analytic trajectories, synthetic IMU generation and
//!   Monte-Carlo consistency runs (normalized ANEES and per-step
//!   linearization error).
//! - [`euroc`] — ASL-layout dataset evaluation: parse IMU/ground-truth CSVs,
//!   partition into fixed-length segments, integrate each from ground truth
//!   and report per-segment NEES statistics.
//! - [`check`] — a runtime invariant suite (group axioms, series oracles,
//!   Jacobian cross-checks, lift/equivariance, error-dynamics Jacobians)
//!   for the `check` CLI subcommand.
//!
//! [`fixture`] writes a synthetic dataset in the EuRoC directory layout so
//! the dataset pipeline can be exercised hermetically, and [`report`] holds
//! the CSV/JSON output schemas.

pub mod check;
pub mod euroc;
pub mod fixture;
pub mod metrics;
pub mod report;
pub mod sim;

use serde::{Deserialize, Serialize};

/// The estimators under comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Preintegration with the group-coupled (equivariant) error.
    Equivariant,
    /// Right-invariant extended-pose baseline with additive bias error.
    Baseline,
}

impl Method {
    pub const ALL: [Method; 2] = [Method::Equivariant, Method::Baseline];

    pub fn name(&self) -> &'static str {
        match self {
            Method::Equivariant => "equivariant",
            Method::Baseline => "baseline",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}
