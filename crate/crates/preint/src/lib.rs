//! Discrete-time equivariant IMU preintegration on the tangent group of
//! Gal(3), plus the right-invariant extended-pose baseline used for
//! consistency comparisons.
//!
//! The estimator state lives on the symmetry group `Gal(3) ⋉ gal(3)`: a
//! single group element carries both the preintegrated navigation increment
//! `Υ = (ΔR, Δv, Δp, Δt)` and the IMU bias vector. Each IMU sample advances
//! the estimate through the group lift, propagates a 20×20 covariance of the
//! group-coupled error, and accumulates the first-order bias-update
//! Jacobian, so a later bias correction can adjust `Υ` without
//! re-integrating.
//!
//! Everything numerical is generic over the scalar through [`lie::Real`];
//! `f64` aliases are at the crate root. Checkpoint serialization
//! ([`checkpoint`]) is `f64`-only.

pub mod baseline;
pub mod checkpoint;
pub mod gravity;
pub mod input;
pub mod pipeline;
pub mod symmetry;

pub use baseline::BaselineState;
pub use gravity::{compose_pose, gamma_matrix, gamma_matrix_inv, StampedPose};
pub use input::{GravityModel, ImuInput, ImuSample, NoiseParams};
pub use pipeline::{propagate_covariance, PreintState, StepMatrices};
pub use symmetry::{input_action, inv_state_action, lift, state_action, ManifoldState};

pub type PreintState64 = PreintState<f64>;
pub type ManifoldState64 = ManifoldState<f64>;
pub type ImuInput64 = ImuInput<f64>;
pub type NoiseParams64 = NoiseParams<f64>;
pub type GravityModel64 = GravityModel<f64>;
pub type BaselineState64 = BaselineState<f64>;
