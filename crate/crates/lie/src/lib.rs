//! Matrix Lie groups for inertial navigation.
//!
//! This crate provides closed-form implementations of the groups that show up
//! in strapdown inertial integration:
//!
//! - [`so3`] — rotations, with the left Jacobian `Γ₁`, the auxiliary
//!   function `Γ₂`, and their scalar coefficient kernels.
//! - [`se23`] — extended poses (rotation, velocity, position).
//! - [`gal3`] — Galilean transforms (rotation, velocity, position, time),
//!   including the 10×10 left/right Jacobians and their derivative kernels.
//! - [`tangent`] — the left-trivialized tangent group `Gal(3) ⋉ gal(3)`,
//!   a semi-direct product coupling a Galilean transform with a Lie-algebra
//!   element.
//!
//! Everything is generic over the scalar type through [`Real`] (`f32` or
//! `f64`); concrete `f64` aliases are exported at the crate root. All
//! functions are pure and allocation-free, operating on stack-allocated
//! `nalgebra` matrices.
//!
//! Production code paths are series-free: every map is evaluated in closed
//! form, with small-angle Taylor branches below [`coeffs::SMALL_ANGLE`]. The
//! [`oracle`] module holds the truncated-series and finite-difference
//! reference implementations used by the test suites and the `check` runner.

pub mod coeffs;
pub mod gal3;
pub mod oracle;
pub mod scalar;
pub mod se23;
pub mod so3;
pub mod tangent;

pub use scalar::Real;

use nalgebra::SMatrix;

pub type Matrix3<T> = SMatrix<T, 3, 3>;
pub type Matrix5<T> = SMatrix<T, 5, 5>;
pub type Matrix9<T> = SMatrix<T, 9, 9>;
pub type Matrix10<T> = SMatrix<T, 10, 10>;
pub type Matrix20<T> = SMatrix<T, 20, 20>;
pub type Vector3<T> = SMatrix<T, 3, 1>;
pub type Vector9<T> = SMatrix<T, 9, 1>;
pub type Vector10<T> = SMatrix<T, 10, 1>;
pub type Vector20<T> = SMatrix<T, 20, 1>;

/// Angular margin below which `log` refuses to pick a rotation axis.
///
/// A rotation by exactly π has two equally valid axis-angle representations;
/// callers integrating IMU increments never get close to this, so failing
/// loudly beats silently picking a sign.
pub const AXIS_EPSILON: f64 = 1e-6;

/// Rotation angle is within [`AXIS_EPSILON`] of π, where the axis-angle
/// representation is ambiguous.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("rotation angle within {AXIS_EPSILON} rad of pi; axis-angle representation is ambiguous")]
pub struct NearPiRotation;

pub type Rotation64 = so3::Rotation<f64>;
pub type ExtendedPose64 = se23::ExtendedPose<f64>;
pub type Se23Tangent64 = se23::Se23Tangent<f64>;
pub type Gal3Element64 = gal3::Gal3Element<f64>;
pub type Gal3Tangent64 = gal3::Gal3Tangent<f64>;
pub type TangentGroupElement64 = tangent::TangentGroupElement<f64>;

pub type Rotation32 = so3::Rotation<f32>;
pub type Gal3Element32 = gal3::Gal3Element<f32>;
pub type Gal3Tangent32 = gal3::Gal3Tangent<f32>;
