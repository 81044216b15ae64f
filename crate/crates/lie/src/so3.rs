//! SO(3) primitives: hat/vee, exponential and logarithmic maps, the left
//! Jacobian `Γ₁`, the auxiliary function `Γ₂`, and `Γ₁⁻¹`.
//!
//! `Γ₁(ω) = I + κ₁ω^∧ + κ₂ω^∧ω^∧` and `Γ₂(ω) = ½I + κ₂ω^∧ + κ₃ω^∧ω^∧`
//! are the power series `Σ (ω^∧)ᵏ/(k+1)!` and `Σ (ω^∧)ᵏ/(k+2)!` in closed
//! form; they appear throughout the extended-pose and Galilean maps.

use crate::coeffs;
use crate::scalar::{real, Real};
use crate::{Matrix3, NearPiRotation, Vector3, AXIS_EPSILON};

/// A 3×3 rotation matrix.
///
/// Constructors do not orthonormalize; use [`Rotation::is_valid`] to audit a
/// matrix of doubtful provenance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation<T: Real> {
    matrix: Matrix3<T>,
}

impl<T: Real> Rotation<T> {
    pub fn identity() -> Self {
        Rotation {
            matrix: Matrix3::identity(),
        }
    }

    /// Wraps a matrix that is already known to be a rotation.
    pub fn from_matrix_unchecked(matrix: Matrix3<T>) -> Self {
        Rotation { matrix }
    }

    pub fn matrix(&self) -> &Matrix3<T> {
        &self.matrix
    }

    /// Inverse rotation (the transpose).
    pub fn inverse(&self) -> Self {
        Rotation {
            matrix: self.matrix.transpose(),
        }
    }

    pub fn compose(&self, other: &Self) -> Self {
        Rotation {
            matrix: self.matrix * other.matrix,
        }
    }

    /// Rotate a vector.
    pub fn apply(&self, v: &Vector3<T>) -> Vector3<T> {
        self.matrix * v
    }

    /// Rotate a vector by the inverse rotation.
    pub fn apply_inverse(&self, v: &Vector3<T>) -> Vector3<T> {
        self.matrix.tr_mul(v)
    }

    /// Orthonormality and orientation check: `‖R Rᵀ − I‖_F ≤ tol` and
    /// `|det R − 1| ≤ tol`.
    pub fn is_valid(&self, tol: T) -> bool {
        let gram = self.matrix * self.matrix.transpose() - Matrix3::identity();
        gram.norm() <= tol && (self.matrix.determinant() - T::one()).abs() <= tol
    }
}

impl<T: Real> std::ops::Mul for Rotation<T> {
    type Output = Rotation<T>;
    fn mul(self, rhs: Self) -> Self {
        self.compose(&rhs)
    }
}

/// Skew-symmetric matrix of `v`, satisfying `hat(v)·w = v × w`.
pub fn hat<T: Real>(v: &Vector3<T>) -> Matrix3<T> {
    Matrix3::new(
        T::zero(),
        -v.z,
        v.y,
        v.z,
        T::zero(),
        -v.x,
        -v.y,
        v.x,
        T::zero(),
    )
}

/// Inverse of [`hat`]; reads the off-diagonal entries without symmetrizing.
pub fn vee<T: Real>(m: &Matrix3<T>) -> Vector3<T> {
    Vector3::new(m[(2, 1)], m[(0, 2)], m[(1, 0)])
}

/// Exponential map of SO(3) (Rodrigues' formula).
pub fn exp<T: Real>(omega: &Vector3<T>) -> Rotation<T> {
    let theta = omega.norm();
    let w = hat(omega);
    let matrix = Matrix3::identity() + w * coeffs::kappa0(theta) + w * w * coeffs::kappa1(theta);
    Rotation { matrix }
}

/// Logarithmic map of SO(3); the result has `‖ω‖ ≤ π`.
///
/// Fails with [`NearPiRotation`] when the angle is within [`AXIS_EPSILON`]
/// of π, where the axis sign is ambiguous.
pub fn log<T: Real>(rotation: &Rotation<T>) -> Result<Vector3<T>, NearPiRotation> {
    let r = rotation.matrix();
    let half: T = real(0.5);
    // cosθ from the trace, sinθ·axis from the skew part.
    let cos = ((r.trace() - T::one()) * half).clamp(-T::one(), T::one());
    let skew = Vector3::new(
        (r[(2, 1)] - r[(1, 2)]) * half,
        (r[(0, 2)] - r[(2, 0)]) * half,
        (r[(1, 0)] - r[(0, 1)]) * half,
    );
    let sin = skew.norm();
    let theta = sin.atan2(cos);
    if theta > real::<T>(std::f64::consts::PI - AXIS_EPSILON) {
        return Err(NearPiRotation);
    }
    // skew = sinθ·axis; rescale by θ/sinθ. The ratio is 1 + O(θ²), so below
    // 1e-9 rad the identity rescale is already exact to ~1e-27.
    if theta < real(1e-9) {
        return Ok(skew);
    }
    Ok(skew * (theta / sin))
}

/// SO(3) left Jacobian `Γ₁(ω) = I + κ₁ω^∧ + κ₂ω^∧ω^∧`.
pub fn gamma1<T: Real>(omega: &Vector3<T>) -> Matrix3<T> {
    let theta = omega.norm();
    let w = hat(omega);
    Matrix3::identity() + w * coeffs::kappa1(theta) + w * w * coeffs::kappa2(theta)
}

/// Auxiliary function `Γ₂(ω) = ½I + κ₂ω^∧ + κ₃ω^∧ω^∧ = Σ (ω^∧)ᵏ/(k+2)!`.
pub fn gamma2<T: Real>(omega: &Vector3<T>) -> Matrix3<T> {
    let theta = omega.norm();
    let w = hat(omega);
    Matrix3::identity() * real::<T>(0.5) + w * coeffs::kappa2(theta) + w * w * coeffs::kappa3(theta)
}

/// Inverse of the left Jacobian, `Γ₁⁻¹(ω) = I − ½ω^∧ + κ₇ω^∧ω^∧`.
///
/// Valid for `‖ω‖ < 2π`.
pub fn gamma1_inv<T: Real>(omega: &Vector3<T>) -> Matrix3<T> {
    let theta = omega.norm();
    let w = hat(omega);
    Matrix3::identity() - w * real::<T>(0.5) + w * w * coeffs::kappa7(theta)
}
