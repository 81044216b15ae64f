//! Independent reference implementations used to validate the closed forms.
//!
//! Everything here is deliberately slow and dumb: truncated power series and
//! central differences, kept free of the closed-form kernels they are meant
//! to check. These functions back the unit/property tests and the runtime
//! `check` command; production code never calls them.

use crate::gal3::{Gal3Element, Gal3Tangent};
use crate::se23::Se23Tangent;
use crate::so3::hat;
use crate::{Matrix10, Matrix3, Matrix5, Vector3};

fn factorial(n: u64) -> f64 {
    (1..=n).map(|k| k as f64).product::<f64>().max(1.0)
}

/// Truncated series `Σ_{k<terms} Mᵏ/k!` for a 5×5 matrix.
pub fn matrix_exp_series(m: &Matrix5<f64>, terms: usize) -> Matrix5<f64> {
    let mut sum: Matrix5<f64> = Matrix5::identity();
    let mut power: Matrix5<f64> = Matrix5::identity();
    for k in 1..terms {
        power *= m;
        sum += power / factorial(k as u64);
    }
    sum
}

/// `exp(ω^∧)` by the 3×3 matrix power series.
pub fn exp_so3_series(omega: &Vector3<f64>, terms: usize) -> Matrix3<f64> {
    let w = hat(omega);
    let mut sum: Matrix3<f64> = Matrix3::identity();
    let mut power: Matrix3<f64> = Matrix3::identity();
    for k in 1..terms {
        power *= w;
        sum += power / factorial(k as u64);
    }
    sum
}

/// `Γ₁(ω) = Σ (ω^∧)ᵏ/(k+1)!` truncated.
pub fn gamma1_series(omega: &Vector3<f64>, terms: usize) -> Matrix3<f64> {
    let w = hat(omega);
    let mut sum: Matrix3<f64> = Matrix3::zeros();
    let mut power: Matrix3<f64> = Matrix3::identity();
    for k in 0..terms {
        sum += power / factorial(k as u64 + 1);
        power *= w;
    }
    sum
}

/// `Γ₂(ω) = Σ (ω^∧)ᵏ/(k+2)!` truncated.
pub fn gamma2_series(omega: &Vector3<f64>, terms: usize) -> Matrix3<f64> {
    let w = hat(omega);
    let mut sum: Matrix3<f64> = Matrix3::zeros();
    let mut power: Matrix3<f64> = Matrix3::identity();
    for k in 0..terms {
        sum += power / factorial(k as u64 + 2);
        power *= w;
    }
    sum
}

/// `U₁(ω) = Γ₁(ω) − Γ₂(ω) = Σ (k+1)(ω^∧)ᵏ/(k+2)!` truncated.
pub fn u1_series(omega: &Vector3<f64>, terms: usize) -> Matrix3<f64> {
    let w = hat(omega);
    let mut sum: Matrix3<f64> = Matrix3::zeros();
    let mut power: Matrix3<f64> = Matrix3::identity();
    for k in 0..terms {
        sum += power * ((k as f64 + 1.0) / factorial(k as u64 + 2));
        power *= w;
    }
    sum
}

/// `Q₁(ω)(z) = Σ_p Σ_k (ω^∧)ᵏ z^∧ (ω^∧)ᵖ / (p+k+2)!` truncated at
/// `terms × terms`.
pub fn q1_double_series(omega: &Vector3<f64>, z: &Vector3<f64>, terms: usize) -> Matrix3<f64> {
    let w = hat(omega);
    let zh = hat(z);
    let mut sum: Matrix3<f64> = Matrix3::zeros();
    let mut left: Matrix3<f64> = Matrix3::identity();
    for k in 0..terms {
        let mut right: Matrix3<f64> = Matrix3::identity();
        for p in 0..terms {
            sum += left * zh * right / factorial((p + k + 2) as u64);
            right *= w;
        }
        left *= w;
    }
    sum
}

/// `Q₂(ω)(z) = Σ_p Σ_k (k+1)(ω^∧)ᵏ z^∧ (ω^∧)ᵖ / (p+k+3)!` truncated.
///
/// The multiplicity sits on the left power index: with it, the series
/// reproduces the closed form, the `Q₂ = Q₁ − H₂ − (Γ₂z)^∧Γ₁` relation, and
/// the ad-series ground truth for the Ω block of the Gal(3) left Jacobian.
pub fn q2_double_series(omega: &Vector3<f64>, z: &Vector3<f64>, terms: usize) -> Matrix3<f64> {
    let w = hat(omega);
    let zh = hat(z);
    let mut sum: Matrix3<f64> = Matrix3::zeros();
    let mut left: Matrix3<f64> = Matrix3::identity();
    for k in 0..terms {
        let mut right: Matrix3<f64> = Matrix3::identity();
        for p in 0..terms {
            sum += left * zh * right * ((k as f64 + 1.0) / factorial((p + k + 3) as u64));
            right *= w;
        }
        left *= w;
    }
    sum
}

/// SE₂(3) exponential via the dense 5×5 matrix-exponential series.
pub fn exp_se23_series(x: &Se23Tangent<f64>, terms: usize) -> Matrix5<f64> {
    let gal = Gal3Tangent::new(x.rotation, x.velocity, x.position, 0.0);
    matrix_exp_series(&gal.hat(), terms)
}

/// Gal(3) exponential via the dense 5×5 matrix-exponential series.
pub fn exp_gal3_series(x: &Gal3Tangent<f64>, terms: usize) -> Matrix5<f64> {
    matrix_exp_series(&x.hat(), terms)
}

/// Gal(3) left Jacobian via `Σ (adᴹ_x)ᵏ/(k+1)!` — an independent route to
/// the same matrix as the blockwise closed form.
pub fn left_jacobian_adjoint_series(x: &Gal3Tangent<f64>, terms: usize) -> Matrix10<f64> {
    let ad = crate::gal3::little_adjoint(x);
    let mut sum: Matrix10<f64> = Matrix10::zeros();
    let mut power: Matrix10<f64> = Matrix10::identity();
    for k in 0..terms {
        sum += power / factorial(k as u64 + 1);
        power *= ad;
    }
    sum
}

/// Adjoint action computed the expensive way, through dense 5×5 conjugation
/// `X x^∧ X⁻¹`.
pub fn adjoint_by_conjugation(g: &Gal3Element<f64>, x: &Gal3Tangent<f64>) -> Gal3Tangent<f64> {
    let m = g.matrix() * x.hat() * g.inverse().matrix();
    Gal3Tangent::from_hat(&m)
}

/// Central-difference Jacobian of a map R³ → R³.
pub fn jacobian3(
    f: impl Fn(&Vector3<f64>) -> Vector3<f64>,
    at: &Vector3<f64>,
    h: f64,
) -> Matrix3<f64> {
    let mut jac: Matrix3<f64> = Matrix3::zeros();
    for j in 0..3 {
        let mut step = Vector3::zeros();
        step[j] = h;
        let plus = f(&(at + step));
        let minus = f(&(at - step));
        jac.set_column(j, &((plus - minus) / (2.0 * h)));
    }
    jac
}
