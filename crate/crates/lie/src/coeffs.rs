//! Scalar coefficient kernels shared by the rotation Jacobians and the
//! Galilean derivative blocks.
//!
//! Every kernel is an analytic function of the rotation angle `θ = ‖ω‖`
//! whose closed form is 0/0 at θ = 0 and loses precision to cancellation as
//! θ shrinks (the numerators cancel to O(θ⁴)…O(θ⁶) against denominators of
//! the same order). Below [`SMALL_ANGLE`] each kernel therefore switches to
//! a Taylor expansion through θ⁸. At the branch point both forms agree to a
//! few 1e-13 in `f64`: the Taylor truncation is ≤ 2.4e-14 and the closed
//! forms still hold ~θ⁶/ε ≈ 2e-13 of headroom over roundoff.

use crate::scalar::{real, Real};

/// Angle below which the Taylor branches are used.
///
/// Chosen so that in `f64` both branches carry absolute error below ~2e-12
/// for every kernel: smaller thresholds destroy the θ⁴–θ⁶-denominator
/// closed forms through cancellation, larger ones outrun the θ⁸ Taylor
/// truncation.
pub const SMALL_ANGLE: f64 = 0.25;

#[inline]
fn small<T: Real>(theta: T) -> bool {
    theta < real(SMALL_ANGLE)
}

#[inline]
fn taylor<T: Real>(theta: T, c: [f64; 5]) -> T {
    let t2 = theta * theta;
    let mut acc: T = real(c[4]);
    for k in (0..4).rev() {
        acc = real::<T>(c[k]) + t2 * acc;
    }
    acc
}

/// κ₀ = sin θ / θ.
pub fn kappa0<T: Real>(theta: T) -> T {
    if small(theta) {
        taylor(
            theta,
            [1.0, -1.0 / 6.0, 1.0 / 120.0, -1.0 / 5040.0, 1.0 / 362880.0],
        )
    } else {
        theta.sin() / theta
    }
}

/// κ₁ = (1 − cos θ) / θ², evaluated as 2 sin²(θ/2)/θ² to avoid cancellation.
pub fn kappa1<T: Real>(theta: T) -> T {
    if small(theta) {
        taylor(
            theta,
            [
                0.5,
                -1.0 / 24.0,
                1.0 / 720.0,
                -1.0 / 40320.0,
                1.0 / 3628800.0,
            ],
        )
    } else {
        let s = (theta * real(0.5)).sin();
        real::<T>(2.0) * s * s / (theta * theta)
    }
}

/// κ₂ = (θ − sin θ) / θ³.
pub fn kappa2<T: Real>(theta: T) -> T {
    if small(theta) {
        taylor(
            theta,
            [
                1.0 / 6.0,
                -1.0 / 120.0,
                1.0 / 5040.0,
                -1.0 / 362880.0,
                1.0 / 39916800.0,
            ],
        )
    } else {
        (theta - theta.sin()) / (theta * theta * theta)
    }
}

/// κ₃ = (θ² + 2 cos θ − 2) / (2 θ⁴).
pub fn kappa3<T: Real>(theta: T) -> T {
    if small(theta) {
        taylor(
            theta,
            [
                1.0 / 24.0,
                -1.0 / 720.0,
                1.0 / 40320.0,
                -1.0 / 3628800.0,
                1.0 / 479001600.0,
            ],
        )
    } else {
        let t2 = theta * theta;
        (t2 + real::<T>(2.0) * theta.cos() - real::<T>(2.0)) / (real::<T>(2.0) * t2 * t2)
    }
}

/// κ₄ = (2 − 2 cos θ − θ sin θ) / θ⁴ = −(dκ₁/dθ)/θ.
pub fn kappa4<T: Real>(theta: T) -> T {
    if small(theta) {
        taylor(
            theta,
            [
                1.0 / 12.0,
                -1.0 / 180.0,
                1.0 / 6720.0,
                -1.0 / 453600.0,
                1.0 / 47900160.0,
            ],
        )
    } else {
        let t2 = theta * theta;
        (real::<T>(2.0) - real::<T>(2.0) * theta.cos() - theta * theta.sin()) / (t2 * t2)
    }
}

/// κ₅ = (2θ − 3 sin θ + θ cos θ) / θ⁵ = −(dκ₂/dθ)/θ.
pub fn kappa5<T: Real>(theta: T) -> T {
    if small(theta) {
        taylor(
            theta,
            [
                1.0 / 60.0,
                -1.0 / 1260.0,
                1.0 / 60480.0,
                -1.0 / 4989600.0,
                1.0 / 622702080.0,
            ],
        )
    } else {
        let t2 = theta * theta;
        (real::<T>(2.0) * theta - real::<T>(3.0) * theta.sin() + theta * theta.cos())
            / (t2 * t2 * theta)
    }
}

/// κ₆ = (θ² + θ sin θ + 4 cos θ − 4) / θ⁶ = −(dκ₃/dθ)/θ.
pub fn kappa6<T: Real>(theta: T) -> T {
    if small(theta) {
        taylor(
            theta,
            [
                1.0 / 360.0,
                -1.0 / 10080.0,
                1.0 / 604800.0,
                -1.0 / 59875200.0,
                1.0 / 8717829120.0,
            ],
        )
    } else {
        let t2 = theta * theta;
        (t2 + theta * theta.sin() + real::<T>(4.0) * theta.cos() - real::<T>(4.0)) / (t2 * t2 * t2)
    }
}

/// κ₇ = 1/θ² − cot(θ/2)/(2θ), the ω^∧ω^∧ coefficient of Γ₁⁻¹.
///
/// The cot half-angle form keeps the expression finite through θ = π; the
/// kernel has a true pole only at θ = 2π.
pub fn kappa7<T: Real>(theta: T) -> T {
    if small(theta) {
        taylor(
            theta,
            [
                1.0 / 12.0,
                1.0 / 720.0,
                1.0 / 30240.0,
                1.0 / 1209600.0,
                1.0 / 47900160.0,
            ],
        )
    } else {
        let half = theta * real(0.5);
        T::one() / (theta * theta) - half.cos() / (real::<T>(2.0) * theta * half.sin())
    }
}

/// (θ³ − 6θ + 6 sin θ) / (6 θ⁵), the z^∧ω^∧ω^∧ coefficient of Q₂.
pub fn q2_zww<T: Real>(theta: T) -> T {
    if small(theta) {
        taylor(
            theta,
            [
                1.0 / 120.0,
                -1.0 / 5040.0,
                1.0 / 362880.0,
                -1.0 / 39916800.0,
                1.0 / 6227020800.0,
            ],
        )
    } else {
        let t2 = theta * theta;
        (t2 * theta - real::<T>(6.0) * theta + real::<T>(6.0) * theta.sin())
            / (real::<T>(6.0) * t2 * t2 * theta)
    }
}

/// (θ³ + 6θ cos θ + 6θ − 12 sin θ) / (6 θ⁵), the ω^∧ω^∧z^∧ coefficient of Q₂.
pub fn q2_wwz<T: Real>(theta: T) -> T {
    if small(theta) {
        taylor(
            theta,
            [
                1.0 / 40.0,
                -1.0 / 1008.0,
                1.0 / 51840.0,
                -1.0 / 4435200.0,
                1.0 / 566092800.0,
            ],
        )
    } else {
        let t2 = theta * theta;
        (t2 * theta + real::<T>(6.0) * theta * theta.cos() + real::<T>(6.0) * theta
            - real::<T>(12.0) * theta.sin())
            / (real::<T>(6.0) * t2 * t2 * theta)
    }
}

/// (−θ³ − 12θ cos θ − 3θ² sin θ + 12 sin θ) / (6 θ⁵), the ω^∧z^∧ω^∧
/// coefficient of Q₂.
pub fn q2_wzw<T: Real>(theta: T) -> T {
    if small(theta) {
        taylor(
            theta,
            [
                1.0 / 60.0,
                -1.0 / 560.0,
                1.0 / 18144.0,
                -1.0 / 1140480.0,
                1.0 / 115315200.0,
            ],
        )
    } else {
        let t2 = theta * theta;
        let (s, c) = (theta.sin(), theta.cos());
        (-t2 * theta - real::<T>(12.0) * theta * c - real::<T>(3.0) * t2 * s + real::<T>(12.0) * s)
            / (real::<T>(6.0) * t2 * t2 * theta)
    }
}

/// (θ² + θ² cos θ − 4θ sin θ − 4 cos θ + 4) / (2 θ⁶), the ω^∧ω^∧z^∧ω^∧
/// coefficient of Q₂.
pub fn q2_wwzw<T: Real>(theta: T) -> T {
    if small(theta) {
        taylor(
            theta,
            [
                1.0 / 144.0,
                -1.0 / 2880.0,
                1.0 / 134400.0,
                -1.0 / 10886400.0,
                1.0 / 1341204480.0,
            ],
        )
    } else {
        let t2 = theta * theta;
        let (s, c) = (theta.sin(), theta.cos());
        (t2 + t2 * c - real::<T>(4.0) * theta * s - real::<T>(4.0) * c + real::<T>(4.0))
            / (real::<T>(2.0) * t2 * t2 * t2)
    }
}
