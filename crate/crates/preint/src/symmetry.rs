//! The symmetry-group machinery: manifold state, group actions and the
//! equivariant lift.
//!
//! The state origin is fixed to `ξ̊ = (I₅, 0)`; every chart and action below
//! bakes that in.

use crate::input::ImuInput;
use lie::gal3::{self, Gal3Element, Gal3Tangent};
use lie::tangent::TangentGroupElement;
use lie::{Real, Vector10};

/// Manifold state `ξ = (Υ, b)`: the preintegration matrix and the 10-channel
/// bias vector `(b_ω, b_a, b_ν, b_ρ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ManifoldState<T: Real> {
    pub upsilon: Gal3Element<T>,
    pub bias: Vector10<T>,
}

impl<T: Real> ManifoldState<T> {
    /// The fixed origin `ξ̊ = (I₅, 0)`.
    pub fn origin() -> Self {
        ManifoldState {
            upsilon: Gal3Element::identity(),
            bias: Vector10::zeros(),
        }
    }

    pub fn new(upsilon: Gal3Element<T>, bias: Vector10<T>) -> Self {
        ManifoldState { upsilon, bias }
    }

    /// One step of the manifold dynamics:
    /// `Υ⁺ = Υ·exp((w − b)^∧ δt)`, `b⁺ = b + τ δt`.
    pub fn propagate(&self, input: &ImuInput<T>) -> Self {
        let increment = Gal3Tangent::from_vector(&((input.measurement() - self.bias) * input.dt()));
        ManifoldState {
            upsilon: self.upsilon.compose(&gal3::exp(&increment)),
            bias: self.bias + input.bias_drive() * input.dt(),
        }
    }
}

/// Right action of the symmetry group on the manifold:
/// `φ(X, ξ) = (Υ C, Adᴹ_{C⁻¹}(b − γ))`.
pub fn state_action<T: Real>(
    x: &TangentGroupElement<T>,
    xi: &ManifoldState<T>,
) -> ManifoldState<T> {
    ManifoldState {
        upsilon: xi.upsilon.compose(&x.group),
        bias: x.group.adjoint_inv() * (xi.bias - x.tangent),
    }
}

/// Inverse of the partial map `φ_ξ̊` at the fixed origin:
/// `ξ ↦ (Υ, −Adᴹ_Υ b)`.
pub fn inv_state_action<T: Real>(xi: &ManifoldState<T>) -> TangentGroupElement<T> {
    TangentGroupElement {
        tangent: -(xi.upsilon.adjoint() * xi.bias),
        group: xi.upsilon,
    }
}

/// Right action of the symmetry group on the input space:
/// `ψ(X, u) = (Adᴹ_{C⁻¹}(w − γ), Adᴹ_{C⁻¹}τ)`; `δt` is untouched.
///
/// Returned as raw `(w, τ)` vectors since the transformed `w` no longer
/// satisfies the measurement-input convention.
pub fn input_action<T: Real>(
    x: &TangentGroupElement<T>,
    w: &Vector10<T>,
    tau: &Vector10<T>,
) -> (Vector10<T>, Vector10<T>) {
    let ad_inv = x.group.adjoint_inv();
    (ad_inv * (w - x.tangent), ad_inv * tau)
}

/// The equivariant discrete lift `Λ_δt(ξ, u)`:
///
/// ```text
/// Λ₁ = exp((w − b)^∧ δt),   λ₂ = b − Adᴹ_{Λ₁}(b + τ δt)
/// ```
///
/// satisfying `φ(Λ_δt(ξ, u), ξ) = F_δt(ξ, u)` for every state and input.
pub fn lift<T: Real>(
    xi: &ManifoldState<T>,
    w: &Vector10<T>,
    tau: &Vector10<T>,
    dt: T,
) -> TangentGroupElement<T> {
    let first = gal3::exp(&Gal3Tangent::from_vector(&((w - xi.bias) * dt)));
    let second = xi.bias - first.adjoint() * (xi.bias + tau * dt);
    TangentGroupElement {
        group: first,
        tangent: second,
    }
}
