//! The preintegration pipeline: mean propagation on the symmetry group,
//! covariance propagation of the equivariant error, and the first-order
//! bias-update Jacobian.
//!
//! Per IMU step, with `ẘ = Adᴹ_{Υ̂}(w̃ − b̂)`:
//!
//! ```text
//! X̂⁺  = X̂ · Λ_δt(φ_ξ̊(X̂), ũ)
//! Σ⁺  = Â Σ Âᵀ + B̂ Q_d B̂ᵀ
//! J_ξ⁺ = Φ_b J_ξ
//!
//! Â = [ I₁₀  J_L(ẘδt)δt            ]   B̂ = [ −J_L(ẘδt)Adᴹ_{Υ̂}δt  0           ]
//!     [ 0    Adᴹ_{exp(ẘ^∧δt)}      ]       [ 0                    Adᴹ_{Υ̂⁺}δt ]
//!
//! Φ_b = [ I₁₀  −Adᴹ_{Υ̂}J_L((w̃−b̂)δt)δt ]
//!       [ 0    I₁₀                      ]
//! ```
//!
//! These blocks are the exact differentials of the error recursion at zero
//! error and zero noise, which the test suite verifies by central
//! differences.

use crate::input::ImuInput;
use crate::symmetry::{inv_state_action, lift, state_action, ManifoldState};
use lie::gal3::{self, Gal3Tangent};
use lie::tangent::TangentGroupElement;
use lie::{Matrix10, Matrix20, NearPiRotation, Real, Vector10, Vector20};

/// Preintegration state: symmetry-group estimate, error covariance, bias
/// Jacobian and elapsed time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PreintState<T: Real> {
    pub x_hat: TangentGroupElement<T>,
    pub sigma: Matrix20<T>,
    pub j_xi: Matrix20<T>,
    pub elapsed: T,
}

/// The linearized step matrices `(Â, B̂)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepMatrices<T: Real> {
    pub a_hat: Matrix20<T>,
    pub b_hat: Matrix20<T>,
}

fn block20<T: Real>(
    top_left: &Matrix10<T>,
    top_right: &Matrix10<T>,
    bottom_right: &Matrix10<T>,
) -> Matrix20<T> {
    let mut m = Matrix20::zeros();
    m.fixed_view_mut::<10, 10>(0, 0).copy_from(top_left);
    m.fixed_view_mut::<10, 10>(0, 10).copy_from(top_right);
    m.fixed_view_mut::<10, 10>(10, 10).copy_from(bottom_right);
    m
}

/// `Σ⁺ = Â Σ Âᵀ + B̂ Q_d B̂ᵀ`, re-symmetrized to keep floating-point
/// asymmetry from accumulating over long streams.
pub fn propagate_covariance<T: Real>(
    sigma: &Matrix20<T>,
    step: &StepMatrices<T>,
    qd: &Matrix20<T>,
) -> Matrix20<T> {
    let next =
        step.a_hat * sigma * step.a_hat.transpose() + step.b_hat * qd * step.b_hat.transpose();
    (next + next.transpose()) * T::from_f64(0.5).unwrap()
}

impl<T: Real> PreintState<T> {
    /// Fresh preintegration from a bias estimate: `X̂₀ = (I₅, −b̂₀^∧)`,
    /// `J_ξ₀ = I₂₀`, `Σ₀` given.
    pub fn new(initial_bias: Vector10<T>, sigma0: Matrix20<T>) -> Self {
        PreintState {
            x_hat: TangentGroupElement::new(gal3::Gal3Element::identity(), -initial_bias),
            sigma: sigma0,
            j_xi: Matrix20::identity(),
            elapsed: T::zero(),
        }
    }

    /// The manifold-side view `ξ̂ = φ_ξ̊(X̂) = (Υ̂, b̂)`.
    pub fn manifold_state(&self) -> ManifoldState<T> {
        state_action(&self.x_hat, &ManifoldState::origin())
    }

    /// Linearized error/noise matrices for one step from the current state.
    pub fn error_state_matrices(&self, input: &ImuInput<T>) -> StepMatrices<T> {
        let dt = input.dt();
        let xi_hat = self.manifold_state();
        let upsilon_adj = xi_hat.upsilon.adjoint();
        let w_ring = upsilon_adj * (input.measurement() - xi_hat.bias);
        let jl = gal3::left_jacobian(&Gal3Tangent::from_vector(&(w_ring * dt)));

        let increment = gal3::exp(&Gal3Tangent::from_vector(
            &((input.measurement() - xi_hat.bias) * dt),
        ));
        let upsilon_next = xi_hat.upsilon.compose(&increment);

        let a_hat = block20(
            &Matrix10::identity(),
            &(jl * dt),
            &gal3::exp(&Gal3Tangent::from_vector(&(w_ring * dt))).adjoint(),
        );
        let mut b_hat = block20(
            &(-(jl * upsilon_adj * dt)),
            &Matrix10::zeros(),
            &(upsilon_next.adjoint() * dt),
        );
        // Zero the spurious top-right block written by block20's layout.
        b_hat.fixed_view_mut::<10, 10>(0, 10).fill(T::zero());
        a_hat_check(&a_hat);
        StepMatrices { a_hat, b_hat }
    }

    /// Bias-transition factor `Φ_b` for the current step.
    pub fn bias_jacobian_step(&self, input: &ImuInput<T>) -> Matrix20<T> {
        let dt = input.dt();
        let xi_hat = self.manifold_state();
        let jl = gal3::left_jacobian(&Gal3Tangent::from_vector(
            &((input.measurement() - xi_hat.bias) * dt),
        ));
        block20(
            &Matrix10::identity(),
            &(-(xi_hat.upsilon.adjoint() * jl * dt)),
            &Matrix10::identity(),
        )
    }

    /// Advances mean, covariance and bias Jacobian by one IMU step.
    pub fn step(&mut self, input: &ImuInput<T>, qd: &Matrix20<T>) {
        let matrices = self.error_state_matrices(input);
        let phi_b = self.bias_jacobian_step(input);
        let xi_hat = self.manifold_state();
        let lam = lift(&xi_hat, input.measurement(), input.bias_drive(), input.dt());
        self.x_hat = self.x_hat.compose(&lam);
        self.sigma = propagate_covariance(&self.sigma, &matrices, qd);
        self.j_xi = phi_b * self.j_xi;
        self.elapsed += input.dt();
    }

    /// Equivariant error of a true manifold state with respect to this
    /// estimate, in normal coordinates:
    ///
    /// `ε = (log(ΥΥ̂⁻¹)^∨, −J_L⁻¹(log(ΥΥ̂⁻¹)^∨) Adᴹ_Υ (b − b̂))`.
    pub fn equivariant_error(
        &self,
        truth: &ManifoldState<T>,
    ) -> Result<Vector20<T>, NearPiRotation> {
        let xi_hat = self.manifold_state();
        let relative = truth.upsilon.compose(&xi_hat.upsilon.inverse());
        let eps_upsilon = gal3::log(&relative)?;
        let bias_err = truth.upsilon.adjoint() * (truth.bias - xi_hat.bias);
        let eps_bias = -(gal3::left_jacobian_inv(&eps_upsilon) * bias_err);
        let mut eps = Vector20::zeros();
        eps.fixed_rows_mut::<10>(0)
            .copy_from(&eps_upsilon.as_vector());
        eps.fixed_rows_mut::<10>(10).copy_from(&eps_bias);
        Ok(eps)
    }

    /// Upper-right 10×10 corner of `J_ξ`: the Jacobian of `Υ̂` with respect
    /// to the initial bias estimate.
    pub fn upsilon_bias_jacobian(&self) -> Matrix10<T> {
        self.j_xi.fixed_view::<10, 10>(0, 10).into_owned()
    }

    /// First-order bias update: `Υ̂ ← exp((J_Υ Δb)^∧) Υ̂`, `b̂ ← b̂ + Δb`.
    ///
    /// `Σ` and `J_ξ` are left untouched.
    pub fn apply_bias_update(&mut self, delta_b: &Vector10<T>) {
        let xi_hat = self.manifold_state();
        let correction = gal3::exp(&Gal3Tangent::from_vector(
            &(self.upsilon_bias_jacobian() * delta_b),
        ));
        let updated = ManifoldState {
            upsilon: correction.compose(&xi_hat.upsilon),
            bias: xi_hat.bias + delta_b,
        };
        self.x_hat = inv_state_action(&updated);
    }

    /// Largest symmetry defect of `Σ`; zero after every step by
    /// construction.
    pub fn sigma_asymmetry(&self) -> T {
        (self.sigma - self.sigma.transpose()).abs().max()
    }
}

#[inline]
fn a_hat_check<T: Real>(a: &Matrix20<T>) {
    // Block structure is part of the contract: top-left identity, bottom-left
    // zero. Cheap to assert in debug builds.
    debug_assert!(a.fixed_view::<10, 10>(10, 0).iter().all(|v| v.is_zero()));
}
