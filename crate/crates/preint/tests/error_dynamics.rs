//! Exact-recursion oracles for the linearized error dynamics.
//!
//! The error recursion here is assembled *only* from group primitives and
//! the action/lift definitions — never from the `StepMatrices` formulas it
//! is checking.

use lie::gal3::{self, Gal3Tangent};
use lie::tangent::{self, TangentGroupElement};
use lie::{Vector10, Vector20, Vector3};
use preint::input::ImuInput;
use preint::pipeline::PreintState;
use preint::symmetry::{inv_state_action, lift, state_action, ManifoldState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

/// True next-step error, given the estimate context, the measured input, the
/// current true error `eps` and the step noise `eta`.
fn next_error(
    x_hat: &TangentGroupElement<f64>,
    input: &ImuInput<f64>,
    eps: &Vector20<f64>,
    eta: &Vector20<f64>,
) -> Vector20<f64> {
    // True state: ξ = φ_ξ̊(tg_exp(ε)·X̂).
    let xi_true = state_action(&tangent::exp(eps).compose(x_hat), &ManifoldState::origin());

    // True input: measurement minus noise; the true bias walks with −η_τ so
    // that the measured bias drive stays zero.
    let w_true = input.measurement() - eta.fixed_rows::<10>(0).into_owned();
    let tau_true = -eta.fixed_rows::<10>(10).into_owned();
    let xi_next = ManifoldState {
        upsilon: xi_true
            .upsilon
            .compose(&gal3::exp(&Gal3Tangent::from_vector(
                &((w_true - xi_true.bias) * input.dt()),
            ))),
        bias: xi_true.bias + tau_true * input.dt(),
    };

    // Estimate advances on the measured input.
    let xi_hat = state_action(x_hat, &ManifoldState::origin());
    let x_hat_next = x_hat.compose(&lift(
        &xi_hat,
        input.measurement(),
        input.bias_drive(),
        input.dt(),
    ));

    // ε⁺ = log_G(φ⁻¹_ξ̊(φ(X̂⁺⁻¹, ξ⁺))).
    let e = state_action(&x_hat_next.inverse(), &xi_next);
    inv_state_action(&e).log().expect("within log radius")
}

fn random_context(rng: &mut impl Rng) -> (PreintState<f64>, ImuInput<f64>) {
    let b0 = Vector10::from_fn(|i, _| {
        if i < 6 {
            rng.random_range(-0.1..0.1)
        } else {
            0.0
        }
    });
    let mut state = PreintState::new(b0, lie::Matrix20::zeros());
    let qd = lie::Matrix20::zeros();
    for _ in 0..rng.random_range(1..80) {
        state.step(
            &ImuInput::new(
                Vector3::from_fn(|_, _| rng.random_range(-1.5..1.5)),
                Vector3::from_fn(|_, _| rng.random_range(-10.0..10.0)),
                0.005,
            ),
            &qd,
        );
    }
    let input = ImuInput::new(
        Vector3::from_fn(|_, _| rng.random_range(-1.5..1.5)),
        Vector3::from_fn(|_, _| rng.random_range(-10.0..10.0)),
        rng.random_range(0.002..0.02),
    );
    (state, input)
}

fn numeric_jacobians(
    x_hat: &TangentGroupElement<f64>,
    input: &ImuInput<f64>,
    h: f64,
) -> (lie::Matrix20<f64>, lie::Matrix20<f64>) {
    let mut a = lie::Matrix20::zeros();
    let mut b = lie::Matrix20::zeros();
    for j in 0..20 {
        let mut d = Vector20::zeros();
        d[j] = h;
        let fp = next_error(x_hat, input, &d, &Vector20::zeros());
        let fm = next_error(x_hat, input, &(-d), &Vector20::zeros());
        a.set_column(j, &((fp - fm) / (2.0 * h)));
        let gp = next_error(x_hat, input, &Vector20::zeros(), &d);
        let gm = next_error(x_hat, input, &Vector20::zeros(), &(-d));
        b.set_column(j, &((gp - gm) / (2.0 * h)));
    }
    (a, b)
}

#[test]
fn recursion_is_exact_at_zero() {
    let mut rng = ChaCha12Rng::seed_from_u64(100);
    for _ in 0..20 {
        let (state, input) = random_context(&mut rng);
        let eps = next_error(&state.x_hat, &input, &Vector20::zeros(), &Vector20::zeros());
        assert!(eps.norm() < 1e-12, "nonzero error at truth: {}", eps.norm());
    }
}

#[test]
fn step_matrices_match_numeric_jacobians() {
    // Absolute agreement at h = 1e-5, plus observed order ≥ 1.9 in the
    // truncation-dominated range (the formulas are exact differentials, so
    // at small h the residual is pure roundoff).
    let mut rng = ChaCha12Rng::seed_from_u64(101);
    for _ in 0..25 {
        let (state, input) = random_context(&mut rng);
        let m = state.error_state_matrices(&input);

        let (a_num, b_num) = numeric_jacobians(&state.x_hat, &input, 1e-5);
        let a_err = (a_num - m.a_hat).abs().max();
        let b_err = (b_num - m.b_hat).abs().max();
        assert!(a_err < 1e-6, "A mismatch at h=1e-5: {a_err}");
        assert!(b_err < 1e-6, "B mismatch at h=1e-5: {b_err}");
    }
}

#[test]
fn numeric_jacobians_converge_at_second_order() {
    let mut rng = ChaCha12Rng::seed_from_u64(102);
    for _ in 0..5 {
        let (state, input) = random_context(&mut rng);
        let m = state.error_state_matrices(&input);
        let err = |h: f64| {
            let (a_num, b_num) = numeric_jacobians(&state.x_hat, &input, h);
            ((a_num - m.a_hat).abs().max()).max((b_num - m.b_hat).abs().max())
        };
        let e1 = err(0.4);
        let e2 = err(0.2);
        let e3 = err(0.1);
        let order12 = (e1 / e2).log2();
        let order23 = (e2 / e3).log2();
        assert!(
            order12 > 1.9 && order23 > 1.9,
            "convergence orders {order12:.2}, {order23:.2} (errors {e1:.2e} {e2:.2e} {e3:.2e})"
        );
    }
}

#[test]
fn one_step_linearization_residual_is_second_order() {
    // ‖ε⁺(hδ, hη) − (Â hδ + B̂ hη)‖ = O(h²) by h-halving.
    let mut rng = ChaCha12Rng::seed_from_u64(103);
    for _ in 0..10 {
        let (state, input) = random_context(&mut rng);
        let m = state.error_state_matrices(&input);
        let deps = Vector20::from_fn(|_, _| rng.random_range(-1.0..1.0)).normalize();
        let deta = Vector20::from_fn(|_, _| rng.random_range(-1.0..1.0)).normalize();
        let residual = |h: f64| {
            let truth = next_error(&state.x_hat, &input, &(deps * h), &(deta * h));
            (truth - m.a_hat * deps * h - m.b_hat * deta * h).norm()
        };
        let e1 = residual(1e-2);
        let e2 = residual(5e-3);
        let ratio = e1 / e2;
        assert!(
            ratio > 3.0 && ratio < 5.0,
            "linearization residual ratio {ratio} out of the O(h²) band"
        );
    }
}

#[test]
fn composed_propagation_matches_per_step_product() {
    // With a constant conjugated input, the two-step transition equals the
    // product of the per-step transitions.
    let mut rng = ChaCha12Rng::seed_from_u64(104);
    let (mut state, input) = random_context(&mut rng);
    let m1 = state.error_state_matrices(&input);
    let mut eps = Vector20::from_fn(|_, _| rng.random_range(-1e-4..1e-4));
    let eps0 = eps;
    state.step(&input, &lie::Matrix20::zeros());
    let m2 = state.error_state_matrices(&input);
    eps = m2.a_hat * (m1.a_hat * eps);
    let direct = (m2.a_hat * m1.a_hat) * eps0;
    assert!((eps - direct).norm() < 1e-18);
}

#[test]
fn noise_free_error_stays_zero_over_long_streams() {
    // Truth propagated by the manifold recursion, estimate by the lifted
    // recursion, identical inputs: the equivariant error must stay at
    // floating-point zero.
    let mut rng = ChaCha12Rng::seed_from_u64(105);
    let b0 = Vector10::from_fn(|i, _| {
        if i < 6 {
            rng.random_range(-0.05..0.05)
        } else {
            0.0
        }
    });
    let mut state = PreintState::new(b0, lie::Matrix20::zeros());
    let mut truth = ManifoldState::new(gal3::Gal3Element::identity(), b0);
    let qd = lie::Matrix20::zeros();
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let input = ImuInput::new(
            Vector3::from_fn(|_, _| rng.random_range(-1.0..1.0)),
            Vector3::from_fn(|_, _| rng.random_range(-10.0..10.0)),
            0.005,
        );
        state.step(&input, &qd);
        truth = truth.propagate(&input);
        worst = worst.max(state.equivariant_error(&truth).unwrap().norm());
    }
    assert!(worst < 1e-8, "error drifted to {worst}");
}

#[test]
fn bias_update_error_is_second_order_in_delta() {
    // First-order bias update vs full reintegration on a 1 s 200 Hz
    // stream: the update error must scale as O(‖Δb‖²).
    let mut rng = ChaCha12Rng::seed_from_u64(106);
    let b0 = Vector10::from_fn(|i, _| {
        if i < 6 {
            rng.random_range(-0.05..0.05)
        } else {
            0.0
        }
    });
    let inputs: Vec<ImuInput<f64>> = (0..200)
        .map(|_| {
            ImuInput::new(
                Vector3::from_fn(|_, _| rng.random_range(-1.0..1.0)),
                Vector3::from_fn(|_, _| rng.random_range(-8.0..8.0)),
                0.005,
            )
        })
        .collect();

    let integrate = |bias: Vector10<f64>| {
        let mut s = PreintState::new(bias, lie::Matrix20::zeros());
        let qd = lie::Matrix20::zeros();
        for input in &inputs {
            s.step(input, &qd);
        }
        s
    };

    let nominal = integrate(b0);
    let delta_dir = {
        let mut d = Vector10::zeros();
        for i in 0..6 {
            d[i] = rng.random_range(-1.0..1.0);
        }
        d.normalize()
    };

    let update_error = |scale: f64| {
        let delta = delta_dir * scale;
        let mut updated = nominal;
        updated.apply_bias_update(&delta);
        let reintegrated = integrate(b0 + delta);
        let rel = updated
            .manifold_state()
            .upsilon
            .compose(&reintegrated.manifold_state().upsilon.inverse());
        gal3::log(&rel).unwrap().as_vector().norm()
    };

    let e1 = update_error(0.02);
    let e2 = update_error(0.01);
    let ratio = e1 / e2;
    assert!(
        (3.5..4.5).contains(&ratio),
        "bias update error ratio {ratio} (errors {e1:.3e}, {e2:.3e})"
    );
}

#[test]
fn gyro_bias_update_matches_reintegrated_rotation() {
    // Pure-rotation stream, gyro-bias-only update: the corrected ΔR agrees
    // with full reintegration to second order.
    let mut rng = ChaCha12Rng::seed_from_u64(107);
    let inputs: Vec<ImuInput<f64>> = (0..200)
        .map(|_| {
            ImuInput::new(
                Vector3::from_fn(|_, _| rng.random_range(-1.0..1.0)),
                Vector3::zeros(),
                0.005,
            )
        })
        .collect();
    let integrate = |bias: Vector10<f64>| {
        let mut s = PreintState::new(bias, lie::Matrix20::zeros());
        for input in &inputs {
            s.step(input, &lie::Matrix20::zeros());
        }
        s
    };
    let nominal = integrate(Vector10::zeros());
    let mut delta = Vector10::zeros();
    delta[0] = 2e-3;
    delta[2] = -1e-3;

    let mut updated = nominal;
    updated.apply_bias_update(&delta);
    let reint = integrate(delta);
    let rot_gap = lie::so3::log(
        &updated
            .manifold_state()
            .upsilon
            .rotation
            .compose(&reint.manifold_state().upsilon.rotation.inverse()),
    )
    .unwrap()
    .norm();
    // Second-order in a ~2e-3 perturbation over 1 s.
    assert!(rot_gap < 5e-5, "rotation gap {rot_gap}");
}

#[test]
fn bias_jacobian_predicts_reintegration_to_second_order() {
    // The accumulated upper-right block J_Υ predicts ∂Υ/∂b₀: reintegrating
    // with b₀+Δb matches exp((J_Υ Δb)^∧)Υ̂ to O(‖Δb‖²), checked by halving.
    let mut rng = ChaCha12Rng::seed_from_u64(108);
    let inputs: Vec<ImuInput<f64>> = (0..200)
        .map(|_| {
            ImuInput::new(
                Vector3::from_fn(|_, _| rng.random_range(-1.0..1.0)),
                Vector3::from_fn(|_, _| rng.random_range(-8.0..8.0)),
                0.005,
            )
        })
        .collect();
    let integrate = |bias: Vector10<f64>| {
        let mut s = PreintState::new(bias, lie::Matrix20::zeros());
        for input in &inputs {
            s.step(input, &lie::Matrix20::zeros());
        }
        s
    };
    let nominal = integrate(Vector10::zeros());
    let j_upsilon = nominal.upsilon_bias_jacobian();
    let dir = {
        let mut d = Vector10::zeros();
        for i in 0..6 {
            d[i] = rng.random_range(-1.0..1.0);
        }
        d.normalize()
    };
    let gap = |scale: f64| {
        let delta = dir * scale;
        let predicted = gal3::exp(&Gal3Tangent::from_vector(&(j_upsilon * delta)))
            .compose(&nominal.manifold_state().upsilon);
        let reint = integrate(delta).manifold_state().upsilon;
        gal3::log(&predicted.compose(&reint.inverse()))
            .unwrap()
            .as_vector()
            .norm()
    };
    let ratio = gap(0.02) / gap(0.01);
    assert!(
        (3.5..4.5).contains(&ratio),
        "reintegration prediction ratio {ratio}"
    );
}
