//! Runtime invariant suite backing the `check` CLI subcommand.
//!
//! Every check re-derives its expectation from an independent route (series
//! oracles, dense conjugation, central differences, exact recursions) and
//! compares the production closed forms against it. A fault can be injected
//! to verify that the suite actually fails loudly.

use lie::gal3::{self, Gal3Tangent};
use lie::se23::{self, Se23Tangent};
use lie::so3::{self, hat};
use lie::tangent::{self, TangentGroupElement};
use lie::{coeffs, oracle, Matrix10, Matrix20, Vector10, Vector20, Vector3};
use preint::input::ImuInput;
use preint::pipeline::PreintState;
use preint::symmetry::{input_action, inv_state_action, lift, state_action, ManifoldState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};
use std::time::Instant;

/// Deliberate defect injection for negative-testing the suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Fault {
    #[default]
    None,
    /// Perturbs one side of the κ₃ identity check.
    WrongKappa3,
}

impl std::str::FromStr for Fault {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "none" => Ok(Fault::None),
            "kappa3" => Ok(Fault::WrongKappa3),
            other => Err(format!("unknown fault {other:?} (expected none|kappa3)")),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub millis: u128,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckReport {
    pub seed: u64,
    pub checks: Vec<CheckOutcome>,
    pub passed: bool,
}

impl CheckReport {
    pub fn first_failure(&self) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| !c.passed)
    }
}

fn random_omega(rng: &mut impl Rng, max: f64) -> Vector3<f64> {
    let v = Vector3::new(
        rng.random_range(-1.0f64..1.0),
        rng.random_range(-1.0..1.0),
        rng.random_range(-1.0..1.0),
    );
    v.normalize() * rng.random_range(1e-6..max)
}

fn random_gal3_tangent(rng: &mut impl Rng) -> Gal3Tangent<f64> {
    Gal3Tangent::new(
        random_omega(rng, 2.5),
        Vector3::from_fn(|_, _| rng.random_range(-3.0..3.0)),
        Vector3::from_fn(|_, _| rng.random_range(-3.0..3.0)),
        rng.random_range(-1.5..1.5),
    )
}

fn fail_if(condition: bool, detail: String) -> Result<(), String> {
    if condition {
        Err(detail)
    } else {
        Ok(())
    }
}

/// Runs the whole suite. `seed` fixes the random draws; `fault` injects a
/// deliberate defect (see [`Fault`]).
pub fn run_all(seed: u64, fault: Fault) -> CheckReport {
    type Check = (
        &'static str,
        Box<dyn Fn(&mut ChaCha12Rng) -> Result<(), String>>,
    );
    let checks: Vec<Check> = vec![
        (
            "kappa3-identity",
            Box::new(move |rng| check_kappa3_identity(rng, fault)),
        ),
        ("so3-series-oracles", Box::new(check_so3_series)),
        ("exp-log-round-trips", Box::new(check_round_trips)),
        ("group-axioms", Box::new(check_group_axioms)),
        ("adjoint-conjugation", Box::new(check_adjoints)),
        ("q-kernel-series", Box::new(check_q_kernels)),
        (
            "derivative-kernel-relations",
            Box::new(check_kernel_relations),
        ),
        (
            "jacobian-defining-property",
            Box::new(check_jacobian_property),
        ),
        (
            "left-right-jacobian-relations",
            Box::new(check_jacobian_relations),
        ),
        ("lift-condition", Box::new(check_lift_condition)),
        ("equivariance", Box::new(check_equivariance)),
        ("error-dynamics-jacobians", Box::new(check_error_dynamics)),
        ("noise-free-exactness", Box::new(check_exactness)),
    ];

    let mut outcomes = Vec::with_capacity(checks.len());
    for (i, (name, check)) in checks.iter().enumerate() {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        rng.set_stream(1000 + i as u64);
        let start = Instant::now();
        let result = check(&mut rng);
        outcomes.push(CheckOutcome {
            name: (*name).to_owned(),
            passed: result.is_ok(),
            detail: result.err().unwrap_or_else(|| "ok".to_owned()),
            millis: start.elapsed().as_millis(),
        });
    }
    let passed = outcomes.iter().all(|c| c.passed);
    CheckReport {
        seed,
        checks: outcomes,
        passed,
    }
}

fn check_kappa3_identity(rng: &mut ChaCha12Rng, fault: Fault) -> Result<(), String> {
    for _ in 0..200 {
        let theta: f64 = rng.random_range(1e-3..3.0);
        let mut lhs = (1.0 - 2.0 * coeffs::kappa1(theta)) / (2.0 * theta * theta);
        if fault == Fault::WrongKappa3 {
            lhs += 1e-3;
        }
        let rhs = coeffs::kappa3(theta);
        fail_if(
            (lhs - rhs).abs() > 1e-9,
            format!(
                "kappa3 identity mismatch {:.3e} at theta={theta}",
                lhs - rhs
            ),
        )?;
    }
    Ok(())
}

fn check_so3_series(rng: &mut ChaCha12Rng) -> Result<(), String> {
    for _ in 0..300 {
        let omega = random_omega(rng, 3.0);
        let exp_err = (*so3::exp(&omega).matrix() - oracle::exp_so3_series(&omega, 30))
            .abs()
            .max();
        let g1_err = (so3::gamma1(&omega) - oracle::gamma1_series(&omega, 30))
            .abs()
            .max();
        let g2_err = (so3::gamma2(&omega) - oracle::gamma2_series(&omega, 30))
            .abs()
            .max();
        let u1_err = (gal3::u1(&omega) - oracle::u1_series(&omega, 30))
            .abs()
            .max();
        let worst = exp_err.max(g1_err).max(g2_err).max(u1_err);
        fail_if(
            worst > 1e-10,
            format!("series mismatch {worst:.3e} at ‖ω‖={}", omega.norm()),
        )?;
    }
    Ok(())
}

fn check_round_trips(rng: &mut ChaCha12Rng) -> Result<(), String> {
    for _ in 0..300 {
        let x = random_gal3_tangent(rng);
        let back = gal3::log(&gal3::exp(&x)).map_err(|e| e.to_string())?;
        fail_if(
            (back.as_vector() - x.as_vector()).norm() > 1e-9,
            "gal3 exp/log round trip".to_owned(),
        )?;
        let s = Se23Tangent::new(x.rotation, x.velocity, x.position);
        let back = se23::log(&se23::exp(&s)).map_err(|e| e.to_string())?;
        fail_if(
            (back.as_vector() - s.as_vector()).norm() > 1e-9,
            "se23 exp/log round trip".to_owned(),
        )?;
        let mut coords = Vector20::from_fn(|_, _| rng.random_range(-0.8..0.8));
        let n = coords.norm();
        if n > 2.0 {
            coords *= 2.0 / n;
        }
        let back = tangent::exp(&coords).log().map_err(|e| e.to_string())?;
        fail_if(
            (back - coords).norm() > 1e-8,
            "tangent-group exp/log round trip".to_owned(),
        )?;
    }
    Ok(())
}

fn check_group_axioms(rng: &mut ChaCha12Rng) -> Result<(), String> {
    for _ in 0..300 {
        let a = TangentGroupElement::new(
            gal3::exp(&random_gal3_tangent(rng)),
            Vector10::from_fn(|_, _| rng.random_range(-1.0..1.0)),
        );
        let b = TangentGroupElement::new(
            gal3::exp(&random_gal3_tangent(rng)),
            Vector10::from_fn(|_, _| rng.random_range(-1.0..1.0)),
        );
        let c = TangentGroupElement::new(
            gal3::exp(&random_gal3_tangent(rng)),
            Vector10::from_fn(|_, _| rng.random_range(-1.0..1.0)),
        );
        let left = a.compose(&b).compose(&c);
        let right = a.compose(&b.compose(&c));
        let assoc = (left.group.matrix() - right.group.matrix()).abs().max()
            + (left.tangent - right.tangent).abs().max();
        fail_if(assoc > 1e-10, format!("associativity defect {assoc:.3e}"))?;
        let id = a.compose(&a.inverse());
        let inv =
            (id.group.matrix() - lie::Matrix5::identity()).abs().max() + id.tangent.abs().max();
        fail_if(inv > 1e-10, format!("inverse defect {inv:.3e}"))?;
    }
    Ok(())
}

fn check_adjoints(rng: &mut ChaCha12Rng) -> Result<(), String> {
    for _ in 0..200 {
        let g = gal3::exp(&random_gal3_tangent(rng));
        let u = random_gal3_tangent(rng);
        let by_matrix = Gal3Tangent::from_vector(&(g.adjoint() * u.as_vector()));
        let by_conj = oracle::adjoint_by_conjugation(&g, &u);
        let err = (by_matrix.as_vector() - by_conj.as_vector()).norm();
        fail_if(err > 1e-11, format!("adjoint conjugation defect {err:.3e}"))?;

        let x = random_gal3_tangent(rng);
        let y = random_gal3_tangent(rng);
        let lhs = Gal3Tangent::from_vector(&(gal3::little_adjoint(&x) * y.as_vector())).hat();
        let rhs = x.hat() * y.hat() - y.hat() * x.hat();
        fail_if(
            (lhs - rhs).abs().max() > 1e-12,
            "little adjoint vs commutator".to_owned(),
        )?;
    }
    Ok(())
}

fn check_q_kernels(rng: &mut ChaCha12Rng) -> Result<(), String> {
    for _ in 0..200 {
        let omega = random_omega(rng, 3.0);
        let z = Vector3::from_fn(|_, _| rng.random_range(-10.0..10.0));
        let q1_err = (gal3::q1(&omega, &z) - oracle::q1_double_series(&omega, &z, 30))
            .abs()
            .max();
        let q2_err = (gal3::q2(&omega, &z) - oracle::q2_double_series(&omega, &z, 30))
            .abs()
            .max();
        fail_if(
            q1_err > 1e-10 || q2_err > 1e-10,
            format!("Q-kernel series mismatch q1={q1_err:.3e} q2={q2_err:.3e}"),
        )?;
    }
    Ok(())
}

fn check_kernel_relations(rng: &mut ChaCha12Rng) -> Result<(), String> {
    for _ in 0..200 {
        let omega = random_omega(rng, 3.0);
        let z = Vector3::from_fn(|_, _| rng.random_range(-5.0..5.0));
        let g1 = so3::gamma1(&omega);
        let g2 = so3::gamma2(&omega);
        let rot_t = so3::exp(&omega).inverse();

        let e1 = (gal3::q1(&omega, &z) - (gal3::h1(&omega, &z) + hat(&(g1 * z)) * g1))
            .abs()
            .max();
        let e2 = (gal3::q2(&omega, &z)
            - (gal3::q1(&omega, &z) - gal3::h2(&omega, &z) - hat(&(g2 * z)) * g1))
            .abs()
            .max();
        let e3 = (gal3::q1(&-omega, &-z) - rot_t.matrix() * gal3::h1(&omega, &z))
            .abs()
            .max();
        let e4 = (gal3::q2(&-omega, &-z) - rot_t.matrix() * gal3::h2(&omega, &z))
            .abs()
            .max();
        let e5 = (so3::gamma1(&-omega) - rot_t.matrix() * g1).abs().max();
        let e6 = (so3::gamma2(&-omega) - rot_t.matrix() * (g1 - g2))
            .abs()
            .max();
        let worst = e1.max(e2).max(e3).max(e4).max(e5).max(e6);
        fail_if(worst > 1e-10, format!("kernel relation defect {worst:.3e}"))?;
    }
    Ok(())
}

fn check_jacobian_property(rng: &mut ChaCha12Rng) -> Result<(), String> {
    for _ in 0..25 {
        let x = random_gal3_tangent(rng);
        let delta = random_gal3_tangent(rng);
        let jl = gal3::left_jacobian(&x);
        let residual = |h: f64| -> Result<f64, String> {
            let bumped = Gal3Tangent::from_vector(&(x.as_vector() + delta.as_vector() * h));
            let rel = gal3::exp(&bumped).compose(&gal3::exp(&x).inverse());
            let lhs = gal3::log(&rel).map_err(|e| e.to_string())?;
            Ok((lhs.as_vector() - jl * delta.as_vector() * h).norm())
        };
        let e1 = residual(1e-3)?;
        let e2 = residual(5e-4)?;
        let order = (e1 / e2).log2();
        fail_if(
            order < 1.9,
            format!("gal3 left Jacobian defining-property order {order:.2}"),
        )?;

        let xs = Se23Tangent::new(x.rotation, x.velocity, x.position);
        let ds = Se23Tangent::new(delta.rotation, delta.velocity, delta.position);
        let jl = se23::left_jacobian(&xs);
        let residual = |h: f64| -> Result<f64, String> {
            let bumped = Se23Tangent::from_vector(&(xs.as_vector() + ds.as_vector() * h));
            let rel = se23::exp(&bumped).compose(&se23::exp(&xs).inverse());
            let lhs = se23::log(&rel).map_err(|e| e.to_string())?;
            Ok((lhs.as_vector() - jl * ds.as_vector() * h).norm())
        };
        let e1 = residual(1e-3)?;
        let e2 = residual(5e-4)?;
        let order = (e1 / e2).log2();
        fail_if(
            order < 1.9,
            format!("se23 left Jacobian defining-property order {order:.2}"),
        )?;
    }
    Ok(())
}

fn check_jacobian_relations(rng: &mut ChaCha12Rng) -> Result<(), String> {
    for _ in 0..200 {
        let x = random_gal3_tangent(rng);
        let e1 = (gal3::right_jacobian(&x) - gal3::left_jacobian(&(-x)))
            .abs()
            .max();
        let e2 = (gal3::right_jacobian(&x) - gal3::exp(&x).adjoint_inv() * gal3::left_jacobian(&x))
            .abs()
            .max();
        let inv = (gal3::left_jacobian(&x) * gal3::left_jacobian_inv(&x) - Matrix10::identity())
            .abs()
            .max();
        let xs = Se23Tangent::new(x.rotation, x.velocity, x.position);
        let e3 = (se23::right_jacobian(&xs)
            - se23::exp(&xs).inverse().adjoint() * se23::left_jacobian(&xs))
        .abs()
        .max();
        fail_if(
            e1 > 1e-12 || e2 > 1e-10 || e3 > 1e-10 || inv > 1e-9,
            format!(
                "jacobian relations defect {:.3e}",
                e1.max(e2).max(e3).max(inv)
            ),
        )?;
    }
    Ok(())
}

fn random_manifold_state(rng: &mut impl Rng) -> ManifoldState<f64> {
    ManifoldState::new(
        gal3::exp(&random_gal3_tangent(rng)),
        Vector10::from_fn(|_, _| rng.random_range(-0.3..0.3)),
    )
}

fn random_input_vec(rng: &mut impl Rng) -> Vector10<f64> {
    let mut w = Vector10::zeros();
    for i in 0..3 {
        w[i] = rng.random_range(-2.0..2.0);
        w[i + 3] = rng.random_range(-8.0..8.0);
    }
    w[9] = 1.0;
    w
}

fn check_lift_condition(rng: &mut ChaCha12Rng) -> Result<(), String> {
    for _ in 0..1000 {
        let xi = random_manifold_state(rng);
        let w = random_input_vec(rng);
        let tau = Vector10::from_fn(|_, _| rng.random_range(-0.1..0.1));
        let dt = rng.random_range(1e-3..0.1);
        let lifted = state_action(&lift(&xi, &w, &tau, dt), &xi);
        let direct_upsilon = xi
            .upsilon
            .compose(&gal3::exp(&Gal3Tangent::from_vector(&((w - xi.bias) * dt))));
        let err = (lifted.upsilon.matrix() - direct_upsilon.matrix())
            .abs()
            .max()
            + (lifted.bias - (xi.bias + tau * dt)).abs().max();
        fail_if(err > 1e-9, format!("lift condition defect {err:.3e}"))?;
    }
    Ok(())
}

fn check_equivariance(rng: &mut ChaCha12Rng) -> Result<(), String> {
    for _ in 0..1000 {
        let x = TangentGroupElement::new(
            gal3::exp(&random_gal3_tangent(rng)),
            Vector10::from_fn(|_, _| rng.random_range(-0.5..0.5)),
        );
        let xi = random_manifold_state(rng);
        let w = random_input_vec(rng);
        let tau = Vector10::from_fn(|_, _| rng.random_range(-0.1..0.1));
        let dt = rng.random_range(1e-3..0.1);
        let step =
            |state: &ManifoldState<f64>, w: &Vector10<f64>, tau: &Vector10<f64>| ManifoldState {
                upsilon: state.upsilon.compose(&gal3::exp(&Gal3Tangent::from_vector(
                    &((w - state.bias) * dt),
                ))),
                bias: state.bias + tau * dt,
            };
        let (wa, ta) = input_action(&x, &w, &tau);
        let lhs = step(&state_action(&x, &xi), &wa, &ta);
        let rhs = state_action(&x, &step(&xi, &w, &tau));
        let err = (lhs.upsilon.matrix() - rhs.upsilon.matrix()).abs().max()
            + (lhs.bias - rhs.bias).abs().max();
        fail_if(err > 1e-9, format!("equivariance defect {err:.3e}"))?;
    }
    Ok(())
}

/// True next-step error through the exact recursion; independent of the
/// `StepMatrices` formulas.
pub fn exact_next_error(
    x_hat: &TangentGroupElement<f64>,
    input: &ImuInput<f64>,
    eps: &Vector20<f64>,
    eta: &Vector20<f64>,
) -> Result<Vector20<f64>, String> {
    let xi_true = state_action(&tangent::exp(eps).compose(x_hat), &ManifoldState::origin());
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
    let xi_hat = state_action(x_hat, &ManifoldState::origin());
    let x_hat_next = x_hat.compose(&lift(
        &xi_hat,
        input.measurement(),
        input.bias_drive(),
        input.dt(),
    ));
    inv_state_action(&state_action(&x_hat_next.inverse(), &xi_next))
        .log()
        .map_err(|e| e.to_string())
}

/// Central-difference Jacobians of [`exact_next_error`] at zero.
pub fn numeric_error_jacobians(
    x_hat: &TangentGroupElement<f64>,
    input: &ImuInput<f64>,
    h: f64,
) -> Result<(Matrix20<f64>, Matrix20<f64>), String> {
    let mut a = Matrix20::zeros();
    let mut b = Matrix20::zeros();
    for j in 0..20 {
        let mut d = Vector20::zeros();
        d[j] = h;
        let fp = exact_next_error(x_hat, input, &d, &Vector20::zeros())?;
        let fm = exact_next_error(x_hat, input, &(-d), &Vector20::zeros())?;
        a.set_column(j, &((fp - fm) / (2.0 * h)));
        let gp = exact_next_error(x_hat, input, &Vector20::zeros(), &d)?;
        let gm = exact_next_error(x_hat, input, &Vector20::zeros(), &(-d))?;
        b.set_column(j, &((gp - gm) / (2.0 * h)));
    }
    Ok((a, b))
}

pub fn random_preint_context(rng: &mut impl Rng) -> (PreintState<f64>, ImuInput<f64>) {
    let b0 = Vector10::from_fn(|i, _| {
        if i < 6 {
            rng.random_range(-0.1..0.1)
        } else {
            0.0
        }
    });
    let mut state = PreintState::new(b0, Matrix20::zeros());
    let qd = Matrix20::zeros();
    for _ in 0..rng.random_range(1..60) {
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

fn check_error_dynamics(rng: &mut ChaCha12Rng) -> Result<(), String> {
    for _ in 0..10 {
        let (state, input) = random_preint_context(rng);
        let m = state.error_state_matrices(&input);
        let (a_num, b_num) = numeric_error_jacobians(&state.x_hat, &input, 1e-5)?;
        let a_err = (a_num - m.a_hat).abs().max();
        let b_err = (b_num - m.b_hat).abs().max();
        fail_if(
            a_err > 1e-6 || b_err > 1e-6,
            format!("error-dynamics Jacobian defect A={a_err:.3e} B={b_err:.3e}"),
        )?;
    }
    Ok(())
}

fn check_exactness(rng: &mut ChaCha12Rng) -> Result<(), String> {
    let b0 = Vector10::from_fn(|i, _| {
        if i < 6 {
            rng.random_range(-0.05..0.05)
        } else {
            0.0
        }
    });
    let mut state = PreintState::new(b0, Matrix20::zeros());
    let mut truth = ManifoldState::new(gal3::Gal3Element::identity(), b0);
    let qd = Matrix20::zeros();
    let mut worst: f64 = 0.0;
    for _ in 0..500 {
        let input = ImuInput::new(
            Vector3::from_fn(|_, _| rng.random_range(-1.0..1.0)),
            Vector3::from_fn(|_, _| rng.random_range(-10.0..10.0)),
            0.005,
        );
        state.step(&input, &qd);
        truth = truth.propagate(&input);
        worst = worst.max(
            state
                .equivariant_error(&truth)
                .map_err(|e| e.to_string())?
                .norm(),
        );
    }
    fail_if(worst > 1e-8, format!("noise-free error drift {worst:.3e}"))?;
    Ok(())
}
