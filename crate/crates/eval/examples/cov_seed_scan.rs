//! Scratch scan: pass rate of the covariance-realism check across RNG
//! seeds (run with `cargo run --release -p eval --example cov_seed_scan`).

use lie::gal3::{self, Gal3Tangent};
use lie::{Matrix20, Vector10, Vector20, Vector3};
use preint::{ImuInput, PreintState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

fn main() {
    let steps = 20;
    let dt = 0.005;
    let noise = eval::sim::medium_noise();
    let qd = noise.qd();
    let mut rng = ChaCha12Rng::seed_from_u64(66);
    let measured: Vec<ImuInput<f64>> = (0..steps)
        .map(|_| {
            ImuInput::new(
                Vector3::from_fn(|_, _| rng.random_range(-1.0..1.0)),
                Vector3::new(0.0, 1.0, 9.8) + Vector3::from_fn(|_, _| rng.random_range(-0.5..0.5)),
                dt,
            )
        })
        .collect();
    let mut estimate = PreintState::new(Vector10::zeros(), Matrix20::zeros());
    for input in &measured {
        estimate.step(input, &qd);
    }
    let floor = 0.01
        * estimate
            .sigma
            .iter()
            .cloned()
            .fold(0.0f64, |a, b| a.max(b.abs()));

    let mut passes = 0;
    let trials = 20;
    for seed in 0..trials {
        let mut mean = Vector20::<f64>::zeros();
        let mut samples = Vec::new();
        for i in 0..2000u64 {
            let mut rng = ChaCha12Rng::seed_from_u64(1000 + seed);
            rng.set_stream(i);
            let mut truth =
                preint::ManifoldState::new(gal3::Gal3Element::identity(), Vector10::zeros());
            for input in &measured {
                let mut eta_w = Vector10::zeros();
                let mut eta_tau = Vector10::zeros();
                for k in 0..3 {
                    let n: f64 = rng.sample(rand_distr::StandardNormal);
                    eta_w[k] = noise.sigma_g[k] * n;
                    let n: f64 = rng.sample(rand_distr::StandardNormal);
                    eta_w[k + 3] = noise.sigma_a[k] * n;
                    let n: f64 = rng.sample(rand_distr::StandardNormal);
                    eta_tau[k] = noise.sigma_bg[k] * n;
                    let n: f64 = rng.sample(rand_distr::StandardNormal);
                    eta_tau[k + 3] = noise.sigma_ba[k] * n;
                }
                let w_true = input.measurement() - eta_w;
                truth = preint::ManifoldState {
                    upsilon: truth.upsilon.compose(&gal3::exp(&Gal3Tangent::from_vector(
                        &((w_true - truth.bias) * dt),
                    ))),
                    bias: truth.bias - eta_tau * dt,
                };
            }
            let eps = estimate.equivariant_error(&truth).unwrap();
            mean += eps;
            samples.push(eps);
        }
        mean /= samples.len() as f64;
        let mut cov = Matrix20::<f64>::zeros();
        for eps in &samples {
            let c = eps - mean;
            cov += c * c.transpose();
        }
        cov /= (samples.len() - 1) as f64;
        let mut worst: f64 = 0.0;
        for i in 0..20 {
            for j in 0..20 {
                let p = estimate.sigma[(i, j)];
                if p.abs() <= floor {
                    continue;
                }
                worst = worst.max((cov[(i, j)] - p).abs() / p.abs());
            }
        }
        let ok = worst < 0.15;
        passes += ok as usize;
        println!(
            "seed {seed}: worst rel {worst:.3} {}",
            if ok { "pass" } else { "FAIL" }
        );
    }
    println!("{passes}/{trials} seeds pass");
}
