//! Scratch probe for the Monte-Carlo comparison (not part of the test
//! suite; run with `cargo run --release -p eval --example probe`).

use eval::sim::{run_monte_carlo, McConfig, TrajectoryParams};
use eval::Method;
use preint::GravityModel;

fn main() {
    let p = TrajectoryParams::default();
    let g = GravityModel::default();
    let args: Vec<String> = std::env::args().collect();
    let m: usize = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(50);
    let prior_gyro: f64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(5e-3);
    let prior_accel: f64 = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(5e-2);
    for lambda in [1.0, 4.0] {
        let cfg = McConfig {
            realizations: m,
            lambda,
            bias_random_walk: true,
            prior_gyro,
            prior_accel,
            ..McConfig::default()
        };
        let start = std::time::Instant::now();
        let report = run_monte_carlo(&cfg, &p, &Method::ALL, &g, 0);
        println!(
            "lambda={lambda}  M={}  elapsed={:.1?}  excluded eq={} base={}",
            cfg.realizations,
            start.elapsed(),
            report.series[0].excluded,
            report.series[1].excluded
        );
        println!("   t     ANEES(eq)  ANEES(base)  ALE(eq)     ALE(base)");
        for (i, t) in report.times.iter().enumerate() {
            if (i + 1) % 10 == 0 {
                println!(
                    "{t:6.2}  {:9.4}  {:11.4}  {:.4e}  {:.4e}",
                    report.series[0].anees[i],
                    report.series[1].anees[i],
                    report.series[0].ale[i],
                    report.series[1].ale[i]
                );
            }
        }
    }
}
