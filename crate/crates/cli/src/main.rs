//! Single-binary frontend for the preintegration toolbox.
//!
//! Subcommands:
//!
//! - `check`    — run the invariant self-check suite (exit 1 on failure).
//! - `simulate` — Monte-Carlo consistency run on the analytic trajectory.
//! - `euroc`    — evaluate an ASL-layout dataset into per-segment NEES.
//! - `fixture`  — write a synthetic dataset in the ASL layout.
//!
//! Exit codes: 0 success, 1 invariant/assertion failure, 2 usage or input
//! error. Option precedence is CLI flag > config file > built-in default.

use clap::{Args, Parser, Subcommand};
use eval::check::Fault;
use eval::euroc::EvalConfig;
use eval::sim::{McConfig, TrajectoryParams};
use eval::Method;
use lie::Vector3;
use preint::{GravityModel, NoiseParams};
use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "imu-preint",
    about = "Galilean-group IMU preintegration: checks, simulation, dataset evaluation",
    version
)]
struct Cli {
    /// Flat key=value config file; CLI flags take precedence over it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads for the Monte-Carlo / segment pools (default: cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the invariant suite: group axioms, series oracles, Jacobian
    /// cross-checks, lift condition, equivariance, error-dynamics Jacobians.
    Check(CheckArgs),
    /// Monte-Carlo consistency run (ANEES and linearization error).
    Simulate(SimulateArgs),
    /// Segment-wise NEES evaluation of an ASL-layout dataset.
    Euroc(EurocArgs),
    /// Write a synthetic ASL-layout dataset.
    Fixture(FixtureArgs),
}

#[derive(Args)]
struct CheckArgs {
    /// Emit the machine-readable report as JSON on stdout.
    #[arg(long)]
    json: bool,
    /// Also write the JSON report to this path.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Deliberately inject a defect (for self-testing): none | kappa3.
    #[arg(long, hide = true, default_value = "none")]
    inject_fault: Fault,
}

#[derive(Args)]
struct SimulateArgs {
    /// Number of Monte-Carlo realizations.
    #[arg(long = "M", short = 'M')]
    m: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Noise multiplier applied to all deviations.
    #[arg(long)]
    lambda: Option<f64>,
    /// Output directory for consistency.csv and summary.json.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Initial bias-prior standard deviation (applied to both gyro and
    /// accel axes). Defaults to 5e-3 rad/s and 5e-2 m/s² when unset.
    #[arg(long)]
    sigma0: Option<f64>,
    /// Gravity vector as "gx,gy,gz".
    #[arg(long, value_parser = parse_gravity)]
    gravity: Option<[f64; 3]>,
    /// Let the true biases random-walk per the bias noise deviations.
    #[arg(long)]
    bias_walk: bool,
    /// Trajectory duration in seconds.
    #[arg(long)]
    duration: Option<f64>,
    /// IMU rate in Hz.
    #[arg(long)]
    rate: Option<f64>,
}

#[derive(Args)]
struct EurocArgs {
    /// Dataset root containing mav0/imu0/data.csv and
    /// mav0/state_groundtruth_estimate0/data.csv.
    #[arg(long)]
    dataset: Option<PathBuf>,
    /// Preintegration time(s) in seconds; repeatable.
    #[arg(long = "dt-ij")]
    dt_ij: Vec<f64>,
    /// Output directory for segments.csv and summary.json.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Initial standard deviation per effective error axis.
    #[arg(long)]
    sigma0: Option<f64>,
    /// Gravity vector as "gx,gy,gz".
    #[arg(long, value_parser = parse_gravity)]
    gravity: Option<[f64; 3]>,
    /// Print the summary JSON to stdout as well.
    #[arg(long)]
    json: bool,
    /// Continuous gyro noise density override, rad/s/√Hz.
    #[arg(long)]
    noise_gyro: Option<f64>,
    /// Continuous accel noise density override, m/s²/√Hz.
    #[arg(long)]
    noise_accel: Option<f64>,
    /// Continuous gyro bias random-walk density override, rad/s²/√Hz.
    #[arg(long)]
    noise_gyro_walk: Option<f64>,
    /// Continuous accel bias random-walk density override, m/s³/√Hz.
    #[arg(long)]
    noise_accel_walk: Option<f64>,
}

#[derive(Args)]
struct FixtureArgs {
    /// Directory to create the mav0/ tree in.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Trajectory duration in seconds.
    #[arg(long)]
    duration: Option<f64>,
    /// Write a noise-free dataset (zero deviations, constant biases).
    #[arg(long)]
    noise_free: bool,
}

fn parse_gravity(text: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err("expected \"gx,gy,gz\"".to_owned());
    }
    let mut out = [0.0; 3];
    for (slot, part) in out.iter_mut().zip(parts.iter()) {
        *slot = part
            .trim()
            .parse::<f64>()
            .map_err(|e| format!("{part:?}: {e}"))?;
    }
    Ok(out)
}

/// Flat `key = value` config file. Unknown keys are rejected so typos fail
/// loudly instead of silently running defaults.
struct ConfigFile {
    values: HashMap<String, String>,
}

const CONFIG_KEYS: [&str; 14] = [
    "seed",
    "m",
    "lambda",
    "dataset",
    "out",
    "workers",
    "sigma0",
    "gravity",
    "dt_ij",
    "bias_walk",
    "duration",
    "rate",
    "noise_gyro",
    "noise_accel",
];

impl ConfigFile {
    fn empty() -> Self {
        ConfigFile {
            values: HashMap::new(),
        }
    }

    fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| anyhow::anyhow!("cannot read config {}: {e}", path.display()))?;
        let mut values = HashMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                anyhow::anyhow!("{}:{}: expected key = value", path.display(), idx + 1)
            })?;
            let key = key.trim().to_owned();
            if !CONFIG_KEYS.contains(&key.as_str()) {
                anyhow::bail!("{}:{}: unknown config key {key:?}", path.display(), idx + 1);
            }
            values.insert(key, value.trim().to_owned());
        }
        Ok(ConfigFile { values })
    }

    fn get<T: std::str::FromStr>(&self, key: &str) -> anyhow::Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match self.values.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse::<T>()
                .map(Some)
                .map_err(|e| anyhow::anyhow!("config key {key} = {raw:?}: {e}")),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let config = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::empty(),
    };
    let workers = cli.workers.or(config.get("workers")?);
    if let Some(n) = workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .ok();
    }
    match cli.command {
        Command::Check(args) => cmd_check(args, &config),
        Command::Simulate(args) => cmd_simulate(args, &config),
        Command::Euroc(args) => cmd_euroc(args, &config),
        Command::Fixture(args) => cmd_fixture(args, &config),
    }
}

fn cmd_check(args: CheckArgs, config: &ConfigFile) -> anyhow::Result<ExitCode> {
    let seed = args.seed.or(config.get("seed")?).unwrap_or(1);
    let report = eval::check::run_all(seed, args.inject_fault);
    if args.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        for c in &report.checks {
            println!(
                "{} {:<32} {:>5} ms{}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.millis,
                if c.passed {
                    String::new()
                } else {
                    format!("  ({})", c.detail)
                }
            );
        }
    }
    if let Some(path) = &args.out {
        if let Some(parent) = path.parent() {
            if !parent.as_os_str().is_empty() {
                std::fs::create_dir_all(parent)?;
            }
        }
        std::fs::write(path, serde_json::to_string_pretty(&report)?)?;
    }
    if report.passed {
        Ok(ExitCode::SUCCESS)
    } else {
        let first = report.first_failure().expect("failed report has a failure");
        eprintln!("invariant failed: {} ({})", first.name, first.detail);
        Ok(ExitCode::from(1))
    }
}

fn cmd_simulate(args: SimulateArgs, config: &ConfigFile) -> anyhow::Result<ExitCode> {
    let mut cfg = McConfig::default();
    cfg.realizations = args.m.or(config.get("m")?).unwrap_or(cfg.realizations);
    cfg.seed = args.seed.or(config.get("seed")?).unwrap_or(cfg.seed);
    cfg.lambda = args.lambda.or(config.get("lambda")?).unwrap_or(cfg.lambda);
    cfg.bias_random_walk = args.bias_walk || config.get("bias_walk")?.unwrap_or(false);
    if let Some(prior) = args.sigma0.or(config.get("sigma0")?) {
        cfg.prior_gyro = prior;
        cfg.prior_accel = prior;
    }
    let mut trajectory = TrajectoryParams::default();
    trajectory.duration = args
        .duration
        .or(config.get("duration")?)
        .unwrap_or(trajectory.duration);
    trajectory.imu_rate = args
        .rate
        .or(config.get("rate")?)
        .unwrap_or(trajectory.imu_rate);
    let gravity = resolve_gravity(args.gravity, config)?;
    let out = args
        .out
        .or(config.get::<PathBuf>("out")?)
        .unwrap_or_else(|| PathBuf::from("sim-out"));

    let report = eval::sim::run_monte_carlo(&cfg, &trajectory, &Method::ALL, &gravity, 0);
    if report.degenerate {
        eprintln!("warning: zero effective noise; ANEES reported as NaN");
    }
    for series in &report.series {
        if series.excluded > 0 {
            eprintln!(
                "warning: {} excluded {} of {} realizations",
                series.method, series.excluded, cfg.realizations
            );
        }
    }
    eval::report::write_consistency_csv(&report, &out.join("consistency.csv"))?;
    let summary = eval::report::consistency_summary(&report, &cfg, &trajectory);
    eval::report::write_consistency_summary(&summary, &out.join("summary.json"))?;
    println!(
        "wrote {} and {}",
        out.join("consistency.csv").display(),
        out.join("summary.json").display()
    );
    Ok(ExitCode::SUCCESS)
}

/// EuRoC ADIS16448 continuous-time noise densities.
const EUROC_GYRO_DENSITY: f64 = 1.6968e-4;
const EUROC_ACCEL_DENSITY: f64 = 2.0e-3;
const EUROC_GYRO_WALK: f64 = 1.9393e-5;
const EUROC_ACCEL_WALK: f64 = 3.0e-3;

fn cmd_euroc(args: EurocArgs, config: &ConfigFile) -> anyhow::Result<ExitCode> {
    let dataset = args
        .dataset
        .or(config.get::<PathBuf>("dataset")?)
        .ok_or_else(|| anyhow::anyhow!("--dataset is required (ASL-layout root)"))?;
    if !dataset.exists() {
        anyhow::bail!("dataset path {} does not exist", dataset.display());
    }
    let mut dt_list = args.dt_ij;
    if dt_list.is_empty() {
        if let Some(raw) = config.values.get("dt_ij") {
            for part in raw.split(',') {
                dt_list.push(
                    part.trim()
                        .parse::<f64>()
                        .map_err(|e| anyhow::anyhow!("config key dt_ij: {part:?}: {e}"))?,
                );
            }
        }
    }
    if dt_list.is_empty() {
        dt_list = vec![0.2, 0.5, 1.0];
    }
    let sigma0 = args.sigma0.or(config.get("sigma0")?).unwrap_or(1e-3);
    let gravity = resolve_gravity(args.gravity, config)?;
    let out = args
        .out
        .or(config.get::<PathBuf>("out")?)
        .unwrap_or_else(|| PathBuf::from("euroc-out"));

    let (imu, gt) = eval::euroc::load_dataset(&dataset)?;
    println!(
        "loaded {} IMU samples at {:.1} Hz median rate ({} gaps), {} ground-truth records",
        imu.samples.len(),
        imu.median_rate_hz,
        imu.gap_count,
        gt.records.len()
    );

    let rate = imu.median_rate_hz.max(1.0);
    let noise = NoiseParams::from_continuous(
        Vector3::from_element(
            args.noise_gyro
                .or(config.get("noise_gyro")?)
                .unwrap_or(EUROC_GYRO_DENSITY),
        ),
        Vector3::from_element(
            args.noise_accel
                .or(config.get("noise_accel")?)
                .unwrap_or(EUROC_ACCEL_DENSITY),
        ),
        Vector3::from_element(args.noise_gyro_walk.unwrap_or(EUROC_GYRO_WALK)),
        Vector3::from_element(args.noise_accel_walk.unwrap_or(EUROC_ACCEL_WALK)),
        1.0 / rate,
    );
    let cfg = EvalConfig {
        gravity,
        noise,
        sigma0,
    };

    let mut evaluations = Vec::new();
    for &dt_ij in &dt_list {
        let eval_result = eval::euroc::evaluate_sequence(&imu, &gt, dt_ij, &Method::ALL, &cfg);
        let skipped = &eval_result.skipped;
        if skipped.ground_truth_gap + skipped.near_pi + skipped.ill_conditioned > 0 {
            eprintln!(
                "warning: dt_ij={dt_ij}: skipped segments (gt gap {}, near-pi {}, conditioning {})",
                skipped.ground_truth_gap, skipped.near_pi, skipped.ill_conditioned
            );
        }
        for s in &eval_result.summaries {
            println!(
                "dt_ij={dt_ij:4}  {:<12} segments={:4}  NEES median={:9.3}  mean={:9.3}  q25={:9.3}  q75={:9.3}",
                s.method.name(),
                s.stats.count,
                s.stats.median,
                s.stats.mean,
                s.stats.q25,
                s.stats.q75
            );
        }
        evaluations.push(eval_result);
    }

    eval::report::write_segments_csv(&evaluations, &out.join("segments.csv"))?;
    let summary = eval::report::segments_summary(
        &dataset.display().to_string(),
        sigma0,
        [gravity.g[0], gravity.g[1], gravity.g[2]],
        &evaluations,
    );
    eval::report::write_segments_summary(&summary, &out.join("summary.json"))?;
    if args.json {
        println!("{}", serde_json::to_string_pretty(&summary)?);
    }
    println!(
        "wrote {} and {}",
        out.join("segments.csv").display(),
        out.join("summary.json").display()
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_fixture(args: FixtureArgs, config: &ConfigFile) -> anyhow::Result<ExitCode> {
    let out = args
        .out
        .or(config.get::<PathBuf>("out")?)
        .ok_or_else(|| anyhow::anyhow!("--out is required"))?;
    let mut params = eval::fixture::FixtureParams::default();
    params.mc.seed = args.seed.or(config.get("seed")?).unwrap_or(params.mc.seed);
    params.trajectory.duration = args
        .duration
        .or(config.get("duration")?)
        .unwrap_or(params.trajectory.duration);
    if args.noise_free {
        params.mc.noise = NoiseParams::isotropic(0.0, 0.0, 0.0, 0.0);
        params.mc.bias_random_walk = false;
    }
    eval::fixture::write_euroc_fixture(&out, &params)?;
    println!(
        "wrote ASL-layout fixture under {} ({}s at {} Hz)",
        out.display(),
        params.trajectory.duration,
        params.trajectory.imu_rate
    );
    Ok(ExitCode::SUCCESS)
}

fn resolve_gravity(
    flag: Option<[f64; 3]>,
    config: &ConfigFile,
) -> anyhow::Result<GravityModel<f64>> {
    let from_config = match config.values.get("gravity") {
        Some(raw) => Some(parse_gravity(raw).map_err(|e| anyhow::anyhow!("config gravity: {e}"))?),
        None => None,
    };
    Ok(match flag.or(from_config) {
        Some(g) => GravityModel::new(Vector3::new(g[0], g[1], g[2])),
        None => GravityModel::default(),
    })
}
