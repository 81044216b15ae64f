//! Synthetic dataset writer in the ASL directory layout.
//!
//! The ground-truth file carries the *discrete* truth — world poses advanced
//! by the exact zero-order-hold recursion driven by the sampled true rates —
//! so that a correctly implemented integrator sees only the injected noise.
//! With noise matching the generation parameters, segment NEES then follows
//! the chi-square expectation; with zero noise it collapses to zero.

use crate::sim::{sample_true_rates, McConfig, TrajectoryParams};
use lie::gal3::{self, Gal3Tangent};
use lie::{Vector10, Vector3};
use nalgebra::UnitQuaternion;
use preint::{gamma_matrix, GravityModel, NoiseParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use std::io::Write;
use std::path::Path;

/// Fixture generation parameters.
#[derive(Debug, Clone, Copy)]
pub struct FixtureParams {
    pub trajectory: TrajectoryParams,
    pub mc: McConfig,
    pub gravity: GravityModel<f64>,
    /// Absolute timestamp of the first sample, nanoseconds.
    pub start_ns: u64,
}

impl Default for FixtureParams {
    /// ADIS16448-like sensor at the trajectory's 200 Hz, biases walking, so
    /// a default fixture evaluates consistently under the dataset
    /// pipeline's default noise model.
    fn default() -> Self {
        let trajectory = TrajectoryParams::default();
        let noise = NoiseParams::from_continuous(
            lie::Vector3::from_element(1.6968e-4),
            lie::Vector3::from_element(2.0e-3),
            lie::Vector3::from_element(1.9393e-5),
            lie::Vector3::from_element(3.0e-3),
            trajectory.dt(),
        );
        FixtureParams {
            trajectory,
            mc: McConfig {
                noise,
                bias_random_walk: true,
                ..McConfig::default()
            },
            gravity: GravityModel::default(),
            start_ns: 1_400_000_000_000_000_000,
        }
    }
}

/// Writes `mav0/imu0/data.csv` and
/// `mav0/state_groundtruth_estimate0/data.csv` under `root`.
pub fn write_euroc_fixture(root: &Path, params: &FixtureParams) -> std::io::Result<()> {
    let imu_dir = root.join("mav0/imu0");
    let gt_dir = root.join("mav0/state_groundtruth_estimate0");
    std::fs::create_dir_all(&imu_dir)?;
    std::fs::create_dir_all(&gt_dir)?;

    let p = &params.trajectory;
    let rates = sample_true_rates(p, &params.gravity);
    let dt = p.dt();
    let step_ns = (dt * 1e9).round() as u64;
    let noise = params.mc.noise.scaled(params.mc.lambda);
    let mut rng = ChaCha12Rng::seed_from_u64(params.mc.seed);
    rng.set_stream(0x5f17);

    let mut imu = std::io::BufWriter::new(std::fs::File::create(imu_dir.join("data.csv"))?);
    let mut gt = std::io::BufWriter::new(std::fs::File::create(gt_dir.join("data.csv"))?);
    writeln!(
        imu,
        "#timestamp [ns],w_RS_S_x [rad s^-1],w_RS_S_y [rad s^-1],w_RS_S_z [rad s^-1],\
         a_RS_S_x [m s^-2],a_RS_S_y [m s^-2],a_RS_S_z [m s^-2]"
    )?;
    writeln!(
        gt,
        "#timestamp,p_RS_R_x [m],p_RS_R_y [m],p_RS_R_z [m],q_RS_w [],q_RS_x [],q_RS_y [],q_RS_z [],\
         v_RS_R_x [m s^-1],v_RS_R_y [m s^-1],v_RS_R_z [m s^-1],\
         b_w_RS_S_x [rad s^-1],b_w_RS_S_y [rad s^-1],b_w_RS_S_z [rad s^-1],\
         b_a_RS_S_x [m s^-2],b_a_RS_S_y [m s^-2],b_a_RS_S_z [m s^-2]"
    )?;

    // Discrete-truth world pose, advanced alongside the bias walk.
    let start = crate::sim::analytic_state(p, 0.0, &params.gravity);
    let mut pose = gal3::Gal3Element::from_extended_pose(&start.pose, 0.0);
    let gamma_step = gamma_matrix(&params.gravity, dt);
    let mut bias = params.mc.bias_truth;

    for (k, (_, omega, accel)) in rates.iter().enumerate() {
        let t_ns = params.start_ns + k as u64 * step_ns;
        write_gt_row(&mut gt, t_ns, &pose, &bias)?;

        let mut eta_w = Vector10::zeros();
        let mut eta_tau = Vector10::zeros();
        for i in 0..3 {
            let n: f64 = rng.sample(StandardNormal);
            eta_w[i] = noise.sigma_g[i] * n;
            let n: f64 = rng.sample(StandardNormal);
            eta_w[i + 3] = noise.sigma_a[i] * n;
            let n: f64 = rng.sample(StandardNormal);
            eta_tau[i] = noise.sigma_bg[i] * n;
            let n: f64 = rng.sample(StandardNormal);
            eta_tau[i + 3] = noise.sigma_ba[i] * n;
        }
        let gyro =
            omega + bias.fixed_rows::<3>(0).into_owned() + eta_w.fixed_rows::<3>(0).into_owned();
        let acc =
            accel + bias.fixed_rows::<3>(3).into_owned() + eta_w.fixed_rows::<3>(3).into_owned();
        writeln!(
            imu,
            "{t_ns},{},{},{},{},{},{}",
            gyro[0], gyro[1], gyro[2], acc[0], acc[1], acc[2]
        )?;

        // Advance truth: T⁺ = Γ(δt) T exp((w* ρ=1)^∧ δt).
        let mut w = Vector10::zeros();
        w.fixed_rows_mut::<3>(0).copy_from(omega);
        w.fixed_rows_mut::<3>(3).copy_from(accel);
        w[9] = 1.0;
        let increment = gal3::exp(&Gal3Tangent::from_vector(&(w * dt)));
        pose = gamma_step.compose(&pose).compose(&increment);
        pose = gal3::Gal3Element::from_extended_pose(&pose.extended_pose(), 0.0);
        if params.mc.bias_random_walk {
            bias -= eta_tau * dt;
        }
    }
    // Terminal ground-truth row so the last segment has an endpoint.
    let t_ns = params.start_ns + rates.len() as u64 * step_ns;
    write_gt_row(&mut gt, t_ns, &pose, &bias)?;
    Ok(())
}

fn write_gt_row<W: Write>(
    out: &mut W,
    t_ns: u64,
    pose: &gal3::Gal3Element<f64>,
    bias: &Vector10<f64>,
) -> std::io::Result<()> {
    let q = UnitQuaternion::from_matrix(pose.rotation.matrix());
    let p: &Vector3<f64> = &pose.position;
    let v: &Vector3<f64> = &pose.velocity;
    writeln!(
        out,
        "{t_ns},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
        p[0],
        p[1],
        p[2],
        q.w,
        q.i,
        q.j,
        q.k,
        v[0],
        v[1],
        v[2],
        bias[0],
        bias[1],
        bias[2],
        bias[3],
        bias[4],
        bias[5]
    )?;
    Ok(())
}
