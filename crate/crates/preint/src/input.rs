//! Input-side types: IMU samples, the augmented 10-channel input vector,
//! noise parameters and gravity.

use lie::{Real, Vector10, Vector3};
use nalgebra::SMatrix;

pub type Matrix20<T> = lie::Matrix20<T>;

/// A timestamped gyro/accelerometer reading, in body frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImuSample {
    /// Sample time in seconds.
    pub t: f64,
    /// Angular rate, rad/s.
    pub gyro: lie::Vector3<f64>,
    /// Specific force, m/s².
    pub accel: lie::Vector3<f64>,
}

/// One integration step's input: the augmented 10-channel measurement
/// `w = (ω, a, ν, ρ)`, the bias drive `τ`, and the step length.
///
/// The virtual channels are fixed by construction: `ν = 0` and `ρ = 1`, the
/// convention that makes the time column of the preintegration matrix
/// accumulate elapsed time. `τ` is zero during preintegration (biases are
/// held constant between bias updates).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImuInput<T: Real> {
    w: Vector10<T>,
    tau: Vector10<T>,
    dt: T,
}

impl<T: Real> ImuInput<T> {
    /// Builds the augmented input from a raw measurement.
    ///
    /// Panics if `dt` is not strictly positive.
    pub fn new(gyro: Vector3<T>, accel: Vector3<T>, dt: T) -> Self {
        assert!(dt > T::zero(), "IMU step length must be positive");
        let mut w = Vector10::zeros();
        w.fixed_rows_mut::<3>(0).copy_from(&gyro);
        w.fixed_rows_mut::<3>(3).copy_from(&accel);
        w[9] = T::one();
        ImuInput {
            w,
            tau: Vector10::zeros(),
            dt,
        }
    }

    pub fn measurement(&self) -> &Vector10<T> {
        &self.w
    }

    pub fn bias_drive(&self) -> &Vector10<T> {
        &self.tau
    }

    pub fn dt(&self) -> T {
        self.dt
    }
}

impl ImuInput<f64> {
    /// Input covering the interval from `sample` to time `t_next`.
    pub fn from_sample(sample: &ImuSample, t_next: f64) -> Self {
        ImuInput::new(sample.gyro, sample.accel, t_next - sample.t)
    }
}

/// Per-axis discrete (per-sample) noise standard deviations.
///
/// `sigma_g`/`sigma_a` drive the white measurement noise; `sigma_bg`/
/// `sigma_ba` drive the bias random walks. Continuous-time densities
/// convert as `σ_d = σ_c / √δt` (see [`NoiseParams::from_continuous`]).
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(bound(
    serialize = "T: serde::Serialize",
    deserialize = "T: serde::de::DeserializeOwned"
))]
pub struct NoiseParams<T: Real> {
    pub sigma_g: Vector3<T>,
    pub sigma_a: Vector3<T>,
    pub sigma_bg: Vector3<T>,
    pub sigma_ba: Vector3<T>,
}

impl<T: Real> NoiseParams<T> {
    pub fn new(
        sigma_g: Vector3<T>,
        sigma_a: Vector3<T>,
        sigma_bg: Vector3<T>,
        sigma_ba: Vector3<T>,
    ) -> Self {
        let p = NoiseParams {
            sigma_g,
            sigma_a,
            sigma_bg,
            sigma_ba,
        };
        assert!(p.all_non_negative(), "noise deviations must be >= 0");
        p
    }

    /// Uniform per-axis values.
    pub fn isotropic(sigma_g: T, sigma_a: T, sigma_bg: T, sigma_ba: T) -> Self {
        NoiseParams::new(
            Vector3::from_element(sigma_g),
            Vector3::from_element(sigma_a),
            Vector3::from_element(sigma_bg),
            Vector3::from_element(sigma_ba),
        )
    }

    /// Converts continuous-time densities to discrete deviations for a
    /// sample interval `dt`: `σ_d = σ_c / √dt`.
    pub fn from_continuous(
        sigma_g_c: Vector3<T>,
        sigma_a_c: Vector3<T>,
        sigma_bg_c: Vector3<T>,
        sigma_ba_c: Vector3<T>,
        dt: T,
    ) -> Self {
        let s = T::one() / dt.sqrt();
        NoiseParams::new(sigma_g_c * s, sigma_a_c * s, sigma_bg_c * s, sigma_ba_c * s)
    }

    fn all_non_negative(&self) -> bool {
        self.sigma_g.iter().all(|v| *v >= T::zero())
            && self.sigma_a.iter().all(|v| *v >= T::zero())
            && self.sigma_bg.iter().all(|v| *v >= T::zero())
            && self.sigma_ba.iter().all(|v| *v >= T::zero())
    }

    /// All deviations multiplied by `factor`.
    pub fn scaled(&self, factor: T) -> Self {
        NoiseParams {
            sigma_g: self.sigma_g * factor,
            sigma_a: self.sigma_a * factor,
            sigma_bg: self.sigma_bg * factor,
            sigma_ba: self.sigma_ba * factor,
        }
    }

    /// Discrete process-noise covariance
    /// `Q_d = diag(σ_ω², σ_a², 0₄, σ_τω², σ_τa², 0₄)`.
    ///
    /// The zero slots are the virtual velocity/time channels, which carry no
    /// noise by construction.
    pub fn qd(&self) -> Matrix20<T> {
        let mut q: SMatrix<T, 20, 20> = SMatrix::zeros();
        for i in 0..3 {
            q[(i, i)] = self.sigma_g[i] * self.sigma_g[i];
            q[(i + 3, i + 3)] = self.sigma_a[i] * self.sigma_a[i];
            q[(i + 10, i + 10)] = self.sigma_bg[i] * self.sigma_bg[i];
            q[(i + 13, i + 13)] = self.sigma_ba[i] * self.sigma_ba[i];
        }
        q
    }
}

/// Gravity vector in the world frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GravityModel<T: Real> {
    pub g: Vector3<T>,
}

impl<T: Real> GravityModel<T> {
    pub fn new(g: Vector3<T>) -> Self {
        GravityModel { g }
    }

    /// `‖g‖` within [9.7, 9.9] m/s², the sanity band for Earth-surface runs.
    pub fn is_earth_like(&self) -> bool {
        let n = self.g.norm();
        n >= T::from_f64(9.7).unwrap() && n <= T::from_f64(9.9).unwrap()
    }
}

impl Default for GravityModel<f64> {
    fn default() -> Self {
        GravityModel {
            g: lie::Vector3::new(0.0, 0.0, -9.81),
        }
    }
}
