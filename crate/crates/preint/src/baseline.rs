//! Right-invariant extended-pose baseline: the comparison preintegrator.
//!
//! State is `(ΔT, b) ∈ SE₂(3) × R⁶` with the right-invariant error
//! `ε = (log(ΔT ΔT̂⁻¹)^∨, b − b̂) ∈ R¹⁵`. Mean propagation is shared with
//! the equivariant pipeline (identical increments, projected to the
//! extended pose), so the two methods differ only in error parametrization
//! and covariance.
//!
//! The linearized step matrices are obtained by central-difference
//! differentiation of the exact error recursion at zero error and zero
//! noise, rather than from transcribed closed forms; the recursion itself is
//! the ground truth here.

use crate::input::{ImuInput, NoiseParams};
use lie::gal3::{self, Gal3Element, Gal3Tangent};
use lie::se23::{self, ExtendedPose};
use lie::{NearPiRotation, Real, Vector10};
use nalgebra::SMatrix;

pub type Matrix15<T> = SMatrix<T, 15, 15>;
pub type Matrix15x12<T> = SMatrix<T, 15, 12>;
pub type Matrix12<T> = SMatrix<T, 12, 12>;
pub type Vector15<T> = SMatrix<T, 15, 1>;
pub type Vector12<T> = SMatrix<T, 12, 1>;
pub type Vector6<T> = SMatrix<T, 6, 1>;

/// Baseline preintegration state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaselineState<T: Real> {
    pub delta_pose: ExtendedPose<T>,
    pub dt_total: T,
    pub bias: Vector6<T>,
    pub sigma: Matrix15<T>,
}

/// Measurement/bias noise covariance in the baseline's 12 channels
/// `(η_ω, η_a, η_τω, η_τa)`.
pub fn noise_covariance<T: Real>(noise: &NoiseParams<T>) -> Matrix12<T> {
    let mut q = Matrix12::zeros();
    for i in 0..3 {
        q[(i, i)] = noise.sigma_g[i] * noise.sigma_g[i];
        q[(i + 3, i + 3)] = noise.sigma_a[i] * noise.sigma_a[i];
        q[(i + 6, i + 6)] = noise.sigma_bg[i] * noise.sigma_bg[i];
        q[(i + 9, i + 9)] = noise.sigma_ba[i] * noise.sigma_ba[i];
    }
    q
}

fn embed_bias<T: Real>(b: &Vector6<T>) -> Vector10<T> {
    let mut out = Vector10::zeros();
    out.fixed_rows_mut::<6>(0).copy_from(b);
    out
}

fn embed_w_noise<T: Real>(eta: &Vector12<T>) -> Vector10<T> {
    let mut out = Vector10::zeros();
    out.fixed_rows_mut::<6>(0)
        .copy_from(&eta.fixed_rows::<6>(0).into_owned());
    out
}

/// One exact step of the true/estimated pair, returning the next
/// right-invariant error. `eps` and `eta` are the current error and the
/// step's noise; zero in, zero out.
pub fn error_recursion<T: Real>(
    delta_pose_hat: &ExtendedPose<T>,
    bias_hat: &Vector6<T>,
    input: &ImuInput<T>,
    eps: &Vector15<T>,
    eta: &Vector12<T>,
) -> Result<Vector15<T>, NearPiRotation> {
    let dt = input.dt();

    // True state from the error definition.
    let eps_pose = se23::Se23Tangent::from_vector(&eps.fixed_rows::<9>(0).into_owned());
    let pose_true = se23::exp(&eps_pose).compose(delta_pose_hat);
    let bias_true = bias_hat + eps.fixed_rows::<6>(9).into_owned();

    // True input: measurement minus noise; bias drive is the negated noise.
    let w_true = input.measurement() - embed_w_noise(eta);
    let upsilon_true = Gal3Element::from_extended_pose(&pose_true, T::zero());
    let increment_true = gal3::exp(&Gal3Tangent::from_vector(
        &((w_true - embed_bias(&bias_true)) * dt),
    ));
    let pose_true_next = upsilon_true.compose(&increment_true).extended_pose();
    let bias_true_next = bias_true - eta.fixed_rows::<6>(6).into_owned() * dt;

    // Estimate advances on the measured input.
    let upsilon_hat = Gal3Element::from_extended_pose(delta_pose_hat, T::zero());
    let increment_hat = gal3::exp(&Gal3Tangent::from_vector(
        &((input.measurement() - embed_bias(bias_hat)) * dt),
    ));
    let pose_hat_next = upsilon_hat.compose(&increment_hat).extended_pose();

    let eps_pose_next = se23::log(&pose_true_next.compose(&pose_hat_next.inverse()))?;
    let mut out = Vector15::zeros();
    out.fixed_rows_mut::<9>(0)
        .copy_from(&eps_pose_next.as_vector());
    out.fixed_rows_mut::<6>(9)
        .copy_from(&(bias_true_next - bias_hat));
    Ok(out)
}

/// Central-difference Jacobians of [`error_recursion`] at zero error/noise.
pub fn step_jacobians<T: Real>(
    delta_pose_hat: &ExtendedPose<T>,
    bias_hat: &Vector6<T>,
    input: &ImuInput<T>,
    h: T,
) -> (Matrix15<T>, Matrix15x12<T>) {
    let two_h = h + h;
    let mut a = Matrix15::zeros();
    for j in 0..15 {
        let mut plus = Vector15::zeros();
        plus[j] = h;
        let mut minus = Vector15::zeros();
        minus[j] = -h;
        let fp = error_recursion(delta_pose_hat, bias_hat, input, &plus, &Vector12::zeros())
            .expect("perturbation stays inside the log radius");
        let fm = error_recursion(delta_pose_hat, bias_hat, input, &minus, &Vector12::zeros())
            .expect("perturbation stays inside the log radius");
        a.set_column(j, &((fp - fm) / two_h));
    }
    let mut b = Matrix15x12::zeros();
    for j in 0..12 {
        let mut plus = Vector12::zeros();
        plus[j] = h;
        let mut minus = Vector12::zeros();
        minus[j] = -h;
        let fp = error_recursion(delta_pose_hat, bias_hat, input, &Vector15::zeros(), &plus)
            .expect("perturbation stays inside the log radius");
        let fm = error_recursion(delta_pose_hat, bias_hat, input, &Vector15::zeros(), &minus)
            .expect("perturbation stays inside the log radius");
        b.set_column(j, &((fp - fm) / two_h));
    }
    (a, b)
}

impl<T: Real> BaselineState<T> {
    pub fn new(initial_bias: Vector6<T>, sigma0: Matrix15<T>) -> Self {
        BaselineState {
            delta_pose: ExtendedPose::identity(),
            dt_total: T::zero(),
            bias: initial_bias,
            sigma: sigma0,
        }
    }

    /// Advances mean and covariance by one IMU step.
    pub fn step(&mut self, input: &ImuInput<T>, noise: &NoiseParams<T>) {
        let h = T::from_f64(1e-6).unwrap();
        let (a, b) = step_jacobians(&self.delta_pose, &self.bias, input, h);
        let q = noise_covariance(noise);
        let sigma = a * self.sigma * a.transpose() + b * q * b.transpose();
        self.sigma = (sigma + sigma.transpose()) * T::from_f64(0.5).unwrap();

        let increment = gal3::exp(&Gal3Tangent::from_vector(
            &((input.measurement() - embed_bias(&self.bias)) * input.dt()),
        ));
        self.delta_pose = Gal3Element::from_extended_pose(&self.delta_pose, T::zero())
            .compose(&increment)
            .extended_pose();
        self.dt_total += input.dt();
    }

    /// Right-invariant error against the true increment and bias.
    pub fn error(
        &self,
        pose_true: &ExtendedPose<T>,
        bias_true: &Vector6<T>,
    ) -> Result<Vector15<T>, NearPiRotation> {
        let eps_pose = se23::log(&pose_true.compose(&self.delta_pose.inverse()))?;
        let mut out = Vector15::zeros();
        out.fixed_rows_mut::<9>(0).copy_from(&eps_pose.as_vector());
        out.fixed_rows_mut::<6>(9)
            .copy_from(&(bias_true - self.bias));
        Ok(out)
    }
}
