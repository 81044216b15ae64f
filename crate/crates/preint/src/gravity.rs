//! Gravity/time integration factors relating preintegrated increments to
//! world-frame poses.
//!
//! With `T_i`, `T_j` extended poses at the segment endpoints and `Υ` the
//! preintegrated increment over `Δt = t_j − t_i`:
//!
//! ```text
//! T_j = Γ(Δt) · T_i · Υ,        Υ = T_i⁻¹ · Γ(Δt)⁻¹ · T_j
//! ```
//!
//! where `Γ(Δt) = (I₃, gΔt, −½gΔt², −Δt)` integrates gravity and shifts the
//! time column so the product lands back on an extended pose.

use crate::input::GravityModel;
use lie::gal3::Gal3Element;
use lie::se23::ExtendedPose;
use lie::so3::Rotation;
use lie::Real;

/// Exact gravity factor `Γ(Δt) = (I₃, gΔt, −½gΔt², −Δt)`.
pub fn gamma_matrix<T: Real>(gravity: &GravityModel<T>, dt: T) -> Gal3Element<T> {
    let half = T::from_f64(0.5).unwrap();
    Gal3Element::new(
        Rotation::identity(),
        gravity.g * dt,
        -(gravity.g * (half * dt * dt)),
        -dt,
    )
}

/// Closed-form inverse `Γ(Δt)⁻¹ = (I₃, −gΔt, −½gΔt², Δt)`.
pub fn gamma_matrix_inv<T: Real>(gravity: &GravityModel<T>, dt: T) -> Gal3Element<T> {
    let half = T::from_f64(0.5).unwrap();
    Gal3Element::new(
        Rotation::identity(),
        -(gravity.g * dt),
        -(gravity.g * (half * dt * dt)),
        dt,
    )
}

/// An extended pose with its timestamp.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StampedPose<T: Real> {
    pub t: T,
    pub pose: ExtendedPose<T>,
}

/// Propagates a world-frame pose through a preintegrated increment:
/// `T_j = Γ(Δt) T_i Υ̂` with `Δt` read off the increment's time column.
pub fn compose_pose<T: Real>(
    start: &StampedPose<T>,
    increment: &Gal3Element<T>,
    gravity: &GravityModel<T>,
) -> StampedPose<T> {
    let dt = increment.time;
    let gal_start = start.pose.as_gal3();
    let end = gamma_matrix(gravity, dt)
        .compose(&gal_start)
        .compose(increment);
    StampedPose {
        t: start.t + dt,
        pose: end.extended_pose(),
    }
}

/// True increment between two stamped poses: `Υ = T_i⁻¹ Γ(Δt)⁻¹ T_j`.
pub fn true_increment<T: Real>(
    start: &StampedPose<T>,
    end: &StampedPose<T>,
    gravity: &GravityModel<T>,
) -> Gal3Element<T> {
    let dt = end.t - start.t;
    start
        .pose
        .as_gal3()
        .inverse()
        .compose(&gamma_matrix_inv(gravity, dt))
        .compose(&end.pose.as_gal3())
}
