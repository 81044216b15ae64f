//! Scalar abstraction for the group implementations.

use nalgebra::RealField;
use num_traits::FromPrimitive;

/// Floating-point scalar usable by every group in this crate: `f32` or `f64`,
/// or any other type satisfying the same bounds.
pub trait Real: RealField + FromPrimitive + Copy {}

impl<T: RealField + FromPrimitive + Copy> Real for T {}

/// Lift an `f64` literal into the generic scalar.
#[inline]
pub(crate) fn real<T: Real>(value: f64) -> T {
    T::from_f64(value).expect("literal representable in scalar type")
}
