//! SE₂(3) extended poses: rotation, velocity, position.
//!
//! An extended pose is a Gal(3) element with zero time offset; the maps here
//! reuse the Galilean kernels with that column dropped.

use crate::gal3::{self, Gal3Element, Gal3Tangent};
use crate::scalar::Real;
use crate::so3::{self, hat, Rotation};
use crate::{Matrix5, Matrix9, NearPiRotation, Vector3, Vector9};

/// Extended pose `(R, v, p)`, the 5×5 form with bottom-right 2×2 identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtendedPose<T: Real> {
    pub rotation: Rotation<T>,
    pub velocity: Vector3<T>,
    pub position: Vector3<T>,
}

impl<T: Real> ExtendedPose<T> {
    pub fn identity() -> Self {
        ExtendedPose {
            rotation: Rotation::identity(),
            velocity: Vector3::zeros(),
            position: Vector3::zeros(),
        }
    }

    pub fn new(rotation: Rotation<T>, velocity: Vector3<T>, position: Vector3<T>) -> Self {
        ExtendedPose {
            rotation,
            velocity,
            position,
        }
    }

    /// The 5×5 matrix embedding (a Gal(3) element with zero time).
    pub fn matrix(&self) -> Matrix5<T> {
        self.as_gal3().matrix()
    }

    pub fn as_gal3(&self) -> Gal3Element<T> {
        Gal3Element::from_extended_pose(self, T::zero())
    }

    pub fn compose(&self, other: &Self) -> Self {
        ExtendedPose {
            rotation: self.rotation.compose(&other.rotation),
            velocity: self.rotation.apply(&other.velocity) + self.velocity,
            position: self.rotation.apply(&other.position) + self.position,
        }
    }

    pub fn inverse(&self) -> Self {
        let rot_inv = self.rotation.inverse();
        ExtendedPose {
            rotation: rot_inv,
            velocity: -rot_inv.apply(&self.velocity),
            position: -rot_inv.apply(&self.position),
        }
    }

    /// Adjoint matrix in `(ω, v, r)` coordinates:
    ///
    /// ```text
    ///      [ R      0  0 ]
    /// Ad = [ v^∧R   R  0 ]
    ///      [ p^∧R   0  R ]
    /// ```
    pub fn adjoint(&self) -> Matrix9<T> {
        let r = self.rotation.matrix();
        let mut m = Matrix9::zeros();
        m.fixed_view_mut::<3, 3>(0, 0).copy_from(r);
        m.fixed_view_mut::<3, 3>(3, 0)
            .copy_from(&(hat(&self.velocity) * r));
        m.fixed_view_mut::<3, 3>(3, 3).copy_from(r);
        m.fixed_view_mut::<3, 3>(6, 0)
            .copy_from(&(hat(&self.position) * r));
        m.fixed_view_mut::<3, 3>(6, 6).copy_from(r);
        m
    }
}

impl<T: Real> std::ops::Mul for ExtendedPose<T> {
    type Output = ExtendedPose<T>;
    fn mul(self, rhs: Self) -> Self {
        self.compose(&rhs)
    }
}

/// Tangent coordinates `(ω, v, r)` of se₂(3).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Se23Tangent<T: Real> {
    pub rotation: Vector3<T>,
    pub velocity: Vector3<T>,
    pub position: Vector3<T>,
}

impl<T: Real> Se23Tangent<T> {
    pub fn new(rotation: Vector3<T>, velocity: Vector3<T>, position: Vector3<T>) -> Self {
        Se23Tangent {
            rotation,
            velocity,
            position,
        }
    }

    pub fn zero() -> Self {
        Se23Tangent {
            rotation: Vector3::zeros(),
            velocity: Vector3::zeros(),
            position: Vector3::zeros(),
        }
    }

    pub fn from_vector(v: &Vector9<T>) -> Self {
        Se23Tangent {
            rotation: v.fixed_rows::<3>(0).into_owned(),
            velocity: v.fixed_rows::<3>(3).into_owned(),
            position: v.fixed_rows::<3>(6).into_owned(),
        }
    }

    pub fn as_vector(&self) -> Vector9<T> {
        let mut v = Vector9::zeros();
        v.fixed_rows_mut::<3>(0).copy_from(&self.rotation);
        v.fixed_rows_mut::<3>(3).copy_from(&self.velocity);
        v.fixed_rows_mut::<3>(6).copy_from(&self.position);
        v
    }

    /// Embeds into gal(3) with zero time component.
    pub fn as_gal3(&self) -> Gal3Tangent<T> {
        Gal3Tangent::new(self.rotation, self.velocity, self.position, T::zero())
    }
}

impl<T: Real> std::ops::Neg for Se23Tangent<T> {
    type Output = Se23Tangent<T>;
    fn neg(self) -> Self {
        Se23Tangent {
            rotation: -self.rotation,
            velocity: -self.velocity,
            position: -self.position,
        }
    }
}

/// Exponential map: `(exp(ω^∧), Γ₁v, Γ₁r)`.
pub fn exp<T: Real>(x: &Se23Tangent<T>) -> ExtendedPose<T> {
    let g1 = so3::gamma1(&x.rotation);
    ExtendedPose {
        rotation: so3::exp(&x.rotation),
        velocity: g1 * x.velocity,
        position: g1 * x.position,
    }
}

/// Logarithmic map, inverse of [`exp`].
pub fn log<T: Real>(pose: &ExtendedPose<T>) -> Result<Se23Tangent<T>, NearPiRotation> {
    let omega = so3::log(&pose.rotation)?;
    let g1_inv = so3::gamma1_inv(&omega);
    Ok(Se23Tangent {
        rotation: omega,
        velocity: g1_inv * pose.velocity,
        position: g1_inv * pose.position,
    })
}

/// Left Jacobian of SE₂(3):
///
/// ```text
///       [ Γ₁         0   0  ]
/// J_L = [ Q₁(ω)(v)   Γ₁  0  ]
///       [ Q₁(ω)(r)   0   Γ₁ ]
/// ```
pub fn left_jacobian<T: Real>(x: &Se23Tangent<T>) -> Matrix9<T> {
    let g1 = so3::gamma1(&x.rotation);
    let mut j = Matrix9::zeros();
    j.fixed_view_mut::<3, 3>(0, 0).copy_from(&g1);
    j.fixed_view_mut::<3, 3>(3, 0)
        .copy_from(&gal3::q1(&x.rotation, &x.velocity));
    j.fixed_view_mut::<3, 3>(3, 3).copy_from(&g1);
    j.fixed_view_mut::<3, 3>(6, 0)
        .copy_from(&gal3::q1(&x.rotation, &x.position));
    j.fixed_view_mut::<3, 3>(6, 6).copy_from(&g1);
    j
}

/// Right Jacobian of SE₂(3), `J_R(x) = J_L(−x)`.
pub fn right_jacobian<T: Real>(x: &Se23Tangent<T>) -> Matrix9<T> {
    left_jacobian(&-*x)
}

/// Restriction of a Gal(3) tangent to the extended-pose slots.
pub fn from_gal3_tangent<T: Real>(x: &Gal3Tangent<T>) -> Se23Tangent<T> {
    Se23Tangent {
        rotation: x.rotation,
        velocity: x.velocity,
        position: x.position,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use crate::Matrix3;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn random_tangent(rng: &mut impl Rng, omega_max: f64) -> Se23Tangent<f64> {
        let dir = Vector3::new(
            rng.random_range(-1.0f64..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        )
        .normalize();
        Se23Tangent::new(
            dir * rng.random_range(1e-6..omega_max),
            Vector3::new(
                rng.random_range(-3.0..3.0),
                rng.random_range(-3.0..3.0),
                rng.random_range(-3.0..3.0),
            ),
            Vector3::new(
                rng.random_range(-3.0..3.0),
                rng.random_range(-3.0..3.0),
                rng.random_range(-3.0..3.0),
            ),
        )
    }

    fn random_pose(rng: &mut impl Rng) -> ExtendedPose<f64> {
        exp(&random_tangent(rng, 2.5))
    }

    #[test]
    fn embedding_bottom_right_is_identity() {
        let mut rng = ChaCha12Rng::seed_from_u64(40);
        let m = random_pose(&mut rng).matrix();
        assert_eq!(m[(3, 3)], 1.0);
        assert_eq!(m[(4, 4)], 1.0);
        assert_eq!(m[(3, 4)], 0.0);
        assert_eq!(m[(4, 3)], 0.0);
    }

    #[test]
    fn exp_of_zero_is_identity() {
        assert_eq!(exp(&Se23Tangent::<f64>::zero()), ExtendedPose::identity());
    }

    #[test]
    fn exp_of_pure_translation() {
        let x = Se23Tangent::new(
            Vector3::zeros(),
            Vector3::new(1.0, 2.0, 3.0),
            Vector3::new(4.0, 5.0, 6.0),
        );
        let pose = exp(&x);
        assert_eq!(pose.velocity, Vector3::new(1.0, 2.0, 3.0));
        assert_eq!(pose.position, Vector3::new(4.0, 5.0, 6.0));
    }

    #[test]
    fn exp_matches_series_oracle() {
        let mut rng = ChaCha12Rng::seed_from_u64(41);
        for _ in 0..200 {
            let x = random_tangent(&mut rng, 3.0);
            assert_abs_diff_eq!(
                exp(&x).matrix(),
                oracle::exp_se23_series(&x, 30),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn log_round_trip() {
        assert_eq!(
            log(&ExtendedPose::<f64>::identity()).unwrap(),
            Se23Tangent::zero()
        );
        let pure = ExtendedPose::new(
            Rotation::identity(),
            Vector3::new(1.0, -1.0, 2.0),
            Vector3::new(0.5, 0.0, -2.0),
        );
        let x = log(&pure).unwrap();
        assert_eq!(x.rotation, Vector3::zeros());
        assert_eq!(x.velocity, pure.velocity);
        assert_eq!(x.position, pure.position);

        let mut rng = ChaCha12Rng::seed_from_u64(42);
        for _ in 0..300 {
            let x = random_tangent(&mut rng, 3.0);
            let back = log(&exp(&x)).unwrap();
            assert_abs_diff_eq!(back.as_vector(), x.as_vector(), epsilon = 1e-9);
        }
    }

    #[test]
    fn adjoint_matches_conjugation() {
        assert_abs_diff_eq!(
            ExtendedPose::<f64>::identity().adjoint(),
            Matrix9::identity(),
            epsilon = 0.0
        );
        let mut rng = ChaCha12Rng::seed_from_u64(43);
        for _ in 0..100 {
            let pose = random_pose(&mut rng);
            let u = random_tangent(&mut rng, 2.0);
            let by_matrix = pose.adjoint() * u.as_vector();
            let conj = pose.matrix() * u.as_gal3().hat() * pose.inverse().matrix();
            let by_conj = Gal3Tangent::from_hat(&conj);
            assert_abs_diff_eq!(
                by_matrix,
                from_gal3_tangent(&by_conj).as_vector(),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn adjoint_is_homomorphism() {
        let mut rng = ChaCha12Rng::seed_from_u64(44);
        for _ in 0..50 {
            let a = random_pose(&mut rng);
            let b = random_pose(&mut rng);
            assert_abs_diff_eq!(
                a.compose(&b).adjoint(),
                a.adjoint() * b.adjoint(),
                epsilon = 1e-10
            );
        }
    }

    #[test]
    fn group_axioms() {
        let mut rng = ChaCha12Rng::seed_from_u64(45);
        for _ in 0..100 {
            let a = random_pose(&mut rng);
            let b = random_pose(&mut rng);
            let c = random_pose(&mut rng);
            let left = a.compose(&b).compose(&c);
            let right = a.compose(&b.compose(&c));
            assert_abs_diff_eq!(left.matrix(), right.matrix(), epsilon = 1e-10);
            let inv = a.compose(&a.inverse());
            assert_abs_diff_eq!(inv.matrix(), Matrix5::identity(), epsilon = 1e-12);
        }
    }

    #[test]
    fn left_jacobian_identity_at_zero() {
        assert_abs_diff_eq!(
            left_jacobian(&Se23Tangent::<f64>::zero()),
            Matrix9::identity(),
            epsilon = 0.0
        );
    }

    #[test]
    fn left_jacobian_first_order_property() {
        let mut rng = ChaCha12Rng::seed_from_u64(46);
        for _ in 0..20 {
            let x = random_tangent(&mut rng, 1.5);
            let delta = random_tangent(&mut rng, 1.0);
            let jl = left_jacobian(&x);
            let residual = |h: f64| -> f64 {
                let bumped = Se23Tangent::from_vector(&(x.as_vector() + delta.as_vector() * h));
                let lhs = log(&exp(&bumped).compose(&exp(&x).inverse())).unwrap();
                (lhs.as_vector() - jl * delta.as_vector() * h).norm()
            };
            let e1 = residual(1e-3);
            let e2 = residual(5e-4);
            assert!(
                (e1 / e2).log2() > 1.9,
                "defining property order too low: {}",
                (e1 / e2).log2()
            );
        }
    }

    #[test]
    fn right_jacobian_relations() {
        let mut rng = ChaCha12Rng::seed_from_u64(47);
        for _ in 0..100 {
            let x = random_tangent(&mut rng, 3.0);
            assert_abs_diff_eq!(right_jacobian(&x), left_jacobian(&-x), epsilon = 1e-12);
            let rel = exp(&x).inverse().adjoint() * left_jacobian(&x);
            assert_abs_diff_eq!(right_jacobian(&x), rel, epsilon = 1e-10);
        }
    }

    #[test]
    fn right_jacobian_matches_kernel_block_form() {
        // Derivative-kernel form: diagonal Γ₁(−ω), couplings exp(ω^∧)⁻¹H₁(ω,·).
        let mut rng = ChaCha12Rng::seed_from_u64(48);
        for _ in 0..50 {
            let x = random_tangent(&mut rng, 3.0);
            let jr = right_jacobian(&x);
            let rot_t = so3::exp(&x.rotation).inverse();
            let g1m = so3::gamma1(&-x.rotation);
            assert_abs_diff_eq!(
                jr.fixed_view::<3, 3>(0, 0).into_owned(),
                g1m,
                epsilon = 1e-12
            );
            assert_abs_diff_eq!(
                jr.fixed_view::<3, 3>(3, 0).into_owned(),
                rot_t.matrix() * gal3::h1(&x.rotation, &x.velocity),
                epsilon = 1e-10
            );
            assert_abs_diff_eq!(
                jr.fixed_view::<3, 3>(6, 0).into_owned(),
                rot_t.matrix() * gal3::h1(&x.rotation, &x.position),
                epsilon = 1e-10
            );
            assert_abs_diff_eq!(
                jr.fixed_view::<3, 3>(3, 3).into_owned(),
                rot_t.matrix() * so3::gamma1(&x.rotation),
                epsilon = 1e-10
            );
        }
    }

    #[test]
    fn q1_consistency_between_routes() {
        // Double series vs derivative-kernel route, over the se23 ranges.
        let mut rng = ChaCha12Rng::seed_from_u64(49);
        for _ in 0..50 {
            let omega = random_tangent(&mut rng, 3.0).rotation;
            let z = Vector3::new(
                rng.random_range(-10.0..10.0),
                rng.random_range(-10.0..10.0),
                rng.random_range(-10.0..10.0),
            );
            let series = oracle::q1_double_series(&omega, &z, 30);
            let g1 = so3::gamma1(&omega);
            let kernel = gal3::h1(&omega, &z) + hat(&(g1 * z)) * g1;
            assert_abs_diff_eq!(series, kernel, epsilon = 1e-10);
            assert_abs_diff_eq!(gal3::q1(&omega, &z), series, epsilon = 1e-10);
        }
    }

    #[test]
    fn rotation_block_never_drifts() {
        let mut rng = ChaCha12Rng::seed_from_u64(50);
        let mut pose = ExtendedPose::<f64>::identity();
        for _ in 0..1000 {
            pose = pose.compose(&random_pose(&mut rng));
        }
        assert!(pose.rotation.is_valid(1e-9));
        let m = pose.matrix();
        assert_eq!(m[(3, 3)], 1.0);
        assert_eq!(m[(4, 4)], 1.0);
        let _ = Matrix3::<f64>::identity();
    }
}
