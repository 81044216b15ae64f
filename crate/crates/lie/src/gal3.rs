//! The Galilean group Gal(3): rotation, velocity, position, and time in one
//! 5×5 matrix group.
//!
//! An element acts on homogeneous space-time coordinates as
//!
//! ```text
//!     [ A  a  b ]        [ ω^∧  v  r ]
//! X = [ 0  1  c ],  x^∧ = [ 0   0  α ]
//!     [ 0  0  1 ]        [ 0   0  0 ]
//! ```
//!
//! with `A ∈ SO(3)`, `a` a velocity column, `b` a position column and `c` a
//! time offset. Tangent coordinates are ordered `(ω, v, r, α) ∈ R¹⁰`.
//!
//! Elements are stored as structured fields; the 5×5 embedding is produced
//! only for oracles and display, so the constant rows cannot drift.

use crate::coeffs;
use crate::scalar::{real, Real};
use crate::se23::ExtendedPose;
use crate::so3::{self, hat, Rotation};
use crate::{Matrix10, Matrix3, Matrix5, NearPiRotation, Vector10, Vector3};

/// Element of Gal(3), stored as `(A, a, b, c)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gal3Element<T: Real> {
    pub rotation: Rotation<T>,
    pub velocity: Vector3<T>,
    pub position: Vector3<T>,
    pub time: T,
}

impl<T: Real> Gal3Element<T> {
    pub fn identity() -> Self {
        Gal3Element {
            rotation: Rotation::identity(),
            velocity: Vector3::zeros(),
            position: Vector3::zeros(),
            time: T::zero(),
        }
    }

    pub fn new(rotation: Rotation<T>, velocity: Vector3<T>, position: Vector3<T>, time: T) -> Self {
        Gal3Element {
            rotation,
            velocity,
            position,
            time,
        }
    }

    /// Embeds an extended pose with a time offset.
    pub fn from_extended_pose(pose: &ExtendedPose<T>, time: T) -> Self {
        Gal3Element {
            rotation: pose.rotation,
            velocity: pose.velocity,
            position: pose.position,
            time,
        }
    }

    /// Drops the time component.
    pub fn extended_pose(&self) -> ExtendedPose<T> {
        ExtendedPose {
            rotation: self.rotation,
            velocity: self.velocity,
            position: self.position,
        }
    }

    /// The 5×5 matrix embedding.
    pub fn matrix(&self) -> Matrix5<T> {
        let mut m = Matrix5::identity();
        m.fixed_view_mut::<3, 3>(0, 0)
            .copy_from(self.rotation.matrix());
        m.fixed_view_mut::<3, 1>(0, 3).copy_from(&self.velocity);
        m.fixed_view_mut::<3, 1>(0, 4).copy_from(&self.position);
        m[(3, 4)] = self.time;
        m
    }

    /// Group product; equals the 5×5 matrix product of the embeddings.
    pub fn compose(&self, other: &Self) -> Self {
        Gal3Element {
            rotation: self.rotation.compose(&other.rotation),
            velocity: self.rotation.apply(&other.velocity) + self.velocity,
            position: self.rotation.apply(&other.position)
                + self.velocity * other.time
                + self.position,
            time: self.time + other.time,
        }
    }

    /// Group inverse `(Aᵀ, −Aᵀa, −Aᵀ(b − c a), −c)`.
    pub fn inverse(&self) -> Self {
        let rot_inv = self.rotation.inverse();
        Gal3Element {
            rotation: rot_inv,
            velocity: -rot_inv.apply(&self.velocity),
            position: -rot_inv.apply(&(self.position - self.velocity * self.time)),
            time: -self.time,
        }
    }

    /// Adjoint matrix `Adᴹ_X ∈ R¹⁰ˣ¹⁰`, satisfying
    /// `Adᴹ_X u = (X u^∧ X⁻¹)^∨`.
    pub fn adjoint(&self) -> Matrix10<T> {
        let a = self.rotation.matrix();
        let mut m = Matrix10::zeros();
        m.fixed_view_mut::<3, 3>(0, 0).copy_from(a);
        m.fixed_view_mut::<3, 3>(3, 0)
            .copy_from(&(hat(&self.velocity) * a));
        m.fixed_view_mut::<3, 3>(3, 3).copy_from(a);
        let drift = self.position - self.velocity * self.time;
        m.fixed_view_mut::<3, 3>(6, 0).copy_from(&(hat(&drift) * a));
        m.fixed_view_mut::<3, 3>(6, 3)
            .copy_from(&(a * (-self.time)));
        m.fixed_view_mut::<3, 3>(6, 6).copy_from(a);
        m.fixed_view_mut::<3, 1>(6, 9).copy_from(&self.velocity);
        m[(9, 9)] = T::one();
        m
    }

    /// Adjoint matrix of the inverse element, without forming it twice.
    pub fn adjoint_inv(&self) -> Matrix10<T> {
        self.inverse().adjoint()
    }
}

impl<T: Real> std::ops::Mul for Gal3Element<T> {
    type Output = Gal3Element<T>;
    fn mul(self, rhs: Self) -> Self {
        self.compose(&rhs)
    }
}

/// Tangent coordinates `(ω, v, r, α)` of gal(3).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gal3Tangent<T: Real> {
    /// Axis-angle rotation component `ω`.
    pub rotation: Vector3<T>,
    /// Velocity component `v`.
    pub velocity: Vector3<T>,
    /// Position component `r`.
    pub position: Vector3<T>,
    /// Time component `α`.
    pub time: T,
}

impl<T: Real> Gal3Tangent<T> {
    pub fn new(rotation: Vector3<T>, velocity: Vector3<T>, position: Vector3<T>, time: T) -> Self {
        Gal3Tangent {
            rotation,
            velocity,
            position,
            time,
        }
    }

    pub fn zero() -> Self {
        Gal3Tangent {
            rotation: Vector3::zeros(),
            velocity: Vector3::zeros(),
            position: Vector3::zeros(),
            time: T::zero(),
        }
    }

    pub fn from_vector(v: &Vector10<T>) -> Self {
        Gal3Tangent {
            rotation: v.fixed_rows::<3>(0).into_owned(),
            velocity: v.fixed_rows::<3>(3).into_owned(),
            position: v.fixed_rows::<3>(6).into_owned(),
            time: v[9],
        }
    }

    pub fn as_vector(&self) -> Vector10<T> {
        let mut v = Vector10::zeros();
        v.fixed_rows_mut::<3>(0).copy_from(&self.rotation);
        v.fixed_rows_mut::<3>(3).copy_from(&self.velocity);
        v.fixed_rows_mut::<3>(6).copy_from(&self.position);
        v[9] = self.time;
        v
    }

    /// The 5×5 Lie-algebra embedding.
    pub fn hat(&self) -> Matrix5<T> {
        let mut m = Matrix5::zeros();
        m.fixed_view_mut::<3, 3>(0, 0)
            .copy_from(&hat(&self.rotation));
        m.fixed_view_mut::<3, 1>(0, 3).copy_from(&self.velocity);
        m.fixed_view_mut::<3, 1>(0, 4).copy_from(&self.position);
        m[(3, 4)] = self.time;
        m
    }

    /// Inverse of [`Gal3Tangent::hat`].
    pub fn from_hat(m: &Matrix5<T>) -> Self {
        Gal3Tangent {
            rotation: Vector3::new(m[(2, 1)], m[(0, 2)], m[(1, 0)]),
            velocity: m.fixed_view::<3, 1>(0, 3).into_owned(),
            position: m.fixed_view::<3, 1>(0, 4).into_owned(),
            time: m[(3, 4)],
        }
    }

    pub fn scaled(&self, factor: T) -> Self {
        Gal3Tangent {
            rotation: self.rotation * factor,
            velocity: self.velocity * factor,
            position: self.position * factor,
            time: self.time * factor,
        }
    }
}

impl<T: Real> std::ops::Neg for Gal3Tangent<T> {
    type Output = Gal3Tangent<T>;
    fn neg(self) -> Self {
        Gal3Tangent {
            rotation: -self.rotation,
            velocity: -self.velocity,
            position: -self.position,
            time: -self.time,
        }
    }
}

/// Little adjoint matrix `adᴹ_x ∈ R¹⁰ˣ¹⁰`, the matrix commutator in
/// coordinates: `adᴹ_x y = (x^∧y^∧ − y^∧x^∧)^∨`.
pub fn little_adjoint<T: Real>(x: &Gal3Tangent<T>) -> Matrix10<T> {
    let w = hat(&x.rotation);
    let mut m = Matrix10::zeros();
    m.fixed_view_mut::<3, 3>(0, 0).copy_from(&w);
    m.fixed_view_mut::<3, 3>(3, 0).copy_from(&hat(&x.velocity));
    m.fixed_view_mut::<3, 3>(3, 3).copy_from(&w);
    m.fixed_view_mut::<3, 3>(6, 0).copy_from(&hat(&x.position));
    m.fixed_view_mut::<3, 3>(6, 3)
        .copy_from(&(Matrix3::identity() * (-x.time)));
    m.fixed_view_mut::<3, 3>(6, 6).copy_from(&w);
    m.fixed_view_mut::<3, 1>(6, 9).copy_from(&x.velocity);
    m
}

/// Exponential map: `exp(x^∧) = (exp(ω^∧), Γ₁v, Γ₁r + αΓ₂v, α)`.
pub fn exp<T: Real>(x: &Gal3Tangent<T>) -> Gal3Element<T> {
    let g1 = so3::gamma1(&x.rotation);
    let g2 = so3::gamma2(&x.rotation);
    Gal3Element {
        rotation: so3::exp(&x.rotation),
        velocity: g1 * x.velocity,
        position: g1 * x.position + g2 * x.velocity * x.time,
        time: x.time,
    }
}

/// Logarithmic map, the inverse of [`exp`].
///
/// `ω = log(A)`, `v = Γ₁⁻¹a`, `r = Γ₁⁻¹(b − c Γ₂ Γ₁⁻¹ a)`, `α = c`.
pub fn log<T: Real>(g: &Gal3Element<T>) -> Result<Gal3Tangent<T>, NearPiRotation> {
    let omega = so3::log(&g.rotation)?;
    let g1_inv = so3::gamma1_inv(&omega);
    let g2 = so3::gamma2(&omega);
    let velocity = g1_inv * g.velocity;
    let position = g1_inv * (g.position - g2 * velocity * g.time);
    Ok(Gal3Tangent {
        rotation: omega,
        velocity,
        position,
        time: g.time,
    })
}

/// `Q₁(ω)(z) = Σ_{p,k} (ω^∧)ᵏ z^∧ (ω^∧)ᵖ / (p+k+2)!` in closed form.
pub fn q1<T: Real>(omega: &Vector3<T>, z: &Vector3<T>) -> Matrix3<T> {
    let theta = omega.norm();
    let w = hat(omega);
    let zh = hat(z);
    let wz = w * zh;
    let zw = zh * w;
    zh * real::<T>(0.5)
        + (wz + zw + w * zw) * coeffs::kappa2(theta)
        + (w * wz + zw * w - w * zw * real::<T>(3.0)) * coeffs::kappa3(theta)
        + w * w * zw * coeffs::kappa5(theta)
}

/// `Q₂(ω)(z) = Σ_{p,k} (k+1)(ω^∧)ᵏ z^∧ (ω^∧)ᵖ / (p+k+3)!` in closed form.
pub fn q2<T: Real>(omega: &Vector3<T>, z: &Vector3<T>) -> Matrix3<T> {
    let theta = omega.norm();
    let w = hat(omega);
    let zh = hat(z);
    zh * real::<T>(1.0 / 6.0)
        + zh * w * coeffs::kappa3(theta)
        + w * zh * coeffs::kappa4(theta)
        + zh * w * w * coeffs::q2_zww(theta)
        + w * w * zh * coeffs::q2_wwz(theta)
        + w * zh * w * coeffs::q2_wzw(theta)
        + w * w * zh * w * coeffs::q2_wwzw(theta)
}

/// `U₁(ω) = Γ₁(ω) − Γ₂(ω)`, the velocity-to-position coupling kernel.
pub fn u1<T: Real>(omega: &Vector3<T>) -> Matrix3<T> {
    so3::gamma1(omega) - so3::gamma2(omega)
}

/// `H₀(ω, z) = ∂(ω^∧ω^∧z)/∂ω = zᵀω I + ωzᵀ − 2zωᵀ`.
pub fn h0<T: Real>(omega: &Vector3<T>, z: &Vector3<T>) -> Matrix3<T> {
    Matrix3::identity() * omega.dot(z) + omega * z.transpose()
        - z * omega.transpose() * real::<T>(2.0)
}

/// `H₁(ω, z) = ∂(Γ₁(ω)z)/∂ω`.
pub fn h1<T: Real>(omega: &Vector3<T>, z: &Vector3<T>) -> Matrix3<T> {
    let theta = omega.norm();
    let w = hat(omega);
    -(w * z) * omega.transpose() * coeffs::kappa4(theta)
        - hat(z) * coeffs::kappa1(theta)
        - (w * w * z) * omega.transpose() * coeffs::kappa5(theta)
        + h0(omega, z) * coeffs::kappa2(theta)
}

/// `H₂(ω, z) = ∂(Γ₂(ω)z)/∂ω`.
pub fn h2<T: Real>(omega: &Vector3<T>, z: &Vector3<T>) -> Matrix3<T> {
    let theta = omega.norm();
    let w = hat(omega);
    -(w * z) * omega.transpose() * coeffs::kappa5(theta)
        - hat(z) * coeffs::kappa2(theta)
        - (w * w * z) * omega.transpose() * coeffs::kappa6(theta)
        + h0(omega, z) * coeffs::kappa3(theta)
}

/// `Ω(ω, v, r, α) = Q₁(ω)(r) − α Q₂(ω)(v)`, the position/rotation block of
/// the left Jacobian.
fn omega_block<T: Real>(x: &Gal3Tangent<T>) -> Matrix3<T> {
    q1(&x.rotation, &x.position) - q2(&x.rotation, &x.velocity) * x.time
}

/// Left Jacobian of Gal(3) in closed block form:
///
/// ```text
///       [ Γ₁        0    0   0    ]
/// J_L = [ Q₁(ω)(v)  Γ₁   0   0    ]
///       [ Ω         −αU₁ Γ₁  Γ₂v  ]
///       [ 0         0    0   1    ]
/// ```
pub fn left_jacobian<T: Real>(x: &Gal3Tangent<T>) -> Matrix10<T> {
    let g1 = so3::gamma1(&x.rotation);
    let g2 = so3::gamma2(&x.rotation);
    let mut j = Matrix10::zeros();
    j.fixed_view_mut::<3, 3>(0, 0).copy_from(&g1);
    j.fixed_view_mut::<3, 3>(3, 0)
        .copy_from(&q1(&x.rotation, &x.velocity));
    j.fixed_view_mut::<3, 3>(3, 3).copy_from(&g1);
    j.fixed_view_mut::<3, 3>(6, 0).copy_from(&omega_block(x));
    j.fixed_view_mut::<3, 3>(6, 3)
        .copy_from(&((g1 - g2) * (-x.time)));
    j.fixed_view_mut::<3, 3>(6, 6).copy_from(&g1);
    j.fixed_view_mut::<3, 1>(6, 9).copy_from(&(g2 * x.velocity));
    j[(9, 9)] = T::one();
    j
}

/// Inverse of [`left_jacobian`], assembled blockwise from `Γ₁⁻¹`.
///
/// Requires `‖ω‖ < π`. With `G = Γ₁⁻¹` and the blocks of `J_L` named
/// `B = Q₁(ω)(v)`, `C = Ω`, `D = −αU₁`, `E = Γ₂v`:
///
/// ```text
///         [ G           0     0  0   ]
/// J_L⁻¹ = [ −GBG        G     0  0   ]
///         [ −GCG+GDGBG  −GDG  G  −GE ]
///         [ 0           0     0  1   ]
/// ```
pub fn left_jacobian_inv<T: Real>(x: &Gal3Tangent<T>) -> Matrix10<T> {
    let g = so3::gamma1_inv(&x.rotation);
    let g2 = so3::gamma2(&x.rotation);
    let b = q1(&x.rotation, &x.velocity);
    let c = omega_block(x);
    let d = (so3::gamma1(&x.rotation) - g2) * (-x.time);
    let gbg = g * b * g;
    let mut j = Matrix10::zeros();
    j.fixed_view_mut::<3, 3>(0, 0).copy_from(&g);
    j.fixed_view_mut::<3, 3>(3, 0).copy_from(&(-gbg));
    j.fixed_view_mut::<3, 3>(3, 3).copy_from(&g);
    j.fixed_view_mut::<3, 3>(6, 0)
        .copy_from(&(-(g * c * g) + g * d * gbg));
    j.fixed_view_mut::<3, 3>(6, 3).copy_from(&(-(g * d * g)));
    j.fixed_view_mut::<3, 3>(6, 6).copy_from(&g);
    j.fixed_view_mut::<3, 1>(6, 9)
        .copy_from(&(-(g * (g2 * x.velocity))));
    j[(9, 9)] = T::one();
    j
}

/// Right Jacobian of Gal(3) in the derivative-kernel block form:
///
/// ```text
///       [ Γ₁(−ω)                  0            0      0        ]
/// J_R = [ Aᵀ H₁(ω,v)              Γ₁(−ω)       0      0        ]
///       [ Aᵀ(H₁(ω,r) + α H₂(ω,v)) α U₁(−ω)     Γ₁(−ω) −Γ₂(−ω)v ]
///       [ 0                       0            0      1        ]
/// ```
///
/// with `A = exp(ω^∧)`. Equal to `left_jacobian(−x)`.
pub fn right_jacobian<T: Real>(x: &Gal3Tangent<T>) -> Matrix10<T> {
    let rot_t = so3::exp(&x.rotation).inverse();
    let g1m = so3::gamma1(&-x.rotation);
    let g2m = so3::gamma2(&-x.rotation);
    let mut j = Matrix10::zeros();
    j.fixed_view_mut::<3, 3>(0, 0).copy_from(&g1m);
    j.fixed_view_mut::<3, 3>(3, 0)
        .copy_from(&(rot_t.matrix() * h1(&x.rotation, &x.velocity)));
    j.fixed_view_mut::<3, 3>(3, 3).copy_from(&g1m);
    j.fixed_view_mut::<3, 3>(6, 0).copy_from(
        &(rot_t.matrix() * (h1(&x.rotation, &x.position) + h2(&x.rotation, &x.velocity) * x.time)),
    );
    j.fixed_view_mut::<3, 3>(6, 3)
        .copy_from(&((g1m - g2m) * x.time));
    j.fixed_view_mut::<3, 3>(6, 6).copy_from(&g1m);
    j.fixed_view_mut::<3, 1>(6, 9)
        .copy_from(&(-(g2m * x.velocity)));
    j[(9, 9)] = T::one();
    j
}
