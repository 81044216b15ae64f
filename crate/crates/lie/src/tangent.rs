//! The left-trivialized tangent group `Gal(3) ⋉ gal(3)`.
//!
//! An element is a pair `(C, γ)` of a Galilean transform and a Lie-algebra
//! element (stored in coordinates). The semi-direct product
//! `(A, a)·(B, b) = (AB, a + Adᴹ_A b)` couples the two halves, which is what
//! lets a single group element carry both a navigation increment and a bias.

use crate::gal3::{self, Gal3Element, Gal3Tangent};
use crate::scalar::Real;
use crate::{NearPiRotation, Vector10, Vector20};

/// Element `(C, γ)` of the tangent group, with `γ` kept in coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentGroupElement<T: Real> {
    pub group: Gal3Element<T>,
    pub tangent: Vector10<T>,
}

impl<T: Real> TangentGroupElement<T> {
    pub fn identity() -> Self {
        TangentGroupElement {
            group: Gal3Element::identity(),
            tangent: Vector10::zeros(),
        }
    }

    pub fn new(group: Gal3Element<T>, tangent: Vector10<T>) -> Self {
        TangentGroupElement { group, tangent }
    }

    /// Semi-direct product `(A, a)·(B, b) = (AB, a + Adᴹ_A b)`.
    pub fn compose(&self, other: &Self) -> Self {
        TangentGroupElement {
            group: self.group.compose(&other.group),
            tangent: self.tangent + self.group.adjoint() * other.tangent,
        }
    }

    /// Inverse `(A⁻¹, −Adᴹ_{A⁻¹} a)`.
    pub fn inverse(&self) -> Self {
        let group_inv = self.group.inverse();
        TangentGroupElement {
            tangent: -(group_inv.adjoint() * self.tangent),
            group: group_inv,
        }
    }

    /// Group logarithm into R²⁰: `(log(C)^∨, J_L⁻¹(log(C)^∨) γ)`.
    ///
    /// This is the chart used for normal coordinates; [`exp`] is its exact
    /// inverse for `‖ω‖ < π`.
    pub fn log(&self) -> Result<Vector20<T>, NearPiRotation> {
        let u = gal3::log(&self.group)?;
        let mut out = Vector20::zeros();
        out.fixed_rows_mut::<10>(0).copy_from(&u.as_vector());
        out.fixed_rows_mut::<10>(10)
            .copy_from(&(gal3::left_jacobian_inv(&u) * self.tangent));
        Ok(out)
    }
}

impl<T: Real> std::ops::Mul for TangentGroupElement<T> {
    type Output = TangentGroupElement<T>;
    fn mul(self, rhs: Self) -> Self {
        self.compose(&rhs)
    }
}

/// Inverse of [`TangentGroupElement::log`]:
/// `(u, w) ↦ (exp(u^∧), J_L(u) w)`.
pub fn exp<T: Real>(coords: &Vector20<T>) -> TangentGroupElement<T> {
    let u = Gal3Tangent::from_vector(&coords.fixed_rows::<10>(0).into_owned());
    let w = coords.fixed_rows::<10>(10).into_owned();
    TangentGroupElement {
        group: gal3::exp(&u),
        tangent: gal3::left_jacobian(&u) * w,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Matrix5, Vector3};
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn random_vec10(rng: &mut impl Rng, scale: f64) -> Vector10<f64> {
        Vector10::from_fn(|_, _| rng.random_range(-scale..scale))
    }

    fn random_element(rng: &mut impl Rng) -> TangentGroupElement<f64> {
        let dir = Vector3::new(
            rng.random_range(-1.0f64..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        )
        .normalize();
        let u = Gal3Tangent::new(
            dir * rng.random_range(0.0..2.0),
            Vector3::from_fn(|_, _| rng.random_range(-2.0..2.0)),
            Vector3::from_fn(|_, _| rng.random_range(-2.0..2.0)),
            rng.random_range(-1.5..1.5),
        );
        TangentGroupElement::new(gal3::exp(&u), random_vec10(rng, 2.0))
    }

    #[test]
    fn identity_is_neutral() {
        let mut rng = ChaCha12Rng::seed_from_u64(60);
        let x = random_element(&mut rng);
        let right = x.compose(&TangentGroupElement::identity());
        assert_abs_diff_eq!(right.group.matrix(), x.group.matrix(), epsilon = 0.0);
        assert_abs_diff_eq!(right.tangent, x.tangent, epsilon = 0.0);
        let left = TangentGroupElement::identity().compose(&x);
        assert_abs_diff_eq!(left.tangent, x.tangent, epsilon = 1e-15);
    }

    #[test]
    fn pure_algebra_elements_add() {
        let a = TangentGroupElement::new(Gal3Element::identity(), Vector10::from_element(1.0));
        let b = TangentGroupElement::new(Gal3Element::identity(), Vector10::from_element(2.0));
        let c = a.compose(&b);
        assert_abs_diff_eq!(c.tangent, Vector10::from_element(3.0), epsilon = 0.0);
    }

    #[test]
    fn pure_algebra_inverse_negates() {
        let a =
            TangentGroupElement::new(Gal3Element::<f64>::identity(), Vector10::from_element(0.7));
        assert_abs_diff_eq!(
            a.inverse().tangent,
            Vector10::from_element(-0.7),
            epsilon = 0.0
        );
    }

    #[test]
    fn group_axioms_hold() {
        let mut rng = ChaCha12Rng::seed_from_u64(61);
        for _ in 0..1000 {
            let x = random_element(&mut rng);
            let y = random_element(&mut rng);
            let z = random_element(&mut rng);
            let left = x.compose(&y).compose(&z);
            let right = x.compose(&y.compose(&z));
            assert_abs_diff_eq!(left.group.matrix(), right.group.matrix(), epsilon = 1e-10);
            assert_abs_diff_eq!(left.tangent, right.tangent, epsilon = 1e-10);

            let id = x.compose(&x.inverse());
            assert_abs_diff_eq!(id.group.matrix(), Matrix5::identity(), epsilon = 1e-11);
            assert_abs_diff_eq!(id.tangent, Vector10::zeros(), epsilon = 1e-10);
        }
    }

    #[test]
    fn log_of_identity_is_zero() {
        let x = TangentGroupElement::<f64>::identity();
        assert_eq!(x.log().unwrap(), Vector20::zeros());
    }

    #[test]
    fn log_of_pure_algebra_element() {
        // (I, γ) → (0, γ) since J_L⁻¹(0) = I.
        let gamma = Vector10::from_fn(|i, _| i as f64 * 0.1);
        let x = TangentGroupElement::new(Gal3Element::identity(), gamma);
        let coords = x.log().unwrap();
        assert_abs_diff_eq!(
            coords.fixed_rows::<10>(0).into_owned(),
            Vector10::zeros(),
            epsilon = 0.0
        );
        assert_abs_diff_eq!(
            coords.fixed_rows::<10>(10).into_owned(),
            gamma,
            epsilon = 0.0
        );
    }

    #[test]
    fn exp_of_group_only_coords() {
        let mut coords = Vector20::<f64>::zeros();
        coords[0] = 0.3;
        coords[4] = -1.0;
        coords[9] = 0.8;
        let x = exp(&coords);
        assert_abs_diff_eq!(x.tangent, Vector10::zeros(), epsilon = 0.0);
    }

    #[test]
    fn exp_log_round_trip() {
        let mut rng = ChaCha12Rng::seed_from_u64(62);
        for _ in 0..500 {
            // ω-component inside the log radius, whole coordinate within a 2-ball.
            let mut coords = Vector20::from_fn(|_, _| rng.random_range(-1.0..1.0));
            let n = coords.norm();
            if n > 2.0 {
                coords *= 2.0 / n;
            }
            let back = exp(&coords).log().unwrap();
            assert_abs_diff_eq!(back, coords, epsilon = 1e-8);
        }
    }

    #[test]
    fn log_exp_round_trip_on_elements() {
        let mut rng = ChaCha12Rng::seed_from_u64(63);
        for _ in 0..500 {
            let x = random_element(&mut rng);
            let back = exp(&x.log().unwrap());
            assert_abs_diff_eq!(back.group.matrix(), x.group.matrix(), epsilon = 1e-8);
            assert_abs_diff_eq!(back.tangent, x.tangent, epsilon = 1e-8);
        }
    }
}
