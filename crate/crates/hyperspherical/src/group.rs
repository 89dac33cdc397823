//! SL(2,C) group elements, complex Euler angles, parametrization and
//! composition.
//!
//! An element is parametrized by six real numbers forming three complex
//! Euler angles phi^c = phi - i*eps, theta^c = theta - i*tau,
//! psi^c = psi - i*veps. The fundamental matrix is the six-factor product
//! of a z-rotation, z-boost, x-rotation, x-boost, z-rotation, z-boost.

use crate::special::C64;
use num_complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GroupError {
    #[error("matrix is not in SL(2,C): |det - 1| = {0:.3e}")]
    NotUnimodular(f64),
}

/// The six real parameters of the complex Euler angles.
///
/// Canonical ranges: phi in [0, 2pi), theta in [0, pi], psi in [-2pi, 2pi);
/// the imaginary parts eps, tau, veps are unbounded reals. The 4pi-wide psi
/// range carries the spin double cover: psi and psi + 2pi parametrize group
/// elements differing by an overall sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexEulerAngles {
    pub phi: f64,
    pub eps: f64,
    pub theta: f64,
    pub tau: f64,
    pub psi: f64,
    pub veps: f64,
}

impl ComplexEulerAngles {
    pub const ZERO: ComplexEulerAngles = ComplexEulerAngles {
        phi: 0.0,
        eps: 0.0,
        theta: 0.0,
        tau: 0.0,
        psi: 0.0,
        veps: 0.0,
    };

    /// Builds and canonicalizes phi to [0, 2pi) and psi to [-2pi, 2pi).
    pub fn new(phi: f64, eps: f64, theta: f64, tau: f64, psi: f64, veps: f64) -> Self {
        ComplexEulerAngles {
            phi,
            eps,
            theta,
            tau,
            psi,
            veps,
        }
        .canonicalized()
    }

    pub fn canonicalized(mut self) -> Self {
        // rem_euclid can round up to the period itself; fold the boundary
        // back so canonicalization is idempotent (a 2pi slip in phi flips
        // the sign of spin-1/2 matrices)
        self.phi = self.phi.rem_euclid(2.0 * PI);
        if self.phi >= 2.0 * PI {
            self.phi = 0.0;
        }
        self.psi = (self.psi + 2.0 * PI).rem_euclid(4.0 * PI) - 2.0 * PI;
        if self.psi >= 2.0 * PI {
            self.psi = -2.0 * PI;
        }
        self
    }

    pub fn phi_c(&self) -> C64 {
        C64::new(self.phi, -self.eps)
    }

    pub fn theta_c(&self) -> C64 {
        C64::new(self.theta, -self.tau)
    }

    pub fn psi_c(&self) -> C64 {
        C64::new(self.psi, -self.veps)
    }
}

/// A 2x2 complex matrix with unit determinant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupElement {
    pub a11: C64,
    pub a12: C64,
    pub a21: C64,
    pub a22: C64,
}

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement {
        a11: Complex64::new(1.0, 0.0),
        a12: Complex64::new(0.0, 0.0),
        a21: Complex64::new(0.0, 0.0),
        a22: Complex64::new(1.0, 0.0),
    };

    /// Builds from entries, checking |det - 1| <= 1e-12.
    pub fn new(a11: C64, a12: C64, a21: C64, a22: C64) -> Result<Self, GroupError> {
        let g = GroupElement { a11, a12, a21, a22 };
        let err = (g.det() - 1.0).norm();
        if err > 1e-12 {
            return Err(GroupError::NotUnimodular(err));
        }
        Ok(g)
    }

    /// Builds without the determinant check (for intermediate products).
    pub fn from_entries_unchecked(a11: C64, a12: C64, a21: C64, a22: C64) -> Self {
        GroupElement { a11, a12, a21, a22 }
    }

    pub fn det(&self) -> C64 {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    /// Inverse via the adjugate (det = 1).
    pub fn inverse(&self) -> GroupElement {
        GroupElement {
            a11: self.a22,
            a12: -self.a12,
            a21: -self.a21,
            a22: self.a11,
        }
    }

    pub fn max_entry_distance(&self, other: &GroupElement) -> f64 {
        (self.a11 - other.a11)
            .norm()
            .max((self.a12 - other.a12).norm())
            .max((self.a21 - other.a21).norm())
            .max((self.a22 - other.a22).norm())
    }

    pub fn negated(&self) -> GroupElement {
        GroupElement {
            a11: -self.a11,
            a12: -self.a12,
            a21: -self.a21,
            a22: -self.a22,
        }
    }

    /// Max deviation of g'g from the identity; 0 for unitary matrices.
    pub fn unitarity_defect(&self) -> f64 {
        let h = GroupElement {
            a11: self.a11.conj(),
            a12: self.a21.conj(),
            a21: self.a12.conj(),
            a22: self.a22.conj(),
        };
        group_compose(&h, self).max_entry_distance(&GroupElement::IDENTITY)
    }
}

/// One-parameter subgroup tags: compact rotations and hyperbolic boosts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubgroupKind {
    Rotation1,
    Rotation2,
    Rotation3,
    Boost1,
    Boost2,
    Boost3,
}

/// The one-parameter subgroup matrix for the given axis and parameter.
pub fn subgroup_element(kind: SubgroupKind, t: f64) -> GroupElement {
    let h = t / 2.0;
    let i = C64::new(0.0, 1.0);
    let (a11, a12, a21, a22) = match kind {
        SubgroupKind::Rotation1 => (
            C64::new(h.cos(), 0.0),
            i * h.sin(),
            i * h.sin(),
            C64::new(h.cos(), 0.0),
        ),
        SubgroupKind::Rotation2 => (
            C64::new(h.cos(), 0.0),
            C64::new(-h.sin(), 0.0),
            C64::new(h.sin(), 0.0),
            C64::new(h.cos(), 0.0),
        ),
        SubgroupKind::Rotation3 => (
            (i * h).exp(),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            (-i * h).exp(),
        ),
        SubgroupKind::Boost1 => (
            C64::new(h.cosh(), 0.0),
            C64::new(h.sinh(), 0.0),
            C64::new(h.sinh(), 0.0),
            C64::new(h.cosh(), 0.0),
        ),
        SubgroupKind::Boost2 => (
            C64::new(h.cosh(), 0.0),
            i * h.sinh(),
            -i * h.sinh(),
            C64::new(h.cosh(), 0.0),
        ),
        SubgroupKind::Boost3 => (
            C64::new(h.exp(), 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new((-h).exp(), 0.0),
        ),
    };
    GroupElement { a11, a12, a21, a22 }
}

/// Matrix product g1 g2.
pub fn group_compose(g1: &GroupElement, g2: &GroupElement) -> GroupElement {
    GroupElement {
        a11: g1.a11 * g2.a11 + g1.a12 * g2.a21,
        a12: g1.a11 * g2.a12 + g1.a12 * g2.a22,
        a21: g1.a21 * g2.a11 + g1.a22 * g2.a21,
        a22: g1.a21 * g2.a12 + g1.a22 * g2.a22,
    }
}

/// The fundamental matrix: product of the six Euler factors
/// a3(phi) b3(eps) a1(theta) b1(tau) a3(psi) b3(veps).
pub fn euler_to_group(a: &ComplexEulerAngles) -> GroupElement {
    let factors = [
        subgroup_element(SubgroupKind::Rotation3, a.phi),
        subgroup_element(SubgroupKind::Boost3, a.eps),
        subgroup_element(SubgroupKind::Rotation1, a.theta),
        subgroup_element(SubgroupKind::Boost1, a.tau),
        subgroup_element(SubgroupKind::Rotation3, a.psi),
        subgroup_element(SubgroupKind::Boost3, a.veps),
    ];
    let mut g = GroupElement::IDENTITY;
    for f in &factors {
        g = group_compose(&g, f);
    }
    g
}

/// Result of angle extraction. When `degenerate` is set, sin(theta^c) is
/// numerically zero and the split of phi^c + psi^c is pure gauge; the
/// canonical choice psi^c = 0 is returned and the matrix round trip still
/// holds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerDecomposition {
    pub angles: ComplexEulerAngles,
    pub degenerate: bool,
}

const DEGENERACY_EPS: f64 = 1e-10;

/// Euler angles of a group element.
///
/// The half-angle quantities come from entry products: cos^2(theta^c/2) =
/// a11 a22 and sin^2(theta^c/2) = -a12 a21 (their difference is the unit
/// determinant), so no precision is lost near the degenerate ends. The
/// spin-cover sign is fixed by shifting psi by 2pi when the reconstruction
/// comes back negated. Angle values themselves are gauge; correctness is
/// the matrix-level round trip.
pub fn group_to_euler(g: &GroupElement) -> EulerDecomposition {
    let q = g.a11 * g.a22; // cos^2(theta_c/2)
    let p = g.a12 * g.a21; // -sin^2(theta_c/2)
    let c_half = q.sqrt(); // principal: Re >= 0, right branch for theta in [0, pi]
    let s_half = (-p).sqrt();
    let i = C64::new(0.0, 1.0);

    let (mut angles, degenerate) = if 2.0 * (s_half * c_half).norm() > DEGENERACY_EPS {
        let theta_c = if p.norm() <= q.norm() {
            2.0 * s_half.asin()
        } else {
            2.0 * c_half.acos()
        };
        // e^{i phi^c} = a11 a12 / (i sin(theta^c/2) cos(theta^c/2))
        let e_phi = g.a11 * g.a12 / (i * s_half * c_half);
        let e_psi = g.a11 * g.a21 / (i * s_half * c_half);
        let phi_c = -i * e_phi.ln();
        let psi_c = -i * e_psi.ln();
        (
            ComplexEulerAngles::new(
                phi_c.re,
                -phi_c.im,
                theta_c.re,
                -theta_c.im,
                psi_c.re,
                -psi_c.im,
            ),
            false,
        )
    } else if p.norm() <= q.norm() {
        // theta^c ~ 0: g is nearly diagonal; put everything into phi^c
        let theta_c = 2.0 * s_half.asin();
        let phi_c = -2.0 * i * (g.a11 / (theta_c / 2.0).cos()).ln();
        (
            ComplexEulerAngles::new(phi_c.re, -phi_c.im, theta_c.re, -theta_c.im, 0.0, 0.0),
            true,
        )
    } else {
        // theta^c ~ pi: nearly antidiagonal; phases from a21
        let theta_c = 2.0 * c_half.acos();
        let e_mhalf_phi = g.a21 / (i * (theta_c / 2.0).sin());
        let phi_c = 2.0 * i * e_mhalf_phi.ln();
        (
            ComplexEulerAngles::new(phi_c.re, -phi_c.im, theta_c.re, -theta_c.im, 0.0, 0.0),
            true,
        )
    };

    // Fix the double-cover representative: psi -> psi +- 2pi flips the sign.
    let rebuilt = euler_to_group(&angles);
    if rebuilt.max_entry_distance(g) > rebuilt.negated().max_entry_distance(g) {
        let shifted = if angles.psi >= 0.0 {
            angles.psi - 2.0 * PI
        } else {
            angles.psi + 2.0 * PI
        };
        angles = ComplexEulerAngles {
            psi: shifted,
            ..angles
        }
        .canonicalized();
    }
    EulerDecomposition { angles, degenerate }
}

/// Euler angles of the product of two parametrized elements.
///
/// Composes at the matrix level and extracts angles; the closed trigonometric
/// composition formulas are equivalent and are exercised in tests. Returns
/// the degenerate flag of the extraction.
pub fn compose_euler(a1: &ComplexEulerAngles, a2: &ComplexEulerAngles) -> EulerDecomposition {
    let g = group_compose(&euler_to_group(a1), &euler_to_group(a2));
    group_to_euler(&g)
}

/// cos(theta^c) of a product per the addition formulas, with
/// w = phi^c_2 + psi^c_1. Exposed for the composition tests.
pub fn compose_cos_theta_c(a1: &ComplexEulerAngles, a2: &ComplexEulerAngles) -> C64 {
    let t1 = a1.theta_c();
    let t2 = a2.theta_c();
    let w = a2.phi_c() + a1.psi_c();
    t1.cos() * t2.cos() - t1.sin() * t2.sin() * w.cos()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_angles(rng: &mut ChaCha8Rng, imag_bound: f64) -> ComplexEulerAngles {
        ComplexEulerAngles::new(
            rng.gen_range(0.0..2.0 * PI),
            rng.gen_range(-imag_bound..imag_bound),
            rng.gen_range(0.05..PI - 0.05),
            rng.gen_range(-imag_bound..imag_bound),
            rng.gen_range(-2.0 * PI..2.0 * PI),
            rng.gen_range(-imag_bound..imag_bound),
        )
    }

    #[test]
    fn euler_to_group_axis_factors() {
        // all zero -> identity
        let g = euler_to_group(&ComplexEulerAngles::ZERO);
        assert!(g.max_entry_distance(&GroupElement::IDENTITY) < 1e-15);

        // (0,0,theta,0,0,0) -> a1(theta)
        let t = 0.83;
        let g = euler_to_group(&ComplexEulerAngles::new(0.0, 0.0, t, 0.0, 0.0, 0.0));
        let expected = subgroup_element(SubgroupKind::Rotation1, t);
        assert!(g.max_entry_distance(&expected) < 1e-15);

        // (0,0,0,0,0,veps) -> b3(veps)
        let e = -1.21;
        let g = euler_to_group(&ComplexEulerAngles::new(0.0, 0.0, 0.0, 0.0, 0.0, e));
        let expected = subgroup_element(SubgroupKind::Boost3, e);
        assert!(g.max_entry_distance(&expected) < 1e-15);
    }

    #[test]
    fn euler_matrix_closed_form() {
        // matches the closed form: entries cos(theta^c/2) e^{i(phi^c+psi^c)/2} etc.
        let a = ComplexEulerAngles::new(0.7, 0.3, 1.1, -0.4, -2.0, 0.6);
        let g = euler_to_group(&a);
        let i = C64::new(0.0, 1.0);
        let (tc, pc, sc) = (a.theta_c(), a.phi_c(), a.psi_c());
        let c = (tc / 2.0).cos();
        let s = (tc / 2.0).sin();
        assert!((g.a11 - c * (i * (pc + sc) / 2.0).exp()).norm() < 1e-13);
        assert!((g.a12 - i * s * (i * (pc - sc) / 2.0).exp()).norm() < 1e-13);
        assert!((g.a21 - i * s * (i * (sc - pc) / 2.0).exp()).norm() < 1e-13);
        assert!((g.a22 - c * (-i * (pc + sc) / 2.0).exp()).norm() < 1e-13);
    }

    #[test]
    fn subgroup_examples() {
        // rotation3 at t = pi -> diag(i, -i)
        let g = subgroup_element(SubgroupKind::Rotation3, PI);
        assert!((g.a11 - C64::new(0.0, 1.0)).norm() < 1e-15);
        assert!((g.a22 - C64::new(0.0, -1.0)).norm() < 1e-15);
        // boost at t = 0 -> identity
        let g = subgroup_element(SubgroupKind::Boost1, 0.0);
        assert!(g.max_entry_distance(&GroupElement::IDENTITY) < 1e-15);
        // b1(t) = a1(-it) under analytic continuation of the entries
        let t = 0.9;
        let b = subgroup_element(SubgroupKind::Boost1, t);
        let h = C64::new(0.0, -t / 2.0); // (-it)/2
        assert!((b.a11 - h.cos()).norm() < 1e-14);
        assert!((b.a12 - C64::new(0.0, 1.0) * h.sin()).norm() < 1e-14);
    }

    #[test]
    fn compose_and_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let a = random_angles(&mut rng, 1.0);
            let g = euler_to_group(&a);
            assert!((g.det() - 1.0).norm() < 1e-12, "det defect");
            let gi = g.inverse();
            let id = group_compose(&g, &gi);
            assert!(id.max_entry_distance(&GroupElement::IDENTITY) < 1e-12);
            let same = group_compose(&g, &GroupElement::IDENTITY);
            assert!(same.max_entry_distance(&g) < 1e-15);
        }
        // a3(s) a3(t) = a3(s+t)
        let g = group_compose(
            &subgroup_element(SubgroupKind::Rotation3, 0.3),
            &subgroup_element(SubgroupKind::Rotation3, 0.5),
        );
        assert!(g.max_entry_distance(&subgroup_element(SubgroupKind::Rotation3, 0.8)) < 1e-15);
    }

    #[test]
    fn determinant_one_large_imag_parts() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            let a = random_angles(&mut rng, 3.0);
            let g = euler_to_group(&a);
            assert!((g.det() - 1.0).norm() < 1e-12);
        }
    }

    #[test]
    fn round_trip_random_angles() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let a = random_angles(&mut rng, 1.0);
            let g = euler_to_group(&a);
            let dec = group_to_euler(&g);
            let g2 = euler_to_group(&dec.angles);
            assert!(
                g2.max_entry_distance(&g) < 1e-9,
                "round trip failed: {:?}",
                a
            );
        }
    }

    #[test]
    fn round_trip_subgroup_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let kinds = [
            SubgroupKind::Rotation1,
            SubgroupKind::Rotation2,
            SubgroupKind::Rotation3,
            SubgroupKind::Boost1,
            SubgroupKind::Boost2,
            SubgroupKind::Boost3,
        ];
        for _ in 0..200 {
            let mut g = GroupElement::IDENTITY;
            for _ in 0..rng.gen_range(1..=4) {
                let k = kinds[rng.gen_range(0..kinds.len())];
                g = group_compose(&g, &subgroup_element(k, rng.gen_range(-2.0..2.0)));
            }
            let dec = group_to_euler(&g);
            let g2 = euler_to_group(&dec.angles);
            assert!(g2.max_entry_distance(&g) < 1e-9, "failed for {:?}", g);
        }
    }

    #[test]
    fn degenerate_cases() {
        // identity -> all-zero angles
        let dec = group_to_euler(&GroupElement::IDENTITY);
        assert!(dec.degenerate);
        let a = dec.angles;
        assert!(
            a.phi.abs() + a.eps.abs() + a.theta.abs() + a.tau.abs() + a.psi.abs() + a.veps.abs()
                < 1e-12
        );

        // diag(e^{i pi/4}, e^{-i pi/4}): phi^c + psi^c = pi/2, theta^c = 0, psi^c = 0
        let g = subgroup_element(SubgroupKind::Rotation3, PI / 2.0);
        let dec = group_to_euler(&g);
        assert!(dec.degenerate);
        assert!((dec.angles.phi - PI / 2.0).abs() < 1e-12);
        assert!(dec.angles.psi.abs() < 1e-12);
        assert!(euler_to_group(&dec.angles).max_entry_distance(&g) < 1e-12);

        // antidiagonal degenerate branch
        let g = subgroup_element(SubgroupKind::Rotation1, PI);
        let dec = group_to_euler(&g);
        assert!(dec.degenerate);
        assert!(euler_to_group(&dec.angles).max_entry_distance(&g) < 1e-9);
    }

    #[test]
    fn compose_euler_matrix_level() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let a1 = random_angles(&mut rng, 1.0);
            let a2 = random_angles(&mut rng, 1.0);
            let dec = compose_euler(&a1, &a2);
            let lhs = euler_to_group(&dec.angles);
            let rhs = group_compose(&euler_to_group(&a1), &euler_to_group(&a2));
            assert!(lhs.max_entry_distance(&rhs) < 1e-9);
        }
        // zero composed with a -> a
        let a = random_angles(&mut rng, 0.5);
        let dec = compose_euler(&ComplexEulerAngles::ZERO, &a);
        assert!(euler_to_group(&dec.angles).max_entry_distance(&euler_to_group(&a)) < 1e-10);
    }

    #[test]
    fn compose_euler_associativity() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..50 {
            let a = random_angles(&mut rng, 0.8);
            let b = random_angles(&mut rng, 0.8);
            let c = random_angles(&mut rng, 0.8);
            let ab_c = compose_euler(&compose_euler(&a, &b).angles, &c).angles;
            let a_bc = compose_euler(&a, &compose_euler(&b, &c).angles).angles;
            let d = euler_to_group(&ab_c).max_entry_distance(&euler_to_group(&a_bc));
            assert!(d < 1e-9, "associativity defect {d}");
        }
    }

    #[test]
    fn same_axis_rotations_add() {
        // psi1 = phi2 = psi2 = phi1 = 0 and no imaginary parts:
        // cos theta^c = cos(theta1 + theta2)
        let a1 = ComplexEulerAngles::new(0.0, 0.0, 0.7, 0.2, 0.0, 0.0);
        let a2 = ComplexEulerAngles::new(0.0, 0.0, 0.4, -0.5, 0.0, 0.0);
        let w = compose_cos_theta_c(&a1, &a2);
        let expected = (a1.theta_c() + a2.theta_c()).cos();
        assert!((w - expected).norm() < 1e-13);
        // and the matrix-level composition agrees with group_to_euler
        let dec = compose_euler(&a1, &a2);
        assert!((dec.angles.theta_c().cos() - expected).norm() < 1e-10);
    }

    #[test]
    fn su2_restriction_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let a = ComplexEulerAngles::new(
                rng.gen_range(0.0..2.0 * PI),
                0.0,
                rng.gen_range(0.0..PI),
                0.0,
                rng.gen_range(-2.0 * PI..2.0 * PI),
                0.0,
            );
            let g = euler_to_group(&a);
            assert!(g.unitarity_defect() < 1e-12);
            // |a11|^2 + |a12|^2 = 1
            assert!((g.a11.norm_sqr() + g.a12.norm_sqr() - 1.0).abs() < 1e-12);
        }
    }
}
