//! Independent numerical oracles: periodic-trapezoid and Gauss-Legendre
//! quadrature engines, and the integral representations of the matrix
//! elements evaluated with them.
//!
//! These are deliberately separate code paths from the series evaluations in
//! [`crate::funcs`]; the test suites compare the two routes.

use crate::funcs::FuncsError;
use crate::group::GroupElement;
use crate::halfint::HalfInt;
use crate::special::C64;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("matrix is not unitary: defect {0:.3e}")]
    NotUnitary(f64),
    #[error("mixed index parity: l - n must be an integer (l={0}, n={1})")]
    BranchAmbiguity(HalfInt, HalfInt),
    #[error("{0}")]
    Funcs(#[from] FuncsError),
}

/// Quadrature rule families used by the transform and oracle code.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QuadKind {
    /// Trapezoid rule on a full period (spectrally accurate for smooth
    /// periodic integrands).
    PeriodicTrapezoid,
    /// Gauss-Legendre on a finite interval.
    GaussLegendre,
    /// Gauss-Legendre after mapping a decaying semi-infinite integrand onto
    /// a finite interval.
    SemiInfiniteExp,
}

/// A quadrature request: rule family, node count, and domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub kind: QuadKind,
    pub nodes: usize,
    pub a: f64,
    pub b: f64,
}

impl QuadratureSpec {
    pub fn gauss_legendre(a: f64, b: f64, nodes: usize) -> Self {
        QuadratureSpec {
            kind: QuadKind::GaussLegendre,
            nodes: nodes.clamp(8, 1_000_000),
            a,
            b,
        }
    }

    pub fn periodic(nodes: usize) -> Self {
        QuadratureSpec {
            kind: QuadKind::PeriodicTrapezoid,
            nodes: nodes.clamp(8, 1_000_000),
            a: 0.0,
            b: 2.0 * PI,
        }
    }
}

/// Default node count for periodic integrands.
pub const DEFAULT_PERIODIC_NODES: usize = 256;
/// Default node count for Gauss-Legendre panels.
pub const DEFAULT_GL_NODES: usize = 128;

/// Trapezoid rule over [0, 2 pi) with n nodes.
pub fn quad_periodic<F: Fn(f64) -> C64>(f: F, n: usize) -> C64 {
    let h = 2.0 * PI / n as f64;
    let mut acc = C64::new(0.0, 0.0);
    for k in 0..n {
        acc += f(k as f64 * h);
    }
    acc * h
}

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on the
/// Legendre polynomial.
pub fn gauss_legendre_nodes(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    let m = n.div_ceil(2);
    for i in 0..m {
        // Chebyshev-like initial guess
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            // Legendre recurrence for P_n(x) and P'_n(x)
            let (mut p0, mut p1) = (1.0f64, x);
            for k in 1..n {
                let kf = k as f64;
                let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
                p0 = p1;
                p1 = p2;
            }
            pp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / pp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * pp * pp);
        out.push((-x, w));
    }
    // mirror to the full set
    let mut full = Vec::with_capacity(n);
    full.extend(out.iter().copied());
    for i in (0..n - m).rev() {
        let (x, w) = out[i];
        full.push((-x, w));
    }
    full.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    full
}

/// Gauss-Legendre integral of f over [a, b] with n nodes.
pub fn quad_gl<F: Fn(f64) -> C64>(f: F, a: f64, b: f64, n: usize) -> C64 {
    let half = (b - a) / 2.0;
    let mid = (a + b) / 2.0;
    let mut acc = C64::new(0.0, 0.0);
    for (x, w) in gauss_legendre_nodes(n) {
        acc += f(mid + half * x) * w;
    }
    acc * half
}

/// Matrix element of a 2x2 matrix in the polynomial realization, as a
/// Fourier coefficient on the unit circle:
/// t_mn = sqrt(G(l-m+1) G(l+m+1) / (G(l-n+1) G(l+n+1))) *
///        (1/2pi) Int (a11 e^{it} + a21)^{l-n} (a12 e^{it} + a22)^{l+n}
///                    e^{-i(l-m)t} dt.
/// The exponents l -+ n and l - m are integers (same parity), keeping the
/// integrand single-valued on the circle.
fn matrix_element_integral(
    l: HalfInt,
    m: HalfInt,
    n: HalfInt,
    g: &GroupElement,
    nodes: usize,
) -> Result<C64, OracleError> {
    if !l.same_parity(n) || !l.same_parity(m) {
        return Err(OracleError::BranchAmbiguity(l, n));
    }
    let i = C64::new(0.0, 1.0);
    let p_minus = (l - n).as_int().unwrap() as i32;
    let p_plus = (l + n).as_int().unwrap() as i32;
    let d = (l - m).as_int().unwrap() as f64;
    let (a11, a12, a21, a22) = (g.a11, g.a12, g.a21, g.a22);
    let norm = (crate::special::factorial((l - m).as_int().unwrap() as usize)
        * crate::special::factorial((l + m).as_int().unwrap() as usize)
        / (crate::special::factorial((l - n).as_int().unwrap() as usize)
            * crate::special::factorial((l + n).as_int().unwrap() as usize)))
    .sqrt();
    Ok(norm
        * quad_periodic(
            |t| {
                let e = (i * t).exp();
                (a11 * e + a21).powi(p_minus) * (a12 * e + a22).powi(p_plus) * (-i * d * t).exp()
            },
            nodes,
        )
        / (2.0 * PI))
}

/// Integral representation of Z^l_mn(theta, tau): the Fourier-coefficient
/// form evaluated on the theta-tau factor of the group element.
pub fn hyper_z_integral(
    l: HalfInt,
    m: HalfInt,
    n: HalfInt,
    theta: f64,
    tau: f64,
    nodes: usize,
) -> Result<C64, OracleError> {
    let i = C64::new(0.0, 1.0);
    let tc = C64::new(theta, -tau);
    let alpha = (tc / 2.0).cos();
    let beta = i * (tc / 2.0).sin();
    let g = GroupElement::from_entries_unchecked(alpha, beta, beta, alpha);
    matrix_element_integral(l, m, n, &g, nodes)
}

/// Integral representation of the SU(2) matrix element t^l_mn(u).
/// Requires u unitary within 1e-10.
pub fn su2_t_integral(
    l: HalfInt,
    m: HalfInt,
    n: HalfInt,
    u: &GroupElement,
    nodes: usize,
) -> Result<C64, OracleError> {
    let defect = u.unitarity_defect();
    if defect > 1e-10 {
        return Err(OracleError::NotUnitary(defect));
    }
    matrix_element_integral(l, m, n, u, nodes)
}

/// Laplace-type integral for the classical Legendre conical function:
/// (1/pi) Int_0^pi (cosh tau + sinh tau cos t)^{-1/2 + i rho} dt.
/// Independent oracle for [`crate::funcs::conical_p`] at m = n = 0.
pub fn legendre_conical_oracle(rho: f64, tau: f64, nodes: usize) -> C64 {
    debug_assert!(tau >= 0.0);
    let nu = C64::new(-0.5, rho);
    quad_gl(
        |t| {
            let base = tau.cosh() + tau.sinh() * t.cos();
            (nu * base.ln()).exp()
        },
        0.0,
        PI,
        nodes,
    ) / PI
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcs::{conical_p, hyper_z, sph_p};
    use crate::group::{subgroup_element, SubgroupKind};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn h(t: i64) -> HalfInt {
        HalfInt::from_twice(t)
    }

    #[test]
    fn quad_periodic_basics() {
        let one = quad_periodic(|_| C64::new(1.0, 0.0), 64);
        assert!((one - C64::new(2.0 * PI, 0.0)).norm() < 1e-13);
        let osc = quad_periodic(|t| C64::new(0.0, t).exp(), 64);
        assert!(osc.norm() < 1e-13);
        let cos2 = quad_periodic(|t| C64::new(t.cos() * t.cos(), 0.0), 64);
        assert!((cos2 - C64::new(PI, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn quad_gl_basics() {
        let v = quad_gl(|x| C64::new(x, 0.0), 0.0, 1.0, 16);
        assert!((v.re - 0.5).abs() < 1e-14);
        let v = quad_gl(|x| C64::new(x.sin(), 0.0), 0.0, PI, 64);
        assert!((v.re - 2.0).abs() < 1e-13);
        // degree-3 exactness with 2 nodes
        let v = quad_gl(|x| C64::new(x * x * x, 0.0), 0.0, 1.0, 8);
        assert!((v.re - 0.25).abs() < 1e-14);
    }

    #[test]
    fn hyper_z_integral_matches_series() {
        // spec-pinned point
        let v = hyper_z_integral(h(2), h(0), h(0), 0.4, 0.9, 256).unwrap();
        let s = hyper_z(h(2), h(0), h(0), 0.4, 0.9).unwrap();
        assert!((v - s).norm() < 1e-10);
        // theta = tau = 0 -> delta
        let v = hyper_z_integral(h(2), h(2), h(0), 0.0, 0.0, 256).unwrap();
        assert!(v.norm() < 1e-12);
        // l=2, m=1, n=-1 random point
        let v = hyper_z_integral(h(4), h(2), h(-2), 1.1, 0.7, 256).unwrap();
        let s = hyper_z(h(4), h(2), h(-2), 1.1, 0.7).unwrap();
        assert!((v - s).norm() < 1e-9);
        // mixed parity rejected
        assert!(matches!(
            hyper_z_integral(h(2), h(1), h(1), 0.4, 0.9, 64),
            Err(OracleError::BranchAmbiguity(_, _))
        ));
    }

    #[test]
    fn hyper_z_integral_oracle_sweep() {
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        for twice_l in [1, 2, 3, 4, 5, 6] {
            let l = h(twice_l);
            for _ in 0..20 {
                let th = rng.gen_range(0.0..PI);
                let ta = rng.gen_range(-2.0..2.0);
                for m in HalfInt::weights(l) {
                    for n in HalfInt::weights(l) {
                        let v = hyper_z_integral(l, m, n, th, ta, 256).unwrap();
                        let s = hyper_z(l, m, n, th, ta).unwrap();
                        assert!(
                            (v - s).norm() < 1e-9,
                            "oracle mismatch l={l} m={m} n={n}: {} vs {}",
                            v,
                            s
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn grid_refinement_converges() {
        let v1 = hyper_z_integral(h(4), h(2), h(0), 0.9, 1.5, 128).unwrap();
        let v2 = hyper_z_integral(h(4), h(2), h(0), 0.9, 1.5, 256).unwrap();
        assert!((v1 - v2).norm() < 1e-11);
    }

    #[test]
    fn su2_integral_cases() {
        // identity -> delta
        let v = su2_t_integral(h(2), h(2), h(0), &GroupElement::IDENTITY, 128).unwrap();
        assert!(v.norm() < 1e-13);
        let v = su2_t_integral(h(2), h(2), h(2), &GroupElement::IDENTITY, 128).unwrap();
        assert!((v - C64::new(1.0, 0.0)).norm() < 1e-13);
        // l = 1/2: the fundamental representation reproduces the matrix itself
        let u = crate::group::group_compose(
            &subgroup_element(SubgroupKind::Rotation2, 0.8),
            &subgroup_element(SubgroupKind::Rotation3, -1.3),
        );
        let t_mm = su2_t_integral(h(1), h(-1), h(-1), &u, 128).unwrap();
        assert!((t_mm - u.a11).norm() < 1e-12);
        let t_mp = su2_t_integral(h(1), h(-1), h(1), &u, 128).unwrap();
        assert!((t_mp - u.a12).norm() < 1e-12);
        // l = 1 rotation about axis 1: matches sph_p
        let u = subgroup_element(SubgroupKind::Rotation1, 0.7);
        for m in HalfInt::weights(h(2)) {
            for n in HalfInt::weights(h(2)) {
                let v = su2_t_integral(h(2), m, n, &u, 128).unwrap();
                let p = sph_p(h(2), m, n, 0.7).unwrap();
                assert!((v - p).norm() < 1e-10);
            }
        }
        // non-unitary input rejected
        let b = subgroup_element(SubgroupKind::Boost1, 0.5);
        assert!(matches!(
            su2_t_integral(h(1), h(1), h(1), &b, 64),
            Err(OracleError::NotUnitary(_))
        ));
    }

    #[test]
    fn su2_integral_matrix_unitary() {
        let u = crate::group::group_compose(
            &subgroup_element(SubgroupKind::Rotation1, 1.1),
            &subgroup_element(SubgroupKind::Rotation2, -0.4),
        );
        let l = h(3);
        let dim = HalfInt::dim(l);
        let mut mat = vec![C64::new(0.0, 0.0); dim * dim];
        let weights: Vec<HalfInt> = HalfInt::weights(l).collect();
        for (r, &m) in weights.iter().enumerate() {
            for (c, &n) in weights.iter().enumerate() {
                mat[r * dim + c] = su2_t_integral(l, m, n, &u, 128).unwrap();
            }
        }
        for r in 0..dim {
            for c in 0..dim {
                let mut acc = C64::new(0.0, 0.0);
                for k in 0..dim {
                    acc += mat[r * dim + k] * mat[c * dim + k].conj();
                }
                let target = if r == c { 1.0 } else { 0.0 };
                assert!((acc - target).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn legendre_oracle_cases() {
        // tau = 0 -> 1
        let v = legendre_conical_oracle(0.7, 0.0, 64);
        assert!((v - C64::new(1.0, 0.0)).norm() < 1e-13);
        // real at rho = 0+ and self-consistent under refinement
        let v64 = legendre_conical_oracle(0.0, 1.0, 64);
        let v256 = legendre_conical_oracle(0.0, 1.0, 256);
        assert!(v64.im.abs() < 1e-12);
        assert!((v64 - v256).norm() < 1e-10);
        // conical series equals the Legendre integral at m = n = 0
        let s = conical_p(1.0, h(0), h(0), 0.5, 1e-13).unwrap().value;
        let o = legendre_conical_oracle(1.0, 0.5, 256);
        assert!(
            (s - o).norm() < 1e-8,
            "conical vs Legendre oracle: {s} vs {o}"
        );
    }
}
