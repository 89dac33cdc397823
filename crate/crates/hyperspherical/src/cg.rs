//! Clebsch-Gordan coefficients of SU(2) and SL(2,C) and the recurrence
//! relations between hyperspherical functions that rest on them.
//!
//! `cg_su2` evaluates the terminating 3F2-type single sum (the Racah form)
//! with exact integer factorials; the Condon-Shortley phase is fixed so the
//! highest-weight coefficient is +1, which is also what the brute-force
//! ladder construction in [`cg_su2_ladder_oracle`] produces.

use crate::funcs::{hyper_m, hyper_z, FuncsError};
use crate::group::ComplexEulerAngles;
use crate::halfint::HalfInt;
use crate::special::{factorial, C64};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CgError {
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("{0}")]
    Funcs(#[from] FuncsError),
}

/// True when (l1, l2, l; m1, m2) satisfies the triangle and projection rules.
pub fn selection_rules_ok(l1: HalfInt, l2: HalfInt, l: HalfInt, m1: HalfInt, m2: HalfInt) -> bool {
    let m = m1 + m2;
    !(l < (l1 - l2).abs()
        || l > l1 + l2
        || m1.abs() > l1
        || m2.abs() > l2
        || m.abs() > l
        || !l1.same_parity(m1)
        || !l2.same_parity(m2)
        || !(l1 + l2).same_parity(l))
}

/// Clebsch-Gordan coefficient C(l1, l2, l; m1, m2, m1+m2) of SU(2).
///
/// Returns 0 outside the selection rules.
pub fn cg_su2(l1: HalfInt, l2: HalfInt, l: HalfInt, m1: HalfInt, m2: HalfInt) -> f64 {
    if !selection_rules_ok(l1, l2, l, m1, m2) {
        return 0.0;
    }
    let m = m1 + m2;
    let int = |h: HalfInt| h.as_int().unwrap();
    // triangle coefficient
    let delta = (factorial(int(l1 + l2 - l) as usize)
        * factorial(int(l1 - l2 + l) as usize)
        * factorial(int(l2 - l1 + l) as usize)
        / factorial(int(l1 + l2 + l + HalfInt::ONE) as usize))
    .sqrt();
    let pref = ((2.0 * l.as_f64() + 1.0)
        * factorial(int(l1 + m1) as usize)
        * factorial(int(l1 - m1) as usize)
        * factorial(int(l2 + m2) as usize)
        * factorial(int(l2 - m2) as usize)
        * factorial(int(l + m) as usize)
        * factorial(int(l - m) as usize))
    .sqrt();
    // terminating single sum: the unit-argument 3F2 written out
    let a = int(l1 + l2 - l);
    let b = int(l1 - m1);
    let c = int(l2 + m2);
    let d = int(l - l2 + m1);
    let e = int(l - l1 - m2);
    let t0 = 0.max(-d).max(-e);
    let t1 = a.min(b).min(c);
    let mut sum = 0.0f64;
    for t in t0..=t1 {
        let den = factorial(t as usize)
            * factorial((a - t) as usize)
            * factorial((b - t) as usize)
            * factorial((c - t) as usize)
            * factorial((d + t) as usize)
            * factorial((e + t) as usize);
        let term = 1.0 / den;
        sum += if t % 2 == 0 { term } else { -term };
    }
    delta * pref * sum
}

/// SL(2,C) Clebsch-Gordan coefficient: the product of the undotted and
/// dotted SU(2) coefficients.
#[allow(clippy::too_many_arguments)]
pub fn cg_sl2c(
    l1: HalfInt,
    ld1: HalfInt,
    l2: HalfInt,
    ld2: HalfInt,
    l: HalfInt,
    ld: HalfInt,
    m1: HalfInt,
    md1: HalfInt,
    m2: HalfInt,
    md2: HalfInt,
) -> f64 {
    cg_su2(l1, l2, l, m1, m2) * cg_su2(ld1, ld2, ld, md1, md2)
}

/// Full table of C(l1, l2, l; m1, m2) for fixed l1, l2.
#[derive(Debug, Clone)]
pub struct CgTable {
    pub l1: HalfInt,
    pub l2: HalfInt,
    entries: Vec<(HalfInt, HalfInt, HalfInt, f64)>, // (l, m1, m2, value)
}

impl CgTable {
    pub fn new(l1: HalfInt, l2: HalfInt) -> Self {
        let mut entries = Vec::new();
        for l in HalfInt::range_inclusive((l1 - l2).abs(), l1 + l2) {
            for m1 in HalfInt::weights(l1) {
                for m2 in HalfInt::weights(l2) {
                    if (m1 + m2).abs() <= l {
                        entries.push((l, m1, m2, cg_su2(l1, l2, l, m1, m2)));
                    }
                }
            }
        }
        CgTable { l1, l2, entries }
    }

    pub fn get(&self, l: HalfInt, m1: HalfInt, m2: HalfInt) -> f64 {
        self.entries
            .iter()
            .find(|(el, em1, em2, _)| *el == l && *em1 == m1 && *em2 == m2)
            .map(|&(_, _, _, v)| v)
            .unwrap_or(0.0)
    }

    /// Max deviation from orthogonality:
    /// sum_{m1+m2=m} C(l; m1,m2) C(l'; m1,m2) = delta_{l l'}.
    pub fn orthogonality_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        let lo = (self.l1 - self.l2).abs();
        let hi = self.l1 + self.l2;
        for l in HalfInt::range_inclusive(lo, hi) {
            for lp in HalfInt::range_inclusive(lo, hi) {
                for m in HalfInt::range_inclusive(-(l.min(lp)), l.min(lp)) {
                    let mut acc = 0.0;
                    for m1 in HalfInt::weights(self.l1) {
                        let m2 = m - m1;
                        if m2.abs() <= self.l2 {
                            acc += self.get(l, m1, m2) * self.get(lp, m1, m2);
                        }
                    }
                    let target = if l == lp { 1.0 } else { 0.0 };
                    worst = worst.max((acc - target).abs());
                }
            }
        }
        worst
    }
}

/// Brute-force oracle: builds the coupled basis by applying the total
/// lowering operator to highest-weight vectors found by Gram-Schmidt, and
/// reads the coefficients off the product basis. Independent of the
/// closed-form route in [`cg_su2`].
pub fn cg_su2_ladder_oracle(l1: HalfInt, l2: HalfInt) -> CgTable {
    let d1 = HalfInt::dim(l1);
    let d2 = HalfInt::dim(l2);
    let dim = d1 * d2;
    let w1: Vec<HalfInt> = HalfInt::weights(l1).collect();
    let w2: Vec<HalfInt> = HalfInt::weights(l2).collect();
    let idx = |i1: usize, i2: usize| i1 * d2 + i2;
    let alpha =
        |l: HalfInt, m: HalfInt| ((l + m).as_f64() * (l - m + HalfInt::ONE).as_f64()).sqrt();

    // total lowering operator on the product basis
    let lower = |v: &[f64]| -> Vec<f64> {
        let mut out = vec![0.0; dim];
        for (i1, &m1) in w1.iter().enumerate() {
            for (i2, &m2) in w2.iter().enumerate() {
                let amp = v[idx(i1, i2)];
                if amp == 0.0 {
                    continue;
                }
                if i1 > 0 {
                    out[idx(i1 - 1, i2)] += amp * alpha(l1, m1);
                }
                if i2 > 0 {
                    out[idx(i1, i2 - 1)] += amp * alpha(l2, m2);
                }
            }
        }
        out
    };

    let mut entries = Vec::new();
    // states of weight m, per block l, kept for Gram-Schmidt
    let mut blocks: Vec<(HalfInt, Vec<f64>)> = Vec::new(); // (l, current state of weight m_cur)
    let mut l = l1 + l2;
    loop {
        // highest-weight state of block l: weight-l subspace orthogonal to
        // the lowered states of all higher blocks
        let mut v = vec![0.0; dim];
        if l == l1 + l2 {
            v[idx(d1 - 1, d2 - 1)] = 1.0;
        } else {
            // basis of the weight-l subspace
            let mut candidates: Vec<(usize, usize)> = Vec::new();
            for (i1, &m1) in w1.iter().enumerate() {
                for (i2, &m2) in w2.iter().enumerate() {
                    if m1 + m2 == l {
                        candidates.push((i1, i2));
                    }
                }
            }
            // start from the vector with positive coefficient on the
            // highest-m1 product state (Condon-Shortley) and project out
            // the existing blocks
            let top = candidates
                .iter()
                .max_by_key(|&&(i1, _)| i1)
                .copied()
                .expect("nonempty weight subspace");
            v[idx(top.0, top.1)] = 1.0;
            for (_, w) in &blocks {
                let dot: f64 = v.iter().zip(w).map(|(a, b)| a * b).sum();
                let nrm: f64 = w.iter().map(|a| a * a).sum();
                for (a, b) in v.iter_mut().zip(w) {
                    *a -= dot / nrm * b;
                }
            }
            let nrm: f64 = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            for a in v.iter_mut() {
                *a /= nrm;
            }
            if v[idx(top.0, top.1)] < 0.0 {
                for a in v.iter_mut() {
                    *a = -*a;
                }
            }
        }
        blocks.push((l, v));

        // lower every block one step and record coefficients at this weight
        for (bl, state) in blocks.iter() {
            let m = l; // current weight of all stored states
            for (i1, &m1) in w1.iter().enumerate() {
                for (i2, &m2) in w2.iter().enumerate() {
                    if m1 + m2 == m {
                        let c = state[idx(i1, i2)];
                        entries.push((*bl, m1, m2, c));
                    }
                }
            }
        }
        if l == (l1 - l2).abs() && l == -(l1 + l2) {
            break;
        }
        // lower all blocks; drop finished ones
        let next_m = l - HalfInt::ONE;
        if next_m < -(l1 + l2) {
            break;
        }
        let mut new_blocks = Vec::new();
        for (bl, state) in blocks.into_iter() {
            if next_m.abs() <= bl {
                let lowered = lower(&state);
                // normalize by alpha_m of the block: X- |l,m> = alpha_m |l,m-1>
                let a = alpha(bl, l);
                new_blocks.push((bl, lowered.iter().map(|x| x / a).collect()));
            }
        }
        blocks = new_blocks;
        l = next_m;
        if blocks.is_empty() {
            break;
        }
    }
    CgTable { l1, l2, entries }
}

/// One b-bar entry: the product of the undotted and dotted SU(2)
/// Clebsch-Gordan coefficients coupling (l1, k) x (l2, m-k) -> (target, m).
pub fn bbar_entry(
    l1: HalfInt,
    l2: HalfInt,
    ld2: HalfInt,
    target_shift: HalfInt,
    k: HalfInt,
    m: HalfInt,
    md: HalfInt,
) -> f64 {
    let t = l2 + target_shift;
    let td = ld2 + target_shift;
    cg_su2(l1, l2, t, k, m - k) * cg_su2(l1, ld2, td, k, md - k)
}

/// The 2x2 b-bar matrix of the half-integer shift: rows k = +1/2, -1/2;
/// columns targets l2 - 1/2, l2 + 1/2.
pub fn bbar_matrix_half(l2: HalfInt, ld2: HalfInt, m: HalfInt, md: HalfInt) -> [[f64; 2]; 2] {
    let half = HalfInt::HALF;
    let mut out = [[0.0; 2]; 2];
    for (r, k) in [half, -half].into_iter().enumerate() {
        for (c, shift) in [-half, half].into_iter().enumerate() {
            out[r][c] = bbar_entry(half, l2, ld2, shift, k, m, md);
        }
    }
    out
}

/// The 3x3 b-bar matrix of the integer shift: rows k = -1, 0, +1; columns
/// targets l2 + 1, l2, l2 - 1.
pub fn bbar_matrix_one(l2: HalfInt, ld2: HalfInt, m: HalfInt, md: HalfInt) -> [[f64; 3]; 3] {
    let one = HalfInt::ONE;
    let mut out = [[0.0; 3]; 3];
    for (r, k) in [-one, HalfInt::ZERO, one].into_iter().enumerate() {
        for (c, shift) in [one, HalfInt::ZERO, -one].into_iter().enumerate() {
            out[r][c] = bbar_entry(one, l2, ld2, shift, k, m, md);
        }
    }
    out
}

/// Residual of one same-order recurrence relation.
#[derive(Debug, Clone, PartialEq)]
pub struct RelationResidual {
    pub name: String,
    pub residual: f64,
}

fn alpha_f(l: HalfInt, n: HalfInt) -> f64 {
    ((l + n).as_f64() * (l - n + HalfInt::ONE).as_f64()).sqrt()
}

fn z_or_zero(l: HalfInt, m: HalfInt, n: HalfInt, theta: f64, tau: f64) -> C64 {
    if m.abs() > l || n.abs() > l {
        C64::new(0.0, 0.0)
    } else {
        hyper_z(l, m, n, theta, tau).expect("valid indices")
    }
}

/// Same-order recurrence relations (fixed l, neighbouring m or n), with the
/// theta and tau derivatives taken by central differences of step h.
///
/// The identities, derived from the ladder action on the phase-dressed
/// matrix elements, are
///   (i d/dtheta - d/dtau -+ 2i (m - n cos theta^c)/sin theta^c) Z^l_mn
///       = -2 alpha Z^l_{m, n-+1}
/// and the two m-shift partners obtained through the index symmetry; the
/// dotted family is the same set evaluated at tau -> -tau.
pub fn check_recurrence_same_order(
    l: HalfInt,
    m: HalfInt,
    n: HalfInt,
    theta: f64,
    tau: f64,
    h: f64,
) -> Result<Vec<RelationResidual>, CgError> {
    if m.abs() > l || n.abs() > l {
        return Err(CgError::IndexOutOfRange(format!("l={l}, m={m}, n={n}")));
    }
    let tc = C64::new(theta, -tau);
    if tc.sin().norm() < 1e-6 {
        return Err(CgError::IndexOutOfRange(format!(
            "sin(theta^c) too small: {:.3e}",
            tc.sin().norm()
        )));
    }
    let i = C64::new(0.0, 1.0);
    let one = HalfInt::ONE;
    let mut out = Vec::new();

    // undotted family: functions of theta^c = theta - i tau
    // dotted family: same functions at tau -> -tau (functions of theta^c*)
    for (dotted, sign_tau) in [(false, 1.0), (true, -1.0)] {
        let ta = sign_tau * tau;
        let z = |mm: HalfInt, nn: HalfInt| z_or_zero(l, mm, nn, theta, ta);
        let dth =
            (z_or_zero(l, m, n, theta + h, ta) - z_or_zero(l, m, n, theta - h, ta)) / (2.0 * h);
        let dta = (z_or_zero(l, m, n, theta, ta + h) - z_or_zero(l, m, n, theta, ta - h))
            / (2.0 * h)
            * sign_tau; // derivative with respect to the original tau
        let tcc = C64::new(theta, -ta);
        let (mf, nf) = (m.as_f64(), n.as_f64());
        let coef_n = 2.0 * i * (mf - nf * tcc.cos()) / tcc.sin();
        let coef_m = 2.0 * i * (nf - mf * tcc.cos()) / tcc.sin();
        // d/dtau of the dotted function at the original point carries the
        // opposite sign: the dotted relations have +d/dtau
        let d_tau_term = if dotted { dta * sign_tau } else { dta };
        let z0 = z(m, n);
        let tag = if dotted { "dotted" } else { "undotted" };

        let lhs_lower_n = i * dth - d_tau_term - coef_n * z0;
        let rhs_lower_n = -2.0 * alpha_f(l, n) * z(m, n - one);
        out.push(RelationResidual {
            name: format!("{tag} n-lowering"),
            residual: (lhs_lower_n - rhs_lower_n).norm(),
        });

        let lhs_raise_n = i * dth - d_tau_term + coef_n * z0;
        let rhs_raise_n = -2.0 * alpha_f(l, n + one) * z(m, n + one);
        out.push(RelationResidual {
            name: format!("{tag} n-raising"),
            residual: (lhs_raise_n - rhs_raise_n).norm(),
        });

        let lhs_lower_m = i * dth - d_tau_term - coef_m * z0;
        let rhs_lower_m = -2.0 * alpha_f(l, m) * z(m - one, n);
        out.push(RelationResidual {
            name: format!("{tag} m-lowering"),
            residual: (lhs_lower_m - rhs_lower_m).norm(),
        });

        let lhs_raise_m = i * dth - d_tau_term + coef_m * z0;
        let rhs_raise_m = -2.0 * alpha_f(l, m + one) * z(m + one, n);
        out.push(RelationResidual {
            name: format!("{tag} m-raising"),
            residual: (lhs_raise_m - rhs_raise_m).norm(),
        });
    }
    Ok(out)
}

/// Which weight-shift family to verify.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftKind {
    /// l1 = 1/2: four relations.
    Spinor,
    /// l1 = 1: nine relations.
    Vector,
}

fn m_or_zero(l: HalfInt, m: HalfInt, n: HalfInt, a: &ComplexEulerAngles) -> C64 {
    if m.abs() > l || n.abs() > l || l.is_negative() {
        C64::new(0.0, 0.0)
    } else {
        hyper_m(l, m, n, a).expect("valid indices")
    }
}

/// Weight-shift recurrence relations: the Clebsch-Gordan expansion of the
/// product of matrix elements,
///   M^{l1}_{k k'}(g) M^{l2}_{j-k, m-k'}(g)
///     = sum_L C(l1,l2,L; k, j-k, j) C(l1,l2,L; k', m-k', m) M^L_{j m}(g),
/// one relation per (k, k') pair: nine for l1 = 1, four for l1 = 1/2. The
/// prefactors M^{l1}_{k k'} are exactly the entries of the l = 1/2 and l = 1
/// closed-form matrices dressed with their phase factors, and the
/// coefficient pairs are the b-bar entries.
pub fn check_recurrence_l_shift(
    kind: ShiftKind,
    l2: HalfInt,
    j: HalfInt,
    m: HalfInt,
    a: &ComplexEulerAngles,
) -> Result<Vec<RelationResidual>, CgError> {
    let l1 = match kind {
        ShiftKind::Spinor => HalfInt::HALF,
        ShiftKind::Vector => HalfInt::ONE,
    };
    // j and m are weights of the coupled representations l2 - l1 .. l2 + l1
    if j.abs() > l2 + l1 || m.abs() > l2 + l1 || !j.same_parity(l1 + l2) || !m.same_parity(l1 + l2)
    {
        return Err(CgError::IndexOutOfRange(format!(
            "j, m must be weights of the coupled range: l1={l1}, l2={l2}, j={j}, m={m}"
        )));
    }
    let mut out = Vec::new();
    for k in HalfInt::weights(l1) {
        for kp in HalfInt::weights(l1) {
            if (j - k).abs() > l2 || (m - kp).abs() > l2 {
                continue;
            }
            let lhs = m_or_zero(l1, k, kp, a) * m_or_zero(l2, j - k, m - kp, a);
            let mut rhs = C64::new(0.0, 0.0);
            for big_l in HalfInt::range_inclusive((l2 - l1).abs(), l2 + l1) {
                let c = cg_su2(l1, l2, big_l, k, j - k) * cg_su2(l1, l2, big_l, kp, m - kp);
                if c != 0.0 {
                    rhs += c * m_or_zero(big_l, j, m, a);
                }
            }
            out.push(RelationResidual {
                name: format!("k={k}, k'={kp}"),
                residual: (lhs - rhs).norm(),
            });
        }
    }
    Ok(out)
}
