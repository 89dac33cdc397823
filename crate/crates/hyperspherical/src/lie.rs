//! Infinitesimal operators as finite matrices in the helicity and
//! Gel'fand-Naimark bases, Casimir operators, and finite-difference checks
//! of the differential-operator realizations.
//!
//! Basis conventions: the tensor basis |l,m; ldot,mdot> is ordered with m
//! ascending (outer index) and mdot ascending (inner index), matching the
//! layout of the representation matrices in [`crate::funcs`]. The raising
//! and lowering matrices J+/J- act as J+|m> = alpha_{m+1}|m+1>,
//! J-|m> = alpha_m|m-1> with alpha_m = sqrt((l+m)(l-m+1)).
//!
//! The rotation generators A_i act on the undotted index only and the
//! dotted copy At_i ("A-tilde") on the dotted index; the physical generators
//! of the representation are the sums, exposed as `total_rotation` /
//! `total_boost`. In terms of the ladder matrices: A_k = -i J_k, B_k = -J_k
//! on the undotted factor, At_k = -i Jt_k, Bt_k = +Jt_k on the dotted one.

use crate::funcs::{hyper_m, FuncsError};
use crate::group::ComplexEulerAngles;
use crate::halfint::HalfInt;
use crate::special::C64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LieError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("angle too close to a coordinate singularity: |sin theta^c| = {0:.3e}")]
    SingularAngle(f64),
    #[error("{0}")]
    Funcs(#[from] FuncsError),
}

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct OpMatrix {
    pub dim: usize,
    pub data: Vec<C64>,
}

impl OpMatrix {
    pub fn zeros(dim: usize) -> Self {
        OpMatrix {
            dim,
            data: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = OpMatrix::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.data[r * self.dim + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: C64) {
        self.data[r * self.dim + c] = v;
    }

    pub fn mul(&self, other: &OpMatrix) -> OpMatrix {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = OpMatrix::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a.norm() == 0.0 {
                    continue;
                }
                for c in 0..n {
                    out.data[r * n + c] += a * other.data[k * n + c];
                }
            }
        }
        out
    }

    pub fn add(&self, other: &OpMatrix) -> OpMatrix {
        assert_eq!(self.dim, other.dim);
        OpMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &OpMatrix) -> OpMatrix {
        assert_eq!(self.dim, other.dim);
        OpMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, s: C64) -> OpMatrix {
        OpMatrix {
            dim: self.dim,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn commutator(&self, other: &OpMatrix) -> OpMatrix {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn max_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_distance(&self, other: &OpMatrix) -> f64 {
        self.sub(other).max_norm()
    }

    /// Max-norm distance from c * identity.
    pub fn distance_from_scalar(&self, c: C64) -> f64 {
        self.sub(&OpMatrix::identity(self.dim).scale(c)).max_norm()
    }
}

fn alpha(l: HalfInt, m: HalfInt) -> f64 {
    ((l + m).as_f64() * (l - m + HalfInt::ONE).as_f64()).sqrt()
}

/// Ladder and weight matrices of the spin-l representation, m ascending.
fn su2_ladders(l: HalfInt) -> (OpMatrix, OpMatrix, OpMatrix) {
    let dim = HalfInt::dim(l);
    let weights: Vec<HalfInt> = HalfInt::weights(l).collect();
    let mut jp = OpMatrix::zeros(dim);
    let mut jm = OpMatrix::zeros(dim);
    let mut j3 = OpMatrix::zeros(dim);
    for (i, &m) in weights.iter().enumerate() {
        j3.set(i, i, C64::new(m.as_f64(), 0.0));
        if i + 1 < dim {
            // J+|m> = alpha_{m+1} |m+1>: row of m+1, column of m
            jp.set(i + 1, i, C64::new(alpha(l, m + HalfInt::ONE), 0.0));
        }
        if i > 0 {
            // J-|m> = alpha_m |m-1>
            jm.set(i - 1, i, C64::new(alpha(l, m), 0.0));
        }
    }
    (jp, jm, j3)
}

fn kron(a: &OpMatrix, b: &OpMatrix) -> OpMatrix {
    let n = a.dim * b.dim;
    let mut out = OpMatrix::zeros(n);
    for ra in 0..a.dim {
        for ca in 0..a.dim {
            let va = a.get(ra, ca);
            if va.norm() == 0.0 {
                continue;
            }
            for rb in 0..b.dim {
                for cb in 0..b.dim {
                    out.set(ra * b.dim + rb, ca * b.dim + cb, va * b.get(rb, cb));
                }
            }
        }
    }
    out
}

/// Operator tags in the helicity basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HelicityOp {
    A1,
    A2,
    A3,
    B1,
    B2,
    B3,
    /// dotted copies
    At1,
    At2,
    At3,
    Bt1,
    Bt2,
    Bt3,
    XPlus,
    XMinus,
    X3,
    YPlus,
    YMinus,
    Y3,
    HPlus,
    HMinus,
    H3,
    FPlus,
    FMinus,
    F3,
}

/// Cartesian J_k from ladders: J1 = (J+ + J-)/2, J2 = (J+ - J-)/(2i).
fn cartesian(jp: &OpMatrix, jm: &OpMatrix) -> (OpMatrix, OpMatrix) {
    let j1 = jp.add(jm).scale(C64::new(0.5, 0.0));
    let j2 = jp.sub(jm).scale(C64::new(0.0, -0.5));
    (j1, j2)
}

/// The operator matrix on the (2l+1)(2ldot+1)-dimensional helicity basis.
pub fn op_matrix_helicity(which: HelicityOp, l: HalfInt, ldot: HalfInt) -> OpMatrix {
    let (jp, jm, j3) = su2_ladders(l);
    let (j1, j2) = cartesian(&jp, &jm);
    let (kp, km, k3) = su2_ladders(ldot);
    let (k1, k2) = cartesian(&kp, &km);
    let dl = HalfInt::dim(l);
    let dd = HalfInt::dim(ldot);
    let il = OpMatrix::identity(dl);
    let id = OpMatrix::identity(dd);
    let lift_l = |m: &OpMatrix| kron(m, &id);
    let lift_d = |m: &OpMatrix| kron(&il, m);
    let mi = C64::new(0.0, -1.0);
    match which {
        HelicityOp::A1 => lift_l(&j1).scale(mi),
        HelicityOp::A2 => lift_l(&j2).scale(mi),
        HelicityOp::A3 => lift_l(&j3).scale(mi),
        HelicityOp::B1 => lift_l(&j1).scale(C64::new(-1.0, 0.0)),
        HelicityOp::B2 => lift_l(&j2).scale(C64::new(-1.0, 0.0)),
        HelicityOp::B3 => lift_l(&j3).scale(C64::new(-1.0, 0.0)),
        HelicityOp::At1 => lift_d(&k1).scale(mi),
        HelicityOp::At2 => lift_d(&k2).scale(mi),
        HelicityOp::At3 => lift_d(&k3).scale(mi),
        HelicityOp::Bt1 => lift_d(&k1),
        HelicityOp::Bt2 => lift_d(&k2),
        HelicityOp::Bt3 => lift_d(&k3),
        HelicityOp::XPlus => lift_l(&jp),
        HelicityOp::XMinus => lift_l(&jm),
        HelicityOp::X3 => lift_l(&j3),
        HelicityOp::YPlus => lift_d(&kp),
        HelicityOp::YMinus => lift_d(&km),
        HelicityOp::Y3 => lift_d(&k3),
        HelicityOp::HPlus => lift_l(&jp).add(&lift_d(&kp)),
        HelicityOp::HMinus => lift_l(&jm).add(&lift_d(&km)),
        HelicityOp::H3 => lift_l(&j3).add(&lift_d(&k3)),
        HelicityOp::FPlus => lift_l(&jp).sub(&lift_d(&kp)).scale(mi),
        HelicityOp::FMinus => lift_l(&jm).sub(&lift_d(&km)).scale(mi),
        HelicityOp::F3 => lift_l(&j3).sub(&lift_d(&k3)).scale(mi),
    }
}

/// Total rotation generator A_k + At_k of the (l, ldot) representation.
pub fn total_rotation(k: usize, l: HalfInt, ldot: HalfInt) -> OpMatrix {
    let (a, at) = match k {
        1 => (HelicityOp::A1, HelicityOp::At1),
        2 => (HelicityOp::A2, HelicityOp::At2),
        _ => (HelicityOp::A3, HelicityOp::At3),
    };
    op_matrix_helicity(a, l, ldot).add(&op_matrix_helicity(at, l, ldot))
}

/// Total boost generator B_k + Bt_k.
pub fn total_boost(k: usize, l: HalfInt, ldot: HalfInt) -> OpMatrix {
    let (b, bt) = match k {
        1 => (HelicityOp::B1, HelicityOp::Bt1),
        2 => (HelicityOp::B2, HelicityOp::Bt2),
        _ => (HelicityOp::B3, HelicityOp::Bt3),
    };
    op_matrix_helicity(b, l, ldot).add(&op_matrix_helicity(bt, l, ldot))
}

/// X_k = i/2 (A_k + i B_k) and Y_k = i/2 (A_k - i B_k) from rotation and
/// boost matrices of matching dimension.
pub fn xy_from_ab(
    a: &[OpMatrix; 3],
    b: &[OpMatrix; 3],
) -> Result<([OpMatrix; 3], [OpMatrix; 3]), LieError> {
    for k in 0..3 {
        if a[k].dim != b[k].dim {
            return Err(LieError::DimensionMismatch(a[k].dim, b[k].dim));
        }
    }
    let ih = C64::new(0.0, 0.5);
    let i = C64::new(0.0, 1.0);
    let xs = std::array::from_fn(|k| a[k].add(&b[k].scale(i)).scale(ih));
    let ys = std::array::from_fn(|k| a[k].sub(&b[k].scale(i)).scale(ih));
    Ok((xs, ys))
}

/// Gel'fand-Naimark operators from the helicity X, Y triples:
/// H = X + Y componentwise, F = -i (X - Y).
pub fn gn_from_xy(
    x: &[OpMatrix; 3],
    y: &[OpMatrix; 3],
) -> Result<([OpMatrix; 3], [OpMatrix; 3]), LieError> {
    for k in 0..3 {
        if x[k].dim != y[k].dim {
            return Err(LieError::DimensionMismatch(x[k].dim, y[k].dim));
        }
    }
    let mi = C64::new(0.0, -1.0);
    let hs = std::array::from_fn(|k| x[k].add(&y[k]));
    let fs = std::array::from_fn(|k| x[k].sub(&y[k]).scale(mi));
    Ok((hs, fs))
}

/// Inverse of [`gn_from_xy`]: X = (H + iF)/2, Y = (H - iF)/2.
pub fn xy_from_gn(
    h: &[OpMatrix; 3],
    f: &[OpMatrix; 3],
) -> Result<([OpMatrix; 3], [OpMatrix; 3]), LieError> {
    for k in 0..3 {
        if h[k].dim != f[k].dim {
            return Err(LieError::DimensionMismatch(h[k].dim, f[k].dim));
        }
    }
    let i = C64::new(0.0, 1.0);
    let half = C64::new(0.5, 0.0);
    let xs = std::array::from_fn(|k| h[k].add(&f[k].scale(i)).scale(half));
    let ys = std::array::from_fn(|k| h[k].sub(&f[k].scale(i)).scale(half));
    Ok((xs, ys))
}

/// Tags for the Gel'fand-Naimark block operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GnOp {
    H3,
    HPlus,
    HMinus,
    F3,
    FPlus,
    FMinus,
}

/// Gel'fand-Naimark operator on the block basis xi_{l,m}, l = l0..lmax,
/// m = -l..l.
///
/// A_l = i l0 l1 / (l (l+1)), C_l = (i/l) sqrt((l^2 - l0^2)(l^2 - l1^2) / (4l^2 - 1)).
/// With l1^2 = (l0 + p)^2 the coefficient C_{l1} vanishes and the chain closes
/// at lmax = l1 - 1, giving a finite-dimensional representation.
pub fn op_matrix_gn(which: GnOp, l0: HalfInt, l1: C64, lmax: HalfInt) -> OpMatrix {
    let blocks: Vec<HalfInt> = HalfInt::range_inclusive(l0, lmax).collect();
    let offsets: Vec<usize> = blocks
        .iter()
        .scan(0usize, |acc, &l| {
            let here = *acc;
            *acc += HalfInt::dim(l);
            Some(here)
        })
        .collect();
    let dim: usize = blocks.iter().map(|&l| HalfInt::dim(l)).sum();
    let mut out = OpMatrix::zeros(dim);

    let idx = |bi: usize, l: HalfInt, m: HalfInt| offsets[bi] + ((m + l).twice() / 2) as usize;
    let a_coef = |l: HalfInt| -> C64 {
        let lf = l.as_f64();
        if lf == 0.0 {
            C64::new(0.0, 0.0)
        } else {
            C64::new(0.0, 1.0) * l0.as_f64() * l1 / (lf * (lf + 1.0))
        }
    };
    let c_coef = |l: HalfInt| -> C64 {
        let lf = l.as_f64();
        if lf == 0.0 {
            return C64::new(0.0, 0.0);
        }
        let l0f = l0.as_f64();
        let num = (lf * lf - l0f * l0f) * (C64::new(lf * lf, 0.0) - l1 * l1);
        (C64::new(0.0, 1.0) / lf) * (num / (4.0 * lf * lf - 1.0)).sqrt()
    };

    for (bi, &l) in blocks.iter().enumerate() {
        let lf = l.as_f64();
        for m in HalfInt::weights(l) {
            let mf = m.as_f64();
            let col = idx(bi, l, m);
            match which {
                GnOp::H3 => {
                    out.set(col, col, C64::new(mf, 0.0));
                }
                GnOp::HPlus => {
                    if m < l {
                        let v = ((lf + mf + 1.0) * (lf - mf)).sqrt();
                        out.set(idx(bi, l, m + HalfInt::ONE), col, C64::new(v, 0.0));
                    }
                }
                GnOp::HMinus => {
                    if -m < l {
                        let v = ((lf + mf) * (lf - mf + 1.0)).sqrt();
                        out.set(idx(bi, l, m - HalfInt::ONE), col, C64::new(v, 0.0));
                    }
                }
                GnOp::F3 => {
                    if bi > 0 && m.abs() < l {
                        let v = c_coef(l) * (lf * lf - mf * mf).sqrt();
                        out.set(idx(bi - 1, l - HalfInt::ONE, m), col, v);
                    }
                    out.set(col, col, -a_coef(l) * mf);
                    if bi + 1 < blocks.len() {
                        let lp = lf + 1.0;
                        let v = -c_coef(l + HalfInt::ONE) * (lp * lp - mf * mf).sqrt();
                        out.set(idx(bi + 1, l + HalfInt::ONE, m), col, v);
                    }
                }
                GnOp::FPlus => {
                    if bi > 0 && m + HalfInt::ONE <= l - HalfInt::ONE {
                        let v = c_coef(l) * ((lf - mf) * (lf - mf - 1.0)).sqrt();
                        out.set(idx(bi - 1, l - HalfInt::ONE, m + HalfInt::ONE), col, v);
                    }
                    if m < l {
                        let v = -a_coef(l) * ((lf - mf) * (lf + mf + 1.0)).sqrt();
                        out.set(idx(bi, l, m + HalfInt::ONE), col, v);
                    }
                    if bi + 1 < blocks.len() {
                        let v =
                            c_coef(l + HalfInt::ONE) * ((lf + mf + 1.0) * (lf + mf + 2.0)).sqrt();
                        out.set(idx(bi + 1, l + HalfInt::ONE, m + HalfInt::ONE), col, v);
                    }
                }
                GnOp::FMinus => {
                    if bi > 0 && -(m - HalfInt::ONE) <= l - HalfInt::ONE {
                        let v = -c_coef(l) * ((lf + mf) * (lf + mf - 1.0)).sqrt();
                        out.set(idx(bi - 1, l - HalfInt::ONE, m - HalfInt::ONE), col, v);
                    }
                    if -m < l {
                        let v = -a_coef(l) * ((lf + mf) * (lf - mf + 1.0)).sqrt();
                        out.set(idx(bi, l, m - HalfInt::ONE), col, v);
                    }
                    if bi + 1 < blocks.len() {
                        let v =
                            -c_coef(l + HalfInt::ONE) * ((lf - mf + 1.0) * (lf - mf + 2.0)).sqrt();
                        out.set(idx(bi + 1, l + HalfInt::ONE, m - HalfInt::ONE), col, v);
                    }
                }
            }
        }
    }
    out
}

/// The two Casimir matrices (X^2, Y^2) = (l(l+1) I, ldot(ldot+1) I).
pub fn casimir_matrices(l: HalfInt, ldot: HalfInt) -> (OpMatrix, OpMatrix) {
    let from_ladders = |plus: HelicityOp, minus: HelicityOp, third: HelicityOp| -> OpMatrix {
        let p = op_matrix_helicity(plus, l, ldot);
        let m = op_matrix_helicity(minus, l, ldot);
        let t = op_matrix_helicity(third, l, ldot);
        let (c1, c2) = cartesian(&p, &m);
        c1.mul(&c1).add(&c2.mul(&c2)).add(&t.mul(&t))
    };
    (
        from_ladders(HelicityOp::XPlus, HelicityOp::XMinus, HelicityOp::X3),
        from_ladders(HelicityOp::YPlus, HelicityOp::YMinus, HelicityOp::Y3),
    )
}

/// Residual report of all commutation relations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommutatorReport {
    pub max_residual_rot_boost: f64,
    pub max_residual_xy: f64,
}

impl CommutatorReport {
    pub fn pass(&self, tol: f64) -> bool {
        self.max_residual_rot_boost <= tol && self.max_residual_xy <= tol
    }
}

/// Checks the rotation/boost commutation relations on the total generators
/// and the two commuting su(2) copies built from them.
pub fn check_commutators(l: HalfInt, ldot: HalfInt) -> CommutatorReport {
    let a: [OpMatrix; 3] = std::array::from_fn(|k| total_rotation(k + 1, l, ldot));
    let b: [OpMatrix; 3] = std::array::from_fn(|k| total_boost(k + 1, l, ldot));
    let mut worst = 0.0f64;
    let mut check = |lhs: OpMatrix, rhs: OpMatrix| {
        worst = worst.max(lhs.max_distance(&rhs));
    };
    let zero = OpMatrix::zeros(a[0].dim);
    // cyclic rotation relations [A1,A2] = A3 etc.
    for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
        check(a[i].commutator(&a[j]), a[k].clone());
        check(b[i].commutator(&b[j]), a[k].scale(C64::new(-1.0, 0.0)));
        check(a[i].commutator(&b[i]), zero.clone());
        check(a[i].commutator(&b[j]), b[k].clone());
        check(a[j].commutator(&b[i]), b[k].scale(C64::new(-1.0, 0.0)));
    }
    let (x, y) = xy_from_ab(&a, &b).expect("matching dimensions");
    let mut worst_xy = 0.0f64;
    let mut check2 = |lhs: OpMatrix, rhs: OpMatrix| {
        worst_xy = worst_xy.max(lhs.max_distance(&rhs));
    };
    let i = C64::new(0.0, 1.0);
    for (p, q, r) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
        check2(x[p].commutator(&x[q]), x[r].scale(i));
        check2(y[p].commutator(&y[q]), y[r].scale(i));
    }
    for xp in &x {
        for yq in &y {
            check2(xp.commutator(yq), zero.clone());
        }
    }
    CommutatorReport {
        max_residual_rot_boost: worst,
        max_residual_xy: worst_xy,
    }
}

// ---------------------------------------------------------------------------
// finite-difference realization of the differential operators
// ---------------------------------------------------------------------------

/// The six real coordinates, in the order (phi, eps, theta, tau, psi, veps).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coord {
    Phi,
    Eps,
    Theta,
    Tau,
    Psi,
    Veps,
}

const COORDS: [Coord; 6] = [
    Coord::Phi,
    Coord::Eps,
    Coord::Theta,
    Coord::Tau,
    Coord::Psi,
    Coord::Veps,
];

fn shifted(a: &ComplexEulerAngles, c: Coord, dh: f64) -> ComplexEulerAngles {
    let mut b = *a;
    match c {
        Coord::Phi => b.phi += dh,
        Coord::Eps => b.eps += dh,
        Coord::Theta => b.theta += dh,
        Coord::Tau => b.tau += dh,
        Coord::Psi => b.psi += dh,
        Coord::Veps => b.veps += dh,
    }
    b
}

/// First partial derivatives of f in the six real coordinates, by central
/// differences with step h. No canonicalization is applied to the shifted
/// angles, so f must accept values slightly outside the canonical ranges.
pub fn gradient6<F: Fn(&ComplexEulerAngles) -> C64>(
    f: &F,
    a: &ComplexEulerAngles,
    h: f64,
) -> [C64; 6] {
    std::array::from_fn(|k| {
        let c = COORDS[k];
        (f(&shifted(a, c, h)) - f(&shifted(a, c, -h))) / (2.0 * h)
    })
}

/// Second partials d2 f / (dci dcj), central stencils.
pub fn hessian6<F: Fn(&ComplexEulerAngles) -> C64>(
    f: &F,
    a: &ComplexEulerAngles,
    h: f64,
) -> [[C64; 6]; 6] {
    let f0 = f(a);
    let mut out = [[C64::new(0.0, 0.0); 6]; 6];
    for i in 0..6 {
        for j in i..6 {
            let v = if i == j {
                (f(&shifted(a, COORDS[i], h)) - 2.0 * f0 + f(&shifted(a, COORDS[i], -h))) / (h * h)
            } else {
                let pp = f(&shifted(&shifted(a, COORDS[i], h), COORDS[j], h));
                let pm = f(&shifted(&shifted(a, COORDS[i], h), COORDS[j], -h));
                let mp = f(&shifted(&shifted(a, COORDS[i], -h), COORDS[j], h));
                let mm = f(&shifted(&shifted(a, COORDS[i], -h), COORDS[j], -h));
                (pp - pm - mp + mm) / (4.0 * h * h)
            };
            out[i][j] = v;
            out[j][i] = v;
        }
    }
    out
}

/// First-order differential operators realized by finite differences.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiffOp {
    A1,
    A2,
    A3,
    B1,
    B2,
    B3,
    X1,
    X2,
    X3,
    Y1,
    Y2,
    Y3,
    XPlus,
    XMinus,
    YPlus,
    YMinus,
}

const IDX_PHI: usize = 0;
const IDX_EPS: usize = 1;
const IDX_THETA: usize = 2;
const IDX_TAU: usize = 3;
const IDX_PSI: usize = 4;
const IDX_VEPS: usize = 5;

/// Applies a first-order operator to f at the point a, derivatives by
/// central differences of step h.
pub fn apply_diff_operator<F: Fn(&ComplexEulerAngles) -> C64>(
    which: DiffOp,
    f: &F,
    a: &ComplexEulerAngles,
    h: f64,
) -> C64 {
    let g = gradient6(f, a, h);
    let tc = a.theta_c();
    let pc = a.psi_c();
    let tcd = tc.conj();
    let pcd = pc.conj();
    let i = C64::new(0.0, 1.0);
    // complex-combined derivatives
    let d_theta_c = (g[IDX_THETA] + i * g[IDX_TAU]) / 2.0;
    let d_phi_c = (g[IDX_PHI] + i * g[IDX_EPS]) / 2.0;
    let d_psi_c = (g[IDX_PSI] + i * g[IDX_VEPS]) / 2.0;
    let d_theta_cd = (g[IDX_THETA] - i * g[IDX_TAU]) / 2.0;
    let d_phi_cd = (g[IDX_PHI] - i * g[IDX_EPS]) / 2.0;
    let d_psi_cd = (g[IDX_PSI] - i * g[IDX_VEPS]) / 2.0;
    match which {
        DiffOp::A3 => g[IDX_PSI],
        DiffOp::B3 => g[IDX_VEPS],
        DiffOp::A1 => {
            pc.cos() * g[IDX_THETA] + pc.sin() / tc.sin() * g[IDX_PHI]
                - tc.cos() / tc.sin() * pc.sin() * g[IDX_PSI]
        }
        DiffOp::B1 => {
            pc.cos() * g[IDX_TAU] + pc.sin() / tc.sin() * g[IDX_EPS]
                - tc.cos() / tc.sin() * pc.sin() * g[IDX_VEPS]
        }
        DiffOp::A2 => {
            -pc.sin() * g[IDX_THETA] + pc.cos() / tc.sin() * g[IDX_PHI]
                - tc.cos() / tc.sin() * pc.cos() * g[IDX_PSI]
        }
        DiffOp::B2 => {
            -pc.sin() * g[IDX_TAU] + pc.cos() / tc.sin() * g[IDX_EPS]
                - tc.cos() / tc.sin() * pc.cos() * g[IDX_VEPS]
        }
        DiffOp::X1 => {
            pc.cos() * d_theta_c + pc.sin() / tc.sin() * d_phi_c
                - tc.cos() / tc.sin() * pc.sin() * d_psi_c
        }
        DiffOp::X2 => {
            -pc.sin() * d_theta_c + pc.cos() / tc.sin() * d_phi_c
                - tc.cos() / tc.sin() * pc.cos() * d_psi_c
        }
        DiffOp::X3 => d_psi_c,
        DiffOp::Y1 => {
            pcd.cos() * d_theta_cd + pcd.sin() / tcd.sin() * d_phi_cd
                - tcd.cos() / tcd.sin() * pcd.sin() * d_psi_cd
        }
        DiffOp::Y2 => {
            -pcd.sin() * d_theta_cd + pcd.cos() / tcd.sin() * d_phi_cd
                - tcd.cos() / tcd.sin() * pcd.cos() * d_psi_cd
        }
        DiffOp::Y3 => d_psi_cd,
        // the ladder realizations carry an extra factor i relative to
        // X1 +- i X2; with it, X- M^l_mn = -alpha_n M^l_{m,n-1} holds exactly
        DiffOp::XPlus => {
            i * (apply_diff_operator(DiffOp::X1, f, a, h)
                + i * apply_diff_operator(DiffOp::X2, f, a, h))
        }
        DiffOp::XMinus => {
            i * (apply_diff_operator(DiffOp::X1, f, a, h)
                - i * apply_diff_operator(DiffOp::X2, f, a, h))
        }
        DiffOp::YPlus => {
            i * (apply_diff_operator(DiffOp::Y1, f, a, h)
                + i * apply_diff_operator(DiffOp::Y2, f, a, h))
        }
        DiffOp::YMinus => {
            i * (apply_diff_operator(DiffOp::Y1, f, a, h)
                - i * apply_diff_operator(DiffOp::Y2, f, a, h))
        }
    }
}

/// Second-order Casimir X^2 applied to f by finite differences:
/// X^2 = d2/dthc2 + cot(thc) d/dthc
///     + (d2/dphc2 - 2 cos(thc) d/dphc d/dpsc + d2/dpsc2) / sin^2(thc).
pub fn apply_casimir_x2<F: Fn(&ComplexEulerAngles) -> C64>(
    f: &F,
    a: &ComplexEulerAngles,
    h: f64,
) -> Result<C64, LieError> {
    let tc = a.theta_c();
    let s = tc.sin();
    if s.norm() < 1e-6 {
        return Err(LieError::SingularAngle(s.norm()));
    }
    let g = gradient6(f, a, h);
    let hs = hessian6(f, a, h);
    let i = C64::new(0.0, 1.0);
    let d_theta_c = (g[IDX_THETA] + i * g[IDX_TAU]) / 2.0;
    // wirtinger second derivatives: (d/dc)^2 = (d_a + i d_b)^2 / 4
    let dd = |ia: usize, ib: usize, ja: usize, jb: usize| -> C64 {
        (hs[ia][ja] - hs[ib][jb] + i * (hs[ia][jb] + hs[ib][ja])) / 4.0
    };
    let d2_theta = dd(IDX_THETA, IDX_TAU, IDX_THETA, IDX_TAU);
    let d2_phi = dd(IDX_PHI, IDX_EPS, IDX_PHI, IDX_EPS);
    let d2_psi = dd(IDX_PSI, IDX_VEPS, IDX_PSI, IDX_VEPS);
    let d_phi_psi = dd(IDX_PHI, IDX_EPS, IDX_PSI, IDX_VEPS);
    Ok(d2_theta
        + tc.cos() / s * d_theta_c
        + (d2_phi - 2.0 * tc.cos() * d_phi_psi + d2_psi) / (s * s))
}

/// |(X^2 + l(l+1)) M^l_mn| at the point a: the eigenvalue-equation residual.
pub fn casimir_residual(
    l: HalfInt,
    m: HalfInt,
    n: HalfInt,
    a: &ComplexEulerAngles,
    h: f64,
) -> Result<f64, LieError> {
    let f = |ang: &ComplexEulerAngles| hyper_m(l, m, n, ang).expect("valid indices");
    let x2 = apply_casimir_x2(&f, a, h)?;
    let ll1 = l.as_f64() * (l.as_f64() + 1.0);
    Ok((x2 + ll1 * f(a)).norm())
}

/// Residual of the ordinary differential equation in z = cos(theta^c):
/// (1 - z^2) Z'' - 2 z Z' - (m^2 + n^2 - 2 m n z)/(1 - z^2) Z + l(l+1) Z = 0,
/// derivatives taken along theta by central differences.
pub fn zfun_ode_residual(
    l: HalfInt,
    m: HalfInt,
    n: HalfInt,
    theta: f64,
    tau: f64,
    h: f64,
) -> Result<f64, LieError> {
    let tc = C64::new(theta, -tau);
    let z = tc.cos();
    let s = tc.sin();
    if s.norm() < 1e-6 || (1.0 - z * z).norm() < 1e-6 {
        return Err(LieError::SingularAngle(s.norm()));
    }
    let zf = |t: f64| crate::funcs::hyper_z(l, m, n, t, tau).expect("valid indices");
    let f0 = zf(theta);
    let fp = zf(theta + h);
    let fm = zf(theta - h);
    let d1 = (fp - fm) / (2.0 * h); // d/dtheta = d/dtheta_c for analytic Z
    let d2 = (fp - 2.0 * f0 + fm) / (h * h);
    let dz1 = -d1 / s;
    let dz2 = d2 / (s * s) - z * d1 / (s * s * s);
    let (mf, nf, lf) = (m.as_f64(), n.as_f64(), l.as_f64());
    let res = (1.0 - z * z) * dz2
        - 2.0 * z * dz1
        - (mf * mf + nf * nf - 2.0 * mf * nf * z) / (1.0 - z * z) * f0
        + lf * (lf + 1.0) * f0;
    Ok(res.norm())
}
