//! Hyperspherical functions and their relatives: generalized spherical
//! functions on SU(2), Jacobi functions of the hyperbolic angle, conical
//! functions of the principal series, the two-variable hyperspherical
//! functions Z and the phase-dressed matrix elements M, plus full
//! representation matrices.
//!
//! Evaluation strategy: the series over the magnetic index k with inner sums
//! over j and s is summed with powers of cos/sin (cosh/sinh) of the half
//! angle split so every term has nonnegative exponents. That form is stable
//! on the whole angle range, including theta = pi where tan-based forms blow
//! up.

use crate::group::ComplexEulerAngles;
use crate::halfint::HalfInt;
use crate::special::{
    self, appell_f2, appell_f4, factorial, hyp2f1, lgamma_c, rgamma, SeriesResult, SpecialError,
    C64,
};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FuncsError {
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("series did not converge: {0}")]
    NoConvergence(String),
    #[error("domain error: {0}")]
    Domain(String),
}

impl From<SpecialError> for FuncsError {
    fn from(e: SpecialError) -> Self {
        match e {
            SpecialError::NoConvergence(s) => FuncsError::NoConvergence(s),
            other => FuncsError::Domain(other.to_string()),
        }
    }
}

/// Representation label: finite-dimensional spinor, principal series, or
/// supplementary series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RepLabel {
    FiniteDim { l: HalfInt, ldot: HalfInt },
    Principal { lambda: i64, rho: f64 },
    Supplementary { sigma: f64 },
}

impl RepLabel {
    /// The (l0, l1) pair labelling the representation.
    pub fn l0_l1(&self) -> (f64, C64) {
        match *self {
            RepLabel::FiniteDim { l, ldot } => {
                let l = l.as_f64();
                let ld = ldot.as_f64();
                ((l - ld).abs(), C64::new(l + ld + 1.0, 0.0))
            }
            RepLabel::Principal { lambda, rho } => {
                let l0 = (lambda as f64 / 2.0).abs();
                let sign = if lambda >= 0 { 1.0 } else { -1.0 };
                (l0, C64::new(0.0, -sign * rho / 2.0))
            }
            RepLabel::Supplementary { sigma } => (0.0, C64::new(sigma / 2.0, 0.0)),
        }
    }
}

fn check_indices(l: HalfInt, m: HalfInt, n: HalfInt) -> Result<(), FuncsError> {
    if l.is_negative() {
        return Err(FuncsError::IndexOutOfRange(format!("l = {l} < 0")));
    }
    if m.abs() > l || n.abs() > l {
        return Err(FuncsError::IndexOutOfRange(format!(
            "|m| or |n| exceeds l: l={l}, m={m}, n={n}"
        )));
    }
    if !l.same_parity(m) || !l.same_parity(n) {
        return Err(FuncsError::IndexOutOfRange(format!(
            "l-m and l-n must be integers: l={l}, m={m}, n={n}"
        )));
    }
    Ok(())
}

fn i_pow(d: i64) -> C64 {
    match d.rem_euclid(4) {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    }
}

/// sum_j sign^j c^(a+b-2j) s^(d+2j) / (j! (a-j)! (b-j)! (d+j)!)
/// over max(0,-d) <= j <= min(a,b); all exponents are nonnegative.
fn weight_sum(a: i64, b: i64, d: i64, c: f64, s: f64, alternating: bool) -> f64 {
    let j0 = 0.max(-d);
    let j1 = a.min(b);
    let mut acc = 0.0;
    for j in j0..=j1 {
        let num = c.powi((a + b - 2 * j) as i32) * s.powi((d + 2 * j) as i32);
        let den = factorial(j as usize)
            * factorial((a - j) as usize)
            * factorial((b - j) as usize)
            * factorial((d + j) as usize);
        let t = num / den;
        acc += if alternating && j % 2 != 0 { -t } else { t };
    }
    acc
}

fn pref_sqrt(l: HalfInt, m: HalfInt, n: HalfInt) -> f64 {
    (factorial((l - m).as_int().unwrap() as usize)
        * factorial((l + m).as_int().unwrap() as usize)
        * factorial((l - n).as_int().unwrap() as usize)
        * factorial((l + n).as_int().unwrap() as usize))
    .sqrt()
}

/// Generalized spherical function P^l_mn(cos theta): the matrix element of
/// the SU(2) rotation a1(theta).
pub fn sph_p(l: HalfInt, m: HalfInt, n: HalfInt, theta: f64) -> Result<C64, FuncsError> {
    check_indices(l, m, n)?;
    let a = (l - m).as_int().unwrap();
    let b = (l + n).as_int().unwrap();
    let d = (m - n).as_int().unwrap();
    let v = weight_sum(a, b, d, (theta / 2.0).cos(), (theta / 2.0).sin(), true);
    Ok(i_pow(d) * pref_sqrt(l, m, n) * v)
}

/// Jacobi function of the hyperbolic rotation: the matrix element of the
/// boost b1(tau) analog of P^l_mn.
pub fn jacobi_p(l: HalfInt, m: HalfInt, n: HalfInt, tau: f64) -> Result<C64, FuncsError> {
    check_indices(l, m, n)?;
    let a = (l - n).as_int().unwrap();
    let b = (l + m).as_int().unwrap();
    let d = (n - m).as_int().unwrap();
    let v = weight_sum(a, b, d, (tau / 2.0).cosh(), (tau / 2.0).sinh(), false);
    Ok(C64::new(pref_sqrt(l, m, n) * v, 0.0))
}

const SERIES_MAX: usize = 8000;

/// Jacobi function with arbitrary complex degree l, for m - n integer. For
/// nonnegative half-integer degree the series terminates and reproduces
/// [`jacobi_p`]; for the principal series degree -1/2 + i rho it is the
/// conical function, and for -1/2 - sigma the supplementary-series kernel.
///
/// Evaluation: the ascending series in tanh^2(tau/2) (symmetric in m, n, so
/// indices are normalized to n >= m), whose terms cancel increasingly badly
/// as |Im l| tau grows. When the tracked rounding estimate exceeds the
/// tolerance the two-wave connection form in sech^2(tau/2) takes over.
pub fn jacobi_gen(
    l: C64,
    m: HalfInt,
    n: HalfInt,
    tau: f64,
    tol: f64,
) -> Result<SeriesResult, FuncsError> {
    if !m.same_parity(n) {
        return Err(FuncsError::IndexOutOfRange(format!(
            "m - n must be an integer: m={m}, n={n}"
        )));
    }
    // the defining series is invariant under m <-> n (shift of the summation
    // index); normalize so the tanh exponent n - m is nonnegative
    let (m, n) = if n >= m { (m, n) } else { (n, m) };
    // at degrees where a prefactor gamma sits exactly on a pole (for
    // instance rho = 0 with half-integer indices) the formula degenerates
    // to 0 * inf while the function itself is finite; step off the pole,
    // the value is even in the offset so the perturbation is O(1e-14)
    let one = C64::new(1.0, 0.0);
    let degenerate_pref = [m.as_f64(), -m.as_f64(), n.as_f64(), -n.as_f64()]
        .iter()
        .any(|&w| crate::special::near_nonpos_int(l + (1.0 + w) * one, 1e-10));
    let l = if degenerate_pref { l + 1e-7 * one } else { l };
    let direct = jacobi_gen_ascending(l, m, n, tau, tol)?;
    if direct.est_error <= tol || tau.abs() < 1e-12 {
        return Ok(direct);
    }
    // the connection form needs gamma(+-(1+2l)) off the poles; near-real
    // degrees do not suffer the cancellation anyway
    let gamma_exp = 1.0 + 2.0 * l.re;
    let near_integer_exp = l.im.abs() < 0.25 && (gamma_exp - gamma_exp.round()).abs() < 1e-8;
    if near_integer_exp {
        return Ok(direct);
    }
    let connected = jacobi_gen_connection(l, m, n, tau, tol)?;
    if connected.est_error < direct.est_error {
        Ok(connected)
    } else {
        Ok(direct)
    }
}

fn jacobi_gen_prefactor(l: C64, m: HalfInt, n: HalfInt) -> C64 {
    let mf = m.as_f64();
    let nf = n.as_f64();
    let one = C64::new(1.0, 0.0);
    // sqrt(G(l-m+1) G(l+m+1) G(l-n+1) G(l+n+1)) via log-gamma, smooth in l
    (0.5 * (lgamma_c(l + (1.0 - mf) * one)
        + lgamma_c(l + (1.0 + mf) * one)
        + lgamma_c(l + (1.0 - nf) * one)
        + lgamma_c(l + (1.0 + nf) * one)))
    .exp()
}

/// Ascending series in tanh^2(tau/2); requires n >= m. The returned
/// est_error includes a rounding term eps * maxterm / |sum| that exposes
/// the cancellation at large |Im l| tau.
fn jacobi_gen_ascending(
    l: C64,
    m: HalfInt,
    n: HalfInt,
    tau: f64,
    tol: f64,
) -> Result<SeriesResult, FuncsError> {
    let mf = m.as_f64();
    let nf = n.as_f64();
    let one = C64::new(1.0, 0.0);
    let pref = jacobi_gen_prefactor(l, m, n);
    let ch = (tau / 2.0).cosh();
    let th = (tau / 2.0).tanh();
    let cosh_pow = (2.0 * l * ch.ln()).exp();

    let d = (n - m).as_int().unwrap(); // >= 0
                                       // term_s = th^{d+2s} / (s! (d+s)! Gamma(l+1-n-s) Gamma(l+1+m-s)),
                                       // advanced multiplicatively to avoid overflowing gamma intermediates
    let mut term = th.powi(d as i32) * rgamma(l + (1.0 - nf) * one) * rgamma(l + (1.0 + mf) * one)
        / factorial(d as usize);
    let mut sum = C64::new(0.0, 0.0);
    let mut small = 0u32;
    let mut terms = 0usize;
    let mut max_mag = 0.0f64;
    let mut last_mag = 0.0f64;
    let mut ratio: f64 = 0.0;
    for s in 0..(SERIES_MAX as i64) {
        let sf = s as f64;
        sum += term;
        terms += 1;
        let mag = term.norm();
        max_mag = max_mag.max(mag);
        if last_mag > 0.0 {
            ratio = ratio.max(mag / last_mag).min(0.95);
        }
        last_mag = mag;
        let q = if ratio > 0.0 {
            ratio
        } else {
            (th * th).max(0.1)
        };
        // stop on the geometric tail bound, not the bare term, so the
        // reported estimate respects the requested tolerance
        if mag * q / (1.0 - q) <= tol * sum.norm().max(f64::MIN_POSITIVE) {
            small += 1;
            if small >= 3 {
                let scale = sum.norm().max(f64::MIN_POSITIVE);
                let tail = mag * q / (1.0 - q) / scale;
                let rounding = 2.0 * f64::EPSILON * max_mag * (terms as f64).sqrt() / scale;
                return Ok(SeriesResult {
                    value: pref * cosh_pow * sum,
                    terms_used: terms,
                    converged: tail.max(rounding) <= tol,
                    est_error: tail.max(rounding),
                });
            }
        } else {
            small = 0;
        }
        term *= (th * th) * (l - (nf + sf) * one) * (l + (mf - sf) * one)
            / ((sf + 1.0) * (d as f64 + sf + 1.0));
    }
    Err(FuncsError::NoConvergence(format!(
        "jacobi series did not converge for l={l}, m={m}, n={n}, tau={tau}"
    )))
}

/// Two-wave connection form: with q = tanh^2(tau/2), x = sech^2(tau/2),
/// a = n - l, b = -l - m, c = n - m + 1, gamma = c - a - b = 1 + 2l:
/// 2F1(a,b;c;q) = A 2F1(a,b;1-gamma;x) + B x^gamma 2F1(c-a,c-b;1+gamma;x),
/// A = G(c)G(gamma)/(G(c-a)G(c-b)), B = G(c)G(-gamma)/(G(a)G(b)).
/// Requires n >= m; effective for large tau where x is small.
fn jacobi_gen_connection(
    l: C64,
    m: HalfInt,
    n: HalfInt,
    tau: f64,
    tol: f64,
) -> Result<SeriesResult, FuncsError> {
    let mf = m.as_f64();
    let nf = n.as_f64();
    let one = C64::new(1.0, 0.0);
    let d = (n - m).as_int().unwrap();
    let ch = (tau / 2.0).cosh();
    let th = (tau / 2.0).tanh().abs();
    let x = 1.0 / (ch * ch);
    let gamma = 1.0 + 2.0 * l;
    let a = nf - l;
    let b = -l - mf;
    let c = (d as f64 + 1.0) * one;

    // K = pref / (G(l+1-n) G(l+1+m) d!) so that P = K cosh^{2l} th^d 2F1
    let k_pref =
        jacobi_gen_prefactor(l, m, n) * rgamma(l + (1.0 - nf) * one) * rgamma(l + (1.0 + mf) * one)
            / factorial(d as usize);
    let log_gc = lgamma_c(c);
    let coef_a = (log_gc + lgamma_c(gamma) - lgamma_c(c - a) - lgamma_c(c - b)).exp();
    let coef_b = (log_gc + lgamma_c(-gamma) - lgamma_c(a) - lgamma_c(b)).exp();

    // the two waves can partly cancel, so the sub-series run tighter
    let (f1, e1, t1) = hyp2f1_tracked(a, b, one - gamma, x, tol / 20.0)?;
    let (f2, e2, t2) = hyp2f1_tracked(c - a, c - b, one + gamma, x, tol / 20.0)?;
    let x_pow_gamma = (gamma * x.ln()).exp();
    let wave1 = coef_a * f1;
    let wave2 = coef_b * x_pow_gamma * f2;
    let f_total = wave1 + wave2;
    let scale = f_total.norm().max(f64::MIN_POSITIVE);
    let est = (e1 * wave1.norm() + e2 * wave2.norm()) / scale
        + 2.0 * f64::EPSILON * (wave1.norm() + wave2.norm()) / scale;
    let cosh_pow = (2.0 * l * ch.ln()).exp();
    let value = k_pref * cosh_pow * th.powi(d as i32) * f_total;
    // tanh < 0 only matters through odd powers; tau < 0 with odd d flips sign
    let value = if tau < 0.0 && d % 2 != 0 {
        -value
    } else {
        value
    };
    Ok(SeriesResult {
        value,
        terms_used: t1 + t2,
        converged: est <= tol,
        est_error: est,
    })
}

/// 2F1 by direct summation with cancellation tracking; |z| < 1 required.
fn hyp2f1_tracked(
    a: C64,
    b: C64,
    c: C64,
    z: f64,
    tol: f64,
) -> Result<(C64, f64, usize), FuncsError> {
    let mut term = C64::new(1.0, 0.0);
    let mut sum = C64::new(0.0, 0.0);
    let mut max_mag = 0.0f64;
    let mut small = 0u32;
    let tailfac = (z / (1.0 - z)).max(0.2);
    for k in 0..SERIES_MAX {
        let kf = k as f64;
        sum += term;
        let mag = term.norm();
        max_mag = max_mag.max(mag);
        if mag * tailfac <= tol * sum.norm().max(f64::MIN_POSITIVE) {
            small += 1;
            if small >= 3 {
                let scale = sum.norm().max(f64::MIN_POSITIVE);
                let tail = mag * tailfac / scale;
                let rounding = 2.0 * f64::EPSILON * max_mag * ((k + 1) as f64).sqrt() / scale;
                return Ok((sum, tail.max(rounding), k + 1));
            }
        } else {
            small = 0;
        }
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * z;
    }
    Err(FuncsError::NoConvergence(
        "connection-series 2F1 did not converge".into(),
    ))
}

/// Discrete-series radial function: the square-integrable eigenfunction of
/// the (m, n) hyperbolic equation with eigenvalue l(l-1),
///   K^l_mn(tau) = sech^{2l}(tau/2) tanh^{|n-m|}(tau/2)
///                 2F1(l - mu, l + nu; 2l; sech^2(tau/2)),
/// mu <= nu the sorted absolute indices. The 2F1 terminates (mu >= l), so
/// the value is an exact finite sum; the function decays like
/// cosh^{-2l}(tau/2) and is regular at tau = 0. These are the kernels of
/// the discrete terms of the expansion theorem.
pub fn jacobi_discrete(l: HalfInt, m: HalfInt, n: HalfInt, tau: f64) -> Result<C64, FuncsError> {
    if m.twice() * n.twice() <= 0 && !(m == HalfInt::ZERO && n == HalfInt::ZERO) {
        return Err(FuncsError::IndexOutOfRange(format!(
            "discrete kernels need m n > 0: m={m}, n={n}"
        )));
    }
    let (mu, nu) = {
        let (am, an) = (m.abs(), n.abs());
        if am <= an {
            (am, an)
        } else {
            (an, am)
        }
    };
    if l > mu || !l.same_parity(mu) || l <= HalfInt::ZERO {
        return Err(FuncsError::IndexOutOfRange(format!(
            "need 0 < l <= min(|m|, |n|) with integer offsets: l={l}, m={m}, n={n}"
        )));
    }
    let d = (nu - mu).as_int().unwrap();
    let ch = (tau / 2.0).cosh();
    let x = 1.0 / (ch * ch);
    let a = C64::new((l - mu).as_f64(), 0.0);
    let b = C64::new((l + nu).as_f64(), 0.0);
    let c = C64::new(2.0 * l.as_f64(), 0.0);
    let f = hyp2f1(a, b, c, C64::new(x, 0.0), 1e-15)?;
    let th = (tau / 2.0).tanh();
    Ok(C64::new(
        x.powf(l.as_f64()) * th.powi(d as i32) * f.value.re,
        0.0,
    ))
}

/// Conical function: Jacobi function of degree -1/2 + i rho. The kernel of
/// the continuous transform; for m = n = 0 it equals the classical Legendre
/// conical function P_{-1/2 + i rho}(cosh tau).
pub fn conical_p(
    rho: f64,
    m: HalfInt,
    n: HalfInt,
    tau: f64,
    tol: f64,
) -> Result<SeriesResult, FuncsError> {
    jacobi_gen(C64::new(-0.5, rho), m, n, tau, tol)
}

/// Supplementary-series kernel: degree -1/2 - sigma, i.e. the conical
/// function continued to rho = i sigma.
pub fn supp_p(
    sigma: f64,
    m: HalfInt,
    n: HalfInt,
    tau: f64,
    tol: f64,
) -> Result<SeriesResult, FuncsError> {
    jacobi_gen(C64::new(-0.5 - sigma, 0.0), m, n, tau, tol)
}

/// Hyperspherical function Z^l_mn(theta, tau): the (theta, tau) core of the
/// SL(2,C) matrix element, evaluated as the literal nested sum over k with
/// inner j and s sums.
pub fn hyper_z(
    l: HalfInt,
    m: HalfInt,
    n: HalfInt,
    theta: f64,
    tau: f64,
) -> Result<C64, FuncsError> {
    check_indices(l, m, n)?;
    let (ct, st) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let (ch, sh) = ((tau / 2.0).cosh(), (tau / 2.0).sinh());
    let mut acc = C64::new(0.0, 0.0);
    for k in HalfInt::weights(l) {
        let pref = pref_sqrt(l, m, k) * pref_sqrt(l, k, n);
        // theta factor: indices (m, k)
        let (a1, b1, d1) = (
            (l - m).as_int().unwrap(),
            (l + k).as_int().unwrap(),
            (m - k).as_int().unwrap(),
        );
        // tau factor: indices (k, n)
        let (a2, b2, d2) = (
            (l - n).as_int().unwrap(),
            (l + k).as_int().unwrap(),
            (n - k).as_int().unwrap(),
        );
        let f_theta = weight_sum(a1, b1, d1, ct, st, true);
        let f_tau = weight_sum(a2, b2, d2, ch, sh, false);
        acc += i_pow(d1) * pref * f_theta * f_tau;
    }
    Ok(acc)
}

/// Z^l_mn through the factorization sum_k P^l_mk(cos theta) P^l_kn(cosh tau).
pub fn hyper_z_factored(
    l: HalfInt,
    m: HalfInt,
    n: HalfInt,
    theta: f64,
    tau: f64,
) -> Result<C64, FuncsError> {
    check_indices(l, m, n)?;
    let mut acc = C64::new(0.0, 0.0);
    for k in HalfInt::weights(l) {
        acc += sph_p(l, m, k, theta)? * jacobi_p(l, k, n, tau)?;
    }
    Ok(acc)
}

/// One factor of the hypergeometric form: pref * cos^{2l} tan^{m-n} 2F1 with
/// the index swap m,n -> -m,-n applied when m < n so the tan power and the
/// lower 2F1 parameter stay regular.
#[allow(clippy::too_many_arguments)]
fn factor_2f1(
    l: HalfInt,
    m: HalfInt,
    n: HalfInt,
    half_c: f64,
    half_s: f64,
    z: C64,
    hyperbolic: bool,
    tol: f64,
) -> Result<C64, FuncsError> {
    let (m, n) = if m >= n { (m, n) } else { (-m, -n) };
    let (lf, mf, nf) = (l.as_f64(), m.as_f64(), n.as_f64());
    let d = (m - n).as_int().unwrap(); // >= 0
    let a = C64::new(mf - lf, 0.0);
    let b = C64::new(-lf - nf, 0.0);
    let c = C64::new(d as f64 + 1.0, 0.0);
    let f = hyp2f1(a, b, c, z, tol)?.value;
    let ratio = (factorial((l + m).as_int().unwrap() as usize)
        * factorial((l - n).as_int().unwrap() as usize)
        / (factorial((l - m).as_int().unwrap() as usize)
            * factorial((l + n).as_int().unwrap() as usize)))
    .sqrt();
    let tan_pow = (half_s / half_c).powi(d as i32);
    let cos_pow = half_c.powi(l.twice() as i32);
    let phase = if hyperbolic {
        C64::new(1.0, 0.0)
    } else {
        i_pow(d)
    };
    Ok(phase * ratio / factorial(d as usize) * cos_pow * tan_pow * f)
}

/// Z^l_mn through products of Gauss hypergeometric series (one 2F1 in
/// -tan^2(theta/2), one in tanh^2(tau/2) per k). Conditioning degrades as
/// theta approaches pi where the tan argument grows; the power-sum route
/// [`hyper_z`] has no such restriction.
pub fn hyper_z_2f1(
    l: HalfInt,
    m: HalfInt,
    n: HalfInt,
    theta: f64,
    tau: f64,
    tol: f64,
) -> Result<C64, FuncsError> {
    check_indices(l, m, n)?;
    let (ct, st) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let (ch, sh) = ((tau / 2.0).cosh(), (tau / 2.0).sinh());
    let zt = C64::new(-(st / ct) * (st / ct), 0.0);
    let zh = C64::new((sh / ch) * (sh / ch), 0.0);
    let mut acc = C64::new(0.0, 0.0);
    for k in HalfInt::weights(l) {
        let f_theta = factor_2f1(l, m, k, ct, st, zt, false, tol)?;
        let f_tau = factor_2f1(l, n, k, ch, sh, zh, true, tol)?;
        acc += f_theta * f_tau;
    }
    Ok(acc)
}

/// Generalized hyperspherical function M^l_mn(g) =
/// e^{-m(eps + i phi)} Z^l_mn e^{-n(veps + i psi)}: the full matrix element
/// of the finite-dimensional representation.
pub fn hyper_m(
    l: HalfInt,
    m: HalfInt,
    n: HalfInt,
    a: &ComplexEulerAngles,
) -> Result<C64, FuncsError> {
    let z = hyper_z(l, m, n, a.theta, a.tau)?;
    Ok(phase_factor(m, a.eps, a.phi) * z * phase_factor(n, a.veps, a.psi))
}

/// e^{-w (re + i im)}
fn phase_factor(w: HalfInt, re: f64, im: f64) -> C64 {
    let wf = w.as_f64();
    C64::new(-wf * re, -wf * im).exp()
}

/// Zonal hyperspherical function Z^l_00; defined for integer l >= 0.
pub fn zonal_z(l: HalfInt, theta: f64, tau: f64) -> Result<C64, FuncsError> {
    if !l.is_integer() || l.is_negative() {
        return Err(FuncsError::IndexOutOfRange(format!(
            "zonal function needs integer l >= 0, got {l}"
        )));
    }
    hyper_z(l, HalfInt::ZERO, HalfInt::ZERO, theta, tau)
}

/// Associated hyperspherical function Z^m_l = Z^l_m0, a function on the
/// two-dimensional complex sphere.
///
/// For integer l this is the n = 0 column of the representation matrix. For
/// half-integer l (the extension used by spinor fields) the tau factor
/// carries fractional powers of tanh(tau/2); that branch needs tau > 0, and
/// the value at tau = 0 is taken to be 0, matching the Kronecker structure
/// of the integer case.
pub fn assoc_z(l: HalfInt, m: HalfInt, theta: f64, tau: f64) -> Result<C64, FuncsError> {
    if m.abs() > l {
        return Err(FuncsError::IndexOutOfRange(format!(
            "|m| > l: l={l}, m={m}"
        )));
    }
    if l.is_integer() {
        return hyper_z(l, m, HalfInt::ZERO, theta, tau);
    }
    if !l.same_parity(m) {
        return Err(FuncsError::IndexOutOfRange(format!(
            "l - m must be an integer: l={l}, m={m}"
        )));
    }
    if tau == 0.0 {
        return Ok(C64::new(0.0, 0.0));
    }
    if tau < 0.0 {
        return Err(FuncsError::Domain(
            "associated function with half-integer l needs tau >= 0 (fractional tanh powers)"
                .into(),
        ));
    }
    let mut acc = C64::new(0.0, 0.0);
    for k in HalfInt::weights(l) {
        acc += sph_p(l, m, k, theta)? * assoc_jacobi_frac(l, k, tau)?;
    }
    Ok(acc)
}

/// The n = 0 Jacobi factor continued to half-integer l:
/// Gamma(l+1) sqrt(Gamma(l-k+1) Gamma(l+k+1)) cosh^{2l} tanh^{-k}
///   sum_s tanh^{2s} / (s! Gamma(l-s+1) Gamma(l+k-s+1) Gamma(s-k+1)).
fn assoc_jacobi_frac(l: HalfInt, k: HalfInt, tau: f64) -> Result<C64, FuncsError> {
    let lf = l.as_f64();
    let kf = k.as_f64();
    let gl1 =
        special::cgamma(C64::new(lf + 1.0, 0.0)).map_err(|e| FuncsError::Domain(e.to_string()))?;
    let pref = gl1.re
        * (factorial((l - k).as_int().unwrap() as usize)
            * factorial((l + k).as_int().unwrap() as usize))
        .sqrt();
    let ch = (tau / 2.0).cosh();
    let th = (tau / 2.0).tanh();
    let cosh_pow = (2.0 * lf * ch.ln()).exp();
    let th_base = th.ln();
    let mut sum = 0.0f64;
    let mut small = 0u32;
    for s in 0..SERIES_MAX {
        let sf = s as f64;
        let term = (th_base * (2.0 * sf - kf)).exp()
            * rgamma(C64::new(lf - sf + 1.0, 0.0)).re
            * rgamma(C64::new(lf + kf - sf + 1.0, 0.0)).re
            * rgamma(C64::new(sf - kf + 1.0, 0.0)).re
            / factorial(s);
        sum += term;
        if term.abs() <= 1e-14 * sum.abs().max(f64::MIN_POSITIVE) {
            small += 1;
            if small >= 3 {
                return Ok(C64::new(pref * cosh_pow * sum, 0.0));
            }
        } else {
            small = 0;
        }
    }
    Err(FuncsError::NoConvergence(format!(
        "associated Jacobi factor did not converge: l={l}, k={k}, tau={tau}"
    )))
}

/// Dense representation matrix, rows indexed by m and columns by n, both
/// ascending from -l to l.
#[derive(Debug, Clone, PartialEq)]
pub struct RepMatrix {
    pub label: RepLabel,
    pub dim_row: usize,
    pub dim_col: usize,
    pub entries: Vec<C64>,
}

impl RepMatrix {
    pub fn l(&self) -> HalfInt {
        match self.label {
            RepLabel::FiniteDim { l, .. } => l,
            _ => unreachable!("matrix representations are built for finite labels"),
        }
    }

    fn idx(&self, l: HalfInt, m: HalfInt, n: HalfInt) -> usize {
        let row = ((m - (-l)).twice() / 2) as usize;
        let col = ((n - (-l)).twice() / 2) as usize;
        row * self.dim_col + col
    }

    pub fn get(&self, m: HalfInt, n: HalfInt) -> C64 {
        self.entries[self.idx(self.l(), m, n)]
    }

    /// Matrix product; labels must match.
    pub fn mul(&self, other: &RepMatrix) -> RepMatrix {
        assert_eq!(self.dim_col, other.dim_row);
        let mut entries = vec![C64::new(0.0, 0.0); self.dim_row * other.dim_col];
        for r in 0..self.dim_row {
            for c in 0..other.dim_col {
                let mut acc = C64::new(0.0, 0.0);
                for k in 0..self.dim_col {
                    acc +=
                        self.entries[r * self.dim_col + k] * other.entries[k * other.dim_col + c];
                }
                entries[r * other.dim_col + c] = acc;
            }
        }
        RepMatrix {
            label: self.label,
            dim_row: self.dim_row,
            dim_col: other.dim_col,
            entries,
        }
    }

    pub fn max_entry_distance(&self, other: &RepMatrix) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Max-norm deviation of M trans(conj(M)) from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.dim_row;
        let mut worst = 0.0f64;
        for r in 0..n {
            for c in 0..n {
                let mut acc = C64::new(0.0, 0.0);
                for k in 0..n {
                    acc += self.entries[r * n + k] * self.entries[c * n + k].conj();
                }
                let target = if r == c { 1.0 } else { 0.0 };
                worst = worst.max((acc - target).norm());
            }
        }
        worst
    }
}

/// The (2l+1) x (2l+1) matrix T_l(g) of generalized hyperspherical functions.
pub fn rep_matrix(l: HalfInt, a: &ComplexEulerAngles) -> Result<RepMatrix, FuncsError> {
    if l.is_negative() {
        return Err(FuncsError::IndexOutOfRange(format!("l = {l} < 0")));
    }
    let dim = HalfInt::dim(l);
    let mut entries = Vec::with_capacity(dim * dim);
    for m in HalfInt::weights(l) {
        for n in HalfInt::weights(l) {
            entries.push(hyper_m(l, m, n, a)?);
        }
    }
    Ok(RepMatrix {
        label: RepLabel::FiniteDim {
            l,
            ldot: HalfInt::ZERO,
        },
        dim_row: dim,
        dim_col: dim,
        entries,
    })
}

/// Principal-series hyperspherical function
/// Z^{-1/2 + i rho}_mn = sum_k P^{lambda/2}_mk(cos theta) * conical(rho, k, n),
/// the k sum running over -lambda/2 .. lambda/2.
pub fn principal_z(
    lambda: i64,
    rho: f64,
    m: HalfInt,
    n: HalfInt,
    theta: f64,
    tau: f64,
    tol: f64,
) -> Result<SeriesResult, FuncsError> {
    let lh = HalfInt::from_twice(lambda);
    if lh.is_negative() {
        return Err(FuncsError::IndexOutOfRange(format!(
            "lambda = {lambda} < 0"
        )));
    }
    if m.abs() > lh || !m.same_parity(lh) {
        return Err(FuncsError::IndexOutOfRange(format!(
            "need |m| <= lambda/2 with lambda/2 - m integer: lambda/2={lh}, m={m}"
        )));
    }
    if !m.same_parity(n) {
        return Err(FuncsError::IndexOutOfRange(format!(
            "m - n must be an integer: m={m}, n={n}"
        )));
    }
    let mut value = C64::new(0.0, 0.0);
    let mut terms = 0usize;
    let mut abs_err = 0.0f64;
    let mut converged = true;
    for k in HalfInt::weights(lh) {
        let p = sph_p(lh, m, k, theta)?;
        let c = conical_p(rho, k, n, tau, tol)?;
        value += p * c.value;
        terms += c.terms_used;
        abs_err += c.est_error * c.value.norm() * p.norm();
        converged &= c.converged;
    }
    Ok(SeriesResult {
        value,
        terms_used: terms,
        converged,
        est_error: abs_err / value.norm().max(f64::MIN_POSITIVE),
    })
}

/// Which Appell decomposition to use for the diagonal elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AppellVariant {
    F4,
    F2,
}

/// Diagonal hyperspherical function Z^l_mm computed through the Appell
/// decomposition: each k term is a product of two 2F1 factors expanded into
/// an r sum of F4 (or F2) per the Burchnall-Chaundy factorizations.
pub fn diag_z_appell(
    l: HalfInt,
    m: HalfInt,
    theta: f64,
    tau: f64,
    variant: AppellVariant,
    tol: f64,
) -> Result<SeriesResult, FuncsError> {
    check_indices(l, m, m)?;
    let (ct, st) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let (ch, sh) = ((tau / 2.0).cosh(), (tau / 2.0).sinh());
    if ct == 0.0 {
        return Err(FuncsError::Domain(
            "Appell route needs theta < pi (tan form)".into(),
        ));
    }
    let x = C64::new(-(st / ct) * (st / ct), 0.0);
    let y = C64::new((sh / ch) * (sh / ch), 0.0);
    let lf = l.as_f64();
    let cos_pow = ct.powi(l.twice() as i32);
    let cosh_pow = ch.powi(l.twice() as i32);
    let mut value = C64::new(0.0, 0.0);
    let mut terms = 0usize;
    let mut est = 0.0f64;
    let mut converged = true;
    for k in HalfInt::weights(l) {
        // swap to (-m, -k) when k > m so tan exponents and 2F1 lower
        // parameters stay regular; P and the tau factor are both invariant
        let (mm, kk) = if k <= m { (m, k) } else { (-m, -k) };
        let (mf, kf) = (mm.as_f64(), kk.as_f64());
        let d = (mm - kk).as_int().unwrap(); // >= 0
        let alpha = C64::new(mf - lf, 0.0);
        let beta = C64::new(-lf - kf, 0.0);
        let gamma = C64::new(d as f64 + 1.0, 0.0);
        let ratio_theta = (factorial((l + mm).as_int().unwrap() as usize)
            * factorial((l - kk).as_int().unwrap() as usize)
            / (factorial((l - mm).as_int().unwrap() as usize)
                * factorial((l + kk).as_int().unwrap() as usize)))
        .sqrt();
        let ratio_tau = ratio_theta; // same index pattern for n = m
        let k_pref = i_pow(d)
            * ratio_theta
            * ratio_tau
            * (st / ct).powi(d as i32)
            * (sh / ch).powi(d as i32)
            / (factorial(d as usize) * factorial(d as usize));

        // r sum of the Burchnall-Chaundy expansion
        let r_max = (l - m).as_int().unwrap() + 1;
        let mut pre = C64::new(1.0, 0.0);
        let mut acc = C64::new(0.0, 0.0);
        for r in 0..=r_max {
            let rf = r as f64;
            if r > 0 {
                let rr = rf - 1.0;
                let step = match variant {
                    AppellVariant::F4 => {
                        let delta = gamma + gamma - alpha - beta - 1.0;
                        (alpha + rr) * (beta + rr) * (delta + rr)
                            / ((gamma + rr) * (gamma + rr) * rf)
                            * x
                            * y
                    }
                    AppellVariant::F2 => {
                        -(alpha + rr) * (beta + rr) * (beta + rr)
                            / ((gamma + rr) * (gamma + rr) * rf)
                            * x
                            * y
                    }
                };
                pre *= step;
            }
            if pre.norm() == 0.0 {
                break;
            }
            let f = match variant {
                AppellVariant::F4 => appell_f4(
                    alpha + rf,
                    beta + rf,
                    gamma + rf,
                    gamma + rf,
                    x - x * y,
                    y - x * y,
                    tol,
                )?,
                AppellVariant::F2 => appell_f2(
                    alpha + rf,
                    beta + rf,
                    beta + rf,
                    gamma + rf,
                    gamma + rf,
                    x,
                    y,
                    tol,
                )?,
            };
            acc += pre * f.value;
            terms += f.terms_used;
            est += f.est_error * f.value.norm() * pre.norm();
            converged &= f.converged;
        }
        value += k_pref * acc;
    }
    value *= cos_pow * cosh_pow;
    Ok(SeriesResult {
        value,
        terms_used: terms,
        converged,
        est_error: est / value.norm().max(f64::MIN_POSITIVE),
    })
}
