//! Scalar special-function kernels: complex gamma, Gauss and generalized
//! hypergeometric series, Appell double series, Bessel functions.
//!
//! Everything here is plain `f64`/`Complex64` series summation. Terminating
//! series are summed exactly with running Pochhammer products; non-terminating
//! ones are truncated when three consecutive terms fall below the requested
//! relative tolerance (a single small term is not trusted because reciprocal
//! gamma factors can produce isolated zeros).

use crate::halfint::HalfInt;
use num_complex::Complex64;
use thiserror::Error;

pub type C64 = Complex64;

/// Default relative tolerance for scalar kernels.
pub const DEFAULT_TOL: f64 = 1e-12;
/// Default relative tolerance for double (Appell) series.
pub const DEFAULT_TOL_DOUBLE: f64 = 1e-10;

const MAX_TERMS: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecialError {
    #[error("gamma pole at nonpositive integer z = {0}")]
    PoleAtNonpositiveInteger(f64),
    #[error("series does not converge: {0}")]
    NoConvergence(String),
    #[error("lower parameter c = {0} is a nonpositive integer not cancelled by termination")]
    PoleInC(f64),
    #[error("series does not terminate: no upper parameter is a nonpositive integer")]
    NonTerminating,
}

/// Result of a truncated series evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesResult {
    pub value: C64,
    pub terms_used: usize,
    pub converged: bool,
    /// Estimated relative truncation error (0 for exactly terminated sums).
    pub est_error: f64,
}

impl SeriesResult {
    pub fn exact(value: C64, terms_used: usize) -> Self {
        SeriesResult {
            value,
            terms_used,
            converged: true,
            est_error: 0.0,
        }
    }
}

// Lanczos coefficients, g = 10.900511 (Pugh 2004), digits as published.
const LANCZOS_G: f64 = 10.900511;
#[allow(clippy::excessive_precision)]
const LANCZOS_DK: [f64; 11] = [
    2.48574089138753565546e-5,
    1.05142378581721974210,
    -3.45687097222016235469,
    4.51227709466894823700,
    -2.98285225323576655721,
    1.05639711577126713077,
    -1.95428773191645869583e-1,
    1.70970543404441224307e-2,
    -5.71926117404305781283e-4,
    4.63399473359905636708e-6,
    -2.71994908488607703910e-9,
];
const TWO_SQRT_E_OVER_PI: f64 = 1.8603827342052657173362492472666631120594218414085755;

fn lanczos_sum(z: C64) -> C64 {
    let mut s = C64::new(LANCZOS_DK[0], 0.0);
    for (i, &dk) in LANCZOS_DK.iter().enumerate().skip(1) {
        s += dk / (z + (i as f64 - 1.0));
    }
    s
}

/// True when `z` is within `eps` of a nonpositive integer.
pub fn near_nonpos_int(z: C64, eps: f64) -> bool {
    z.im.abs() < eps && z.re < 0.5 && (z.re - z.re.round()).abs() < eps
}

/// Complex gamma function, Lanczos approximation with reflection for Re z < 1/2.
pub fn cgamma(z: C64) -> Result<C64, SpecialError> {
    if near_nonpos_int(z, 1e-13) {
        return Err(SpecialError::PoleAtNonpositiveInteger(z.re));
    }
    Ok(cgamma_unchecked(z))
}

fn cgamma_unchecked(z: C64) -> C64 {
    if z.re < 0.5 {
        // Gamma(z) Gamma(1-z) = pi / sin(pi z)
        let pi = std::f64::consts::PI;
        pi / ((pi * z).sin() * cgamma_unchecked(C64::new(1.0, 0.0) - z))
    } else {
        let s = lanczos_sum(z);
        let base = (z - 0.5 + LANCZOS_G) / std::f64::consts::E;
        s * TWO_SQRT_E_OVER_PI * base.powc(z - 0.5)
    }
}

/// Reciprocal gamma 1/Gamma(z); entire, exactly zero at nonpositive integers.
pub fn rgamma(z: C64) -> C64 {
    if near_nonpos_int(z, 1e-13) {
        return C64::new(0.0, 0.0);
    }
    if z.re < 0.5 {
        // 1/Gamma(z) = sin(pi z) Gamma(1-z) / pi
        let pi = std::f64::consts::PI;
        (pi * z).sin() * cgamma_unchecked(C64::new(1.0, 0.0) - z) / pi
    } else {
        1.0 / cgamma_unchecked(z)
    }
}

/// log Gamma(z), continuous on the upper/lower half planes and positive axis.
///
/// For Re z >= 0.5 the Lanczos form is used directly; otherwise the recursion
/// log Gamma(z) = log Gamma(z+k) - sum log(z+j) lifts the argument. The branch
/// is the one analytic along any path with fixed sign of Im z, which is what
/// the conical-function prefactors need for smoothness in rho.
pub fn lgamma_c(z: C64) -> C64 {
    if z.re >= 0.5 {
        let s = lanczos_sum(z);
        let base = (z - 0.5 + LANCZOS_G) / std::f64::consts::E;
        s.ln() + TWO_SQRT_E_OVER_PI.ln() + (z - 0.5) * base.ln()
    } else {
        let k = (1.0 - z.re).ceil() as usize;
        let mut corr = C64::new(0.0, 0.0);
        for j in 0..k {
            corr += (z + j as f64).ln();
        }
        lgamma_c(z + k as f64) - corr
    }
}

/// Factorial as f64; exact through 170!.
pub fn factorial(n: usize) -> f64 {
    let mut p = 1.0f64;
    for k in 2..=n {
        p *= k as f64;
    }
    p
}

fn is_nonpos_int(z: C64) -> Option<i64> {
    if z.im.abs() < 1e-12 && (z.re - z.re.round()).abs() < 1e-9 && z.re.round() <= 0.0 {
        Some(z.re.round() as i64)
    } else {
        None
    }
}

/// Gauss hypergeometric series 2F1(a, b; c; z).
///
/// Terminating cases (a or b a nonpositive integer) are summed exactly for any
/// z; otherwise |z| < 1 is required and the sum is truncated at the requested
/// relative tolerance.
pub fn hyp2f1(a: C64, b: C64, c: C64, z: C64, tol: f64) -> Result<SeriesResult, SpecialError> {
    let na = is_nonpos_int(a);
    let nb = is_nonpos_int(b);
    let n_terms: Option<i64> = match (na, nb) {
        (Some(p), Some(q)) => Some((-p).min(-q)),
        (Some(p), None) => Some(-p),
        (None, Some(q)) => Some(-q),
        (None, None) => None,
    };
    if let Some(nc) = is_nonpos_int(c) {
        // pole in c unless the numerator terminates first
        match n_terms {
            Some(n) if n <= -nc => {}
            _ => return Err(SpecialError::PoleInC(c.re)),
        }
    }

    let mut sum = C64::new(1.0, 0.0);
    let mut term = C64::new(1.0, 0.0);

    if let Some(n) = n_terms {
        for k in 0..n {
            let kf = k as f64;
            term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * z;
            sum += term;
        }
        return Ok(SeriesResult::exact(sum, (n + 1) as usize));
    }

    if z.norm() >= 1.0 {
        return Err(SpecialError::NoConvergence(format!(
            "|z| = {} >= 1 for non-terminating 2F1",
            z.norm()
        )));
    }
    let mut small = 0u32;
    let tailfac = (z.norm() / (1.0 - z.norm())).max(0.2);
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * z;
        sum += term;
        if term.norm() * tailfac <= tol * sum.norm().max(f64::MIN_POSITIVE) {
            small += 1;
            if small >= 3 {
                let est = term.norm() * tailfac / sum.norm().max(f64::MIN_POSITIVE);
                return Ok(SeriesResult {
                    value: sum,
                    terms_used: k + 2,
                    converged: true,
                    est_error: est,
                });
            }
        } else {
            small = 0;
        }
    }
    Err(SpecialError::NoConvergence(
        "2F1 did not reach tolerance".into(),
    ))
}

/// Generalized hypergeometric 3F2(a1, a2, a3; b1, b2; 1), terminating.
///
/// At least one upper parameter must be a nonpositive integer.
pub fn hyp3f2_unit(a1: C64, a2: C64, a3: C64, b1: C64, b2: C64) -> Result<C64, SpecialError> {
    let n = [a1, a2, a3]
        .iter()
        .filter_map(|&a| is_nonpos_int(a).map(|p| -p))
        .min()
        .ok_or(SpecialError::NonTerminating)?;
    let mut sum = C64::new(1.0, 0.0);
    let mut term = C64::new(1.0, 0.0);
    for k in 0..n {
        let kf = k as f64;
        let denom = (b1 + kf) * (b2 + kf) * (kf + 1.0);
        if denom.norm() == 0.0 {
            return Err(SpecialError::PoleInC(if (b1 + kf).norm() == 0.0 {
                b1.re
            } else {
                b2.re
            }));
        }
        term *= (a1 + kf) * (a2 + kf) * (a3 + kf) / denom;
        sum += term;
    }
    Ok(sum)
}

fn terminates(z: C64) -> Option<i64> {
    is_nonpos_int(z).map(|p| -p)
}

/// Appell F2(alpha; beta, beta'; gamma, gamma'; x, y), the double series
/// sum (alpha)_{m+n} (beta)_m (beta')_n / ((gamma)_m (gamma')_n m! n!) x^m y^n.
///
/// Requires |x| + |y| < 1 unless the series terminates in both indices.
#[allow(clippy::too_many_arguments)]
pub fn appell_f2(
    alpha: C64,
    beta: C64,
    betap: C64,
    gamma: C64,
    gammap: C64,
    x: C64,
    y: C64,
    tol: f64,
) -> Result<SeriesResult, SpecialError> {
    let term_m = terminates(alpha).or(terminates(beta));
    let term_n = terminates(alpha).or(terminates(betap));
    let terminating = term_m.is_some() && term_n.is_some();
    if !terminating && x.norm() + y.norm() >= 1.0 {
        return Err(SpecialError::NoConvergence(format!(
            "|x|+|y| = {} >= 1 for non-terminating F2",
            x.norm() + y.norm()
        )));
    }
    // coefficient of x^m y^n built row by row in m with a running n-product
    let coef = |m: i64, n: i64| -> C64 {
        let mut c = C64::new(1.0, 0.0);
        for k in 0..m {
            let kf = k as f64;
            c *= (alpha + kf) * (beta + kf) / ((gamma + kf) * (kf + 1.0));
        }
        for k in 0..n {
            let kf = k as f64;
            c *= (alpha + m as f64 + kf) * (betap + kf) / ((gammap + kf) * (kf + 1.0));
        }
        c
    };
    sum_antidiagonals(coef, x, y, term_m, term_n, tol)
}

/// Appell F4(alpha, beta; gamma, gamma'; x, y), the double series
/// sum (alpha)_{m+n} (beta)_{m+n} / ((gamma)_m (gamma')_n m! n!) x^m y^n.
///
/// Requires sqrt|x| + sqrt|y| < 1 unless terminating.
pub fn appell_f4(
    alpha: C64,
    beta: C64,
    gamma: C64,
    gammap: C64,
    x: C64,
    y: C64,
    tol: f64,
) -> Result<SeriesResult, SpecialError> {
    let term_diag = terminates(alpha).or(terminates(beta));
    let terminating = term_diag.is_some();
    if !terminating && x.norm().sqrt() + y.norm().sqrt() >= 1.0 {
        return Err(SpecialError::NoConvergence(format!(
            "sqrt|x|+sqrt|y| = {} >= 1 for non-terminating F4",
            x.norm().sqrt() + y.norm().sqrt()
        )));
    }
    let coef = |m: i64, n: i64| -> C64 {
        let mut c = C64::new(1.0, 0.0);
        for k in 0..(m + n) {
            let kf = k as f64;
            c *= (alpha + kf) * (beta + kf);
        }
        for k in 0..m {
            let kf = k as f64;
            c /= (gamma + kf) * (kf + 1.0);
        }
        for k in 0..n {
            let kf = k as f64;
            c /= (gammap + kf) * (kf + 1.0);
        }
        c
    };
    sum_antidiagonals(coef, x, y, term_diag, term_diag, tol)
}

/// Sums a double series along anti-diagonals m+n = d with a geometric tail
/// bound taken from the ratio of the last anti-diagonal magnitudes.
fn sum_antidiagonals<F: Fn(i64, i64) -> C64>(
    coef: F,
    x: C64,
    y: C64,
    term_m: Option<i64>,
    term_n: Option<i64>,
    tol: f64,
) -> Result<SeriesResult, SpecialError> {
    let max_d: i64 = match (term_m, term_n) {
        (Some(a), Some(b)) => a + b,
        _ => 400,
    };
    let hard_cap = term_m.is_some() && term_n.is_some();
    let mut sum = C64::new(0.0, 0.0);
    let mut terms = 0usize;
    let mut small = 0u32;
    let mut prev_mag = 0.0f64;
    let mut ratio: f64 = 0.0;
    for d in 0..=max_d {
        let mut diag = C64::new(0.0, 0.0);
        let mut diag_mag = 0.0;
        for m in 0..=d {
            let n = d - m;
            if let Some(tm) = term_m {
                if m > tm {
                    continue;
                }
            }
            if let Some(tn) = term_n {
                if n > tn {
                    continue;
                }
            }
            let t = coef(m, n) * x.powi(m as i32) * y.powi(n as i32);
            diag += t;
            diag_mag += t.norm();
            terms += 1;
        }
        sum += diag;
        if !hard_cap {
            if prev_mag > 0.0 {
                ratio = ratio.max(diag_mag / prev_mag).min(0.95);
            }
            prev_mag = diag_mag;
            let q = if ratio > 0.0 { ratio } else { 0.5 };
            if diag_mag * q / (1.0 - q) <= tol * sum.norm().max(f64::MIN_POSITIVE) {
                small += 1;
                if small >= 3 {
                    let est = diag_mag * q / (1.0 - q) / sum.norm().max(f64::MIN_POSITIVE);
                    return Ok(SeriesResult {
                        value: sum,
                        terms_used: terms,
                        converged: true,
                        est_error: est,
                    });
                }
            } else {
                small = 0;
            }
        }
    }
    if hard_cap {
        Ok(SeriesResult::exact(sum, terms))
    } else {
        Err(SpecialError::NoConvergence(
            "Appell series did not reach tolerance".into(),
        ))
    }
}

/// Bessel function J_nu(x) for real x >= 0 and integer or half-integer order.
///
/// Ascending series for small x (no cancellation there); above that,
/// half-integer orders use the closed trigonometric forms with forward
/// recurrence and integer orders use Miller's backward recurrence.
pub fn bessel_j(order: HalfInt, x: f64, tol: f64) -> f64 {
    debug_assert!(x >= 0.0);
    let twice_order = order.twice();
    if x <= 6.0 {
        return bessel_series_real(twice_order, x, tol);
    }
    if twice_order % 2 == 0 {
        bessel_int_miller(twice_order / 2, x)
    } else {
        bessel_half_recurrence(twice_order, x)
    }
}

fn bessel_series_real(twice_order: i64, x: f64, tol: f64) -> f64 {
    bessel_series_complex(twice_order as f64 / 2.0, C64::new(x, 0.0), tol).re
}

/// Ascending series for J_nu(z), complex argument, any real order.
///
/// J_nu(z) = sum_k (-1)^k (z/2)^{nu+2k} / (k! Gamma(nu+k+1)); reciprocal gamma
/// handles negative integer orders (leading terms vanish).
pub fn bessel_series_complex(order: f64, z: C64, tol: f64) -> C64 {
    if z.norm() == 0.0 {
        return if order == 0.0 {
            C64::new(1.0, 0.0)
        } else if order > 0.0 || (order - order.round()).abs() < 1e-12 {
            C64::new(0.0, 0.0)
        } else {
            // (z/2)^nu with nu < 0 non-integer diverges at 0
            C64::new(f64::INFINITY, 0.0)
        };
    }
    let half = z / 2.0;
    let pow = |p: f64| -> C64 {
        // principal branch of (z/2)^p
        (half.ln() * p).exp()
    };
    let mut sum = C64::new(0.0, 0.0);
    let mut k_fact = 1.0f64;
    let mut small = 0u32;
    let mut k = 0usize;
    while k < 600 {
        if k > 0 {
            k_fact *= k as f64;
        }
        let term = pow(order + 2.0 * k as f64) * rgamma(C64::new(order + k as f64 + 1.0, 0.0))
            / k_fact
            * if k.is_multiple_of(2) { 1.0 } else { -1.0 };
        sum += term;
        if term.norm() <= tol * sum.norm().max(f64::MIN_POSITIVE) && k as f64 > z.norm() / 2.0 {
            small += 1;
            if small >= 3 {
                break;
            }
        } else {
            small = 0;
        }
        k += 1;
    }
    sum
}

fn bessel_half_recurrence(twice_order: i64, x: f64) -> f64 {
    // J_{1/2} and J_{-1/2} in closed form, then nu -> nu +- 1 recurrence.
    let c = (2.0 / (std::f64::consts::PI * x)).sqrt();
    let (mut jm, mut j, mut nu) = if twice_order >= 0 {
        (c * x.cos(), c * x.sin(), 0.5) // J_{-1/2}, J_{1/2}
    } else {
        (c * x.sin(), c * x.cos(), -0.5) // J_{1/2}, J_{-1/2}
    };
    let target = twice_order as f64 / 2.0;
    let step = if twice_order >= 0 { 1.0 } else { -1.0 };
    while (nu - target).abs() > 0.25 {
        let next = (2.0 * nu / x) * j * step - jm;
        jm = j;
        j = next;
        nu += step;
    }
    j
}

fn bessel_int_miller(order: i64, x: f64) -> f64 {
    let n = order.unsigned_abs() as usize;
    let start = (n + 30).max((1.3 * x) as usize + 30);
    // downward recurrence J_{k-1} = (2k/x) J_k - J_{k+1} from a tiny seed,
    // normalized with J0 + 2 J2 + 2 J4 + ... = 1
    let mut vals = vec![0.0f64; start + 2];
    vals[start + 1] = 0.0;
    vals[start] = 1e-280;
    for k in (1..=start).rev() {
        vals[k - 1] = (2.0 * k as f64 / x) * vals[k] - vals[k + 1];
        if vals[k - 1].abs() > 1e250 {
            for v in vals[k - 1..].iter_mut() {
                *v /= 1e250;
            }
        }
    }
    let mut norm = vals[0];
    let mut k = 2;
    while k <= start {
        norm += 2.0 * vals[k];
        k += 2;
    }
    let v = vals[n] / norm;
    if order < 0 && n % 2 == 1 {
        -v
    } else {
        v
    }
}
