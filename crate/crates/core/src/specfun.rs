//! Special functions behind the analytic single-particle and Tonks formulas:
//! Gamma, the Kummer functions `M(a, b, z)` and `U(a, 1/2, z)`, and the
//! physicists' Hermite polynomials.
//!
//! `U` is evaluated in three regimes:
//!
//! * `z <= 2`: the connection formula through two `M` series,
//! * `2 < z <= 30`: the Laplace integral representation (double-exponential
//!   quadrature) at `a` shifted into `(1, 2]`, brought back to the requested
//!   `a` by backward recurrence,
//! * `z > 30`: the asymptotic expansion truncated at its smallest term.
//!
//! The middle regime exists because the connection formula cancels
//! catastrophically once `e^z` dwarfs `z^-a`.

use std::f64::consts::{FRAC_PI_2, PI};

use thiserror::Error;

/// Distance from a non-positive integer below which an argument is a pole.
pub const POLE_TOLERANCE: f64 = 1e-14;

const M_SERIES_MAX_TERMS: usize = 500;
const M_SERIES_REL_TOL: f64 = 1e-16;

/// Below this `z`, `U` comes from the connection formula.
const U_CONNECTION_MAX_Z: f64 = 2.0;
/// Above this `z`, `U` comes from the asymptotic series.
pub const U_ASYMPTOTIC_MIN_Z: f64 = 30.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecFunError {
    #[error("argument {0} is a pole (non-positive integer)")]
    Pole(f64),
    #[error("parameter b = {0} is a non-positive integer")]
    InvalidParameter(f64),
    #[error("only b = 1/2 is supported for U, got b = {0}")]
    Domain(f64),
    #[error("non-finite argument")]
    NonFinite,
}

/// Lanczos coefficients (g = 10.900511, n = 11) from Pugh's analysis.
const LANCZOS_G: f64 = 10.900511;
const LANCZOS_DK: [f64; 11] = [
    2.485_740_891_387_535_5e-5,
    1.051_423_785_817_219_7,
    -3.456_870_972_220_162_5,
    4.512_277_094_668_948,
    -2.982_852_253_235_766_4,
    1.056_397_115_771_267,
    -1.954_287_731_916_458_7e-1,
    1.709_705_434_044_412e-2,
    -5.719_261_174_043_057e-4,
    4.633_994_733_599_057e-6,
    -2.719_949_084_886_077_2e-9,
];
/// `2 sqrt(e / pi)`
const TWO_SQRT_E_OVER_PI: f64 = 1.860_382_734_205_265_7;

fn nearest_pole(x: f64) -> Option<f64> {
    if x > 0.5 {
        return None;
    }
    let r = x.round();
    (r <= 0.0 && (x - r).abs() < POLE_TOLERANCE).then_some(r)
}

/// `sin(pi x)` with exact argument reduction, so values near integers keep
/// their relative accuracy.
fn sin_pi(x: f64) -> f64 {
    let n = x.round();
    let r = x - n;
    let s = (PI * r).sin();
    if (n as i64).rem_euclid(2) == 0 {
        s
    } else {
        -s
    }
}

fn lanczos_sum(x: f64) -> f64 {
    LANCZOS_DK
        .iter()
        .enumerate()
        .skip(1)
        .fold(LANCZOS_DK[0], |s, (k, d)| s + d / (x + k as f64 - 1.0))
}

fn gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        PI / (sin_pi(x) * gamma_unchecked(1.0 - x))
    } else {
        let base = (x - 0.5 + LANCZOS_G) / std::f64::consts::E;
        // split the power so that x up to ~170 does not overflow early
        let half = base.powf(0.5 * (x - 0.5));
        lanczos_sum(x) * TWO_SQRT_E_OVER_PI * half * half
    }
}

/// The Gamma function.
pub fn gamma(x: f64) -> Result<f64, SpecFunError> {
    if !x.is_finite() {
        return Err(SpecFunError::NonFinite);
    }
    if let Some(p) = nearest_pole(x) {
        return Err(SpecFunError::Pole(p));
    }
    Ok(gamma_unchecked(x))
}

/// `1 / Gamma(x)`, which is entire: exactly zero at the poles of Gamma.
pub fn rgamma(x: f64) -> f64 {
    if nearest_pole(x).is_some() {
        return 0.0;
    }
    if x < 0.5 {
        sin_pi(x) * gamma_unchecked(1.0 - x) / PI
    } else {
        1.0 / gamma_unchecked(x)
    }
}

/// Kummer's confluent hypergeometric function `M(a, b, z)`.
///
/// Power series for `z >= 0`; for negative `z` the series is taken at `-z`
/// through `M(a, b, z) = e^z M(b - a, b, -z)` so that its terms do not
/// alternate.
pub fn kummer_m(a: f64, b: f64, z: f64) -> Result<f64, SpecFunError> {
    if !(a.is_finite() && b.is_finite() && z.is_finite()) {
        return Err(SpecFunError::NonFinite);
    }
    if nearest_pole(b).is_some() {
        return Err(SpecFunError::InvalidParameter(b));
    }
    if a == 0.0 {
        return Ok(1.0);
    }
    if z < 0.0 && b - a > 0.0 {
        return Ok(z.exp() * m_series(b - a, b, -z));
    }
    Ok(m_series(a, b, z))
}

fn m_series(a: f64, b: f64, z: f64) -> f64 {
    let mut sum = 1.0;
    let mut term = 1.0;
    for n in 0..M_SERIES_MAX_TERMS {
        let nf = n as f64;
        term *= (a + nf) / (b + nf) * z / (nf + 1.0);
        sum += term;
        if term == 0.0 {
            break;
        }
        // terms can still grow while n < z, so only stop once past the peak
        if nf > z && (term / sum).abs() < M_SERIES_REL_TOL {
            break;
        }
    }
    sum
}

/// Tricomi's confluent hypergeometric function `U(a, 1/2, z)` for `z >= 0`.
pub fn kummer_u(a: f64, b: f64, z: f64) -> Result<f64, SpecFunError> {
    if !(a.is_finite() && b.is_finite() && z.is_finite()) {
        return Err(SpecFunError::NonFinite);
    }
    if b != 0.5 || z < 0.0 {
        return Err(if b != 0.5 {
            SpecFunError::Domain(b)
        } else {
            SpecFunError::NonFinite
        });
    }
    Ok(if z <= U_CONNECTION_MAX_Z {
        u_connection(a, z)
    } else if z <= U_ASYMPTOTIC_MIN_Z {
        u_integral_recurrence(a, z)
    } else {
        u_asymptotic(a, z)
    })
}

/// `U(a, 1/2, z) = sqrt(pi) [ M(a, 1/2, z) / Gamma(a + 1/2)
///                           - 2 sqrt(z) M(a + 1/2, 3/2, z) / Gamma(a) ]`
pub(crate) fn u_connection(a: f64, z: f64) -> f64 {
    let first = m_series(a, 0.5, z) * rgamma(a + 0.5);
    let second = 2.0 * z.sqrt() * m_series(a + 0.5, 1.5, z) * rgamma(a);
    PI.sqrt() * (first - second)
}

/// Asymptotic expansion `U(a, b, z) ~ z^-a sum_n (a)_n (a - b + 1)_n / n! (-z)^-n`,
/// summed until the terms start growing again.
pub(crate) fn u_asymptotic(a: f64, z: f64) -> f64 {
    let b = 0.5;
    let c = a - b + 1.0;
    // terms may rise before they fall when a or c is large and negative
    let hump = (-a).max(-c).max(0.0) + 1.0;
    let mut sum = 1.0;
    let mut term: f64 = 1.0;
    for n in 0..400 {
        let nf = n as f64;
        let next = term * (a + nf) * (c + nf) / ((nf + 1.0) * -z);
        if next == 0.0 {
            break;
        }
        if next.abs() > term.abs() && nf > hump {
            break;
        }
        term = next;
        sum += term;
        if (term / sum).abs() < 1e-17 {
            break;
        }
    }
    z.powf(-a) * sum
}

/// Integral representation, valid for `a > 0`:
/// `U(a, b, z) = z^-a / Gamma(a) int_0^inf e^-t t^(a-1) (1 + t/z)^(b-a-1) dt`,
/// evaluated with the exp-sinh substitution `t = exp(pi/2 sinh s)`.
fn u_integral(a: f64, z: f64) -> f64 {
    const STEP: f64 = 1.0 / 32.0;
    const S_MIN: f64 = -5.5;
    const S_MAX: f64 = 2.5;
    let c = 0.5 - a - 1.0;
    let n_lo = (S_MIN / STEP).floor() as i64;
    let n_hi = (S_MAX / STEP).ceil() as i64;
    let mut total = 0.0;
    for k in n_lo..=n_hi {
        let s = k as f64 * STEP;
        let ln_t = FRAC_PI_2 * s.sinh();
        let t = ln_t.exp();
        if t > 750.0 {
            break;
        }
        let jac = t * FRAC_PI_2 * s.cosh();
        total += jac * (-t + (a - 1.0) * ln_t + c * (t / z).ln_1p()).exp();
    }
    z.powf(-a) * rgamma(a) * total * STEP
}

/// Backward recurrence `U(a-1) = (2a + z - b) U(a) - a (a - b + 1) U(a+1)`
/// from two integral-representation values; stable in the decreasing-a
/// direction because `U` is the minimal solution as `a` grows.
fn u_integral_recurrence(a: f64, z: f64) -> f64 {
    let b = 0.5;
    let mut start = a - a.floor() + 1.0;
    if start > 2.0 {
        start -= 1.0;
    }
    if a > start {
        // a in (2, ...]: integral representation applies directly
        return u_integral(a, z);
    }
    let mut upper = u_integral(start + 1.0, z);
    let mut current = u_integral(start, z);
    let mut level = start;
    let steps = (start - a).round() as usize;
    for _ in 0..steps {
        let lower = (2.0 * level + z - b) * current - level * (level - b + 1.0) * upper;
        upper = current;
        current = lower;
        level -= 1.0;
    }
    current
}

/// Physicists' Hermite polynomial `H_n(x)` by three-term recurrence.
pub fn hermite(n: usize, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 2.0 * x;
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}
