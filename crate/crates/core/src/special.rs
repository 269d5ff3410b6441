//! Error-function family evaluated through the scaled complementary error
//! function `erfcx(x) = exp(x^2) erfc(x)`.
//!
//! For `0 <= x < 1` the positive-term series
//! `exp(x^2) erf(x) = (2/sqrt(pi)) * sum_n 2^n x^(2n+1) / (2n+1)!!` is used;
//! for `x >= 1` the Laplace continued fraction for `erfc`, evaluated with the
//! modified Lentz algorithm. Negative arguments go through the reflection
//! `erfc(-x) = 2 - erfc(x)`. Both branches are accurate to a few ulps.

use std::f64::consts::PI;

const FRAC_2_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;
const SERIES_CUTOFF: f64 = 1.0;
const CF_MAX_TERMS: usize = 500;

/// `sum_n 2^n x^(2n+1) / (2n+1)!!`, all terms positive.
fn scaled_erf_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut n = 0.0;
    loop {
        n += 1.0;
        term *= 2.0 * x2 / (2.0 * n + 1.0);
        sum += term;
        if term <= sum * 1e-17 {
            return sum;
        }
    }
}

/// `erfcx(x)` for `x >= 1` by continued fraction.
fn erfcx_continued_fraction(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = x;
    let mut c = f;
    let mut d = 0.0;
    for n in 1..CF_MAX_TERMS {
        let an = 0.5 * n as f64;
        d = x + an * d;
        d = if d == 0.0 { 1.0 / TINY } else { 1.0 / d };
        c = x + an / c;
        if c == 0.0 {
            c = TINY;
        }
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    1.0 / (PI.sqrt() * f)
}

/// Scaled complementary error function `exp(x^2) erfc(x)`.
///
/// Finite for all `x >= -26.6`; overflows to `+inf` below that.
pub fn erfcx(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x >= SERIES_CUTOFF {
        if x.is_infinite() {
            return 0.0;
        }
        erfcx_continued_fraction(x)
    } else if x >= 0.0 {
        (x * x).exp() - FRAC_2_SQRT_PI * scaled_erf_series(x)
    } else {
        2.0 * (x * x).exp() - erfcx(-x)
    }
}

/// Complementary error function.
pub fn erfc(x: f64) -> f64 {
    if x >= 0.0 {
        erfcx(x) * (-x * x).exp()
    } else {
        2.0 - erfc(-x)
    }
}

/// Error function.
pub fn erf(x: f64) -> f64 {
    if x < 0.0 {
        return -erf(-x);
    }
    if x < SERIES_CUTOFF {
        FRAC_2_SQRT_PI * (-x * x).exp() * scaled_erf_series(x)
    } else {
        1.0 - erfc(x)
    }
}

/// `exp(x^2) erf(x)`, the scaled counterpart used by the half-line integrals.
pub fn erf_scaled(x: f64) -> f64 {
    if x < 0.0 {
        return -erf_scaled(-x);
    }
    if x < SERIES_CUTOFF {
        FRAC_2_SQRT_PI * scaled_erf_series(x)
    } else {
        (x * x).exp() - erfcx(x)
    }
}

/// `ln(erfcx(x))` without overflow for large negative `x`.
pub fn ln_erfcx(x: f64) -> f64 {
    if x >= 0.0 {
        erfcx(x).ln()
    } else {
        // erfc(x) lies in (1, 2] here
        x * x + erfc(x).ln()
    }
}

/// `ln(exp(x^2) erf(x))` for `x > 0`.
pub fn ln_erf_scaled(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x < SERIES_CUTOFF {
        erf_scaled(x).ln()
    } else {
        x * x + erf(x).ln()
    }
}

/// `erfc(p) / erfc(q)` evaluated without underflowing numerator and
/// denominator separately.
pub fn erfc_ratio(p: f64, q: f64) -> f64 {
    if p >= 0.0 && q >= 0.0 {
        erfcx(p) / erfcx(q) * ((q - p) * (q + p)).exp()
    } else {
        erfc(p) / erfc(q)
    }
}

/// `erf(p) / erf(q)` for `q > 0`.
pub fn erf_ratio(p: f64, q: f64) -> f64 {
    erf(p) / erf(q)
}
