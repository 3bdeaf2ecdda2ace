//! Upper incomplete gamma function `Γ(a, t)` and the error function.

use std::f64::consts::PI;

use super::gamma::gamma_fn;
use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const MAX_ITER: usize = 10_000;
const EPS: f64 = 1e-16;
const TINY: f64 = 1e-300;

/// Lower incomplete gamma `γ(a, x)` by its power series, `a > 0`.
fn lower_series(a: f64, x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let mut denom = a;
    let mut term = 1.0 / a;
    let mut sum = term;
    for _ in 0..MAX_ITER {
        denom += 1.0;
        term *= x / denom;
        sum += term;
        if term.abs() < sum.abs() * EPS {
            break;
        }
    }
    sum * (a * x.ln() - x).exp()
}

/// `Γ(a, x)` by modified Lentz evaluation of the Legendre continued fraction.
/// Valid for any real `a` when `x > 0`; converges quickly once `x > a + 1`.
fn upper_continued_fraction(a: f64, x: f64) -> f64 {
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            break;
        }
    }
    (a * x.ln() - x).exp() * h
}

/// Exponential integral `E₁(x) = Γ(0, x)` by its convergent series, `0 < x ≤ ~2`.
fn exp_integral_series(x: f64) -> f64 {
    let mut sum = 0.0;
    let mut term = 1.0;
    for k in 1..MAX_ITER {
        term *= -x / k as f64;
        let contrib = term / k as f64;
        sum += contrib;
        if contrib.abs() < sum.abs().max(1.0) * EPS {
            break;
        }
    }
    -EULER_GAMMA - x.ln() - sum
}

/// Upper incomplete gamma `Γ(a, t) = ∫_t^∞ s^{a-1} e^{-s} ds`.
///
/// `a` may be zero or negative as long as `t > 0`. Non-positive `a` below the
/// continued-fraction region is reached by downward recurrence from
/// `a + n ∈ (0, 1]` (or from `E₁` when `a` is an integer).
pub fn upper_incomplete_gamma(a: f64, t: f64) -> Result<f64> {
    if t.is_nan() || a.is_nan() || t < 0.0 {
        return Err(Error::domain(
            "upper_incomplete_gamma",
            format!("t = {t} must be non-negative"),
        ));
    }
    if t == 0.0 {
        if a <= 0.0 {
            return Err(Error::domain(
                "upper_incomplete_gamma",
                format!("Γ({a}, 0) diverges for a ≤ 0"),
            ));
        }
        return gamma_fn(a);
    }
    if t.is_infinite() {
        return Ok(0.0);
    }

    let value = if t > a + 1.0 && t > 0.5 {
        upper_continued_fraction(a, t)
    } else if a > 0.0 {
        gamma_fn(a)? - lower_series(a, t)
    } else {
        let steps = (-a).ceil();
        let top = a + steps;
        let mut g = if top == 0.0 {
            exp_integral_series(t)
        } else {
            gamma_fn(top)? - lower_series(top, t)
        };
        let ln_t = t.ln();
        let mut b = top;
        // Γ(b-1, t) = (Γ(b, t) - t^{b-1} e^{-t}) / (b - 1)
        for _ in 0..steps as usize {
            g = (g - ((b - 1.0) * ln_t - t).exp()) / (b - 1.0);
            b -= 1.0;
        }
        g
    };
    if !value.is_finite() {
        return Err(Error::Overflow("upper_incomplete_gamma"));
    }
    Ok(value.max(0.0))
}

/// Error function, via `erf(x) = γ(½, x²)/√π`.
pub fn erf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.0 {
        return -erf(-x);
    }
    let x2 = x * x;
    if x2 < 1.5 {
        lower_series(0.5, x2) / PI.sqrt()
    } else {
        1.0 - upper_continued_fraction(0.5, x2) / PI.sqrt()
    }
}
