//! Turbulence-only closed forms: the kernel approximation (`Lemma1`) and the
//! small-irradiance asymptotes (`Prop1Asymptotic`).

use std::f64::consts::LN_2;

use super::{Method, MetricResult, ZetaChoice};
use crate::channels::{EwParams, LinkBudget};
use crate::error::{Error, Result};
use crate::special_math::gamma_fn;

/// `x = 1/√(γ₀L²)`
fn inv_amplitude(link: &LinkBudget) -> f64 {
    1.0 / link.received_scale().sqrt()
}

/// Approximate average SNR after replacing `(1-e^{-x^β})^{α-1}` by
/// `1 - e^{-x/((α-1)β)}`.
///
/// For `α = 1` the correction term carries `(α-1)^{2+β}` and vanishes.
pub fn avg_snr_turb_approx(p: &EwParams, link: &LinkBudget) -> Result<MetricResult> {
    p.validate()?;
    link.validate()?;
    let EwParams { alpha, beta, eta } = *p;
    if alpha < 1.0 {
        return Err(Error::domain(
            "avg_snr_turb_approx",
            format!("alpha = {alpha} < 1 makes the (α-1) bases negative"),
        ));
    }
    let x = inv_amplitude(link);
    let lead = alpha * (beta + 1.0) / beta
        * eta.powf(2.0 - beta)
        * x.powf(beta - 2.0)
        * gamma_fn(beta + 1.0)?;
    let first = (beta * x / eta).powf(-beta);
    let second = if alpha == 1.0 {
        0.0
    } else {
        let am1 = alpha - 1.0;
        let q = am1 * beta * beta + 1.0;
        am1 * am1 * beta.powi(4) * (x * q / (am1 * beta * eta)).powf(-beta) / (q * q)
    };
    MetricResult::closed_form(lead * (first - second), Method::Lemma1)
}

/// Approximate ergodic rate from the same kernel and the bound
/// `ln γ ≤ ζ(γ^{1/ζ} - 1)`.
pub fn ergodic_rate_turb_approx(
    p: &EwParams,
    link: &LinkBudget,
    z: ZetaChoice,
) -> Result<MetricResult> {
    p.validate()?;
    link.validate()?;
    let EwParams { alpha, beta, eta } = *p;
    let zeta = z.as_f64();
    let x = inv_amplitude(link);
    let u = beta * x / eta;
    let v = x * (alpha * beta * beta + 2.0) / (alpha * beta * eta);
    let lead = alpha * beta * zeta / (2.0 * LN_2) * eta.powf(-beta) * x.powf(beta);
    let g1 = 2.0
        * gamma_fn(beta + 2.0 / zeta)?
        * (u.powf(-(beta * zeta + 2.0) / zeta) - v.powf(-beta - 2.0 / zeta));
    let g2 = 2.0 * gamma_fn(beta)? * (v.powf(-beta) - u.powf(-beta));
    MetricResult::closed_form(lead * (g1 + g2), Method::Lemma1)
}

/// Largest relative error of `1 - e^{-x/(ab)}` against `(1-e^{-x^a})^b` over a grid.
pub fn approx_kernel_error(a: f64, b: f64, x_grid: &[f64]) -> Result<f64> {
    for (name, v) in [("a", a), ("b", b)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::param(
                name,
                format!("{v} must be positive and finite"),
            ));
        }
    }
    let mut worst: f64 = 0.0;
    for &x in x_grid {
        if !(x > 0.0 && x.is_finite()) {
            return Err(Error::param(
                "x_grid",
                format!("{x} must be positive and finite"),
            ));
        }
        let exact = (-(-x.powf(a)).exp_m1()).powf(b);
        let approx = -(-x / (a * b)).exp_m1();
        worst = worst.max(((approx - exact) / exact).abs());
    }
    Ok(worst)
}

fn check_gamma0(gamma0: f64) -> Result<()> {
    if !(gamma0 > 0.0 && gamma0.is_finite()) {
        return Err(Error::param(
            "gamma0",
            format!("{gamma0} must be positive and finite"),
        ));
    }
    Ok(())
}

/// `αβη²γ₀/(2+αβ)`
pub fn avg_snr_turb_asymp(p: &EwParams, gamma0: f64) -> Result<MetricResult> {
    p.validate()?;
    check_gamma0(gamma0)?;
    let ab = p.alpha_beta();
    MetricResult::closed_form(
        ab * p.eta * p.eta * gamma0 / (2.0 + ab),
        Method::Prop1Asymptotic,
    )
}

/// `(2/(αβ ln 4))(αβ ln(η²γ₀) - 2)`, which is `E[log₂ γ]` under the power law.
pub fn ergodic_rate_turb_asymp(p: &EwParams, gamma0: f64) -> Result<MetricResult> {
    p.validate()?;
    check_gamma0(gamma0)?;
    let ab = p.alpha_beta();
    let v = 2.0 / (ab * 2.0 * LN_2) * (-2.0 + ab * (p.eta * p.eta * gamma0).ln());
    MetricResult::closed_form(v, Method::Prop1Asymptotic)
}

/// [`avg_snr_turb_asymp`] with `γ₀` replaced by `γ₀L²`.
pub fn avg_snr_turb_asymp_with_loss(p: &EwParams, link: &LinkBudget) -> Result<MetricResult> {
    link.validate()?;
    let r = avg_snr_turb_asymp(p, link.received_scale())?;
    Ok(MetricResult {
        method: Method::Prop1AsymptoticWithLoss,
        ..r
    })
}

/// [`ergodic_rate_turb_asymp`] with `γ₀` replaced by `γ₀L²`.
pub fn ergodic_rate_turb_asymp_with_loss(p: &EwParams, link: &LinkBudget) -> Result<MetricResult> {
    link.validate()?;
    let r = ergodic_rate_turb_asymp(p, link.received_scale())?;
    Ok(MetricResult {
        method: Method::Prop1AsymptoticWithLoss,
        ..r
    })
}
