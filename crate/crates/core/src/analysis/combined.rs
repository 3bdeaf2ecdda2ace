//! Closed forms for turbulence combined with pointing error.
//!
//! With `K = LηA₀√γ₀` and `c_j` the coefficients of [`EwSeries`], the series
//! density integrates term by term to
//!
//! * `γ̄ = αρ²/(2+ρ²) · K² Γ(1+2/β) Σ_j c_j (1+j)^{-1-2/β}`
//! * `E[log₂ γ] = -(2α/(βρ² ln 2)) [(β - ρ²ψ(1) - ρ²β ln K) S₀ + ρ² S₁]`
//!
//! where `S₀ = Σ c_j/(1+j) = 1/α` and `S₁ = Σ c_j ln(1+j)/(1+j)`.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use super::{Method, MetricResult, ZetaChoice};
use crate::channels::{combined_asymptotic_mgf, EwParams, EwSeries, SnrModel, SnrVariant};
use crate::error::{Error, Result};
use crate::special_math::{digamma, gamma_fn, SeriesControl};

/// Which closed form of the combined asymptote to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Prop2Formula {
    /// The published expressions, evaluated as written.
    Printed,
    /// Direct integration of the asymptotic density.
    #[default]
    Derived,
}

fn require(m: &SnrModel, variant: SnrVariant, function: &'static str) -> Result<()> {
    m.validate()?;
    if m.variant != variant {
        return Err(Error::Model(format!(
            "{function} needs a {variant:?} model, got {:?}",
            m.variant
        )));
    }
    Ok(())
}

/// Average SNR from the term-by-term integrated series density.
pub fn avg_snr_combined_series(m: &SnrModel) -> Result<MetricResult> {
    require(m, SnrVariant::CombinedSeries, "avg_snr_combined_series")?;
    let EwParams { alpha, beta, .. } = m.ew;
    let rho2 = m.pointing.map(|g| g.rho().powi(2)).unwrap_or_default();
    let k2 = m.combined_scale()?.powi(2);
    let exponent = -1.0 - 2.0 / beta;
    let s = EwSeries::new(alpha).sum_weighted(&|j| (1.0 + j).powf(exponent), &m.series)?;
    let value = alpha * rho2 / (2.0 + rho2) * k2 * gamma_fn(1.0 + 2.0 / beta)? * s.value;
    let mut r = MetricResult::closed_form(value, Method::Lemma2Series)?;
    r.terms_used = Some(s.terms_used);
    Ok(r)
}

struct LogSums {
    /// `β - ρ²ψ(1) - ρ²β ln K`
    bracket: f64,
    s0: f64,
    s1: f64,
    terms_used: usize,
}

fn log_sums(m: &SnrModel) -> Result<(LogSums, f64)> {
    let EwParams { alpha, beta, .. } = m.ew;
    let rho2 = m.pointing.map(|g| g.rho().powi(2)).unwrap_or_default();
    let ln_k = m.combined_scale()?.ln();
    let s1 = EwSeries::new(alpha).sum_weighted(&|j| (1.0 + j).ln() / (1.0 + j), &m.series)?;
    let sums = LogSums {
        bracket: beta - rho2 * digamma(1.0)? - rho2 * beta * ln_k,
        s0: 1.0 / alpha,
        s1: s1.value,
        terms_used: s1.terms_used,
    };
    Ok((sums, rho2))
}

/// Lower bound `E[log₂ γ] ≤ E[log₂(1+γ)]` for the series density.
pub fn ergodic_rate_combined_lb(m: &SnrModel) -> Result<MetricResult> {
    require(m, SnrVariant::CombinedSeries, "ergodic_rate_combined_lb")?;
    let (s, rho2) = log_sums(m)?;
    let EwParams { alpha, beta, .. } = m.ew;
    let value = -2.0 * alpha / (beta * rho2 * LN_2) * (s.bracket * s.s0 + rho2 * s.s1);
    let mut r = MetricResult::closed_form(value, Method::Lemma2Series)?;
    r.terms_used = Some(s.terms_used);
    Ok(r)
}

/// The published form of the bound: `-4B₁/(β ρ² ln 2) Σ_j …`.
///
/// It equals `ρ²` times [`ergodic_rate_combined_lb`].
pub fn ergodic_rate_combined_lb_printed(m: &SnrModel) -> Result<MetricResult> {
    require(
        m,
        SnrVariant::CombinedSeries,
        "ergodic_rate_combined_lb_printed",
    )?;
    let (s, rho2) = log_sums(m)?;
    let EwParams { alpha, beta, .. } = m.ew;
    // B₁ B₂(j)^{-ρ²/β} Ψ(j) Γ(1) = (αρ²/2) c_j/(1+j)
    let value =
        -4.0 / (LN_2 * beta * rho2) * (alpha * rho2 / 2.0) * (s.bracket * s.s0 + rho2 * s.s1);
    let mut r = MetricResult::closed_form(value, Method::Lemma2Series)?;
    r.terms_used = Some(s.terms_used);
    Ok(r)
}

/// `ln(M / (LηA₀)^{αβ})`
fn ln_power_law_constant(m: &SnrModel) -> Result<f64> {
    let g = m
        .pointing
        .ok_or_else(|| Error::Model("combined asymptote needs a pointing geometry".into()))?;
    let mgf = combined_asymptotic_mgf(&m.ew, &g)?;
    let leta = m.link.path_loss() * m.ew.eta * g.a0();
    Ok(mgf.ln() - m.ew.alpha_beta() * leta.ln())
}

/// Average SNR of the combined power-law asymptote.
pub fn avg_snr_combined_asymp(m: &SnrModel, formula: Prop2Formula) -> Result<MetricResult> {
    require(m, SnrVariant::CombinedAsymptotic, "avg_snr_combined_asymp")?;
    let ab = m.ew.alpha_beta();
    let g0 = m.link.gamma0();
    match formula {
        Prop2Formula::Derived => {
            let d = m.combined_asymptotic_d()?;
            MetricResult::closed_form(ab * d * d * g0 / (2.0 + ab), Method::Prop2AsymptoticDerived)
        }
        Prop2Formula::Printed => {
            let ln_c = ln_power_law_constant(m)?;
            let ln_v = (g0 * ab / (2.0 + ab)).ln() + (1.0 - 3.0 / ab) * ln_c;
            MetricResult::closed_form(ln_v.exp(), Method::Prop2AsymptoticPrinted)
        }
    }
}

/// Ergodic rate of the combined power-law asymptote.
///
/// `Derived` is `E[log₂ γ] = log₂(D²γ₀) - 2/(αβ ln 2)` and ignores `z`;
/// `Printed` depends on `z`.
pub fn ergodic_rate_combined_asymp(
    m: &SnrModel,
    formula: Prop2Formula,
    z: ZetaChoice,
) -> Result<MetricResult> {
    require(
        m,
        SnrVariant::CombinedAsymptotic,
        "ergodic_rate_combined_asymp",
    )?;
    let ab = m.ew.alpha_beta();
    let g0 = m.link.gamma0();
    match formula {
        Prop2Formula::Derived => {
            let d = m.combined_asymptotic_d()?;
            let v = (d * d * g0).log2() - 2.0 / (ab * LN_2);
            MetricResult::closed_form(v, Method::Prop2AsymptoticDerived)
        }
        Prop2Formula::Printed => {
            let zeta = z.as_f64();
            let beta = m.ew.beta;
            let ln_c = ln_power_law_constant(m)?;
            // 2γ₀ αβ C (ζ/γ₀)^{(αβ+1)/2} (αβ ln ζ - 2) / (αβ² √(γ₀ζ) ln 4)
            let ln_mag = (2.0 * g0 * ab).ln() + ln_c + 0.5 * (ab + 1.0) * (zeta / g0).ln()
                - (ab * beta * beta * (g0 * zeta).sqrt() * 2.0 * LN_2).ln();
            let v = (ab * zeta.ln() - 2.0) * ln_mag.exp();
            MetricResult::closed_form(v, Method::Prop2AsymptoticPrinted)
        }
    }
}

/// Empirical sign behaviour of the average-SNR series terms
/// `c_j (1+j)^{-1-2/β}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesSignReport {
    pub alpha: f64,
    pub beta: f64,
    pub terms_examined: usize,
    /// Non-zero terms among those examined.
    pub nonzero_terms: usize,
    pub sign_changes: usize,
    /// First `j ≥ 1` whose term has the same sign as term `j-1`.
    pub first_repeated_sign: Option<usize>,
    /// Whether every pair of consecutive partial sums straddles the limit.
    pub partial_sums_bracket_limit: bool,
    pub limit: f64,
}

pub fn series_sign_report(
    ew: &EwParams,
    n_terms: usize,
    control: &SeriesControl,
) -> Result<SeriesSignReport> {
    ew.validate()?;
    control.validate()?;
    if n_terms < 2 {
        return Err(Error::param("n_terms", "at least two terms are needed"));
    }
    let exponent = -1.0 - 2.0 / ew.beta;
    let series = EwSeries::new(ew.alpha);
    let limit = series
        .sum_weighted(&|j| (1.0 + j).powf(exponent), control)?
        .value;
    let terms: Vec<f64> = series
        .coefficients()
        .take(n_terms)
        .enumerate()
        .map(|(j, c)| c * (1.0 + j as f64).powf(exponent))
        .collect();
    let nonzero_terms = terms.iter().filter(|t| **t != 0.0).count();
    let mut sign_changes = 0;
    let mut first_repeated_sign = None;
    for (j, w) in terms.windows(2).enumerate() {
        if w[0] == 0.0 || w[1] == 0.0 {
            continue;
        }
        if w[0].signum() != w[1].signum() {
            sign_changes += 1;
        } else if first_repeated_sign.is_none() {
            first_repeated_sign = Some(j + 1);
        }
    }
    let mut partial = 0.0;
    let mut previous_side: Option<f64> = None;
    let mut brackets = true;
    for t in &terms[..nonzero_terms.min(terms.len())] {
        partial += t;
        let side = (partial - limit).signum();
        if previous_side == Some(side) {
            brackets = false;
        }
        previous_side = Some(side);
    }
    Ok(SeriesSignReport {
        alpha: ew.alpha,
        beta: ew.beta,
        terms_examined: n_terms,
        nonzero_terms,
        sign_changes,
        first_repeated_sign,
        partial_sums_bracket_limit: brackets,
        limit,
    })
}
