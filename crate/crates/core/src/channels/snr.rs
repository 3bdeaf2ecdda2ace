//! Electrical SNR densities `f_γ` for the supported channel compositions.
//!
//! With `γ = γ₀ h²` and `h = L h_a h_p`:
//!
//! * `TurbExact`: change of variables on the exponentiated-Weibull density (`h_p ≡ 1`).
//! * `TurbAsymptotic`: the small-irradiance power law `αβ h^{αβ-1}/η^{αβ}`.
//! * `CombinedSeries`: turbulence with zero-boresight pointing error, as the
//!   series `B₁ Σ_j Ψ(j) γ^{ρ²/2-1} Γ(τ, B₂(j) γ^{β/2})`.
//! * `CombinedAsymptotic`: power law on `[0, D]` with the Beckmann MGF correction.

use serde::{Deserialize, Serialize};

use super::link::LinkBudget;
use super::pointing::{beckmann_mgf, PointingGeometry};
use super::turbulence::{ew_pdf, EwParams};
use crate::error::{Error, Result};
use crate::special_math::{
    integrate, ln_gamma, ln_gamma_signed, sum_series, upper_incomplete_gamma, Continuation, Domain,
    QuadratureSpec, SeriesControl, SeriesSum,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SnrVariant {
    TurbExact,
    TurbAsymptotic,
    CombinedSeries,
    CombinedAsymptotic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnrModel {
    pub variant: SnrVariant,
    pub ew: EwParams,
    pub pointing: Option<PointingGeometry>,
    pub link: LinkBudget,
    pub series: SeriesControl,
}

/// Where a density lives: `[0, upper]` (or `[0, ∞)`) and a characteristic scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Support {
    pub upper: Option<f64>,
    pub scale: f64,
}

impl SnrModel {
    pub fn turb_exact(ew: EwParams, link: LinkBudget) -> Result<Self> {
        Self::build(
            SnrVariant::TurbExact,
            ew,
            None,
            link,
            SeriesControl::default(),
        )
    }

    pub fn turb_asymptotic(ew: EwParams, link: LinkBudget) -> Result<Self> {
        Self::build(
            SnrVariant::TurbAsymptotic,
            ew,
            None,
            link,
            SeriesControl::default(),
        )
    }

    pub fn combined_series(
        ew: EwParams,
        pointing: PointingGeometry,
        link: LinkBudget,
        series: SeriesControl,
    ) -> Result<Self> {
        Self::build(SnrVariant::CombinedSeries, ew, Some(pointing), link, series)
    }

    pub fn combined_asymptotic(
        ew: EwParams,
        pointing: PointingGeometry,
        link: LinkBudget,
    ) -> Result<Self> {
        Self::build(
            SnrVariant::CombinedAsymptotic,
            ew,
            Some(pointing),
            link,
            SeriesControl::default(),
        )
    }

    pub fn build(
        variant: SnrVariant,
        ew: EwParams,
        pointing: Option<PointingGeometry>,
        link: LinkBudget,
        series: SeriesControl,
    ) -> Result<Self> {
        let m = Self {
            variant,
            ew,
            pointing,
            link,
            series,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        self.ew.validate()?;
        self.link.validate()?;
        self.series.validate()?;
        match (self.variant, &self.pointing) {
            (SnrVariant::TurbExact | SnrVariant::TurbAsymptotic, Some(_)) => {
                Err(Error::Model(format!(
                    "{:?} models turbulence only; pointing must be absent",
                    self.variant
                )))
            }
            (SnrVariant::CombinedSeries | SnrVariant::CombinedAsymptotic, None) => Err(
                Error::Model(format!("{:?} requires a pointing geometry", self.variant)),
            ),
            (SnrVariant::CombinedSeries, Some(g)) => {
                g.validate()?;
                if !g.is_symmetric_zero_boresight() {
                    return Err(Error::Model(
                        "the series density needs equal jitter and zero boresight; \
                         use the asymptotic model or Monte Carlo instead"
                            .into(),
                    ));
                }
                Ok(())
            }
            (SnrVariant::CombinedAsymptotic, Some(g)) => {
                g.validate()?;
                combined_asymptotic_mgf(&self.ew, g).map(|_| ())
            }
            _ => Ok(()),
        }
    }

    fn pointing_geometry(&self) -> Result<&PointingGeometry> {
        self.pointing
            .as_ref()
            .ok_or_else(|| Error::Model(format!("{:?} requires a pointing geometry", self.variant)))
    }

    /// `K = L η A₀ √γ₀`, the largest amplitude scale of the combined channel.
    pub fn combined_scale(&self) -> Result<f64> {
        let g = self.pointing_geometry()?;
        Ok(self.link.path_loss() * self.ew.eta * g.a0() * self.link.gamma0().sqrt())
    }

    /// `D = LηA₀ / M_{r²}(2αβ/ω_zeq²)^{1/(αβ)}`
    pub fn combined_asymptotic_d(&self) -> Result<f64> {
        let g = self.pointing_geometry()?;
        let m = combined_asymptotic_mgf(&self.ew, g)?;
        Ok(self.link.path_loss() * self.ew.eta * g.a0() / m.powf(1.0 / self.ew.alpha_beta()))
    }

    pub fn support(&self) -> Result<Support> {
        let g0 = self.link.gamma0();
        let eta2 = self.ew.eta.powi(2);
        Ok(match self.variant {
            SnrVariant::TurbExact => Support {
                upper: None,
                scale: eta2 * self.link.received_scale(),
            },
            SnrVariant::TurbAsymptotic => Support {
                upper: Some(eta2 * g0),
                scale: eta2 * g0,
            },
            SnrVariant::CombinedSeries => Support {
                upper: None,
                scale: self.combined_scale()?.powi(2),
            },
            SnrVariant::CombinedAsymptotic => {
                let top = self.combined_asymptotic_d()?.powi(2) * g0;
                Support {
                    upper: Some(top),
                    scale: top,
                }
            }
        })
    }
}

/// `M_{r²}(2αβ/ω_zeq²)`
pub fn combined_asymptotic_mgf(ew: &EwParams, g: &PointingGeometry) -> Result<f64> {
    beckmann_mgf(2.0 * ew.alpha_beta() / g.w_zeq_m().powi(2), g)
}

/// Coefficients `c_j = (-1)^j Γ(α) / (j! Γ(α-j)) = (1-α)_j / j!` of the
/// binomial expansion of `(1 - e^{-z})^{α-1}`.
///
/// `Ψ(j) = c_j (1+j)^{-τ}`. Integer `α` gives a terminating series.
#[derive(Debug, Clone, Copy)]
pub struct EwSeries {
    alpha: f64,
    length: Option<usize>,
    ln_gamma_1ma: Option<(f64, f64)>,
}

impl EwSeries {
    pub fn new(alpha: f64) -> Self {
        let rounded = alpha.round();
        let length = if (alpha - rounded).abs() < 1e-12 && rounded >= 1.0 {
            Some(rounded as usize)
        } else {
            None
        };
        let ln_gamma_1ma = if length.is_none() {
            ln_gamma_signed(1.0 - alpha).ok()
        } else {
            None
        };
        Self {
            alpha,
            length,
            ln_gamma_1ma,
        }
    }

    /// Number of non-zero terms for integer `α`.
    pub fn length(&self) -> Option<usize> {
        self.length
    }

    /// `c_j` by the recurrence `c_j = c_{j-1} (j-α)/j`.
    pub fn coefficients(&self) -> impl Iterator<Item = f64> + '_ {
        let alpha = self.alpha;
        (0..).scan(1.0, move |c, j: usize| {
            if j > 0 {
                *c *= (j as f64 - alpha) / j as f64;
            }
            Some(*c)
        })
    }

    /// Smooth continuation `Γ(x+1-α) / (Γ(1-α) Γ(x+1))`, for `x > α - 1`.
    pub fn coefficient_continuous(&self, x: f64) -> f64 {
        match self.ln_gamma_1ma {
            Some((ln_abs, sign)) => {
                if x.is_infinite() {
                    return 0.0;
                }
                let Ok(ratio) = ln_gamma_ratio(x + 1.0, -self.alpha) else {
                    return f64::NAN;
                };
                sign * (ratio - ln_abs).exp()
            }
            None => 0.0,
        }
    }

    /// `Σ_j c_j w(j)` for a weight smooth in `j`.
    pub fn sum_weighted(
        &self,
        weight: &dyn Fn(f64) -> f64,
        control: &SeriesControl,
    ) -> Result<SeriesSum> {
        let mut coeffs = self.coefficients();
        let term = |j: usize| -> Result<f64> {
            let c = coeffs.next().unwrap_or(0.0);
            if c == 0.0 {
                return Ok(0.0);
            }
            let v = c * weight(j as f64);
            if v.is_nan() {
                return Err(Error::domain("series term", format!("NaN at j = {j}")));
            }
            Ok(v)
        };
        let continued = |x: f64| {
            if x.is_infinite() {
                0.0
            } else {
                self.coefficient_continuous(x) * weight(x)
            }
        };
        let continuation = Continuation {
            term: &continued,
            valid_from: self.alpha.ceil().max(0.0) as usize + 3,
        };
        let cont = if self.length.is_none() {
            Some(continuation)
        } else {
            None
        };
        sum_series(term, self.length, cont, control)
    }
}

/// `ln Γ(y+d) - ln Γ(y)`; switches to the large-`y` expansion where the
/// direct difference would cancel.
fn ln_gamma_ratio(y: f64, d: f64) -> Result<f64> {
    if y > 1e6 {
        let ln_y = y.ln();
        return Ok(d * ln_y + d * (d - 1.0) / (2.0 * y));
    }
    Ok(ln_gamma(y + d)? - ln_gamma(y)?)
}

/// Value of the combined-channel series density and how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesDensity {
    pub value: f64,
    /// Terms summed directly (0 at the origin).
    pub terms_used: usize,
    /// Whether the sum was replaced by its integral representation.
    pub resummed: bool,
}

/// Above this ratio of leading term to sum the direct series has lost too
/// many digits to cancellation.
const CANCELLATION_LIMIT: f64 = 1e4;

/// Below this `u = (γ/K²)^{β/2}` the weights stay flat for the first `1/u`
/// terms and an infinite series would be summed almost entirely by its tail
/// estimate.
const FLAT_WEIGHT_LIMIT: f64 = 0.05;

/// `Σ_j c_j (1+j)^{-τ} Γ(τ, (1+j)u) = ∫_u^∞ t^{τ-1} e^{-t} (1-e^{-t})^{α-1} dt`
fn series_kernel_integral(u: f64, alpha: f64, tau: f64) -> Result<f64> {
    let spec = QuadratureSpec::new(1e-11, 0.0, 4000)?;
    let g = |t: f64| -> f64 {
        if t == 0.0 || t.is_infinite() {
            return 0.0;
        }
        ((tau - 1.0) * t.ln() - t + (alpha - 1.0) * (-(-t).exp_m1()).ln()).exp()
    };
    let top = u.max(1.0);
    let mut total = integrate(|s| g(top + s), Domain::half_line(), &spec)?.value;
    if u < 1.0 {
        // t = e^s spreads the decades between u and 1 evenly
        total += integrate(
            |s| {
                let t = s.exp();
                g(t) * t
            },
            Domain::finite(u.ln(), 0.0),
            &spec,
        )?
        .value;
    }
    Ok(total)
}

/// Density of the combined-channel SNR from the series.
///
/// The series is summed term by term; where it stalls or cancels badly
/// (small `γ` with `ρ² > β`), the closed-form sum of the same terms is
/// integrated instead.
pub fn combined_series_pdf(gamma: f64, m: &SnrModel) -> Result<SeriesDensity> {
    let g = m.pointing_geometry()?;
    let EwParams { alpha, beta, .. } = m.ew;
    let rho2 = g.rho().powi(2);
    let tau = 1.0 - rho2 / beta;
    let k2 = m.combined_scale()?.powi(2);
    if gamma <= 0.0 {
        // the density behaves like γ^{min(ρ², αβ)/2 - 1} at the origin
        let k = rho2.min(alpha * beta);
        let limit = if gamma < 0.0 || k > 2.0 {
            0.0
        } else {
            f64::INFINITY
        };
        return Ok(SeriesDensity {
            value: limit,
            terms_used: 0,
            resummed: false,
        });
    }
    // x = γ/K², B₂(j) γ^{β/2} = (1+j) x^{β/2}
    let x = gamma / k2;
    let u = x.powf(beta / 2.0);
    let weight = |j: f64| -> f64 {
        let w = (1.0 + j).powf(-tau);
        match upper_incomplete_gamma(tau, (1.0 + j) * u) {
            Ok(v) => w * v,
            Err(_) => f64::NAN,
        }
    };
    // B₁ γ^{ρ²/2-1} = α ρ² / (2 K²) · x^{ρ²/2-1}
    let prefactor = alpha * rho2 / (2.0 * k2) * x.powf(rho2 / 2.0 - 1.0);
    let series = EwSeries::new(alpha);
    if series.length().is_none() && u < FLAT_WEIGHT_LIMIT {
        return Ok(SeriesDensity {
            value: prefactor * series_kernel_integral(u, alpha, tau)?,
            terms_used: 0,
            resummed: true,
        });
    }
    let (sum, terms_used, resummed) = match series.sum_weighted(&weight, &m.series) {
        Ok(s) if (weight(0.0) / s.value).abs() <= CANCELLATION_LIMIT => {
            (s.value, s.terms_used, false)
        }
        Ok(s) => (series_kernel_integral(u, alpha, tau)?, s.terms_used, true),
        Err(Error::Series { terms, .. }) => (series_kernel_integral(u, alpha, tau)?, terms, true),
        Err(e) => return Err(e),
    };
    Ok(SeriesDensity {
        value: prefactor * sum,
        terms_used,
        resummed,
    })
}

/// Density of the SNR `γ` under the selected model.
///
/// The asymptotic variants return 0 outside their support.
pub fn snr_pdf(gamma: f64, m: &SnrModel) -> Result<f64> {
    if gamma.is_nan() || gamma < 0.0 {
        return Err(Error::domain(
            "snr_pdf",
            format!("gamma = {gamma} must be non-negative"),
        ));
    }
    let g0 = m.link.gamma0();
    let ab = m.ew.alpha_beta();
    match m.variant {
        SnrVariant::TurbExact => {
            let scale = m.link.received_scale();
            if gamma == 0.0 {
                // γ^{αβ/2-1} behaviour at the origin
                return Ok(if ab > 2.0 {
                    0.0
                } else if ab == 2.0 {
                    1.0 / (m.ew.eta.powi(2) * scale)
                } else {
                    f64::INFINITY
                });
            }
            let h = (gamma / scale).sqrt();
            Ok(ew_pdf(h, &m.ew)? / (2.0 * (gamma * scale).sqrt()))
        }
        SnrVariant::TurbAsymptotic => {
            // L^{αβ} in the constant but support η²γ₀; consistent only for L = 1.
            let top = m.ew.eta.powi(2) * g0;
            if gamma > top {
                return Ok(0.0);
            }
            let l = m.link.path_loss();
            let ln = (ab / 2.0).ln() - ab * (m.ew.eta * l).ln() - 0.5 * ab * g0.ln()
                + (0.5 * ab - 1.0) * gamma.ln();
            Ok(ln.exp())
        }
        SnrVariant::CombinedSeries => Ok(combined_series_pdf(gamma, m)?.value),
        SnrVariant::CombinedAsymptotic => {
            let d = m.combined_asymptotic_d()?;
            if gamma > d * d * g0 {
                return Ok(0.0);
            }
            let ratio = (gamma / g0).sqrt() / d;
            Ok(ab / (2.0 * gamma) * ratio.powf(ab))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn ew(a: f64, b: f64, e: f64) -> EwParams {
        EwParams::new(a, b, e).unwrap()
    }

    #[test]
    fn turb_exact_is_change_of_variables() {
        let p = ew(2.5, 1.8, 1.1);
        let link = LinkBudget::normalized(300.0, 0.4).unwrap();
        let m = SnrModel::turb_exact(p, link).unwrap();
        let s = link.received_scale();
        for &g in &[0.01, 1.0, 13.0, 50.0, 170.0] {
            let expected = ew_pdf((g / s).sqrt(), &p).unwrap() / (2.0 * (g * s).sqrt());
            assert_relative_eq!(snr_pdf(g, &m).unwrap(), expected, max_relative = 1e-14);
        }
    }

    #[test]
    fn coefficient_recurrence_matches_continuation() {
        let s = EwSeries::new(2.7);
        for (j, c) in s.coefficients().enumerate().take(60).skip(5) {
            assert_relative_eq!(c, s.coefficient_continuous(j as f64), max_relative = 1e-11);
        }
    }

    #[test]
    fn integer_alpha_terminates() {
        let s = EwSeries::new(3.0);
        assert_eq!(s.length(), Some(3));
        let c: Vec<f64> = s.coefficients().take(6).collect();
        assert_eq!(&c[3..], &[0.0, 0.0, 0.0]);
        let g = PointingGeometry::symmetric(0.05, 2.5, 0.35).unwrap();
        let m = SnrModel::combined_series(
            ew(3.0, 2.0, 1.0),
            g,
            LinkBudget::normalized(1e10, 0.2).unwrap(),
            SeriesControl::default(),
        )
        .unwrap();
        let k2 = m.combined_scale().unwrap().powi(2);
        let d = combined_series_pdf(k2, &m).unwrap();
        assert_eq!(d.terms_used, 3);
        assert!(!d.resummed);
    }

    #[test]
    fn kernel_integral_matches_direct_sum() {
        for &(alpha, tau, u) in &[
            (2.5, 0.2, 1.0),
            (3.0, -0.5, 0.4),
            (1.7, 0.6, 2.5),
            (0.8, -0.2, 0.3),
        ] {
            let weight =
                |j: f64| (1.0 + j).powf(-tau) * upper_incomplete_gamma(tau, (1.0 + j) * u).unwrap();
            let direct = EwSeries::new(alpha)
                .sum_weighted(&weight, &SeriesControl::default())
                .unwrap();
            let resummed = series_kernel_integral(u, alpha, tau).unwrap();
            assert_relative_eq!(direct.value, resummed, max_relative = 1e-8);
        }
    }

    #[test]
    fn model_validation() {
        let p = ew(2.0, 2.0, 1.0);
        let link = LinkBudget::normalized(100.0, 1.0).unwrap();
        let sym = PointingGeometry::symmetric(0.05, 2.5, 0.35).unwrap();
        let bore = PointingGeometry::new(0.05, 2.5, 0.35, 0.35, 0.2, 0.0).unwrap();
        assert!(SnrModel::build(
            SnrVariant::TurbExact,
            p,
            Some(sym),
            link,
            SeriesControl::default()
        )
        .is_err());
        assert!(SnrModel::build(
            SnrVariant::CombinedSeries,
            p,
            None,
            link,
            SeriesControl::default()
        )
        .is_err());
        assert!(SnrModel::combined_series(p, bore, link, SeriesControl::default()).is_err());
        assert!(SnrModel::combined_asymptotic(p, bore, link).is_ok());
    }

    #[test]
    fn asymptotic_supports() {
        let p = ew(2.0, 1.5, 0.9);
        let link = LinkBudget::normalized(1e4, 1.0).unwrap();
        let m = SnrModel::turb_asymptotic(p, link).unwrap();
        let top = 0.81 * 1e4;
        assert_eq!(snr_pdf(top * 1.0001, &m).unwrap(), 0.0);
        assert!(snr_pdf(top * 0.9999, &m).unwrap() > 0.0);
        let r = integrate(
            |g| snr_pdf(g, &m).unwrap(),
            Domain::finite(0.0, top),
            &QuadratureSpec::default(),
        )
        .unwrap();
        assert_relative_eq!(r.value, 1.0, max_relative = 1e-9);
    }
}
