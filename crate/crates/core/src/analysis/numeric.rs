use std::cell::RefCell;

use super::{Method, MetricResult};
use crate::channels::{snr_pdf, SnrModel, Support};
use crate::error::{Error, Result};
use crate::special_math::{integrate, Domain, Integral, QuadratureSpec};

/// Integration domain matching a density's support.
pub fn model_domain(support: Support) -> Domain {
    match support.upper {
        Some(upper) => Domain::finite(0.0, upper),
        None => Domain::HalfLine {
            scale: support.scale,
        },
    }
}

/// Quadrature of a fallible integrand; the first error raised by `f` wins
/// over any quadrature failure it causes.
fn integrate_fallible(
    f: impl Fn(f64) -> Result<f64>,
    domain: Domain,
    spec: &QuadratureSpec,
) -> Result<Integral> {
    let first_error: RefCell<Option<Error>> = RefCell::new(None);
    let r = integrate(
        |x| match f(x) {
            Ok(v) => v,
            Err(e) => {
                first_error.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        },
        domain,
        spec,
    );
    match first_error.into_inner() {
        Some(e) => Err(e),
        None => r,
    }
}

/// `∫ γ f(γ) dγ`
pub fn average_snr_of_density(
    pdf: impl Fn(f64) -> Result<f64>,
    domain: Domain,
    spec: &QuadratureSpec,
) -> Result<Integral> {
    integrate_fallible(
        |g| Ok(if g == 0.0 { 0.0 } else { g * pdf(g)? }),
        domain,
        spec,
    )
}

/// `∫ log₂(1 + γ) f(γ) dγ`
pub fn ergodic_rate_of_density(
    pdf: impl Fn(f64) -> Result<f64>,
    domain: Domain,
    spec: &QuadratureSpec,
) -> Result<Integral> {
    integrate_fallible(
        |g| {
            Ok(if g == 0.0 {
                0.0
            } else {
                g.ln_1p() / std::f64::consts::LN_2 * pdf(g)?
            })
        },
        domain,
        spec,
    )
}

/// `∫ log₂(γ) f(γ) dγ`, the high-SNR lower bound of the ergodic rate.
pub fn mean_log2_of_density(
    pdf: impl Fn(f64) -> Result<f64>,
    domain: Domain,
    spec: &QuadratureSpec,
) -> Result<Integral> {
    integrate_fallible(|g| Ok(g.log2() * pdf(g)?), domain, spec)
}

fn quadrature_result(r: Integral) -> MetricResult {
    MetricResult {
        value: r.value,
        method: Method::Quadrature,
        error_estimate: Some(r.error_estimate),
        terms_used: None,
    }
}

/// `∫ f_γ(γ) dγ` over the model's support.
pub fn normalization(m: &SnrModel, spec: &QuadratureSpec) -> Result<Integral> {
    m.validate()?;
    integrate_fallible(|g| snr_pdf(g, m), model_domain(m.support()?), spec)
}

/// Average SNR by direct quadrature of the model density.
pub fn avg_snr_numeric(m: &SnrModel, spec: &QuadratureSpec) -> Result<MetricResult> {
    m.validate()?;
    let r = average_snr_of_density(|g| snr_pdf(g, m), model_domain(m.support()?), spec)?;
    Ok(quadrature_result(r))
}

/// Ergodic rate `E[log₂(1+γ)]` by direct quadrature of the model density.
pub fn ergodic_rate_numeric(m: &SnrModel, spec: &QuadratureSpec) -> Result<MetricResult> {
    m.validate()?;
    let r = ergodic_rate_of_density(|g| snr_pdf(g, m), model_domain(m.support()?), spec)?;
    Ok(quadrature_result(r))
}

/// `E[log₂ γ]` by direct quadrature of the model density.
pub fn log2_snr_numeric(m: &SnrModel, spec: &QuadratureSpec) -> Result<MetricResult> {
    m.validate()?;
    let r = mean_log2_of_density(|g| snr_pdf(g, m), model_domain(m.support()?), spec)?;
    Ok(quadrature_result(r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{EwParams, LinkBudget};
    use approx::assert_relative_eq;

    #[test]
    fn injected_densities() {
        let spec = QuadratureSpec::default();
        let r = average_snr_of_density(|g| Ok((-g).exp()), Domain::half_line(), &spec).unwrap();
        assert_relative_eq!(r.value, 1.0, max_relative = 1e-10);
        // narrow uniform density around γ = 1
        let w = 1e-6;
        let r = ergodic_rate_of_density(
            |_| Ok(1.0 / (2.0 * w)),
            Domain::finite(1.0 - w, 1.0 + w),
            &spec,
        )
        .unwrap();
        assert_relative_eq!(r.value, 1.0, max_relative = 1e-6);
    }

    #[test]
    fn errors_from_density_propagate() {
        let spec = QuadratureSpec::default();
        let err = average_snr_of_density(
            |g| {
                if g > 0.5 {
                    Err(Error::Model("boom".into()))
                } else {
                    Ok(1.0)
                }
            },
            Domain::finite(0.0, 1.0),
            &spec,
        )
        .unwrap_err();
        assert_eq!(err, Error::Model("boom".into()));
    }

    #[test]
    fn rayleigh_power_case() {
        // α = 1, β = 2: h² is exponential with mean η², so γ̄ = γ₀L²
        let p = EwParams::new(1.0, 2.0, 1.0).unwrap();
        let link = LinkBudget::normalized(250.0, 0.6).unwrap();
        let m = SnrModel::turb_exact(p, link).unwrap();
        let r = avg_snr_numeric(&m, &QuadratureSpec::default()).unwrap();
        assert_relative_eq!(r.value, link.received_scale(), max_relative = 1e-9);
        assert_eq!(r.method, Method::Quadrature);
        assert!(r.error_estimate.is_some());
    }
}
