//! Exponentiated-Weibull irradiance fading.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special_math::{integrate, Domain, QuadratureSpec};

/// Uniforms are clamped to `(ε, 1-ε)` before inversion.
pub const UNIFORM_CLAMP: f64 = 1e-16;

/// Turbulence triple of the exponentiated-Weibull model.
///
/// `alpha` depends on the receiver aperture, `beta` on the scintillation
/// index and `eta` scales the mean irradiance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EwParams {
    pub alpha: f64,
    pub beta: f64,
    pub eta: f64,
}

impl EwParams {
    pub fn new(alpha: f64, beta: f64, eta: f64) -> Result<Self> {
        let p = Self { alpha, beta, eta };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("eta", self.eta),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::param(
                    name,
                    format!("{v} must be positive and finite"),
                ));
            }
        }
        Ok(())
    }

    /// Product `αβ`, the exponent of the small-irradiance power law.
    pub fn alpha_beta(&self) -> f64 {
        self.alpha * self.beta
    }

    /// Same shape with `eta` chosen so that `E[h_a] = 1`.
    pub fn with_unit_mean(alpha: f64, beta: f64) -> Result<Self> {
        let shape = Self::new(alpha, beta, 1.0)?;
        let mean = ew_moment(&shape, 1.0)?;
        Self::new(alpha, beta, 1.0 / mean)
    }
}

/// Density of the exponentiated-Weibull irradiance.
pub fn ew_pdf(h: f64, p: &EwParams) -> Result<f64> {
    if h.is_nan() || h < 0.0 {
        return Err(Error::domain(
            "ew_pdf",
            format!("h = {h} must be non-negative"),
        ));
    }
    let EwParams { alpha, beta, eta } = *p;
    if h == 0.0 {
        let k = alpha * beta;
        return Ok(if k > 1.0 {
            0.0
        } else if k == 1.0 {
            1.0 / eta
        } else {
            f64::INFINITY
        });
    }
    if h.is_infinite() {
        return Ok(0.0);
    }
    let x = h / eta;
    let z = x.powf(beta);
    let one_minus = -(-z).exp_m1();
    let ln = (alpha * beta / eta).ln() + (beta - 1.0) * x.ln() - z + (alpha - 1.0) * one_minus.ln();
    Ok(ln.exp())
}

/// Distribution function `[1 - exp(-(h/η)^β)]^α`.
pub fn ew_cdf(h: f64, p: &EwParams) -> Result<f64> {
    if h.is_nan() || h < 0.0 {
        return Err(Error::domain(
            "ew_cdf",
            format!("h = {h} must be non-negative"),
        ));
    }
    let z = (h / p.eta).powf(p.beta);
    Ok((-(-z).exp_m1()).powf(p.alpha))
}

/// Quantile function `η (-ln(1 - u^{1/α}))^{1/β}` with `u` clamped away from 0 and 1.
pub fn ew_quantile(u: f64, p: &EwParams) -> f64 {
    let u = u.clamp(UNIFORM_CLAMP, 1.0 - UNIFORM_CLAMP);
    // 1 - u^{1/α} without cancellation near u = 1
    let survival = -(u.ln() / p.alpha).exp_m1();
    p.eta * (-survival.ln()).powf(1.0 / p.beta)
}

/// Inverse-transform draw.
pub fn ew_sample<R: Rng + ?Sized>(p: &EwParams, rng: &mut R) -> f64 {
    ew_quantile(rng.random::<f64>(), p)
}

/// Raw moment `E[h_a^k]` by quadrature.
pub fn ew_moment(p: &EwParams, k: f64) -> Result<f64> {
    let spec = QuadratureSpec::default();
    let r = integrate(
        |h| {
            if h == 0.0 {
                0.0
            } else {
                h.powf(k) * ew_pdf(h, p).unwrap_or(f64::NAN)
            }
        },
        Domain::HalfLine { scale: p.eta },
        &spec,
    )?;
    Ok(r.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special_math::gamma_fn;
    use approx::assert_relative_eq;

    fn ew(a: f64, b: f64, e: f64) -> EwParams {
        EwParams::new(a, b, e).unwrap()
    }

    #[test]
    fn pdf_examples() {
        assert_relative_eq!(
            ew_pdf(0.5, &ew(1.0, 1.0, 1.0)).unwrap(),
            0.606_530_659_712_633_4,
            max_relative = 1e-14
        );
        let e1 = (-1.0_f64).exp();
        assert_relative_eq!(
            ew_pdf(1.0, &ew(2.0, 1.0, 1.0)).unwrap(),
            2.0 * e1 * (1.0 - e1),
            max_relative = 1e-14
        );
        assert!(ew_pdf(-0.1, &ew(1.0, 1.0, 1.0)).is_err());
    }

    #[test]
    fn cdf_examples() {
        let p = ew(1.0, 1.0, 1.0);
        assert_eq!(ew_cdf(0.0, &p).unwrap(), 0.0);
        assert_relative_eq!(
            ew_cdf(1.0, &p).unwrap(),
            0.632_120_558_828_557_7,
            max_relative = 1e-14
        );
        let expected = (1.0 - (-4.0_f64).exp()).powi(3);
        assert_relative_eq!(
            ew_cdf(2.0, &ew(3.0, 2.0, 1.0)).unwrap(),
            expected,
            max_relative = 1e-14
        );
        assert!(ew_cdf(-1.0, &p).is_err());
    }

    #[test]
    fn quantile_inverts_cdf() {
        let u = 1.0 - (-1.0_f64).exp();
        assert_relative_eq!(
            ew_quantile(u, &ew(1.0, 1.0, 1.0)),
            1.0,
            max_relative = 1e-14
        );
        let p = ew(5.8, 1.3, 0.9);
        for &u in &[0.01, 0.2, 0.5, 0.93, 0.999] {
            assert_relative_eq!(
                ew_cdf(ew_quantile(u, &p), &p).unwrap(),
                u,
                max_relative = 1e-12
            );
        }
        assert!(ew_quantile(1.0, &p).is_finite());
        assert!(ew_quantile(0.0, &p) > 0.0);
    }

    #[test]
    fn weibull_reduction_mean() {
        for &beta in &[0.8, 1.5, 2.0, 3.3] {
            let p = ew(1.0, beta, 1.4);
            let mean = ew_moment(&p, 1.0).unwrap();
            assert_relative_eq!(
                mean,
                1.4 * gamma_fn(1.0 + 1.0 / beta).unwrap(),
                max_relative = 1e-8
            );
        }
    }

    #[test]
    fn unit_mean_constructor() {
        let p = EwParams::with_unit_mean(2.3, 1.6).unwrap();
        assert_relative_eq!(ew_moment(&p, 1.0).unwrap(), 1.0, max_relative = 1e-9);
    }

    #[test]
    fn rejects_bad_params() {
        assert!(EwParams::new(0.0, 1.0, 1.0).is_err());
        assert!(EwParams::new(1.0, -1.0, 1.0).is_err());
        assert!(EwParams::new(1.0, 1.0, f64::NAN).is_err());
    }
}
