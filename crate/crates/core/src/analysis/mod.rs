//! Average SNR and ergodic rate.
//!
//! Every closed form here has a quadrature counterpart in [`numeric`] that
//! integrates the corresponding density directly; the quadrature values are
//! the reference the closed forms are checked against.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

mod combined;
pub mod compat;
mod numeric;
mod turbulence;

pub use combined::{
    avg_snr_combined_asymp, avg_snr_combined_series, ergodic_rate_combined_asymp,
    ergodic_rate_combined_lb, ergodic_rate_combined_lb_printed, series_sign_report, Prop2Formula,
    SeriesSignReport,
};
pub use numeric::{
    average_snr_of_density, avg_snr_numeric, ergodic_rate_numeric, ergodic_rate_of_density,
    log2_snr_numeric, mean_log2_of_density, model_domain, normalization,
};
pub use turbulence::{
    approx_kernel_error, avg_snr_turb_approx, avg_snr_turb_asymp, avg_snr_turb_asymp_with_loss,
    ergodic_rate_turb_approx, ergodic_rate_turb_asymp, ergodic_rate_turb_asymp_with_loss,
};

/// How a [`MetricResult`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    Quadrature,
    Lemma1,
    Lemma2Series,
    Prop1Asymptotic,
    /// Turbulence-only asymptote with the path loss folded into the SNR scale.
    Prop1AsymptoticWithLoss,
    Prop2AsymptoticPrinted,
    Prop2AsymptoticDerived,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricResult {
    /// Average SNR (linear) or ergodic rate (bit/s/Hz).
    pub value: f64,
    pub method: Method,
    pub error_estimate: Option<f64>,
    /// Present only for series evaluations.
    pub terms_used: Option<usize>,
}

impl MetricResult {
    pub(crate) fn closed_form(value: f64, method: Method) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::domain(
                "closed form",
                format!("{method:?} produced a non-finite value"),
            ));
        }
        Ok(Self {
            value,
            method,
            error_estimate: None,
            terms_used: None,
        })
    }
}

/// Positive integer of the bound `ln γ ≤ ζ(γ^{1/ζ} - 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZetaChoice(u32);

impl ZetaChoice {
    pub fn new(zeta: u32) -> Result<Self> {
        if zeta < 1 {
            return Err(Error::param("zeta", "must be a positive integer"));
        }
        Ok(Self(zeta))
    }

    pub fn get(&self) -> u32 {
        self.0
    }

    pub(crate) fn as_f64(&self) -> f64 {
        self.0 as f64
    }
}

impl Default for ZetaChoice {
    fn default() -> Self {
        Self(8)
    }
}
