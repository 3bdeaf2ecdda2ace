//! Side-by-side comparison of the published closed forms with the forms
//! obtained by integrating the corresponding densities, and with quadrature.

use serde::{Deserialize, Serialize};

use super::{
    avg_snr_combined_asymp, avg_snr_numeric, avg_snr_turb_approx, ergodic_rate_combined_asymp,
    ergodic_rate_combined_lb, ergodic_rate_combined_lb_printed, ergodic_rate_numeric,
    ergodic_rate_turb_approx, log2_snr_numeric, normalization, Prop2Formula, ZetaChoice,
};
use crate::channels::{EwParams, LinkBudget, PointingGeometry, SnrModel};
use crate::error::Result;
use crate::special_math::{QuadratureSpec, SeriesControl};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompatEntry {
    pub quantity: String,
    /// Value of the expression as published.
    pub published: Option<f64>,
    /// Value of the internally consistent form, where one exists.
    pub derived: Option<f64>,
    /// Quadrature of the density the expression claims to integrate.
    pub reference: Option<f64>,
    pub note: String,
}

impl CompatEntry {
    /// `published/reference - 1`
    pub fn published_gap(&self) -> Option<f64> {
        Some(self.published? / self.reference? - 1.0)
    }

    /// `derived/reference - 1`
    pub fn derived_gap(&self) -> Option<f64> {
        Some(self.derived? / self.reference? - 1.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompatReport {
    pub entries: Vec<CompatEntry>,
}

fn value_or_note(r: Result<super::MetricResult>, note: &mut Vec<String>) -> Option<f64> {
    match r {
        Ok(v) => Some(v.value),
        Err(e) => {
            note.push(e.to_string());
            None
        }
    }
}

fn entry(
    quantity: &str,
    published: Option<f64>,
    derived: Option<f64>,
    reference: Option<f64>,
    mut notes: Vec<String>,
    remark: &str,
) -> CompatEntry {
    notes.insert(0, remark.to_string());
    CompatEntry {
        quantity: quantity.to_string(),
        published,
        derived,
        reference,
        note: notes.join("; "),
    }
}

/// Evaluate every published/derived pair at one parameter point.
///
/// The series-based entries are produced only for equal jitter and zero
/// boresight; the asymptotic entries need a finite MGF.
pub fn compat_report(
    ew: &EwParams,
    pointing: &PointingGeometry,
    link: &LinkBudget,
    zeta: ZetaChoice,
    spec: &QuadratureSpec,
) -> Result<CompatReport> {
    ew.validate()?;
    pointing.validate()?;
    link.validate()?;
    let mut entries = Vec::new();

    let exact = SnrModel::turb_exact(*ew, *link)?;
    {
        let mut n = Vec::new();
        let published = value_or_note(avg_snr_turb_approx(ew, link), &mut n);
        let reference = value_or_note(avg_snr_numeric(&exact, spec), &mut n);
        entries.push(entry(
            "turbulence_approx_avg_snr",
            published,
            None,
            reference,
            n,
            "kernel approximation of the exponentiated-Weibull factor",
        ));
        let mut n = Vec::new();
        let published = value_or_note(ergodic_rate_turb_approx(ew, link, zeta), &mut n);
        let reference = value_or_note(ergodic_rate_numeric(&exact, spec), &mut n);
        entries.push(entry(
            "turbulence_approx_rate",
            published,
            None,
            reference,
            n,
            &format!(
                "zeta = {}; exponent groups use alpha where the kernel used alpha-1",
                zeta.get()
            ),
        ));
    }

    {
        let asym = SnrModel::turb_asymptotic(*ew, *link)?;
        let mut n = Vec::new();
        let published = normalization(&asym, spec)
            .map(|r| r.value)
            .map_err(|e| n.push(e.to_string()))
            .ok();
        entries.push(entry(
            "turbulence_asymptotic_density_mass",
            published,
            Some(1.0),
            Some(1.0),
            n,
            "total mass of the power-law SNR density with L^(alpha beta) in the constant and support eta^2 gamma0",
        ));
    }

    if pointing.is_symmetric_zero_boresight() {
        let m = SnrModel::combined_series(*ew, *pointing, *link, SeriesControl::default())?;
        let mut n = Vec::new();
        let published = value_or_note(ergodic_rate_combined_lb_printed(&m), &mut n);
        let derived = value_or_note(ergodic_rate_combined_lb(&m), &mut n);
        let reference = value_or_note(log2_snr_numeric(&m, spec), &mut n);
        entries.push(entry(
            "combined_series_rate_lower_bound",
            published,
            derived,
            reference,
            n,
            "published prefactor -4B1/(beta rho^2 ln 2) carries an extra rho^2; reference is E[log2 gamma]",
        ));
    }

    match SnrModel::combined_asymptotic(*ew, *pointing, *link) {
        Ok(m) => {
            let mut n = Vec::new();
            let published =
                value_or_note(avg_snr_combined_asymp(&m, Prop2Formula::Printed), &mut n);
            let derived = value_or_note(avg_snr_combined_asymp(&m, Prop2Formula::Derived), &mut n);
            let reference = value_or_note(avg_snr_numeric(&m, spec), &mut n);
            entries.push(entry(
                "combined_asymptotic_avg_snr",
                published,
                derived,
                reference,
                n,
                "published exponent 1-3/(alpha beta) versus D^2 from integration",
            ));
            let mut n = Vec::new();
            let published = value_or_note(
                ergodic_rate_combined_asymp(&m, Prop2Formula::Printed, zeta),
                &mut n,
            );
            let derived = value_or_note(
                ergodic_rate_combined_asymp(&m, Prop2Formula::Derived, zeta),
                &mut n,
            );
            let reference = value_or_note(log2_snr_numeric(&m, spec), &mut n);
            entries.push(entry(
                "combined_asymptotic_rate",
                published,
                derived,
                reference,
                n,
                &format!(
                    "published form depends on zeta = {}; reference is E[log2 gamma]",
                    zeta.get()
                ),
            ));
        }
        Err(e) => entries.push(entry(
            "combined_asymptotic",
            None,
            None,
            None,
            vec![e.to_string()],
            "asymptotic model unavailable",
        )),
    }

    Ok(CompatReport { entries })
}
