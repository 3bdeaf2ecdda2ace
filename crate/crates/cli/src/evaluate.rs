//! Evaluation of the configured methods at one parameter point.

use owc_core::analysis::{
    avg_snr_combined_asymp, avg_snr_combined_series, avg_snr_numeric, avg_snr_turb_approx,
    avg_snr_turb_asymp, avg_snr_turb_asymp_with_loss, ergodic_rate_combined_asymp,
    ergodic_rate_combined_lb, ergodic_rate_combined_lb_printed, ergodic_rate_numeric,
    ergodic_rate_turb_approx, ergodic_rate_turb_asymp, ergodic_rate_turb_asymp_with_loss,
    MetricResult, Prop2Formula, ZetaChoice,
};
use owc_core::channels::{PointingGeometry, SnrModel, SnrVariant};
use owc_core::simulate::{
    compare_models, mc_estimate_both, Channel, Estimate, MonteCarloConfig, Turbulence,
};
use owc_core::special_math::{QuadratureSpec, SeriesControl};
use owc_core::Error;
use serde::Deserialize;

use crate::config::Point;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodName {
    /// Quadrature of the exact density of the channel.
    Quadrature,
    Lemma1,
    Prop1Asymptotic,
    Prop1AsymptoticWithLoss,
    Lemma2Series,
    /// Ergodic-rate bound with the published prefactor.
    Lemma2SeriesPrinted,
    Prop2Derived,
    Prop2Printed,
}

impl MethodName {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Quadrature => "quadrature",
            Self::Lemma1 => "lemma1",
            Self::Prop1Asymptotic => "prop1_asymptotic",
            Self::Prop1AsymptoticWithLoss => "prop1_asymptotic_with_loss",
            Self::Lemma2Series => "lemma2_series",
            Self::Lemma2SeriesPrinted => "lemma2_series_printed",
            Self::Prop2Derived => "prop2_derived",
            Self::Prop2Printed => "prop2_printed",
        }
    }

    /// Methods that apply to the channel shape: turbulence only, the
    /// symmetric zero-boresight case, or a general pointing geometry.
    pub fn defaults(pointing: Option<&PointingGeometry>) -> Vec<Self> {
        match pointing {
            None => vec![
                Self::Quadrature,
                Self::Lemma1,
                Self::Prop1AsymptoticWithLoss,
            ],
            Some(g) if g.is_symmetric_zero_boresight() => {
                vec![Self::Quadrature, Self::Lemma2Series, Self::Prop2Derived]
            }
            Some(_) => vec![Self::Prop2Derived],
        }
    }

    fn metrics(&self) -> &'static [MetricName] {
        match self {
            Self::Lemma2SeriesPrinted => &[MetricName::ErgodicRate],
            _ => &[MetricName::AvgSnr, MetricName::ErgodicRate],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricName {
    AvgSnr,
    ErgodicRate,
}

impl MetricName {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::AvgSnr => "avg_snr",
            Self::ErgodicRate => "ergodic_rate",
        }
    }
}

pub const MC_EW: &str = "monte_carlo";
pub const MC_GG: &str = "monte_carlo_gg";

/// One output record: a method's value for one metric at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub axis_name: String,
    pub axis_value: String,
    pub method: String,
    pub metric: MetricName,
    pub value: Option<f64>,
    pub stderr: Option<f64>,
    pub ci95_low: Option<f64>,
    pub ci95_high: Option<f64>,
    pub terms_used: Option<usize>,
    pub seed: Option<u64>,
    /// `None` when the value was produced, otherwise the failure.
    pub error: Option<String>,
}

impl Row {
    fn blank(point: &Point, axis_name: &str, method: &str, metric: MetricName) -> Self {
        Self {
            axis_name: axis_name.to_string(),
            axis_value: point.axis_value.to_string(),
            method: method.to_string(),
            metric,
            value: None,
            stderr: None,
            ci95_low: None,
            ci95_high: None,
            terms_used: None,
            seed: None,
            error: None,
        }
    }

    pub fn is_ok(&self) -> bool {
        self.error.is_none()
    }

    pub fn status(&self) -> String {
        match &self.error {
            None => "ok".into(),
            Some(e) => format!("error: {e}"),
        }
    }
}

fn turbulence_only(point: &Point, method: MethodName) -> Result<(), Error> {
    match point.pointing {
        Some(_) => Err(Error::Model(format!(
            "{} applies to turbulence-only channels; set [pointing] enabled = false",
            method.as_str()
        ))),
        None => Ok(()),
    }
}

fn with_pointing(
    point: &Point,
    method: MethodName,
    variant: SnrVariant,
) -> Result<SnrModel, Error> {
    let g = point
        .pointing
        .ok_or_else(|| Error::Model(format!("{} needs a pointing geometry", method.as_str())))?;
    SnrModel::build(
        variant,
        point.ew,
        Some(g),
        point.link,
        SeriesControl::default(),
    )
}

/// Closed-form or quadrature value of one method.
pub fn evaluate_method(
    point: &Point,
    method: MethodName,
    metric: MetricName,
    zeta: ZetaChoice,
) -> Result<MetricResult, Error> {
    let spec = QuadratureSpec::default();
    let avg = metric == MetricName::AvgSnr;
    let (ew, link) = (&point.ew, &point.link);
    match method {
        MethodName::Quadrature => {
            let m = match point.pointing {
                None => SnrModel::turb_exact(*ew, *link)?,
                Some(_) => with_pointing(point, method, SnrVariant::CombinedSeries)?,
            };
            if avg {
                avg_snr_numeric(&m, &spec)
            } else {
                ergodic_rate_numeric(&m, &spec)
            }
        }
        MethodName::Lemma1 => {
            turbulence_only(point, method)?;
            if avg {
                avg_snr_turb_approx(ew, link)
            } else {
                ergodic_rate_turb_approx(ew, link, zeta)
            }
        }
        MethodName::Prop1Asymptotic => {
            turbulence_only(point, method)?;
            if avg {
                avg_snr_turb_asymp(ew, link.gamma0())
            } else {
                ergodic_rate_turb_asymp(ew, link.gamma0())
            }
        }
        MethodName::Prop1AsymptoticWithLoss => {
            turbulence_only(point, method)?;
            if avg {
                avg_snr_turb_asymp_with_loss(ew, link)
            } else {
                ergodic_rate_turb_asymp_with_loss(ew, link)
            }
        }
        MethodName::Lemma2Series | MethodName::Lemma2SeriesPrinted => {
            let m = with_pointing(point, method, SnrVariant::CombinedSeries)?;
            match (avg, method) {
                (true, _) => avg_snr_combined_series(&m),
                (false, MethodName::Lemma2Series) => ergodic_rate_combined_lb(&m),
                (false, _) => ergodic_rate_combined_lb_printed(&m),
            }
        }
        MethodName::Prop2Derived | MethodName::Prop2Printed => {
            let m = with_pointing(point, method, SnrVariant::CombinedAsymptotic)?;
            let f = if method == MethodName::Prop2Derived {
                Prop2Formula::Derived
            } else {
                Prop2Formula::Printed
            };
            if avg {
                avg_snr_combined_asymp(&m, f)
            } else {
                ergodic_rate_combined_asymp(&m, f, zeta)
            }
        }
    }
}

fn estimate_row(mut row: Row, e: &Estimate) -> Row {
    row.value = Some(e.mean);
    row.stderr = Some(e.stderr);
    row.ci95_low = Some(e.ci95_low);
    row.ci95_high = Some(e.ci95_high);
    row.seed = Some(e.seed);
    row
}

/// All rows of one point: methods in configured order, then the Monte Carlo arms.
pub fn evaluate_point(
    point: &Point,
    axis_name: &str,
    methods: &[MethodName],
    metrics: &[MetricName],
    zeta: ZetaChoice,
    mc: Option<&MonteCarloConfig>,
) -> Vec<Row> {
    let mut rows = Vec::new();
    for &method in methods {
        for &metric in metrics.iter().filter(|m| method.metrics().contains(m)) {
            let mut row = Row::blank(point, axis_name, method.as_str(), metric);
            match evaluate_method(point, method, metric, zeta) {
                Ok(r) => {
                    row.value = Some(r.value);
                    row.terms_used = r.terms_used;
                }
                Err(e) => row.error = Some(format!("{}: {e}", method.as_str())),
            }
            rows.push(row);
        }
    }
    let Some(cfg) = mc else {
        return rows;
    };
    let ew_arm = Turbulence::Ew(point.ew);
    let arms: Result<Vec<(&str, Estimate, Estimate)>, Error> = match point.gg {
        None => mc_estimate_both(&Channel::new(ew_arm, point.pointing), &point.link, cfg)
            .map(|(a, r)| vec![(MC_EW, a, r)]),
        Some(gg) => {
            compare_models(&point.ew, &gg, point.pointing.as_ref(), &point.link, cfg).map(|c| {
                vec![
                    (MC_EW, c.first_avg_snr, c.first_rate),
                    (MC_GG, c.second_avg_snr, c.second_rate),
                ]
            })
        }
    };
    match arms {
        Ok(arms) => {
            for (name, avg, rate) in arms {
                for &metric in metrics {
                    let e = if metric == MetricName::AvgSnr {
                        &avg
                    } else {
                        &rate
                    };
                    rows.push(estimate_row(Row::blank(point, axis_name, name, metric), e));
                }
            }
        }
        Err(e) => {
            let names: &[&str] = if point.gg.is_some() {
                &[MC_EW, MC_GG]
            } else {
                &[MC_EW]
            };
            for name in names {
                for &metric in metrics {
                    let mut row = Row::blank(point, axis_name, name, metric);
                    row.error = Some(format!("{name}: {e}"));
                    rows.push(row);
                }
            }
        }
    }
    rows
}
