//! Configuration files.
//!
//! A config is a TOML document. Every section is optional when a `preset`
//! supplies the values; fields given in the file override the preset.
//!
//! ```toml
//! preset = "strong_zero_boresight"
//!
//! [link]
//! transmit_power_dbm = 22.0
//! distance_m = 3000.0
//! wavelength_m = 1.55e-6
//! responsivity = 0.41
//! noise_variance = 1e-14
//! visibility_m = 16000.0        # or atten_coeff_per_m, which wins if both are set
//!
//! [turbulence]
//! alpha = 2.0
//! beta = 1.2
//! eta = 0.739
//!
//! [pointing]                    # enabled = false gives a turbulence-only channel
//! aperture_diameter_m = 0.1
//! beam_width_m = 2.5
//! sigma_x_m = 0.35
//! sigma_y_m = 0.35
//! mu_x_m = 0.0
//! mu_y_m = 0.0
//!
//! [gamma_gamma]                 # Monte Carlo comparison arm
//! moment_matched = true         # or a_gg / b_gg
//!
//! [analysis]
//! methods = ["quadrature", "lemma2_series", "prop2_derived"]
//! metrics = ["avg_snr", "ergodic_rate"]
//! zeta = 8
//!
//! [mc]
//! samples = 1000000
//! seed = 1
//! workers = 4
//!
//! [sweep]
//! axis = "distance_m"           # transmit_power_dbm | distance_m | preset_name
//! points = [1000.0, 2000.0, 3000.0]
//! ```

use std::fmt;
use std::ops::Range;

use owc_core::analysis::ZetaChoice;
use owc_core::channels::{atten_from_visibility, EwParams, LinkBudget, PointingGeometry};
use owc_core::simulate::{moment_matched_gg, GgParams, MonteCarloConfig};
use serde::Deserialize;
use toml::Spanned;

use crate::evaluate::{MethodName, MetricName};
use crate::presets::{preset, Preset};

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct LinkSection {
    transmit_power_dbm: Option<f64>,
    distance_m: Option<f64>,
    wavelength_m: Option<f64>,
    responsivity: Option<f64>,
    noise_variance: Option<f64>,
    visibility_m: Option<f64>,
    atten_coeff_per_m: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct TurbulenceSection {
    alpha: Option<f64>,
    beta: Option<f64>,
    eta: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct PointingSection {
    enabled: Option<bool>,
    aperture_diameter_m: Option<f64>,
    beam_width_m: Option<f64>,
    sigma_x_m: Option<f64>,
    sigma_y_m: Option<f64>,
    mu_x_m: Option<f64>,
    mu_y_m: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct GgSection {
    a_gg: Option<f64>,
    b_gg: Option<f64>,
    #[serde(default)]
    moment_matched: bool,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct AnalysisSection {
    methods: Option<Vec<MethodName>>,
    metrics: Option<Vec<MetricName>>,
    zeta: Option<u32>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct McSection {
    samples: Option<u64>,
    seed: Option<u64>,
    workers: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    TransmitPowerDbm,
    DistanceM,
    PresetName,
}

impl Axis {
    pub fn name(&self) -> &'static str {
        match self {
            Axis::TransmitPowerDbm => "transmit_power_dbm",
            Axis::DistanceM => "distance_m",
            Axis::PresetName => "preset_name",
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepSection {
    axis: Axis,
    points: Spanned<Vec<toml::Value>>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    preset: Option<Spanned<String>>,
    link: Option<Spanned<LinkSection>>,
    turbulence: Option<Spanned<TurbulenceSection>>,
    pointing: Option<Spanned<PointingSection>>,
    gamma_gamma: Option<Spanned<GgSection>>,
    analysis: Option<Spanned<AnalysisSection>>,
    mc: Option<Spanned<McSection>>,
    sweep: Option<Spanned<SweepSection>>,
}

/// Command-line and environment overrides, applied over the file.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub mc_samples: Option<u64>,
}

/// Value of the swept axis at one point.
#[derive(Debug, Clone, PartialEq)]
pub enum AxisValue {
    Number(f64),
    Preset(String),
}

impl fmt::Display for AxisValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxisValue::Number(v) => write!(f, "{v}"),
            AxisValue::Preset(s) => f.write_str(s),
        }
    }
}

/// Gamma-Gamma arm as configured.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GgChoice {
    Explicit(GgParams),
    MomentMatched,
}

/// Fully resolved parameters of one evaluation point.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    pub axis_value: AxisValue,
    pub preset: Option<String>,
    pub transmit_power_dbm: f64,
    pub link: LinkBudget,
    pub ew: EwParams,
    pub pointing: Option<PointingGeometry>,
    pub gg: Option<GgParams>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub methods: Vec<MethodName>,
    pub metrics: Vec<MetricName>,
    pub zeta: ZetaChoice,
    pub mc: Option<MonteCarloConfig>,
    pub axis: Option<Axis>,
    pub points: Vec<Point>,
}

/// `P[W] = 10^{(P[dBm] - 30)/10}`
pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

pub fn watts_to_dbm(w: f64) -> f64 {
    10.0 * w.log10() + 30.0
}

struct Source<'a> {
    text: &'a str,
}

impl Source<'_> {
    fn line(&self, span: Range<usize>) -> usize {
        let end = span.start.min(self.text.len());
        self.text[..end].bytes().filter(|&b| b == b'\n').count() + 1
    }

    fn err(&self, span: Option<Range<usize>>, message: impl Into<String>) -> ConfigError {
        ConfigError {
            line: span.map(|s| self.line(s)),
            message: message.into(),
        }
    }
}

fn toml_error(e: toml::de::Error, src: &Source) -> ConfigError {
    ConfigError {
        line: e.span().map(|s| src.line(s)),
        message: e.message().to_string(),
    }
}

fn section<T: Clone + Default>(s: &Option<Spanned<T>>) -> (T, Option<Range<usize>>) {
    match s {
        Some(v) => (v.get_ref().clone(), Some(v.span())),
        None => (T::default(), None),
    }
}

/// Required value: from the file, else from the preset, else an error naming the field.
fn require(
    file: Option<f64>,
    preset: Option<f64>,
    field: &str,
    span: &Option<Range<usize>>,
    src: &Source,
) -> Result<f64, ConfigError> {
    file.or(preset)
        .ok_or_else(|| src.err(span.clone(), format!("missing field `{field}`")))
}

impl Config {
    pub fn parse(text: &str, overrides: Overrides) -> Result<Self, ConfigError> {
        let src = Source { text };
        let file: ConfigFile = toml::from_str(text).map_err(|e| toml_error(e, &src))?;

        let (analysis, analysis_span) = section(&file.analysis);
        let zeta = ZetaChoice::new(analysis.zeta.unwrap_or(8))
            .map_err(|e| src.err(analysis_span.clone(), e.to_string()))?;
        let metrics = analysis
            .metrics
            .unwrap_or_else(|| vec![MetricName::AvgSnr, MetricName::ErgodicRate]);
        if metrics.is_empty() {
            return Err(src.err(analysis_span, "`metrics` must not be empty"));
        }

        let mc = Self::mc(&file, overrides, &src)?;

        let (axis, values) = match &file.sweep {
            None => (None, vec![None]),
            Some(s) => {
                let sweep = s.get_ref();
                let pts = Self::sweep_points(sweep, &src)?;
                (Some(sweep.axis), pts.into_iter().map(Some).collect())
            }
        };
        let points = values
            .into_iter()
            .map(|v| Self::point(&file, v, &src))
            .collect::<Result<Vec<_>, _>>()?;

        let methods = match analysis.methods {
            Some(m) if m.is_empty() => {
                return Err(src.err(analysis_span, "`methods` must not be empty"))
            }
            Some(m) => m,
            None => MethodName::defaults(points[0].pointing.as_ref()),
        };

        Ok(Self {
            methods,
            metrics,
            zeta,
            mc,
            axis,
            points,
        })
    }

    fn mc(
        file: &ConfigFile,
        o: Overrides,
        src: &Source,
    ) -> Result<Option<MonteCarloConfig>, ConfigError> {
        let (mc, span) = section(&file.mc);
        if file.mc.is_none() && o.mc_samples.is_none() {
            return Ok(None);
        }
        let default_workers = std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1);
        let cfg = MonteCarloConfig::new(
            o.mc_samples.or(mc.samples).unwrap_or(1_000_000),
            o.seed.or(mc.seed).unwrap_or(1),
            o.workers.or(mc.workers).unwrap_or(default_workers),
        )
        .map_err(|e| src.err(span, e.to_string()))?;
        Ok(Some(cfg))
    }

    fn sweep_points(s: &SweepSection, src: &Source) -> Result<Vec<AxisValue>, ConfigError> {
        let span = Some(s.points.span());
        let raw = s.points.get_ref();
        if raw.is_empty() {
            return Err(src.err(span, "`points` must not be empty"));
        }
        let pts = match s.axis {
            Axis::PresetName => raw
                .iter()
                .map(|v| match v.as_str() {
                    Some(name) if preset(name).is_some() => Ok(AxisValue::Preset(name.into())),
                    Some(name) => Err(src.err(span.clone(), format!("unknown preset `{name}`"))),
                    None => Err(src.err(span.clone(), "preset points must be strings")),
                })
                .collect::<Result<Vec<_>, _>>()?,
            _ => raw
                .iter()
                .map(|v| {
                    v.as_float()
                        .or_else(|| v.as_integer().map(|i| i as f64))
                        .filter(|x| x.is_finite())
                        .map(AxisValue::Number)
                        .ok_or_else(|| src.err(span.clone(), "sweep points must be finite numbers"))
                })
                .collect::<Result<Vec<_>, _>>()?,
        };
        let nums: Vec<f64> = pts
            .iter()
            .filter_map(|p| match p {
                AxisValue::Number(x) => Some(*x),
                AxisValue::Preset(_) => None,
            })
            .collect();
        let up = nums.windows(2).all(|w| w[1] > w[0]);
        let down = nums.windows(2).all(|w| w[1] < w[0]);
        if !(up || down) {
            return Err(src.err(span, "numeric sweep points must be strictly monotone"));
        }
        Ok(pts)
    }

    fn point(
        file: &ConfigFile,
        axis_value: Option<AxisValue>,
        src: &Source,
    ) -> Result<Point, ConfigError> {
        let preset_name = match &axis_value {
            Some(AxisValue::Preset(p)) => Some((p.clone(), None)),
            _ => file
                .preset
                .as_ref()
                .map(|p| (p.get_ref().clone(), Some(p.span()))),
        };
        let base: Option<Preset> = match &preset_name {
            None => None,
            Some((name, span)) => Some(
                preset(name)
                    .ok_or_else(|| src.err(span.clone(), format!("unknown preset `{name}`")))?,
            ),
        };
        let pv = |f: fn(&Preset) -> f64| base.as_ref().map(f);

        let (link, ls) = section(&file.link);
        let mut power = require(
            link.transmit_power_dbm,
            pv(|p| p.transmit_power_dbm),
            "link.transmit_power_dbm",
            &ls,
            src,
        )?;
        let mut distance = require(
            link.distance_m,
            pv(|p| p.distance_m),
            "link.distance_m",
            &ls,
            src,
        )?;
        match &axis_value {
            Some(AxisValue::Number(x))
                if file.sweep.as_ref().map(|s| s.get_ref().axis)
                    == Some(Axis::TransmitPowerDbm) =>
            {
                power = *x
            }
            Some(AxisValue::Number(x)) => distance = *x,
            _ => {}
        }
        let responsivity = require(
            link.responsivity,
            pv(|p| p.responsivity),
            "link.responsivity",
            &ls,
            src,
        )?;
        let noise = require(
            link.noise_variance,
            pv(|p| p.noise_variance),
            "link.noise_variance",
            &ls,
            src,
        )?;
        let atten = match link.atten_coeff_per_m {
            Some(c) => c,
            None => {
                let v = require(
                    link.visibility_m,
                    pv(|p| p.visibility_m),
                    "link.visibility_m",
                    &ls,
                    src,
                )?;
                let w = require(
                    link.wavelength_m,
                    pv(|p| p.wavelength_m),
                    "link.wavelength_m",
                    &ls,
                    src,
                )?;
                atten_from_visibility(v, w).map_err(|e| src.err(ls.clone(), e.to_string()))?
            }
        };
        let budget = LinkBudget::new(dbm_to_watts(power), responsivity, noise, atten, distance)
            .map_err(|e| src.err(ls.clone(), e.to_string()))?;

        let (t, ts) = section(&file.turbulence);
        let ew = EwParams::new(
            require(
                t.alpha,
                base.map(|p| p.ew.alpha),
                "turbulence.alpha",
                &ts,
                src,
            )?,
            require(t.beta, base.map(|p| p.ew.beta), "turbulence.beta", &ts, src)?,
            require(t.eta, base.map(|p| p.ew.eta), "turbulence.eta", &ts, src)?,
        )
        .map_err(|e| src.err(ts.clone(), e.to_string()))?;

        let pointing = Self::pointing(file, base.as_ref(), src)?;

        let gg = match &file.gamma_gamma {
            None => None,
            Some(s) => {
                let g = s.get_ref();
                let span = Some(s.span());
                let choice = match (g.moment_matched, g.a_gg, g.b_gg) {
                    (true, None, None) => GgChoice::MomentMatched,
                    (false, Some(a), Some(b)) => GgChoice::Explicit(
                        GgParams::new(a, b).map_err(|e| src.err(span.clone(), e.to_string()))?,
                    ),
                    (true, _, _) => {
                        return Err(
                            src.err(span, "give either moment_matched or a_gg/b_gg, not both")
                        )
                    }
                    _ => {
                        return Err(src.err(
                            span,
                            "missing field `gamma_gamma.a_gg` or `gamma_gamma.b_gg`",
                        ))
                    }
                };
                Some(match choice {
                    GgChoice::Explicit(p) => p,
                    GgChoice::MomentMatched => {
                        moment_matched_gg(&ew).map_err(|e| src.err(span, e.to_string()))?
                    }
                })
            }
        };

        Ok(Point {
            axis_value: axis_value.unwrap_or_else(|| {
                AxisValue::Preset(preset_name.map(|p| p.0).unwrap_or_else(|| "config".into()))
            }),
            preset: base.map(|p| p.name.to_string()),
            transmit_power_dbm: power,
            link: budget,
            ew,
            pointing,
            gg,
        })
    }

    fn pointing(
        file: &ConfigFile,
        base: Option<&Preset>,
        src: &Source,
    ) -> Result<Option<PointingGeometry>, ConfigError> {
        let (p, ps) = section(&file.pointing);
        if p.enabled == Some(false) || (file.pointing.is_none() && base.is_none()) {
            return Ok(None);
        }
        let pv = |f: fn(&Preset) -> f64| base.map(f);
        let d = require(
            p.aperture_diameter_m,
            pv(|b| b.aperture_diameter_m),
            "pointing.aperture_diameter_m",
            &ps,
            src,
        )?;
        let g = PointingGeometry::new(
            d / 2.0,
            require(
                p.beam_width_m,
                pv(|b| b.beam_width_m),
                "pointing.beam_width_m",
                &ps,
                src,
            )?,
            require(
                p.sigma_x_m,
                pv(|b| b.sigma_x_m),
                "pointing.sigma_x_m",
                &ps,
                src,
            )?,
            require(
                p.sigma_y_m,
                pv(|b| b.sigma_y_m),
                "pointing.sigma_y_m",
                &ps,
                src,
            )?,
            p.mu_x_m.or(pv(|b| b.mu_x_m)).unwrap_or(0.0),
            p.mu_y_m.or(pv(|b| b.mu_y_m)).unwrap_or(0.0),
        )
        .map_err(|e| src.err(ps, e.to_string()))?;
        Ok(Some(g))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dbm_round_trip() {
        assert!((dbm_to_watts(30.0) - 1.0).abs() < 1e-15);
        assert!((dbm_to_watts(0.0) - 1e-3).abs() < 1e-18);
        assert!((watts_to_dbm(dbm_to_watts(22.0)) - 22.0).abs() < 1e-12);
    }

    #[test]
    fn preset_only_config() {
        let c = Config::parse("preset = \"strong\"\n", Overrides::default()).unwrap();
        let p = &c.points[0];
        assert_eq!(p.preset.as_deref(), Some("strong"));
        assert!(p.pointing.is_some());
        assert!(c.mc.is_none());
        assert_eq!(p.link.distance_m, 2000.0);
    }

    #[test]
    fn missing_eta_names_field_and_line() {
        let text = "[link]\ntransmit_power_dbm = 20\ndistance_m = 1000\nresponsivity = 0.41\nnoise_variance = 1e-14\natten_coeff_per_m = 1e-4\n\n[turbulence]\nalpha = 2.0\nbeta = 1.5\n";
        let e = Config::parse(text, Overrides::default()).unwrap_err();
        assert!(e.message.contains("turbulence.eta"), "{e}");
        assert_eq!(e.line, Some(8));
    }

    #[test]
    fn unknown_field_is_located() {
        let e = Config::parse(
            "preset = \"strong\"\n[turbulence]\nalpah = 2\n",
            Overrides::default(),
        )
        .unwrap_err();
        assert_eq!(e.line, Some(3), "{e}");
    }

    #[test]
    fn non_monotone_sweep_rejected() {
        let text =
            "preset = \"strong\"\n[sweep]\naxis = \"distance_m\"\npoints = [1000, 3000, 2000]\n";
        assert!(Config::parse(text, Overrides::default()).is_err());
    }

    #[test]
    fn overrides_enable_mc() {
        let o = Overrides {
            seed: Some(9),
            workers: Some(2),
            mc_samples: Some(1000),
        };
        let c = Config::parse("preset = \"medium\"\n", o).unwrap();
        assert_eq!(c.mc, Some(MonteCarloConfig::new(1000, 9, 2).unwrap()));
    }
}
