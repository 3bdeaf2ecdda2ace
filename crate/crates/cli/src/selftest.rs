//! Built-in consistency checks: incomplete-gamma identities, density
//! normalization and a reduced Monte Carlo oracle chain.

use owc_core::analysis::{avg_snr_numeric, normalization};
use owc_core::channels::{ew_pdf, pointing_pdf, EwParams, LinkBudget, PointingGeometry, SnrModel};
use owc_core::simulate::{mc_estimate, Channel, Metric, MonteCarloConfig};
use owc_core::special_math::{
    digamma, gamma_fn, integrate, upper_incomplete_gamma, Domain, QuadratureSpec, SeriesControl,
};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelftestReport {
    pub passed: bool,
    pub checks: Vec<Check>,
    pub failures: Vec<String>,
}

struct Runner {
    checks: Vec<Check>,
    /// Replaces every tolerance when set.
    forced_tolerance: Option<f64>,
}

impl Runner {
    fn push(&mut self, name: String, residual: Result<f64, String>, tolerance: f64) {
        let tolerance = self.forced_tolerance.unwrap_or(tolerance);
        let (residual, passed) = match residual {
            Ok(r) => (r, r <= tolerance),
            Err(e) => {
                eprintln!("{name}: {e}");
                (f64::NAN, false)
            }
        };
        self.checks.push(Check {
            name,
            residual,
            tolerance,
            passed,
        });
    }
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

const AB_GRID: [f64; 3] = [0.5, 1.0, 2.0];
const B_GRID: [f64; 3] = [0.25, 1.0, 3.0];

fn identities(r: &mut Runner, spec: &QuadratureSpec) {
    for a in AB_GRID {
        for b in B_GRID {
            let moment = |log: bool| {
                integrate(
                    |t| {
                        if t == 0.0 {
                            return 0.0;
                        }
                        let g = t.powf(a - 1.0) * upper_incomplete_gamma(b, t).unwrap_or(f64::NAN);
                        if log {
                            g * t.ln()
                        } else {
                            g
                        }
                    },
                    Domain::half_line(),
                    spec,
                )
                .map(|i| i.value)
                .map_err(|e| e.to_string())
            };
            let plain = (|| {
                let expected = gamma_fn(a + b).map_err(|e| e.to_string())? / a;
                Ok(rel(moment(false)?, expected))
            })();
            r.push(format!("identity_moment(a={a},b={b})"), plain, 1e-6);
            let log = (|| {
                let expected = gamma_fn(a + b).map_err(|e| e.to_string())?
                    * (-1.0 + a * digamma(a + b).map_err(|e| e.to_string())?)
                    / (a * a);
                Ok(rel(moment(true)?, expected))
            })();
            r.push(format!("identity_log_moment(a={a},b={b})"), log, 1e-6);
        }
    }
}

const TURB_SETS: [(f64, f64, f64, f64, f64); 4] = [
    (1.0, 2.0, 1.0, 1.0, 100.0),
    (2.5, 1.8, 1.0, 1.0, 100.0),
    (5.8, 1.3, 0.9, 0.5, 1e4),
    (0.7, 2.2, 1.3, 0.8, 1e3),
];

fn normalizations(r: &mut Runner, spec: &QuadratureSpec) {
    for (a, b, e, l, g0) in TURB_SETS {
        let p = EwParams::new(a, b, e).expect("fixed parameters");
        let mass = integrate(
            |h| ew_pdf(h, &p).unwrap_or(f64::NAN),
            Domain::HalfLine { scale: e },
            spec,
        )
        .map(|i| (i.value - 1.0).abs())
        .map_err(|x| x.to_string());
        r.push(
            format!("ew_pdf_mass(alpha={a},beta={b},eta={e})"),
            mass,
            1e-6,
        );
        let snr = LinkBudget::normalized(g0, l)
            .and_then(|link| SnrModel::turb_exact(p, link))
            .and_then(|m| normalization(&m, spec))
            .map(|i| (i.value - 1.0).abs())
            .map_err(|x| x.to_string());
        r.push(
            format!("turb_exact_mass(alpha={a},beta={b},eta={e})"),
            snr,
            1e-6,
        );
    }
    for sigma in [0.2, 0.35, 0.6] {
        let g = PointingGeometry::symmetric(0.05, 2.5, sigma).expect("fixed geometry");
        let mass = integrate(|h| pointing_pdf(h, &g), Domain::finite(0.0, g.a0()), spec)
            .map(|i| (i.value - 1.0).abs())
            .map_err(|x| x.to_string());
        r.push(format!("pointing_pdf_mass(sigma={sigma})"), mass, 1e-6);
    }
    for (a, b, a0, rho, g0) in [(2.5, 1.8, 0.04, 1.2, 1e10), (3.0, 2.0, 0.05, 1.5, 1e10)] {
        let mass = (|| {
            let m = SnrModel::combined_series(
                EwParams::new(a, b, 1.0)?,
                PointingGeometry::from_a0_rho(2.5, a0, rho)?,
                LinkBudget::normalized(g0, 0.2)?,
                SeriesControl::default(),
            )?;
            normalization(&m, spec).map(|i| (i.value - 1.0).abs())
        })()
        .map_err(|x| x.to_string());
        r.push(
            format!("combined_series_mass(alpha={a},beta={b},rho={rho})"),
            mass,
            1e-3,
        );
    }
}

fn oracle_chain(r: &mut Runner, spec: &QuadratureSpec, workers: usize) {
    for (k, (a, b, e, l, g0)) in TURB_SETS.into_iter().enumerate() {
        let residual = (|| {
            let m = SnrModel::turb_exact(EwParams::new(a, b, e)?, LinkBudget::normalized(g0, l)?)?;
            let q = avg_snr_numeric(&m, spec)?.value;
            let cfg = MonteCarloConfig::new(200_000, 1000 + k as u64, workers)?;
            let est = mc_estimate(Metric::AvgSnr, &Channel::from_model(&m)?, &m.link, &cfg)?;
            Ok::<f64, owc_core::Error>((est.mean - q).abs() / est.stderr)
        })()
        .map_err(|x| x.to_string());
        r.push(
            format!("mc_oracle_avg_snr(alpha={a},beta={b},eta={e}) [stderrs]"),
            residual,
            3.0,
        );
    }
}

/// Run every check. `inject_fault` forces all tolerances to zero.
pub fn run(inject_fault: bool, workers: usize) -> SelftestReport {
    let spec = QuadratureSpec::default();
    let mut r = Runner {
        checks: Vec::new(),
        forced_tolerance: inject_fault.then_some(0.0),
    };
    identities(&mut r, &spec);
    normalizations(&mut r, &spec);
    oracle_chain(&mut r, &spec, workers);
    let failures: Vec<String> = r
        .checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.name.clone())
        .collect();
    SelftestReport {
        passed: failures.is_empty(),
        checks: r.checks,
        failures,
    }
}
