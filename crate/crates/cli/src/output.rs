//! CSV and plain-text rendering of result rows.

use std::io::Write;

use crate::evaluate::{MetricName, Row, MC_EW};

pub const CSV_COLUMNS: [&str; 10] = [
    "axis_name",
    "axis_value",
    "method",
    "metric",
    "value",
    "stderr",
    "ci95_low",
    "ci95_high",
    "terms_used",
    "status",
];

fn num(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.12e}")).unwrap_or_default()
}

pub fn write_csv<W: Write>(rows: &[Row], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_COLUMNS)?;
    for r in rows {
        w.write_record([
            r.axis_name.clone(),
            r.axis_value.clone(),
            r.method.clone(),
            r.metric.as_str().to_string(),
            num(r.value),
            num(r.stderr),
            num(r.ci95_low),
            num(r.ci95_high),
            r.terms_used.map(|t| t.to_string()).unwrap_or_default(),
            r.status(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn gap(value: Option<f64>, reference: Option<f64>) -> String {
    match (value, reference) {
        (Some(v), Some(r)) if r != 0.0 => format!("{:+.3e}", v / r - 1.0),
        _ => "-".into(),
    }
}

/// Side-by-side table with relative gaps to Monte Carlo and to quadrature.
pub fn write_table<W: Write>(rows: &[Row], mut out: W) -> std::io::Result<()> {
    let reference = |method: &str, metric: MetricName| {
        rows.iter()
            .find(|r| r.method == method && r.metric == metric)
            .and_then(|r| r.value)
    };
    writeln!(
        out,
        "{:<28} {:<13} {:>20} {:>12} {:>11} {:>11} {:>6}  status",
        "method", "metric", "value", "stderr", "gap_mc", "gap_quad", "seed"
    )?;
    for r in rows {
        let value = r.value.map(|v| format!("{v:.10e}")).unwrap_or("-".into());
        let stderr = r.stderr.map(|v| format!("{v:.3e}")).unwrap_or("-".into());
        let seed = r.seed.map(|s| s.to_string()).unwrap_or("-".into());
        writeln!(
            out,
            "{:<28} {:<13} {:>20} {:>12} {:>11} {:>11} {:>6}  {}",
            r.method,
            r.metric.as_str(),
            value,
            stderr,
            gap(r.value, reference(MC_EW, r.metric)),
            gap(r.value, reference("quadrature", r.metric)),
            seed,
            r.status()
        )?;
    }
    Ok(())
}
