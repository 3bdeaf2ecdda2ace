//! Summation of slowly converging infinite series.
//!
//! Terms are summed directly until they fall below the requested relative
//! size. Series whose terms decay only algebraically get an Euler–Maclaurin
//! tail estimate built from a smooth continuation of the term in `j`; the
//! series is accepted once two successive tail-corrected totals agree.

use serde::{Deserialize, Serialize};

use super::quadrature::{integrate, Domain, QuadratureSpec};
use crate::error::{Error, Result};

/// Stopping rule for infinite sums.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesControl {
    pub max_terms: usize,
    /// Stop when `|term| < rel_term_tol · |partial sum|`.
    pub rel_term_tol: f64,
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self {
            max_terms: 200,
            rel_term_tol: 1e-12,
        }
    }
}

impl SeriesControl {
    pub fn new(max_terms: usize, rel_term_tol: f64) -> Result<Self> {
        let c = Self {
            max_terms,
            rel_term_tol,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_terms < 1 {
            return Err(Error::param("max_terms", "must be >= 1"));
        }
        if self.rel_term_tol.is_nan() || self.rel_term_tol <= 0.0 {
            return Err(Error::param("rel_term_tol", "must be > 0"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSum {
    pub value: f64,
    /// Number of explicitly summed terms.
    pub terms_used: usize,
    /// Euler–Maclaurin estimate of the omitted tail (0 when the terms died out).
    pub tail: f64,
}

/// Neumaier compensated accumulator.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

const TAIL_STRIDE: usize = 8;
const MIN_TAIL_START: usize = 16;

/// Smooth continuation of a series term, used for the tail.
pub struct Continuation<'a> {
    pub term: &'a dyn Fn(f64) -> f64,
    /// First index from which the continuation is smooth and monotone.
    pub valid_from: usize,
}

/// `Σ_{k ≥ n} g(k)` by Euler–Maclaurin with three correction terms.
fn euler_maclaurin_tail(g: &dyn Fn(f64) -> f64, n: f64) -> Result<f64> {
    let spec = QuadratureSpec {
        rel_tol: 1e-12,
        abs_tol: 0.0,
        max_subdivisions: 2000,
    };
    let integral = match integrate(|s| g(n + s), Domain::HalfLine { scale: n }, &spec) {
        Ok(r) => r.value,
        Err(Error::Quadrature { estimate, .. }) => estimate,
        Err(e) => return Err(e),
    };
    let h = 0.5;
    let (m2, m1, p1, p2) = (g(n - 2.0 * h), g(n - h), g(n + h), g(n + 2.0 * h));
    let d1 = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
    let d3 = (p2 - 2.0 * p1 + 2.0 * m1 - m2) / (2.0 * h * h * h);
    Ok(integral + 0.5 * g(n) - d1 / 12.0 + d3 / 720.0)
}

/// Sums `Σ_{j ≥ 0} term(j)`.
///
/// `length`, when known (e.g. a terminating binomial series), bounds the sum
/// exactly. `continuation` enables the tail estimate for algebraic decay.
pub fn sum_series(
    mut term: impl FnMut(usize) -> Result<f64>,
    length: Option<usize>,
    continuation: Option<Continuation<'_>>,
    control: &SeriesControl,
) -> Result<SeriesSum> {
    control.validate()?;
    if let Some(n) = length {
        let mut acc = CompensatedSum::default();
        for j in 0..n {
            acc.add(term(j)?);
        }
        return Ok(SeriesSum {
            value: acc.value(),
            terms_used: n,
            tail: 0.0,
        });
    }

    let tail_start = continuation
        .as_ref()
        .map(|c| c.valid_from.max(MIN_TAIL_START));
    let mut acc = CompensatedSum::default();
    let mut small_run = 0;
    let mut previous_total: Option<f64> = None;
    for j in 0..control.max_terms {
        let t = term(j)?;
        acc.add(t);
        let partial = acc.value();
        if t.abs() <= control.rel_term_tol * partial.abs() {
            small_run += 1;
            if small_run >= 2 {
                return Ok(SeriesSum {
                    value: partial,
                    terms_used: j + 1,
                    tail: 0.0,
                });
            }
        } else {
            small_run = 0;
        }

        let summed = j + 1;
        if let (Some(cont), Some(start)) = (continuation.as_ref(), tail_start) {
            if summed >= start && (summed - start) % TAIL_STRIDE == 0 {
                let tail = euler_maclaurin_tail(cont.term, summed as f64)?;
                let total = partial + tail;
                if let Some(prev) = previous_total {
                    if (total - prev).abs() <= control.rel_term_tol * total.abs() {
                        return Ok(SeriesSum {
                            value: total,
                            terms_used: summed,
                            tail,
                        });
                    }
                }
                previous_total = Some(total);
            }
        }
    }
    Err(Error::Series {
        partial: previous_total.unwrap_or(acc.value()),
        terms: control.max_terms,
    })
}
