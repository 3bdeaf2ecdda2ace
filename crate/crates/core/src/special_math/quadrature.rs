//! Globally adaptive Gauss–Kronrod (7/15) quadrature.
//!
//! The 15-point Kronrod rule never evaluates the endpoints, so integrable
//! endpoint singularities of the form `x^{p-1}`, `p > 0`, are handled by
//! repeated bisection toward the singular end. The half line `[0, ∞)` is
//! mapped onto `[0, 1)` by `t = s·u/(1-u)` where `s` is a caller-chosen
//! scale that should sit near the bulk of the integrand.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Kronrod abscissae on `[-1, 1]`, non-negative half. Odd indices are the Gauss nodes.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_3,
    0.949_107_912_342_758_524_526_189_684_047_9,
    0.864_864_423_359_769_072_789_712_788_640_9,
    0.741_531_185_599_394_439_863_864_773_280_8,
    0.586_087_235_467_691_130_294_144_845_693_0,
    0.405_845_151_377_397_166_906_606_412_076_9,
    0.207_784_955_007_898_467_600_689_403_773_2,
    0.000_000_000_000_000_000_000_000_000_000_0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_97,
    0.063_092_092_629_978_553_290_700_663_189_20,
    0.104_790_010_322_250_183_839_876_322_541_52,
    0.140_653_259_715_525_918_745_189_590_510_24,
    0.169_004_726_639_267_902_826_583_426_598_55,
    0.190_350_578_064_785_409_913_256_402_421_01,
    0.204_432_940_075_298_892_414_161_999_234_65,
    0.209_482_141_084_727_828_012_999_174_891_71,
];

/// Gauss 7-point weights for nodes XGK[1], XGK[3], XGK[5], XGK[7].
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_08,
    0.279_705_391_489_276_667_901_467_771_423_78,
    0.381_830_050_505_118_944_950_369_775_488_98,
    0.417_959_183_673_469_387_755_102_040_816_33,
];

/// Tolerances and work limit for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            max_subdivisions: 4000,
        }
    }
}

impl QuadratureSpec {
    pub fn new(rel_tol: f64, abs_tol: f64, max_subdivisions: usize) -> Result<Self> {
        let spec = Self {
            rel_tol,
            abs_tol,
            max_subdivisions,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.rel_tol.is_nan() || self.rel_tol <= 0.0 {
            return Err(Error::param("rel_tol", "must be > 0"));
        }
        if self.abs_tol.is_nan() || self.abs_tol < 0.0 {
            return Err(Error::param("abs_tol", "must be >= 0"));
        }
        if self.max_subdivisions < 1 {
            return Err(Error::param("max_subdivisions", "must be >= 1"));
        }
        Ok(())
    }
}

/// Integration domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    Finite {
        lower: f64,
        upper: f64,
    },
    /// `[0, ∞)` through `t = scale·u/(1-u)`.
    HalfLine {
        scale: f64,
    },
}

impl Domain {
    pub fn finite(lower: f64, upper: f64) -> Self {
        Domain::Finite { lower, upper }
    }

    pub fn half_line() -> Self {
        Domain::HalfLine { scale: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error_estimate: f64,
    pub subdivisions: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod_segment<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<Segment> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let mut error = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    if !value.is_finite() || !error.is_finite() {
        return Err(Error::domain(
            "integrate",
            format!("integrand not finite on [{a:e}, {b:e}]"),
        ));
    }
    Ok(Segment { a, b, value, error })
}

fn adapt<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Integral> {
    const INITIAL_PIECES: usize = 8;
    let mut heap = BinaryHeap::new();
    let mut frozen: Vec<Segment> = Vec::new();
    let width = (b - a) / INITIAL_PIECES as f64;
    for k in 0..INITIAL_PIECES {
        let lo = a + width * k as f64;
        let hi = if k + 1 == INITIAL_PIECES {
            b
        } else {
            lo + width
        };
        heap.push(kronrod_segment(f, lo, hi)?);
    }

    let totals = |heap: &BinaryHeap<Segment>, frozen: &[Segment]| {
        heap.iter()
            .chain(frozen.iter())
            .fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error))
    };

    loop {
        let (value, error) = totals(&heap, &frozen);
        let target = spec.abs_tol.max(spec.rel_tol * value.abs());
        let count = heap.len() + frozen.len();
        if error <= target {
            return Ok(Integral {
                value,
                error_estimate: error,
                subdivisions: count,
            });
        }
        let worst = match heap.pop() {
            Some(s) if count < spec.max_subdivisions => s,
            other => {
                if let Some(s) = other {
                    heap.push(s);
                }
                return Err(Error::Quadrature {
                    estimate: value,
                    error_estimate: error,
                    subdivisions: count,
                });
            }
        };
        let mid = 0.5 * (worst.a + worst.b);
        let too_narrow = mid <= worst.a
            || mid >= worst.b
            || (worst.b - worst.a) <= 4.0 * f64::EPSILON * worst.a.abs().max(worst.b.abs());
        if too_narrow {
            frozen.push(worst);
            if heap.is_empty() {
                let (value, error) = totals(&heap, &frozen);
                return Err(Error::Quadrature {
                    estimate: value,
                    error_estimate: error,
                    subdivisions: frozen.len(),
                });
            }
            continue;
        }
        heap.push(kronrod_segment(f, worst.a, mid)?);
        heap.push(kronrod_segment(f, mid, worst.b)?);
    }
}

/// Integrates `f` over `domain` to `max(abs_tol, rel_tol·|I|)`.
///
/// On failure the [`Error::Quadrature`] variant carries the best estimate.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    domain: Domain,
    spec: &QuadratureSpec,
) -> Result<Integral> {
    spec.validate()?;
    match domain {
        Domain::Finite { lower, upper } => {
            if !(lower.is_finite() && upper.is_finite()) {
                return Err(Error::domain("integrate", "finite bounds required"));
            }
            if lower == upper {
                return Ok(Integral {
                    value: 0.0,
                    error_estimate: 0.0,
                    subdivisions: 0,
                });
            }
            if lower > upper {
                let r = adapt(&f, upper, lower, spec)?;
                return Ok(Integral {
                    value: -r.value,
                    ..r
                });
            }
            adapt(&f, lower, upper, spec)
        }
        Domain::HalfLine { scale } => {
            if !(scale > 0.0 && scale.is_finite()) {
                return Err(Error::param("scale", "must be positive and finite"));
            }
            let mapped = |u: f64| {
                let w = 1.0 - u;
                let t = scale * u / w;
                let v = f(t);
                if v == 0.0 {
                    0.0
                } else {
                    v * scale / (w * w)
                }
            };
            adapt(&mapped, 0.0, 1.0, spec)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn basic_integrals() {
        let r = integrate(|t: f64| (-t).exp(), Domain::half_line(), &spec()).unwrap();
        assert_relative_eq!(r.value, 1.0, max_relative = 1e-10);
        let r = integrate(|t| 3.0 * t * t, Domain::finite(0.0, 1.0), &spec()).unwrap();
        assert_relative_eq!(r.value, 1.0, max_relative = 1e-12);
        let r = integrate(|t: f64| t * (-t).exp(), Domain::half_line(), &spec()).unwrap();
        assert_relative_eq!(r.value, 1.0, max_relative = 1e-10);
        assert!(r.error_estimate <= 1e-9);
    }

    #[test]
    fn endpoint_singularities() {
        // ∫₀¹ x^{-0.7} dx = 1/0.3
        let r = integrate(|x: f64| x.powf(-0.7), Domain::finite(0.0, 1.0), &spec()).unwrap();
        assert_relative_eq!(r.value, 1.0 / 0.3, max_relative = 1e-8);
        // ∫₀^∞ t^{-1/2} e^{-t} dt = √π
        let r = integrate(|t: f64| (-t).exp() / t.sqrt(), Domain::half_line(), &spec()).unwrap();
        assert_relative_eq!(r.value, std::f64::consts::PI.sqrt(), max_relative = 1e-8);
        // ∫₀¹ ln x dx = -1
        let r = integrate(|x: f64| x.ln(), Domain::finite(0.0, 1.0), &spec()).unwrap();
        assert_relative_eq!(r.value, -1.0, max_relative = 1e-9);
    }

    #[test]
    fn scaled_half_line() {
        let s = 1e8;
        let r = integrate(
            |t: f64| (-t / s).exp() / s,
            Domain::HalfLine { scale: s },
            &spec(),
        )
        .unwrap();
        assert_relative_eq!(r.value, 1.0, max_relative = 1e-10);
    }

    #[test]
    fn reversed_bounds() {
        let r = integrate(|x| x, Domain::finite(2.0, 0.0), &spec()).unwrap();
        assert_relative_eq!(r.value, -2.0, max_relative = 1e-14);
    }

    #[test]
    fn convergence_failure_carries_estimate() {
        let tight = QuadratureSpec::new(1e-15, 0.0, 8).unwrap();
        let err = integrate(|x: f64| x.powf(-0.9), Domain::finite(0.0, 1.0), &tight).unwrap_err();
        match err {
            Error::Quadrature {
                estimate,
                subdivisions,
                ..
            } => {
                assert!(estimate > 1.0);
                assert!(subdivisions >= 8);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn invalid_spec() {
        assert!(QuadratureSpec::new(0.0, 0.0, 10).is_err());
        assert!(QuadratureSpec::new(1e-9, -1.0, 10).is_err());
        assert!(QuadratureSpec::new(1e-9, 0.0, 0).is_err());
    }
}
