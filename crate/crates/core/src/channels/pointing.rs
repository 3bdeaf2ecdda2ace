//! Pointing-error (misalignment) fading.
//!
//! A Gaussian beam of width `ω_z` falls on a circular aperture of radius `a`.
//! The radial displacement `r` comes from independent horizontal and vertical
//! Gaussian offsets; the collected fraction is `A₀ exp(-2r²/ω_zeq²)`.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special_math::erf;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointingGeometry {
    pub aperture_radius_m: f64,
    pub beam_width_m: f64,
    pub sigma_x_m: f64,
    pub sigma_y_m: f64,
    pub mu_x_m: f64,
    pub mu_y_m: f64,
}

impl PointingGeometry {
    pub fn new(
        aperture_radius_m: f64,
        beam_width_m: f64,
        sigma_x_m: f64,
        sigma_y_m: f64,
        mu_x_m: f64,
        mu_y_m: f64,
    ) -> Result<Self> {
        let g = Self {
            aperture_radius_m,
            beam_width_m,
            sigma_x_m,
            sigma_y_m,
            mu_x_m,
            mu_y_m,
        };
        g.validate()?;
        Ok(g)
    }

    /// Zero boresight, equal jitter `sigma_s` on both axes.
    pub fn symmetric(aperture_radius_m: f64, beam_width_m: f64, sigma_s_m: f64) -> Result<Self> {
        Self::new(
            aperture_radius_m,
            beam_width_m,
            sigma_s_m,
            sigma_s_m,
            0.0,
            0.0,
        )
    }

    /// Symmetric zero-boresight geometry hitting given `A₀` and `ρ` for a
    /// beam width; the aperture radius is found by bisection on `erf`.
    pub fn from_a0_rho(beam_width_m: f64, a0: f64, rho: f64) -> Result<Self> {
        if !(a0 > 0.0 && a0 < 1.0) {
            return Err(Error::param("a0", format!("{a0} outside (0, 1)")));
        }
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(Error::param(
                "rho",
                format!("{rho} must be positive and finite"),
            ));
        }
        let target = a0.sqrt();
        let (mut lo, mut hi) = (0.0_f64, 6.0_f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if erf(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let upsilon = 0.5 * (lo + hi);
        let radius = upsilon * beam_width_m / (PI / 2.0).sqrt();
        let probe = Self::symmetric(radius, beam_width_m, 1.0)?;
        Self::symmetric(radius, beam_width_m, probe.w_zeq_m() / (2.0 * rho))
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("aperture_radius_m", self.aperture_radius_m),
            ("beam_width_m", self.beam_width_m),
            ("sigma_x_m", self.sigma_x_m),
            ("sigma_y_m", self.sigma_y_m),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::param(
                    name,
                    format!("{v} must be positive and finite"),
                ));
            }
        }
        for (name, v) in [("mu_x_m", self.mu_x_m), ("mu_y_m", self.mu_y_m)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::param(
                    name,
                    format!("{v} must be non-negative and finite"),
                ));
            }
        }
        let a0 = self.a0();
        if !(a0 > 0.0 && a0 < 1.0) {
            return Err(Error::param(
                "aperture_radius_m",
                format!("A0 = {a0} outside (0, 1)"),
            ));
        }
        Ok(())
    }

    /// `υ = √(π/2)·a/ω_z`
    pub fn upsilon(&self) -> f64 {
        (PI / 2.0).sqrt() * self.aperture_radius_m / self.beam_width_m
    }

    /// Fraction of power collected at zero displacement, `erf(υ)²`.
    pub fn a0(&self) -> f64 {
        erf(self.upsilon()).powi(2)
    }

    /// Equivalent beam width `ω_zeq² = ω_z² √π erf(υ) / (2υ e^{-υ²})`.
    pub fn w_zeq_m(&self) -> f64 {
        let v = self.upsilon();
        let ratio = PI.sqrt() * erf(v) / (2.0 * v * (-v * v).exp());
        self.beam_width_m * ratio.sqrt()
    }

    /// Jitter standard deviation used by the single-parameter density; the
    /// common value when both axes are equal.
    pub fn sigma_s_m(&self) -> f64 {
        self.sigma_x_m
    }

    /// `ρ = ω_zeq / (2σ_s)`
    pub fn rho(&self) -> f64 {
        self.w_zeq_m() / (2.0 * self.sigma_s_m())
    }

    /// Equal jitter and no boresight: the case in which [`pointing_pdf`] is exact.
    pub fn is_symmetric_zero_boresight(&self) -> bool {
        self.sigma_x_m == self.sigma_y_m && self.mu_x_m == 0.0 && self.mu_y_m == 0.0
    }
}

/// Density `(ρ²/A₀^{ρ²}) h^{ρ²-1}` on `[0, A₀]`, zero elsewhere.
pub fn pointing_pdf(hp: f64, g: &PointingGeometry) -> f64 {
    let a0 = g.a0();
    let rho2 = g.rho().powi(2);
    if !(0.0..=a0).contains(&hp) {
        return 0.0;
    }
    if hp == 0.0 {
        return if rho2 > 1.0 {
            0.0
        } else if rho2 == 1.0 {
            1.0 / a0
        } else {
            f64::INFINITY
        };
    }
    rho2 / a0 * (hp / a0).powf(rho2 - 1.0)
}

/// Distribution function `(h/A₀)^{ρ²}` of [`pointing_pdf`].
pub fn pointing_cdf(hp: f64, g: &PointingGeometry) -> f64 {
    let a0 = g.a0();
    if hp <= 0.0 {
        0.0
    } else if hp >= a0 {
        1.0
    } else {
        (hp / a0).powf(g.rho().powi(2))
    }
}

/// Physical draw: Gaussian offsets on both axes mapped through the beam profile.
pub fn pointing_sample<R: Rng + ?Sized>(g: &PointingGeometry, rng: &mut R) -> f64 {
    PointingSampler::new(g).sample(rng)
}

/// [`pointing_sample`] with `A₀` and `ω_zeq` evaluated once.
#[derive(Debug, Clone, Copy)]
pub struct PointingSampler {
    geometry: PointingGeometry,
    a0: f64,
    two_over_w2: f64,
}

impl PointingSampler {
    pub fn new(g: &PointingGeometry) -> Self {
        Self {
            geometry: *g,
            a0: g.a0(),
            two_over_w2: 2.0 / g.w_zeq_m().powi(2),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let g = &self.geometry;
        let zx: f64 = rng.sample(StandardNormal);
        let zy: f64 = rng.sample(StandardNormal);
        let x = g.mu_x_m + g.sigma_x_m * zx;
        let y = g.mu_y_m + g.sigma_y_m * zy;
        self.a0 * (-(x * x + y * y) * self.two_over_w2).exp()
    }
}

/// Moment generating function of `r² = x² + y²` (squared Beckmann):
///
/// `M(t) = exp(μx² t/(1-2tσx²) + μy² t/(1-2tσy²)) / √((1-2tσx²)(1-2tσy²))`
pub fn beckmann_mgf(t: f64, g: &PointingGeometry) -> Result<f64> {
    let dx = 1.0 - 2.0 * t * g.sigma_x_m.powi(2);
    let dy = 1.0 - 2.0 * t * g.sigma_y_m.powi(2);
    if !(dx > 0.0 && dy > 0.0) {
        return Err(Error::domain(
            "beckmann_mgf",
            format!("MGF diverges at t = {t} (1-2tσ² = {dx:.3e}, {dy:.3e})"),
        ));
    }
    let exponent = g.mu_x_m.powi(2) * t / dx + g.mu_y_m.powi(2) * t / dy;
    let v = exponent.exp() / (dx * dy).sqrt();
    if !v.is_finite() {
        return Err(Error::Overflow("beckmann_mgf"));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn reference_geometry() -> PointingGeometry {
        PointingGeometry::symmetric(0.05, 2.5, 0.35).unwrap()
    }

    #[test]
    fn derived_quantities() {
        let g = reference_geometry();
        assert!(g.a0() > 0.0 && g.a0() < 1.0);
        assert!(g.w_zeq_m() >= g.beam_width_m);
        assert!(g.rho() > 0.0);
        // small-υ expansion: erf(υ) ≈ 2υ/√π
        let v = g.upsilon();
        assert_relative_eq!(g.a0(), 4.0 * v * v / PI, max_relative = 1e-3);
    }

    #[test]
    fn pdf_at_edge_and_outside() {
        let g = reference_geometry();
        let a0 = g.a0();
        assert_relative_eq!(
            pointing_pdf(a0, &g),
            g.rho().powi(2) / a0,
            max_relative = 1e-14
        );
        assert_eq!(pointing_pdf(1.01 * a0, &g), 0.0);
        assert_eq!(pointing_pdf(-0.1, &g), 0.0);
    }

    #[test]
    fn rho_one_is_uniform() {
        // pick σ so that ρ = 1 exactly
        let base = reference_geometry();
        let g = PointingGeometry::symmetric(0.05, 2.5, base.w_zeq_m() / 2.0).unwrap();
        assert_relative_eq!(g.rho(), 1.0, max_relative = 1e-15);
        let a0 = g.a0();
        for &h in &[1e-9, 0.3 * a0, 0.77 * a0, a0] {
            assert_relative_eq!(pointing_pdf(h, &g), 1.0 / a0, max_relative = 1e-12);
        }
    }

    #[test]
    fn mgf_reductions() {
        let g = reference_geometry();
        assert_relative_eq!(beckmann_mgf(0.0, &g).unwrap(), 1.0);
        let s2 = 0.35_f64 * 0.35;
        for &t in &[-2.0, -0.3, 0.5, 3.0] {
            assert_relative_eq!(
                beckmann_mgf(t, &g).unwrap(),
                1.0 / (1.0 - 2.0 * t * s2),
                max_relative = 1e-14
            );
        }
        assert!(beckmann_mgf(1.0 / (2.0 * s2), &g).is_err());
        assert!(beckmann_mgf(10.0, &g).is_err());
    }

    #[test]
    fn from_a0_rho_round_trip() {
        let g = PointingGeometry::from_a0_rho(2.5, 0.04, 1.2).unwrap();
        assert_relative_eq!(g.a0(), 0.04, max_relative = 1e-12);
        assert_relative_eq!(g.rho(), 1.2, max_relative = 1e-12);
        assert!(PointingGeometry::from_a0_rho(2.5, 1.2, 1.0).is_err());
    }

    #[test]
    fn rejects_bad_geometry() {
        assert!(PointingGeometry::new(0.0, 2.5, 0.3, 0.3, 0.0, 0.0).is_err());
        assert!(PointingGeometry::new(0.05, 2.5, 0.3, 0.3, -1.0, 0.0).is_err());
        assert!(PointingGeometry::new(0.05, 2.5, 0.0, 0.3, 0.0, 0.0).is_err());
    }
}
