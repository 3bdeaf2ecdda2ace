use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Deterministic link parameters, SI units throughout.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkBudget {
    /// Average optical transmit power, W.
    pub pt_watts: f64,
    /// Detector responsivity, A/W.
    pub responsivity: f64,
    /// Receiver noise variance, W².
    pub noise_variance: f64,
    /// Beer–Lambert attenuation coefficient, 1/m.
    pub atten_coeff_per_m: f64,
    pub distance_m: f64,
}

impl LinkBudget {
    pub fn new(
        pt_watts: f64,
        responsivity: f64,
        noise_variance: f64,
        atten_coeff_per_m: f64,
        distance_m: f64,
    ) -> Result<Self> {
        let l = Self {
            pt_watts,
            responsivity,
            noise_variance,
            atten_coeff_per_m,
            distance_m,
        };
        l.validate()?;
        Ok(l)
    }

    /// A budget with the given `γ₀` and path loss `L`, for analyses that only
    /// depend on those two numbers. Unit responsivity, a 1 m link.
    pub fn normalized(gamma0: f64, path_loss: f64) -> Result<Self> {
        if !(gamma0 > 0.0 && gamma0.is_finite()) {
            return Err(Error::param("gamma0", format!("{gamma0} must be positive")));
        }
        if !(path_loss > 0.0 && path_loss <= 1.0) {
            return Err(Error::param(
                "path_loss",
                format!("{path_loss} outside (0, 1]"),
            ));
        }
        // γ₀ = 2 P² R² / σ² with R = 1, σ² = 2
        Self::new(gamma0.sqrt(), 1.0, 2.0, -path_loss.ln(), 1.0)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("pt_watts", self.pt_watts),
            ("responsivity", self.responsivity),
            ("noise_variance", self.noise_variance),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::param(
                    name,
                    format!("{v} must be positive and finite"),
                ));
            }
        }
        if !(self.atten_coeff_per_m >= 0.0 && self.atten_coeff_per_m.is_finite()) {
            return Err(Error::param("atten_coeff_per_m", "must be non-negative"));
        }
        if !(self.distance_m >= 0.0 && self.distance_m.is_finite()) {
            return Err(Error::param("distance_m", "must be non-negative"));
        }
        if self.path_loss().is_nan() || self.path_loss() <= 0.0 {
            return Err(Error::param("distance_m", "path loss underflows to zero"));
        }
        Ok(())
    }

    /// Electrical SNR scale `γ₀ = 2 P_t² R² / σ_w²`.
    pub fn gamma0(&self) -> f64 {
        2.0 * (self.pt_watts * self.responsivity).powi(2) / self.noise_variance
    }

    /// `L = e^{-φd}`
    pub fn path_loss(&self) -> f64 {
        path_loss(self)
    }

    /// `γ₀ L²`, the SNR scale seen after path loss.
    pub fn received_scale(&self) -> f64 {
        self.gamma0() * self.path_loss().powi(2)
    }

    pub fn with_gamma0(&self, gamma0: f64) -> Result<Self> {
        let mut l = *self;
        l.pt_watts *= (gamma0 / self.gamma0()).sqrt();
        l.validate()?;
        Ok(l)
    }
}

/// Beer–Lambert path loss `e^{-φd}`.
pub fn path_loss(link: &LinkBudget) -> f64 {
    (-link.atten_coeff_per_m * link.distance_m).exp()
}

/// Size-distribution exponent of the Kim visibility model, visibility in km.
fn kim_exponent(visibility_km: f64) -> f64 {
    if visibility_km > 50.0 {
        1.6
    } else if visibility_km > 6.0 {
        1.3
    } else if visibility_km > 1.0 {
        0.16 * visibility_km + 0.34
    } else if visibility_km > 0.5 {
        visibility_km - 0.5
    } else {
        0.0
    }
}

/// Attenuation coefficient (1/m) from visibility, Kim model:
/// `φ = (3.91/V)(λ/550 nm)^{-q(V)}`.
pub fn atten_from_visibility(visibility_m: f64, wavelength_m: f64) -> Result<f64> {
    if !(visibility_m > 0.0 && visibility_m.is_finite()) {
        return Err(Error::domain(
            "atten_from_visibility",
            format!("visibility {visibility_m} m must be positive"),
        ));
    }
    if !(wavelength_m > 0.0 && wavelength_m.is_finite()) {
        return Err(Error::domain(
            "atten_from_visibility",
            format!("wavelength {wavelength_m} m must be positive"),
        ));
    }
    let v_km = visibility_m / 1000.0;
    let q = kim_exponent(v_km);
    let per_km = 3.91 / v_km * (wavelength_m / 550e-9).powf(-q);
    Ok(per_km / 1000.0)
}
