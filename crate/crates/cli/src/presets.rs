//! Named parameter sets for the link scenarios of the evaluation.
//!
//! The exponentiated-Weibull shapes attached to each scenario are stand-ins:
//! the values that correspond to the quoted `C_n²` labels cannot be recovered
//! from the published material. Each preset uses the unit-mean scale
//! scale `η` that gives its shapes a unit mean irradiance.

use owc_core::channels::EwParams;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    /// Refractive-index structure parameter the scenario is labelled with, m^{-2/3}.
    /// Informational only.
    pub cn2_label: f64,
    pub wavelength_m: f64,
    pub responsivity: f64,
    pub noise_variance: f64,
    pub aperture_diameter_m: f64,
    pub beam_width_m: f64,
    pub sigma_x_m: f64,
    pub sigma_y_m: f64,
    pub mu_x_m: f64,
    pub mu_y_m: f64,
    pub visibility_m: f64,
    pub ew: EwParams,
    /// Default operating point, overridable from the config.
    pub distance_m: f64,
    pub transmit_power_dbm: f64,
}

pub const PRESET_NAMES: [&str; 4] = [
    "medium",
    "strong",
    "medium_zero_boresight",
    "strong_zero_boresight",
];

fn base(name: &'static str, cn2: f64, visibility_m: f64, alpha: f64, beta: f64, mu: f64) -> Preset {
    Preset {
        name,
        cn2_label: cn2,
        wavelength_m: 1550e-9,
        responsivity: 0.41,
        noise_variance: 1e-14,
        aperture_diameter_m: 0.10,
        beam_width_m: 2.5,
        sigma_x_m: 0.35,
        sigma_y_m: 0.35,
        mu_x_m: mu,
        mu_y_m: mu,
        visibility_m,
        ew: EwParams::with_unit_mean(alpha, beta).expect("preset shapes are valid"),
        distance_m: 2000.0,
        transmit_power_dbm: 22.0,
    }
}

/// Look a preset up by name.
///
/// `medium` and `strong` carry the 20 m boresight of the published parameter
/// list, which leaves essentially no power on the aperture; the
/// `*_zero_boresight` variants keep the jitter and drop the boresight.
pub fn preset(name: &str) -> Option<Preset> {
    Some(match name {
        "medium" => base("medium", 2e-14, 4000.0, 4.0, 1.8, 20.0),
        "strong" => base("strong", 8e-14, 16000.0, 2.0, 1.2, 20.0),
        "medium_zero_boresight" => base("medium_zero_boresight", 2e-14, 4000.0, 4.0, 1.8, 0.0),
        "strong_zero_boresight" => base("strong_zero_boresight", 8e-14, 16000.0, 2.0, 1.2, 0.0),
        _ => return None,
    })
}
