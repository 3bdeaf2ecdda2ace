#![allow(dead_code)]

use owc_core::channels::{EwParams, LinkBudget, PointingGeometry, SnrModel};
use owc_core::special_math::SeriesControl;

/// `(α, β, η, L, γ₀)` for turbulence-only checks.
pub const TURB_GRID: [(f64, f64, f64, f64, f64); 12] = [
    (1.0, 2.0, 1.0, 1.0, 100.0),
    (1.0, 1.0, 1.0, 1.0, 1e6),
    (2.5, 1.8, 1.0, 1.0, 100.0),
    (2.2, 1.5, 1.0, 1.0, 1e6),
    (5.8, 1.3, 0.9, 0.5, 1e4),
    (0.7, 2.2, 1.3, 0.8, 1e3),
    (3.0, 0.8, 0.6, 0.2, 1e8),
    (1.5, 3.0, 1.1, 0.9, 50.0),
    (8.0, 1.1, 0.5, 0.3, 1e5),
    (4.0, 1.8, 0.69, 0.83, 1e10),
    (2.0, 1.2, 0.74, 0.1, 1e7),
    (0.9, 0.9, 1.4, 0.6, 20.0),
];

/// `(α, β, η, A₀, ρ, L, γ₀)` for the series density.
pub const SERIES_GRID: [(f64, f64, f64, f64, f64, f64, f64); 12] = [
    (2.5, 1.8, 1.0, 0.04, 1.2, 0.1, 1e10),
    (3.0, 2.0, 1.0, 0.05, 1.5, 0.2, 1e10),
    (1.0, 2.0, 1.0, 0.03, 1.0, 0.5, 1e8),
    (1.5, 1.2, 0.8, 0.1, 2.0, 0.3, 1e9),
    (4.2, 1.6, 1.1, 0.02, 0.9, 0.8, 1e7),
    (0.8, 2.5, 1.0, 0.06, 1.7, 0.4, 1e9),
    (5.8, 1.3, 0.52, 8e-4, 3.57, 0.83, 1e12),
    (2.0, 1.0, 1.0, 0.2, 1.3, 1.0, 1e6),
    (3.7, 2.2, 0.9, 0.08, 0.7, 0.6, 1e8),
    (1.2, 3.0, 1.2, 0.05, 2.5, 0.25, 1e10),
    (6.0, 1.5, 0.7, 0.01, 1.1, 0.9, 1e11),
    (2.7, 0.9, 1.0, 0.12, 1.8, 0.15, 1e9),
];

pub const BEAM_WIDTH_M: f64 = 2.5;

pub fn turb_model(row: (f64, f64, f64, f64, f64)) -> SnrModel {
    let (a, b, e, l, g0) = row;
    SnrModel::turb_exact(
        EwParams::new(a, b, e).unwrap(),
        LinkBudget::normalized(g0, l).unwrap(),
    )
    .unwrap()
}

pub fn series_model(row: (f64, f64, f64, f64, f64, f64, f64)) -> SnrModel {
    let (a, b, e, a0, rho, l, g0) = row;
    SnrModel::combined_series(
        EwParams::new(a, b, e).unwrap(),
        PointingGeometry::from_a0_rho(BEAM_WIDTH_M, a0, rho).unwrap(),
        LinkBudget::normalized(g0, l).unwrap(),
        SeriesControl::default(),
    )
    .unwrap()
}

/// `(α, β, η, σx, σy, μx, μy, L, γ₀)` with `a = 5 cm`, `ω_z = 2.5 m`; every
/// row has `ρ² > αβ` so the MGF in the asymptote is finite.
pub type AsympRow = (f64, f64, f64, f64, f64, f64, f64, f64, f64);

pub const ASYMP_GRID: [AsympRow; 8] = [
    (2.5, 1.8, 1.0, 0.3, 0.3, 0.0, 0.0, 0.1, 1e10),
    (3.0, 2.0, 1.0, 0.2, 0.2, 0.0, 0.0, 0.2, 1e10),
    (1.0, 2.0, 1.0, 0.35, 0.35, 0.0, 0.0, 0.5, 1e8),
    (5.8, 1.3, 0.52, 0.35, 0.35, 0.0, 0.0, 0.83, 1e12),
    (2.0, 1.5, 1.0, 0.35, 0.3, 0.2, 0.1, 0.5, 1e12),
    (4.0, 1.8, 0.69, 0.25, 0.2, 0.5, 0.3, 0.8, 1e14),
    (0.8, 2.5, 1.0, 0.3, 0.25, 1.0, 0.0, 0.4, 1e12),
    (1.5, 1.2, 0.8, 0.1, 0.15, 0.0, 0.4, 0.3, 1e9),
];

pub fn asymptotic_model(row: AsympRow) -> SnrModel {
    let (a, b, e, sx, sy, mx, my, l, g0) = row;
    SnrModel::combined_asymptotic(
        EwParams::new(a, b, e).unwrap(),
        PointingGeometry::new(0.05, BEAM_WIDTH_M, sx, sy, mx, my).unwrap(),
        LinkBudget::normalized(g0, l).unwrap(),
    )
    .unwrap()
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}
