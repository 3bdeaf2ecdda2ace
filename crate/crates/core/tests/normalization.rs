mod common;

use common::{series_model, turb_model, SERIES_GRID, TURB_GRID};
use owc_core::analysis::normalization;
use owc_core::channels::{ew_cdf, ew_pdf, pointing_pdf, EwParams, PointingGeometry};
use owc_core::special_math::{integrate, Domain, QuadratureSpec};

#[test]
fn ew_pdf_integrates_to_one() {
    let spec = QuadratureSpec::default();
    for &(a, b, e, _, _) in &TURB_GRID {
        let p = EwParams::new(a, b, e).unwrap();
        let r = integrate(
            |h| ew_pdf(h, &p).unwrap(),
            Domain::HalfLine { scale: e },
            &spec,
        )
        .unwrap();
        assert!((r.value - 1.0).abs() < 1e-6, "{p:?}: {}", r.value);
    }
}

#[test]
fn ew_cdf_is_antiderivative() {
    let spec = QuadratureSpec::default();
    for &(a, b, e, _, _) in &TURB_GRID {
        let p = EwParams::new(a, b, e).unwrap();
        for &h in &[0.1 * e, 0.7 * e, 1.5 * e, 3.0 * e] {
            let r = integrate(|x| ew_pdf(x, &p).unwrap(), Domain::finite(0.0, h), &spec).unwrap();
            let c = ew_cdf(h, &p).unwrap();
            assert!(
                (r.value - c).abs() < 1e-8,
                "{p:?} h={h}: {} vs {c}",
                r.value
            );
        }
    }
}

#[test]
fn pointing_pdf_integrates_to_one() {
    let spec = QuadratureSpec::default();
    for &(_, _, _, a0, rho, _, _) in &SERIES_GRID {
        let g = PointingGeometry::from_a0_rho(2.5, a0, rho).unwrap();
        let r = integrate(|h| pointing_pdf(h, &g), Domain::finite(0.0, g.a0()), &spec).unwrap();
        assert!(
            (r.value - 1.0).abs() < 1e-6,
            "A0={a0} rho={rho}: {}",
            r.value
        );
    }
}

#[test]
fn turbulence_snr_density_integrates_to_one() {
    let spec = QuadratureSpec::default();
    for &row in &TURB_GRID {
        let r = normalization(&turb_model(row), &spec).unwrap();
        assert!((r.value - 1.0).abs() < 1e-6, "{row:?}: {}", r.value);
    }
}

#[test]
fn series_snr_density_integrates_to_one() {
    let spec = QuadratureSpec::default();
    for &row in &SERIES_GRID {
        let r = normalization(&series_model(row), &spec).unwrap();
        assert!((r.value - 1.0).abs() < 1e-3, "{row:?}: {}", r.value);
    }
}
