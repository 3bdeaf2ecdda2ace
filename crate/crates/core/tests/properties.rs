use owc_core::channels::{ew_cdf, pointing_cdf, EwParams, PointingGeometry};
use owc_core::special_math::{gamma_fn, upper_incomplete_gamma};
use proptest::prelude::*;

proptest! {
    #[test]
    fn gamma_recurrence(x in 0.05f64..60.0) {
        let lhs = gamma_fn(x + 1.0).unwrap();
        let rhs = x * gamma_fn(x).unwrap();
        prop_assert!((lhs / rhs - 1.0).abs() < 1e-12);
    }

    #[test]
    fn upper_incomplete_gamma_decreases_in_t(a in -3.5f64..8.0, t in 0.01f64..30.0, dt in 0.001f64..5.0) {
        prop_assume!((a - a.round()).abs() > 1e-3 || a > 0.0);
        let g1 = upper_incomplete_gamma(a, t).unwrap();
        let g2 = upper_incomplete_gamma(a, t + dt).unwrap();
        prop_assert!(g2 <= g1, "Γ({a}, {t}) = {g1} < Γ({a}, {}) = {g2}", t + dt);
    }

    #[test]
    fn ew_cdf_monotone(alpha in 0.3f64..9.0, beta in 0.4f64..4.0, eta in 0.3f64..2.0,
                       h in 0.0f64..5.0, dh in 0.0f64..2.0) {
        let p = EwParams::new(alpha, beta, eta).unwrap();
        let a = ew_cdf(h, &p).unwrap();
        let b = ew_cdf(h + dh, &p).unwrap();
        prop_assert!((0.0..=1.0).contains(&a) && a <= b);
    }

    #[test]
    fn pointing_cdf_monotone(sigma in 0.05f64..1.5, h in 0.0f64..0.01, dh in 0.0f64..0.01) {
        let g = PointingGeometry::symmetric(0.05, 2.5, sigma).unwrap();
        let a = pointing_cdf(h, &g);
        prop_assert!((0.0..=1.0).contains(&a) && a <= pointing_cdf(h + dh, &g));
    }
}
