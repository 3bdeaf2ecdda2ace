mod common;

use common::{series_model, turb_model, TURB_GRID};
use owc_core::analysis::{avg_snr_numeric, ergodic_rate_numeric};
use owc_core::channels::{EwParams, LinkBudget, PointingGeometry};
use owc_core::simulate::{
    compare_channels, compare_models, mc_estimate, mc_estimate_both, moment_matched_gg, Channel,
    Metric, MonteCarloConfig, Turbulence,
};
use owc_core::special_math::QuadratureSpec;

fn cfg(n: u64, seed: u64, workers: usize) -> MonteCarloConfig {
    MonteCarloConfig::new(n, seed, workers).unwrap()
}

/// Rows of the turbulence grid used for the Monte Carlo chain; the first two
/// are the α = 1 cases with closed-form moments.
const ORACLE_ROWS: [usize; 6] = [0, 1, 2, 4, 7, 9];

#[test]
fn turbulence_oracle_chain() {
    let spec = QuadratureSpec::default();
    for (i, &r) in ORACLE_ROWS.iter().enumerate() {
        let m = turb_model(TURB_GRID[r]);
        let ch = Channel::from_model(&m).unwrap();
        let (avg, rate) =
            mc_estimate_both(&ch, &m.link, &cfg(1_000_000, 100 + i as u64, 4)).unwrap();
        let q_avg = avg_snr_numeric(&m, &spec).unwrap().value;
        let q_rate = ergodic_rate_numeric(&m, &spec).unwrap().value;
        assert!(
            avg.within_stderrs(q_avg, 3.0),
            "{:?}: {avg:?} vs {q_avg}",
            TURB_GRID[r]
        );
        assert!(
            rate.within_stderrs(q_rate, 3.0),
            "{:?}: {rate:?} vs {q_rate}",
            TURB_GRID[r]
        );
    }
}

#[test]
fn rayleigh_average_is_gamma0() {
    let ch = Channel::new(Turbulence::Ew(EwParams::new(1.0, 2.0, 1.0).unwrap()), None);
    let link = LinkBudget::normalized(250.0, 1.0).unwrap();
    let e = mc_estimate(Metric::AvgSnr, &ch, &link, &cfg(1_000_000, 7, 3)).unwrap();
    assert!(e.within_stderrs(250.0, 3.0), "{e:?}");
}

#[test]
fn rayleigh_rate_ten_million() {
    let m = turb_model((1.0, 2.0, 1.0, 1.0, 100.0));
    let ch = Channel::from_model(&m).unwrap();
    let e = mc_estimate(Metric::ErgodicRate, &ch, &m.link, &cfg(10_000_000, 42, 8)).unwrap();
    let q = ergodic_rate_numeric(&m, &QuadratureSpec::default())
        .unwrap()
        .value;
    assert!(e.within_stderrs(q, 3.0), "{e:?} vs {q}");
}

#[test]
fn combined_series_oracle() {
    let spec = QuadratureSpec::default();
    for row in [
        (2.5, 1.8, 1.0, 0.04, 1.2, 0.1, 1e10),
        (3.0, 2.0, 1.0, 0.05, 1.5, 0.2, 1e10),
        (1.0, 2.0, 1.0, 0.03, 1.0, 0.5, 1e8),
    ] {
        let m = series_model(row);
        let ch = Channel::from_model(&m).unwrap();
        let (avg, rate) = mc_estimate_both(&ch, &m.link, &cfg(1_000_000, 5, 4)).unwrap();
        let q_avg = avg_snr_numeric(&m, &spec).unwrap().value;
        let q_rate = ergodic_rate_numeric(&m, &spec).unwrap().value;
        assert!(
            avg.within_stderrs(q_avg, 3.0),
            "{row:?}: {avg:?} vs {q_avg}"
        );
        assert!(
            rate.within_stderrs(q_rate, 3.0),
            "{row:?}: {rate:?} vs {q_rate}"
        );
    }
}

fn boresight_channel() -> (Channel, LinkBudget) {
    let g = PointingGeometry::new(0.05, 2.5, 0.35, 0.3, 0.2, 0.1).unwrap();
    (
        Channel::new(
            Turbulence::Ew(EwParams::new(2.5, 1.8, 1.0).unwrap()),
            Some(g),
        ),
        LinkBudget::normalized(1e8, 0.4).unwrap(),
    )
}

#[test]
fn repeated_runs_are_bit_identical() {
    let (ch, link) = boresight_channel();
    let a = mc_estimate_both(&ch, &link, &cfg(100_000, 3, 4)).unwrap();
    let b = mc_estimate_both(&ch, &link, &cfg(100_000, 3, 4)).unwrap();
    assert_eq!(a, b);
    let c = mc_estimate_both(&ch, &link, &cfg(100_000, 4, 4)).unwrap();
    assert_ne!(a.0.mean, c.0.mean);
}

#[test]
fn worker_count_does_not_change_estimates() {
    let (ch, link) = boresight_channel();
    let reference = mc_estimate_both(&ch, &link, &cfg(123_457, 11, 1)).unwrap();
    for w in [2, 3, 8, 16] {
        assert_eq!(
            mc_estimate_both(&ch, &link, &cfg(123_457, 11, w)).unwrap(),
            reference
        );
    }
}

#[test]
fn stderr_follows_inverse_square_root() {
    let (ch, link) = boresight_channel();
    let n = 50_000;
    let small = mc_estimate(Metric::ErgodicRate, &ch, &link, &cfg(n, 1, 4)).unwrap();
    let large = mc_estimate(Metric::ErgodicRate, &ch, &link, &cfg(4 * n, 2, 4)).unwrap();
    let ratio = large.stderr / small.stderr;
    assert!((ratio - 0.5).abs() <= 0.1, "ratio {ratio}");
}

#[test]
fn common_random_numbers_with_degenerate_turbulence() {
    let g = PointingGeometry::new(0.05, 2.5, 0.35, 0.3, 0.2, 0.1).unwrap();
    let link = LinkBudget::normalized(1e6, 0.5).unwrap();
    let r = compare_channels(
        Turbulence::None,
        Turbulence::None,
        Some(&g),
        &link,
        &cfg(50_000, 9, 4),
    )
    .unwrap();
    assert_eq!(r.first_avg_snr, r.second_avg_snr);
    assert_eq!(r.first_rate, r.second_rate);
    assert_eq!(r.first_rate.seed, 9);
}

#[test]
fn moment_matched_gamma_gamma_rate_gap() {
    let link = LinkBudget::normalized(1e10, 1.0).unwrap();
    let g = PointingGeometry::symmetric(0.05, 2.5, 0.35).unwrap();
    for (a, b) in [(4.0, 1.8), (2.0, 1.2), (5.8, 1.3)] {
        let ew = EwParams::with_unit_mean(a, b).unwrap();
        let gg = moment_matched_gg(&ew).unwrap();
        for pointing in [None, Some(&g)] {
            let r = compare_models(&ew, &gg, pointing, &link, &cfg(1_000_000, 13, 4)).unwrap();
            let gap = (r.first_rate.mean - r.second_rate.mean).abs();
            assert!(
                gap < 0.2,
                "({a}, {b}) pointing={}: gap {gap}",
                pointing.is_some()
            );
        }
    }
}

/// Interval coverage over 100 seeds at reduced scale.
#[test]
fn confidence_interval_calibration() {
    let spec = QuadratureSpec::default();
    let models = [
        turb_model((2.5, 1.8, 1.0, 1.0, 100.0)),
        turb_model((1.0, 2.0, 1.0, 0.5, 1e4)),
        series_model((3.0, 2.0, 1.0, 0.05, 1.5, 0.2, 1e10)),
    ];
    for m in &models {
        let ch = Channel::from_model(m).unwrap();
        let q = avg_snr_numeric(m, &spec).unwrap().value;
        let covered = (1..=100)
            .filter(|&s| {
                mc_estimate(Metric::AvgSnr, &ch, &m.link, &cfg(20_000, s, 4))
                    .unwrap()
                    .covers(q)
            })
            .count();
        assert!(covered >= 95, "{:?}: {covered}/100", m.variant);
    }
}

/// Coverage over 1000 seeds sits within three binomial standard deviations of 95%.
#[test]
fn confidence_interval_coverage_rate() {
    let spec = QuadratureSpec::default();
    let band = 3.0 * (0.95_f64 * 0.05 / 1000.0).sqrt();
    for m in [
        turb_model((2.5, 1.8, 1.0, 1.0, 100.0)),
        series_model((3.0, 2.0, 1.0, 0.05, 1.5, 0.2, 1e10)),
    ] {
        let ch = Channel::from_model(&m).unwrap();
        let q = avg_snr_numeric(&m, &spec).unwrap().value;
        let covered = (1..=1000)
            .filter(|&s| {
                mc_estimate(Metric::AvgSnr, &ch, &m.link, &cfg(20_000, s, 8))
                    .unwrap()
                    .covers(q)
            })
            .count();
        let rate = covered as f64 / 1000.0;
        assert!(
            (rate - 0.95).abs() <= band,
            "{:?}: {covered}/1000",
            m.variant
        );
    }
}
