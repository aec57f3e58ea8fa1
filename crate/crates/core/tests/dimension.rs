mod common;

use approx::assert_abs_diff_eq;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::FRAC_PI_6;
use vispart_core::dimension::*;
use vispart_core::geometry::{Direction, Vec2};
use vispart_core::ifs::Level;
use vispart_core::DimensionError;

#[test]
fn synthetic_power_laws_are_exact() {
    for s in [0.5, 1.0, 1.5] {
        let scales = (0..10).map(|j| {
            let b = 0.7 * 3f64.powi(-j);
            (b, b.powf(-s))
        });
        let est = DimensionEstimate::from_counts(scales.collect()).unwrap();
        assert_abs_diff_eq!(est.slope, s, epsilon = 1e-10);
    }
}

#[test]
fn segment_has_dimension_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let pts: Vec<Vec2> = (0..100_000)
        .map(|_| {
            let t: f64 = rng.gen();
            Vec2::new(0.2 + 0.6 * t, 0.1 + 0.3 * t)
        })
        .collect();
    let b = box_dimension(&pts, 12).unwrap();
    assert!(
        (0.97..=1.03).contains(&b.estimate.slope),
        "{}",
        b.estimate.slope
    );
    assert!((0.97..=1.03).contains(&b.offset.slope));
}

#[test]
fn filled_square_has_dimension_two() {
    let n = 400;
    let pts: Vec<Vec2> = (0..n * n)
        .map(|i| {
            Vec2::new(
                (i % n) as f64 / (n - 1) as f64,
                (i / n) as f64 / (n - 1) as f64,
            )
        })
        .collect();
    let b = box_dimension(&pts, 8).unwrap();
    assert!(
        (1.95..=2.05).contains(&b.estimate.slope),
        "{}",
        b.estimate.slope
    );
}

#[test]
fn corner_dust_sample_dimension() {
    let pts = attractor_sample(&common::corner_dust(), 8).unwrap();
    let b = box_dimension(&pts, 10).unwrap();
    assert!(
        (b.estimate.slope - 4f64.ln() / 3f64.ln()).abs() < 0.08,
        "{}",
        b.estimate.slope
    );
}

#[test]
fn too_few_points_or_scales() {
    let pts = vec![Vec2::ZERO; 10];
    assert!(matches!(
        box_dimension(&pts, 10),
        Err(DimensionError::InsufficientPoints { .. })
    ));
    let e = DimensionEstimate::from_counts(vec![(1.0, 1.0), (0.1, 10.0)]).unwrap_err();
    assert!(matches!(e, DimensionError::InsufficientScales { .. }));
}

#[test]
fn full_square_cover_doubles() {
    let levels: Vec<Level> = (1..=5).map(Level::Depth).collect();
    let c = cover_dimension(
        &common::full_square(2),
        &Direction::from_degrees(90.0),
        &levels,
    )
    .unwrap();
    assert_eq!(c.counts, vec![2, 4, 8, 16, 32]);
    assert_abs_diff_eq!(c.estimate.slope, 1.0, epsilon = 1e-9);
}

#[test]
fn carpet_cover_triples() {
    let levels: Vec<Level> = (1..=4).map(Level::Depth).collect();
    let c = cover_dimension(&common::carpet(), &Direction::from_degrees(90.0), &levels).unwrap();
    assert_eq!(c.counts, vec![3, 9, 27, 81]);
    assert_abs_diff_eq!(c.estimate.slope, 1.0, epsilon = 1e-9);
    assert_abs_diff_eq!(c.uniform_slope, 1.0, epsilon = 1e-9);
}

#[test]
fn cover_slope_below_attractor_slope() {
    for (name, ifs) in [
        ("carpet", common::carpet()),
        ("koch", common::koch(FRAC_PI_6)),
    ] {
        let sample = attractor_sample(&ifs, if name == "carpet" { 6 } else { 8 }).unwrap();
        let full = box_dimension(&sample, 9).unwrap().estimate.slope;
        let levels: Vec<Level> = (2..=5).map(|j| Level::Stopped(3f64.powi(-j))).collect();
        for d in Direction::equally_spaced(8) {
            let c = cover_dimension(&ifs, &d, &levels).unwrap();
            assert!(
                c.estimate.slope <= full + 0.1,
                "{name} {} vs {full}",
                c.estimate.slope
            );
        }
    }
}

#[test]
fn strip_bound_arithmetic() {
    let ifs = common::carpet();
    let b = theoretical_bound(&ifs, 0.1).unwrap();
    assert!((b.bound - 2.66).abs() < 0.01);
    assert_eq!(b.lambda, b.q.max(1.0 / ifs.r_min()));
    for eps in [1e-3, 0.1, 1.0, 10.0] {
        let b = theoretical_bound(&ifs, eps).unwrap();
        if b.lambda >= 1.0 / ifs.r_max() {
            assert!(b.bound >= 1.0);
        }
    }
    assert!(theoretical_bound(&ifs, 0.0).is_err());
}

#[test]
fn stopping_bound_is_monotone() {
    for (_, ifs) in common::examples() {
        let deltas: Vec<f64> = (4..=64)
            .map(|j| 10f64.powf(-(j as f64) / 4.0))
            .filter(|&d| d < ifs.r_min())
            .collect();
        let bounds: Vec<f64> = deltas
            .iter()
            .map(|&d| stopping_bound(&ifs, d).unwrap().bound)
            .collect();
        for w in bounds.windows(2) {
            assert!(w[1] <= w[0] + 1e-12);
        }
        let a = stopping_bound(&ifs, 1e-3).unwrap().bound;
        let b = stopping_bound(&ifs, 1e-6).unwrap().bound;
        assert!(b < a);
        let tiny = stopping_bound(&ifs, 1e-300).unwrap();
        assert!(tiny.component1 - 1.0 < 0.01 && tiny.component2 - 1.0 < 0.01);
    }
}

#[test]
fn stopping_bound_components() {
    let ifs = common::carpet();
    let b = stopping_bound(&ifs, 1e-6).unwrap();
    assert!((b.component2 - 1.0795).abs() < 1e-4);
    let k = 2f64.sqrt() * (2.0 + 4.0 * 2f64.sqrt() / 2.0)
        / (std::f64::consts::PI * (0.5f64 / 3.0).powi(2));
    assert_abs_diff_eq!(b.k_const.unwrap(), k, epsilon = 1e-9);
    assert_abs_diff_eq!(b.component1, 1.0 - k.ln() / 1e-6f64.ln(), epsilon = 1e-12);
    assert_eq!(b.bound, b.component1.max(b.component2));
}

/// The exact stopping bound is the strip bound of the stopped system at
/// `ε = δ`.
#[test]
fn exact_stopping_bound_is_strip_bound_of_stopped_system() {
    for (name, ifs) in common::examples() {
        for delta in [0.1, 0.03, 0.01] {
            if delta >= ifs.r_min() {
                continue;
            }
            let exact = stopping_bound(&ifs, delta).unwrap();
            let st = ifs.stopped(delta).unwrap();
            let strip = theoretical_bound(&st, delta).unwrap();
            assert_abs_diff_eq!(exact.q, strip.q, epsilon = 1e-9 * strip.q);
            assert_abs_diff_eq!(exact.lambda, strip.lambda, epsilon = 1e-9 * strip.lambda);
            assert!(
                (exact.exact_bound.unwrap() - strip.bound).abs() < 1e-9,
                "{name}"
            );
        }
    }
}

#[test]
fn stopping_above_r_max_is_the_original_family() {
    for (_, ifs) in common::examples() {
        let delta = 0.5 * (ifs.r_max() + 1.0);
        let st = ifs.stopped(delta).unwrap();
        assert_eq!(st.maps(), ifs.maps());
        let a = theoretical_bound(&st, delta).unwrap();
        let b = theoretical_bound(&ifs, delta).unwrap();
        assert!((a.bound - b.bound).abs() < 1e-9);
    }
}

#[test]
fn profile_flags_failed_hypotheses() {
    let ifs = common::corner_dust();
    let params = ProfileParams {
        levels: (2..=5).map(Level::Depth).collect(),
        oracle_depth: 6,
        fiber_resolution: 1024,
        grid: 9,
        bound_delta: 1e-3,
    };
    let dirs = Direction::equally_spaced(2);
    let rows = dimension_profile(&ifs, &dirs, &params, false).unwrap();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r.hypothesis_failed));
    assert_eq!(rows[1].direction_deg, 180.0);
}
