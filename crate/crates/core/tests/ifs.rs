mod common;

use approx::assert_abs_diff_eq;
use std::f64::consts::{FRAC_PI_6, PI};
use vispart_core::geometry::{convex_hull, ConvexPolygon, Direction, Interval, Similarity, Vec2};
use vispart_core::ifs::{
    attractor_hull, check_cosc, check_projection_interval, default_projection_directions,
    IfsSystem, Word,
};
use vispart_core::IfsError;

#[test]
fn carpet_and_sierpinski_hulls() {
    let sq = ConvexPolygon::rect(0.0, 0.0, 1.0, 1.0).unwrap();
    assert!(common::carpet().hull().hausdorff(&sq) < 1e-12);
    let h = 3f64.sqrt() / 2.0;
    let tri = convex_hull(&[Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.5, h)]).unwrap();
    assert!(common::sierpinski().hull().hausdorff(&tri) < 1e-12);
}

#[test]
fn koch_hull_is_the_bump_triangle() {
    let ifs = common::koch(FRAC_PI_6);
    let tri = convex_hull(&[
        Vec2::new(0.0, 0.0),
        Vec2::new(1.0, 0.0),
        Vec2::new(0.5, 3f64.sqrt() / 6.0),
    ])
    .unwrap();
    assert!(ifs.hull().hausdorff(&tri) < 1e-9);
}

#[test]
fn hull_contains_its_images_and_is_stable() {
    for (name, ifs) in common::examples() {
        let h = ifs.hull();
        let tol = 1e-12 * ifs.diameter();
        for img in ifs.first_level_hulls() {
            for v in img.vertices() {
                assert!(h.contains(*v, 1e-9 * ifs.diameter()), "{name}");
            }
        }
        let pts: Vec<Vec2> = ifs
            .first_level_hulls()
            .iter()
            .flat_map(|p| p.vertices().to_vec())
            .collect();
        let next = convex_hull(&pts).unwrap();
        assert!(next.hausdorff(h) <= 2.0 * tol + 1e-15, "{name}");
    }
}

#[test]
fn line_attractor_is_rejected() {
    let maps = vec![
        Similarity::homothety(0.5, Vec2::ZERO).unwrap(),
        Similarity::homothety(0.5, Vec2::new(0.5, 0.0)).unwrap(),
    ];
    assert!(attractor_hull(&maps, 1e-12).is_err());
    assert!(IfsSystem::new(maps).is_err());
}

#[test]
fn koch_and_carpet_satisfy_cosc() {
    for (name, ifs) in common::examples() {
        assert!(check_cosc(&ifs, 1e-9).pass, "{name}");
    }
}

#[test]
fn identical_maps_violate_cosc() {
    let s = Similarity::homothety(0.5, Vec2::ZERO).unwrap();
    let t = Similarity::homothety(0.5, Vec2::new(0.5, 0.0)).unwrap();
    let u = Similarity::homothety(0.5, Vec2::new(0.0, 0.5)).unwrap();
    let ifs = IfsSystem::new(vec![s, s, t, u]).unwrap();
    let r = check_cosc(&ifs, 1e-9);
    assert!(!r.pass);
    let pairs: Vec<(usize, usize)> = r.violating_pairs.iter().map(|p| (p.0, p.1)).collect();
    assert_eq!(pairs, vec![(0, 1)]);
}

#[test]
fn corner_dust_axis_gap() {
    let ifs = common::corner_dust();
    for deg in [0.0, 90.0, 180.0, 270.0] {
        let d = Direction::from_degrees(deg);
        let r = check_projection_interval(&ifs, &[d], 1e-9);
        assert!(!r.pass);
        let g = r.failures[0].gaps[0];
        // the gap lies between the projected columns
        let span = ifs.hull().project_interval(&d);
        let (lo, hi) = ((g.lo - span.lo).abs(), (g.hi - span.lo).abs());
        let (lo, hi) = (lo.min(hi), lo.max(hi));
        assert_abs_diff_eq!(lo, 1.0 / 3.0, epsilon = 1e-9);
        assert_abs_diff_eq!(hi, 2.0 / 3.0, epsilon = 1e-9);
    }
}

#[test]
fn passing_systems_cover_every_grid_direction() {
    for (name, ifs) in common::examples() {
        let dirs = default_projection_directions(&ifs, 720);
        assert!(dirs.len() > 720);
        assert!(check_projection_interval(&ifs, &dirs, 1e-9).pass, "{name}");
    }
    let full = common::full_square(4);
    assert!(
        check_projection_interval(&full, &default_projection_directions(&full, 720), 1e-9).pass
    );
}

#[test]
fn groups_of_examples() {
    assert_eq!(common::carpet().rotation_group(1024, 1e-9).order(), 1);
    let g = common::koch(FRAC_PI_6).rotation_group(1024, 1e-9);
    assert!(g.closed);
    assert_eq!(g.order(), 6);
    for a in &g.elements {
        assert!(g.contains(&a.inverse()));
        for b in &g.elements {
            assert!(g.contains(&a.compose(b)));
        }
    }
    let spin = vec![
        Similarity::new(0.5, 1.0, false, Vec2::ZERO).unwrap(),
        Similarity::homothety(0.5, Vec2::new(0.5, 0.0)).unwrap(),
        Similarity::homothety(0.5, Vec2::new(0.0, 0.5)).unwrap(),
    ];
    assert!(
        !IfsSystem::new(spin)
            .unwrap()
            .rotation_group(360, 1e-9)
            .closed
    );
}

#[test]
fn similarity_dimension_closed_forms() {
    assert_abs_diff_eq!(
        common::carpet().similarity_dimension(),
        8f64.ln() / 3f64.ln(),
        epsilon = 1e-9
    );
    assert_abs_diff_eq!(
        common::corner_dust().similarity_dimension(),
        4f64.ln() / 3f64.ln(),
        epsilon = 1e-9
    );
    assert_abs_diff_eq!(
        common::koch(FRAC_PI_6).similarity_dimension(),
        4f64.ln() / 3f64.ln(),
        epsilon = 1e-9
    );
    assert_abs_diff_eq!(
        common::full_square(2).similarity_dimension(),
        2.0,
        epsilon = 1e-9
    );
}

#[test]
fn depth_two_cylinders() {
    let ifs = common::koch(FRAC_PI_6);
    let fam = ifs.cylinders(2).unwrap();
    assert_eq!(fam.len(), 16);
    let mut sorted = fam.words.clone();
    sorted.sort();
    assert_eq!(sorted, fam.words);
    for (w, m) in fam.words.iter().zip(&fam.maps) {
        let want: f64 = w
            .indices()
            .iter()
            .map(|&i| ifs.maps()[i as usize].scale())
            .product();
        assert_abs_diff_eq!(m.scale(), want, epsilon = 1e-12 * want);
    }
}

#[test]
fn cylinder_cap_is_enforced() {
    let ifs = common::carpet();
    assert!(matches!(
        ifs.cylinders_capped(8, 1000),
        Err(IfsError::ResourceLimit { .. })
    ));
}

fn mixed() -> IfsSystem {
    IfsSystem::new(vec![
        Similarity::homothety(0.5, Vec2::ZERO).unwrap(),
        Similarity::homothety(0.25, Vec2::new(0.75, 0.0)).unwrap(),
        Similarity::homothety(0.25, Vec2::new(0.0, 0.75)).unwrap(),
    ])
    .unwrap()
}

/// Every prefix is expanded until its ratio falls below `delta`.
fn stopping_by_search(ratios: &[f64], delta: f64) -> Vec<Vec<u16>> {
    fn go(ratios: &[f64], delta: f64, w: &mut Vec<u16>, r: f64, out: &mut Vec<Vec<u16>>) {
        if r < delta {
            out.push(w.clone());
            return;
        }
        for (i, &ri) in ratios.iter().enumerate() {
            w.push(i as u16);
            go(ratios, delta, w, r * ri, out);
            w.pop();
        }
    }
    let mut out = Vec::new();
    go(ratios, delta, &mut Vec::new(), 1.0, &mut out);
    out
}

#[test]
fn uniform_stopping_has_length_two() {
    let fam = common::carpet().cylinders_stopped(0.2).unwrap();
    assert_eq!(fam.len(), 64);
    assert!(fam.words.iter().all(|w| w.len() == 2));
}

#[test]
fn mixed_stopping_matches_search() {
    let ifs = mixed();
    let ratios: Vec<f64> = ifs.maps().iter().map(|m| m.scale()).collect();
    for delta in [0.2, 0.05, 0.01] {
        let fam = ifs.cylinders_stopped(delta).unwrap();
        let got: Vec<Vec<u16>> = fam.words.iter().map(|w| w.indices().to_vec()).collect();
        assert_eq!(got, stopping_by_search(&ratios, delta), "delta = {delta}");
        assert_eq!(ifs.stopping_size(delta), fam.len() as u128);
        let st = fam.stopping().unwrap();
        assert_eq!(st.delta, delta);
        for w in &st.words {
            let r = w.ratio(&ifs);
            let parent = w.prefix(w.len() - 1).ratio(&ifs);
            assert!(r < delta && delta <= parent);
        }
        let rs = ifs.stopped_ratios(delta);
        let lo = fam.ratios().into_iter().fold(f64::INFINITY, f64::min);
        let hi = fam.ratios().into_iter().fold(0.0, f64::max);
        assert_abs_diff_eq!(rs[0], lo, epsilon = 1e-15);
        assert_abs_diff_eq!(rs[rs.len() - 1], hi, epsilon = 1e-15);
    }
}

#[test]
fn stopping_is_a_prefix_free_cover() {
    for (name, ifs) in common::examples().into_iter().chain([("mixed", mixed())]) {
        let n = ifs.len() as f64;
        for delta in [0.3, 0.1, 0.02] {
            let fam = ifs.cylinders_stopped(delta).unwrap();
            // uniform Bernoulli measure of the cylinders sums to 1 iff the cover is complete and disjoint
            let mass: f64 = fam.words.iter().map(|w| n.powi(-(w.len() as i32))).sum();
            assert_abs_diff_eq!(mass, 1.0, epsilon = 1e-12);
            for (a, b) in fam.words.iter().zip(fam.words.iter().skip(1)) {
                assert!(!b.starts_with(a), "{name}");
            }
            let s = ifs.similarity_dimension();
            let sum: f64 = fam.ratios().iter().map(|r| r.powf(s)).sum();
            assert_abs_diff_eq!(sum, 1.0, epsilon = 1e-9);
            let finer = ifs.cylinders_stopped(delta * ifs.r_min()).unwrap();
            for w in &finer.words {
                assert!(fam.words.iter().any(|p| w.starts_with(p)), "{name}");
            }
        }
    }
}

#[test]
fn stopped_system_keeps_the_hull_and_dimension() {
    let ifs = mixed();
    let st = ifs.stopped(0.1).unwrap();
    assert!(st.hull().hausdorff(ifs.hull()) < 1e-12);
    assert_abs_diff_eq!(
        st.similarity_dimension(),
        ifs.similarity_dimension(),
        epsilon = 1e-9
    );
}

#[test]
fn word_display_is_one_based() {
    assert_eq!(Word::new(vec![0, 7, 2]).to_string(), "1.8.3");
}

/// Children of every word up to depth 3 cover the parent's projection.
#[test]
fn projections_are_inherited() {
    for (name, ifs) in common::examples() {
        let dirs = default_projection_directions(&ifs, 720);
        assert!(check_projection_interval(&ifs, &dirs, 1e-9).pass);
        let grid = Direction::equally_spaced(720);
        for k in 0..3 {
            let parents = ifs.cylinders(k).unwrap();
            let children = ifs.cylinders(k + 1).unwrap();
            for d in &grid {
                for (i, parent) in parents.hulls.iter().enumerate() {
                    let whole = parent.project_interval(d);
                    let n = ifs.len();
                    let mut ivs: Vec<Interval> = children.hulls[i * n..(i + 1) * n]
                        .iter()
                        .map(|c| c.project_interval(d))
                        .collect();
                    ivs.sort_by(|a, b| a.lo.total_cmp(&b.lo));
                    let tol = 1e-8 * whole.width();
                    let mut reach = ivs[0].lo;
                    assert!((reach - whole.lo).abs() < tol, "{name}");
                    for iv in &ivs {
                        assert!(iv.lo <= reach + tol, "{name} gap at depth {}", k + 1);
                        reach = reach.max(iv.hi);
                    }
                    assert!((reach - whole.hi).abs() < tol, "{name}");
                }
            }
        }
    }
}

#[test]
fn rotation_angle_of_half_turn_composite() {
    let s = Similarity::new(0.5, PI / 2.0, false, Vec2::ZERO).unwrap();
    assert_abs_diff_eq!(s.compose(&s).rotation(), PI, epsilon = 1e-12);
}
