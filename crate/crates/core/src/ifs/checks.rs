use std::f64::consts::PI;

use rayon::prelude::*;

use super::IfsSystem;
use crate::geometry::vec2::merge_intervals;
use crate::geometry::{ConvexPolygon, Direction, Interval, Vec2};

/// Above this many vertices among the first-level hulls, critical
/// directions fall back to edge normals instead of all vertex pairs.
const CRITICAL_VERTEX_CAP: usize = 512;

/// Result of the convex open set check.
#[derive(Clone, Debug, PartialEq)]
pub struct CoscReport {
    pub pass: bool,
    /// 0-based map pairs `(i, j)`, `i < j`, with their overlap area.
    pub violating_pairs: Vec<(usize, usize, f64)>,
}

/// Pairwise overlap of the first-level hulls: the check passes when no
/// two of them share more than `rel_tol · area(H)` of area. Boundary
/// contact is allowed.
pub fn check_cosc(ifs: &IfsSystem, rel_tol: f64) -> CoscReport {
    let hulls = ifs.first_level_hulls();
    let limit = rel_tol * ifs.hull().area();
    let boxes: Vec<(Vec2, Vec2)> = hulls.iter().map(bbox).collect();
    let violating_pairs: Vec<(usize, usize, f64)> = (0..hulls.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let hulls = &hulls;
            let boxes = &boxes;
            (i + 1..hulls.len()).filter_map(move |j| {
                let (a, b) = (boxes[i], boxes[j]);
                if a.1.x <= b.0.x || b.1.x <= a.0.x || a.1.y <= b.0.y || b.1.y <= a.0.y {
                    return None;
                }
                let area = hulls[i].intersection_area(&hulls[j]);
                (area > limit).then_some((i, j, area))
            })
        })
        .collect();
    CoscReport {
        pass: violating_pairs.is_empty(),
        violating_pairs,
    }
}

fn bbox(p: &ConvexPolygon) -> (Vec2, Vec2) {
    let mut lo = Vec2::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for v in p.vertices() {
        lo = Vec2::new(lo.x.min(v.x), lo.y.min(v.y));
        hi = Vec2::new(hi.x.max(v.x), hi.y.max(v.y));
    }
    (lo, hi)
}

/// Uncovered parts of `proj_θ H` for one direction.
#[derive(Clone, Debug, PartialEq)]
pub struct DirectionGaps {
    pub direction: Direction,
    pub gaps: Vec<Interval>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionReport {
    pub pass: bool,
    pub directions_checked: usize,
    /// Directions with at least one gap, in input order.
    pub failures: Vec<DirectionGaps>,
}

/// Checks that the projections of the first-level hulls cover the
/// projection of `H` with no gap wider than `rel_tol · |H|`, for every
/// given direction.
pub fn check_projection_interval(
    ifs: &IfsSystem,
    directions: &[Direction],
    rel_tol: f64,
) -> ProjectionReport {
    let hulls = ifs.first_level_hulls();
    let tol = rel_tol * ifs.diameter();
    let failures: Vec<DirectionGaps> = directions
        .par_iter()
        .filter_map(|d| {
            let gaps = projection_gaps(ifs.hull(), &hulls, d, tol);
            (!gaps.is_empty()).then_some(DirectionGaps {
                direction: *d,
                gaps,
            })
        })
        .collect();
    ProjectionReport {
        pass: failures.is_empty(),
        directions_checked: directions.len(),
        failures,
    }
}

/// Parts of `parent`'s projection not covered by the children, wider
/// than `tol`.
pub(crate) fn projection_gaps(
    parent: &ConvexPolygon,
    children: &[ConvexPolygon],
    d: &Direction,
    tol: f64,
) -> Vec<Interval> {
    let whole = parent.project_interval(d);
    let covered = merge_intervals(
        children.iter().map(|c| c.project_interval(d)).collect(),
        0.0,
    );
    let mut gaps = Vec::new();
    let mut at = whole.lo;
    for iv in covered {
        if iv.lo > at + tol {
            gaps.push(Interval::new(at, iv.lo.min(whole.hi)));
        }
        at = at.max(iv.hi);
    }
    if whole.hi > at + tol {
        gaps.push(Interval::new(at, whole.hi));
    }
    gaps.retain(|g| g.width() > tol);
    gaps
}

/// Directions at which the order of projected vertices of `H` and of the
/// first-level hulls changes, reduced modulo π, plus the midpoints of
/// consecutive ones. Between two critical directions the covering
/// pattern is fixed, so checking this set decides the first-level
/// condition for every direction.
pub fn critical_directions(ifs: &IfsSystem) -> Vec<Direction> {
    let hulls = ifs.first_level_hulls();
    let mut verts: Vec<Vec2> = ifs.hull().vertices().to_vec();
    for h in &hulls {
        verts.extend_from_slice(h.vertices());
    }
    let mut angles: Vec<f64> = Vec::new();
    if verts.len() <= CRITICAL_VERTEX_CAP {
        for (i, a) in verts.iter().enumerate() {
            for b in &verts[i + 1..] {
                let e = *b - *a;
                if e.norm() > 0.0 {
                    angles.push(e.y.atan2(e.x).rem_euclid(PI));
                }
            }
        }
    } else {
        for h in std::iter::once(ifs.hull()).chain(hulls.iter()) {
            for (a, b) in h.edges() {
                let e = b - a;
                angles.push((e.y.atan2(e.x) + PI / 2.0).rem_euclid(PI));
            }
        }
    }
    angles.sort_by(f64::total_cmp);
    angles.dedup_by(|a, b| (*a - *b).abs() <= 1e-12);
    let mut out: Vec<f64> = Vec::with_capacity(2 * angles.len());
    for (i, &a) in angles.iter().enumerate() {
        out.push(a);
        let next = angles.get(i + 1).copied().unwrap_or(angles[0] + PI);
        out.push(0.5 * (a + next));
    }
    out.into_iter().map(Direction::from_radians).collect()
}

/// `grid` equally spaced directions together with the critical ones.
pub fn default_projection_directions(ifs: &IfsSystem, grid: usize) -> Vec<Direction> {
    let mut dirs = Direction::equally_spaced(grid);
    dirs.extend(critical_directions(ifs));
    dirs
}
