//! Iterated function systems of contracting similarities: attractor hull,
//! hypothesis checks, rotation group, cylinder enumeration and stoppings.

mod checks;
mod group;
mod word;

pub use checks::{
    check_cosc, check_projection_interval, critical_directions, default_projection_directions,
    CoscReport, DirectionGaps, ProjectionReport,
};
pub use group::RotationGroup;
pub use word::{CylinderFamily, Level, Stopping, Word, DEFAULT_CYLINDER_CAP};

use crate::error::{GeometryError, IfsError};
use crate::geometry::polygon::{convex_hull, hull_chain, segment_distance};
use crate::geometry::{inscribed_enclosing, orient, ConvexPolygon, Similarity, Vec2};

/// Iteration cap for the hull fixed-point iteration.
pub const HULL_MAX_ITERATIONS: usize = 10_000;

/// Relative tolerance for hull convergence, scaled by the hull diameter.
pub const HULL_REL_TOL: f64 = 1e-12;

/// A validated IFS together with the constants derived from it.
#[derive(Clone, Debug)]
pub struct IfsSystem {
    maps: Vec<Similarity>,
    hull: ConvexPolygon,
    r_min: f64,
    r_max: f64,
    a1: f64,
    a2: f64,
    diam: f64,
}

impl IfsSystem {
    /// Validates the maps and computes the attractor hull.
    pub fn new(maps: Vec<Similarity>) -> Result<Self, IfsError> {
        validate_count(maps.len())?;
        let hull = attractor_hull(&maps, HULL_REL_TOL)?;
        Ok(Self::with_hull(maps, hull))
    }

    /// Builds a system whose attractor hull is already known, as for a
    /// stopped family of the same attractor.
    pub fn with_known_hull(maps: Vec<Similarity>, hull: ConvexPolygon) -> Result<Self, IfsError> {
        validate_count(maps.len())?;
        Ok(Self::with_hull(maps, hull))
    }

    fn with_hull(maps: Vec<Similarity>, hull: ConvexPolygon) -> Self {
        let r_min = maps.iter().map(|m| m.scale()).fold(f64::INFINITY, f64::min);
        let r_max = maps.iter().map(|m| m.scale()).fold(0.0, f64::max);
        let (a1, a2) = inscribed_enclosing(&hull);
        let diam = hull.diameter();
        Self {
            maps,
            hull,
            r_min,
            r_max,
            a1,
            a2,
            diam,
        }
    }

    #[inline]
    pub fn maps(&self) -> &[Similarity] {
        &self.maps
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.maps.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    #[inline]
    pub fn hull(&self) -> &ConvexPolygon {
        &self.hull
    }

    #[inline]
    pub fn r_min(&self) -> f64 {
        self.r_min
    }

    #[inline]
    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    /// Radius of a disc contained in the hull.
    #[inline]
    pub fn a1(&self) -> f64 {
        self.a1
    }

    /// Radius of a disc containing the hull.
    #[inline]
    pub fn a2(&self) -> f64 {
        self.a2
    }

    /// Hull diameter `|H|`.
    #[inline]
    pub fn diameter(&self) -> f64 {
        self.diam
    }

    /// First-level hulls `S_i(H)`.
    pub fn first_level_hulls(&self) -> Vec<ConvexPolygon> {
        self.maps
            .iter()
            .map(|m| m.apply_polygon(&self.hull))
            .collect()
    }

    /// The stopped system `{S_w : w ∈ T_δ}`, which has the same attractor.
    pub fn stopped(&self, delta: f64) -> Result<IfsSystem, IfsError> {
        let fam = self.cylinders_stopped(delta)?;
        Self::with_known_hull(fam.maps, self.hull.clone())
    }

    /// The `s ≥ 0` with `Σ r_i^s = 1`, by bisection to 1e-12.
    pub fn similarity_dimension(&self) -> f64 {
        let f = |s: f64| self.maps.iter().map(|m| m.scale().powf(s)).sum::<f64>() - 1.0;
        let mut hi = 2.0;
        while f(hi) > 0.0 {
            hi *= 2.0;
        }
        let mut lo = 0.0;
        while hi - lo > 1e-12 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Group generated by the orthogonal parts of the maps.
    pub fn rotation_group(&self, max_order: usize, tol: f64) -> RotationGroup {
        let gens: Vec<_> = self.maps.iter().map(|m| m.orthogonal()).collect();
        RotationGroup::generate(&gens, max_order, tol)
    }
}

fn validate_count(n: usize) -> Result<(), IfsError> {
    if n < 2 {
        return Err(IfsError::TooFewMaps(n));
    }
    if n > u16::MAX as usize {
        return Err(IfsError::TooManyMaps(n));
    }
    Ok(())
}

/// Convex hull of the attractor by fixed-point iteration.
///
/// Starts from the fixed points of the maps (which lie in the attractor)
/// and iterates `P ↦ hull(⋃ S_i(P))`. The hulls grow monotonically towards
/// `H`; iteration stops once a step moves the hull by less than
/// `rel_tol · diam`.
pub fn attractor_hull(maps: &[Similarity], rel_tol: f64) -> Result<ConvexPolygon, IfsError> {
    validate_count(maps.len())?;
    let mut current = hull_chain(&maps.iter().map(|m| m.fixed_point()).collect::<Vec<_>>());
    for _ in 0..HULL_MAX_ITERATIONS {
        let images: Vec<Vec2> = maps
            .iter()
            .flat_map(|m| current.iter().map(move |&p| m.apply(p)))
            .collect();
        let next = hull_chain(&images);
        if next.iter().any(|p| !p.is_finite()) {
            return Err(GeometryError::NonFinite.into());
        }
        let scale = chain_diameter(&next).max(f64::MIN_POSITIVE);
        let moved = next
            .iter()
            .map(|&p| distance_to_chain(p, &current))
            .fold(0.0, f64::max);
        current = next;
        if moved <= rel_tol * scale {
            return Ok(convex_hull(&current)?);
        }
    }
    Err(IfsError::NoConvergence {
        iterations: HULL_MAX_ITERATIONS,
    })
}

fn chain_diameter(chain: &[Vec2]) -> f64 {
    let mut best = 0.0f64;
    for (i, a) in chain.iter().enumerate() {
        for b in &chain[i + 1..] {
            best = best.max(a.dist(*b));
        }
    }
    best
}

/// Distance from `p` to the convex hull of a counter-clockwise chain,
/// which may have fewer than three points.
fn distance_to_chain(p: Vec2, chain: &[Vec2]) -> f64 {
    match chain.len() {
        0 => f64::INFINITY,
        1 => p.dist(chain[0]),
        2 => segment_distance(p, chain[0], chain[1]),
        n => {
            let inside = (0..n).all(|i| orient(chain[i], chain[(i + 1) % n], p) >= 0.0);
            if inside {
                return 0.0;
            }
            (0..n)
                .map(|i| segment_distance(p, chain[i], chain[(i + 1) % n]))
                .fold(f64::INFINITY, f64::min)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    pub(crate) fn carpet() -> IfsSystem {
        let mut maps = Vec::new();
        for row in 0..3 {
            for col in 0..3 {
                if row == 1 && col == 1 {
                    continue;
                }
                let t = Vec2::new(col as f64 / 3.0, row as f64 / 3.0);
                maps.push(Similarity::homothety(1.0 / 3.0, t).unwrap());
            }
        }
        IfsSystem::new(maps).unwrap()
    }

    #[test]
    fn carpet_hull_is_unit_square() {
        let ifs = carpet();
        let sq = ConvexPolygon::rect(0.0, 0.0, 1.0, 1.0).unwrap();
        assert!(ifs.hull().hausdorff(&sq) < 1e-12);
        assert_abs_diff_eq!(ifs.diameter(), 2f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn sierpinski_hull_is_triangle() {
        let v = [
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(0.5, 0.8),
        ];
        let maps = v
            .iter()
            .map(|&p| Similarity::homothety(0.5, p * 0.5).unwrap())
            .collect();
        let ifs = IfsSystem::new(maps).unwrap();
        let tri = ConvexPolygon::from_ccw(v.to_vec(), 1e-12).unwrap();
        assert!(ifs.hull().hausdorff(&tri) < 1e-12);
    }

    #[test]
    fn line_contained_attractor_is_rejected() {
        let maps = vec![
            Similarity::homothety(0.5, Vec2::ZERO).unwrap(),
            Similarity::homothety(0.5, Vec2::new(0.5, 0.0)).unwrap(),
        ];
        assert!(matches!(
            IfsSystem::new(maps),
            Err(IfsError::Geometry(GeometryError::DegenerateHull { .. }))
        ));
    }

    #[test]
    fn single_map_is_rejected() {
        let maps = vec![Similarity::homothety(0.5, Vec2::ZERO).unwrap()];
        assert_eq!(IfsSystem::new(maps).unwrap_err(), IfsError::TooFewMaps(1));
    }

    #[test]
    fn rotating_maps_hull_contains_images() {
        let maps = vec![
            Similarity::new(0.6, 0.7, false, Vec2::new(0.1, 0.0)).unwrap(),
            Similarity::new(0.5, -1.1, true, Vec2::new(1.0, 0.3)).unwrap(),
            Similarity::new(0.4, 2.0, false, Vec2::new(0.2, 1.0)).unwrap(),
        ];
        let ifs = IfsSystem::new(maps).unwrap();
        let eps = 1e-10 * ifs.diameter();
        for img in ifs.first_level_hulls() {
            for &v in img.vertices() {
                assert!(ifs.hull().contains(v, eps));
            }
        }
    }

    #[test]
    fn similarity_dimension_closed_forms() {
        let ifs = carpet();
        assert_abs_diff_eq!(
            ifs.similarity_dimension(),
            8f64.ln() / 3f64.ln(),
            epsilon = 1e-10
        );
        let halves = IfsSystem::new(vec![
            Similarity::homothety(0.5, Vec2::ZERO).unwrap(),
            Similarity::new(0.5, 1.0, false, Vec2::new(1.0, 1.0)).unwrap(),
        ])
        .unwrap();
        assert_abs_diff_eq!(halves.similarity_dimension(), 1.0, epsilon = 1e-10);
    }
}
