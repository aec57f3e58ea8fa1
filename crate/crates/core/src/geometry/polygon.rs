use super::vec2::{orient, Direction, Interval, Vec2};
use crate::error::GeometryError;

/// Hulls with more vertices than this are rejected; the attractor hull is a
/// fixed convex body and every example stays far below it.
pub const HULL_VERTEX_CAP: usize = 256;

/// Relative width below which a point set counts as lying on one line.
pub const DEGENERATE_REL: f64 = 1e-12;

/// Strictly convex polygon with counter-clockwise vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexPolygon {
    vertices: Vec<Vec2>,
}

impl ConvexPolygon {
    /// Validates orientation and strict convexity with a cross-product
    /// threshold of `rel_tol · diam²`.
    pub fn from_ccw(vertices: Vec<Vec2>, rel_tol: f64) -> Result<Self, GeometryError> {
        let n = vertices.len();
        if n < 3 {
            return Err(GeometryError::TooFewVertices(n));
        }
        if vertices.iter().any(|v| !v.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        let diam = point_diameter(&vertices);
        let eps = rel_tol * diam * diam;
        for i in 0..n {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            let c = vertices[(i + 2) % n];
            if orient(a, b, c) <= eps {
                return Err(GeometryError::NotConvex { index: (i + 1) % n });
            }
        }
        let poly = Self { vertices };
        if poly.area() <= 0.0 {
            return Err(GeometryError::NotConvex { index: 0 });
        }
        Ok(poly)
    }

    pub(crate) fn from_ccw_unchecked(vertices: Vec<Vec2>) -> Self {
        debug_assert!(vertices.len() >= 3);
        Self { vertices }
    }

    /// Axis-aligned rectangle `[x0, x1] × [y0, y1]`.
    pub fn rect(x0: f64, y0: f64, x1: f64, y1: f64) -> Result<Self, GeometryError> {
        Self::from_ccw(
            vec![
                Vec2::new(x0, y0),
                Vec2::new(x1, y0),
                Vec2::new(x1, y1),
                Vec2::new(x0, y1),
            ],
            0.0,
        )
    }

    #[inline]
    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = (Vec2, Vec2)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn area(&self) -> f64 {
        0.5 * shoelace(&self.vertices)
    }

    pub fn diameter(&self) -> f64 {
        point_diameter(&self.vertices)
    }

    /// Area centroid.
    pub fn centroid(&self) -> Vec2 {
        let o = self.vertices[0];
        let mut acc = Vec2::ZERO;
        let mut area2 = 0.0;
        for (a, b) in self.edges() {
            let w = (a - o).cross(b - o);
            acc += (a + b - o * 2.0) * w;
            area2 += w;
        }
        o + acc / (3.0 * area2)
    }

    /// Membership with slack `eps` (absolute distance) outside each edge.
    pub fn contains(&self, p: Vec2, eps: f64) -> bool {
        self.edges().all(|(a, b)| {
            let e = b - a;
            e.cross(p - a) >= -eps * e.norm()
        })
    }

    /// Euclidean distance from `p` to the polygon (0 inside).
    pub fn distance_to_point(&self, p: Vec2) -> f64 {
        if self.contains(p, 0.0) {
            return 0.0;
        }
        self.edges()
            .map(|(a, b)| segment_distance(p, a, b))
            .fold(f64::INFINITY, f64::min)
    }

    /// Hausdorff distance between two convex polygons; the farthest point
    /// of one from the other is always a vertex.
    pub fn hausdorff(&self, other: &ConvexPolygon) -> f64 {
        let ab = self
            .vertices
            .iter()
            .map(|&v| other.distance_to_point(v))
            .fold(0.0, f64::max);
        let ba = other
            .vertices
            .iter()
            .map(|&v| self.distance_to_point(v))
            .fold(0.0, f64::max);
        ab.max(ba)
    }

    /// `[min, max]` of `v·θ⊥` over the vertices.
    pub fn project_interval(&self, d: &Direction) -> Interval {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &v in &self.vertices {
            let t = d.coord(v);
            lo = lo.min(t);
            hi = hi.max(t);
        }
        Interval { lo, hi }
    }

    /// Heights `x·θ` of the points of the polygon on the fiber `x·θ⊥ = t`,
    /// as `[bottom, top]`; `None` when the fiber misses the polygon.
    pub fn fiber_extent(&self, d: &Direction, t: f64) -> Option<Interval> {
        let proj = self.project_interval(d);
        if !proj.contains(t) {
            return None;
        }
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (a, b) in self.edges() {
            let (ua, ub) = (d.coord(a), d.coord(b));
            let (ha, hb) = (d.height(a), d.height(b));
            if (ua - t) * (ub - t) > 0.0 {
                continue;
            }
            if ua == ub {
                lo = lo.min(ha.min(hb));
                hi = hi.max(ha.max(hb));
            } else {
                let s = ((t - ua) / (ub - ua)).clamp(0.0, 1.0);
                let h = ha + (hb - ha) * s;
                lo = lo.min(h);
                hi = hi.max(h);
            }
        }
        if lo > hi {
            // t sits on the projection boundary and rounding missed every edge
            let v = self.vertices.iter().min_by(|p, q| {
                (d.coord(**p) - t)
                    .abs()
                    .total_cmp(&(d.coord(**q) - t).abs())
            })?;
            let h = d.height(*v);
            return Some(Interval { lo: h, hi: h });
        }
        Some(Interval { lo, hi })
    }

    /// True iff the polygon comes within `eps` of the line through
    /// `line_point` with direction `line_dir`.
    pub fn strip_intersects(&self, line_point: Vec2, line_dir: &Direction, eps: f64) -> bool {
        let n = line_dir.perp();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &v in &self.vertices {
            let s = (v - line_point).dot(n);
            lo = lo.min(s);
            hi = hi.max(s);
        }
        let dist = if lo <= 0.0 && hi >= 0.0 {
            0.0
        } else {
            lo.abs().min(hi.abs())
        };
        dist <= eps
    }

    /// Vertices of `self ∩ other` (Sutherland–Hodgman); may be degenerate.
    pub fn clip(&self, other: &ConvexPolygon) -> Vec<Vec2> {
        let mut out = self.vertices.clone();
        for (a, b) in other.edges() {
            if out.is_empty() {
                break;
            }
            let input = std::mem::take(&mut out);
            let m = input.len();
            for i in 0..m {
                let p = input[i];
                let q = input[(i + 1) % m];
                let sp = orient(a, b, p);
                let sq = orient(a, b, q);
                if sp >= 0.0 {
                    out.push(p);
                }
                if (sp >= 0.0) != (sq >= 0.0) {
                    let t = sp / (sp - sq);
                    out.push(p.lerp(q, t));
                }
            }
        }
        out
    }

    pub fn intersection_area(&self, other: &ConvexPolygon) -> f64 {
        let v = self.clip(other);
        if v.len() < 3 {
            0.0
        } else {
            (0.5 * shoelace(&v)).max(0.0)
        }
    }
}

/// Twice the signed area.
fn shoelace(v: &[Vec2]) -> f64 {
    let n = v.len();
    (0..n).map(|i| v[i].cross(v[(i + 1) % n])).sum()
}

pub(crate) fn point_diameter(v: &[Vec2]) -> f64 {
    let mut best = 0.0f64;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            best = best.max(v[i].dist(v[j]));
        }
    }
    best
}

pub(crate) fn segment_distance(p: Vec2, a: Vec2, b: Vec2) -> f64 {
    let e = b - a;
    let len2 = e.norm_sq();
    if len2 == 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(e) / len2).clamp(0.0, 1.0);
    p.dist(a + e * t)
}

/// Counter-clockwise convex hull chain with collinear and coincident
/// points removed. Returns fewer than 3 points for degenerate input.
pub fn hull_chain(points: &[Vec2]) -> Vec<Vec2> {
    let mut pts: Vec<Vec2> = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let (mut min, mut max) = (pts[0], pts[0]);
    for p in &pts {
        min = Vec2::new(min.x.min(p.x), min.y.min(p.y));
        max = Vec2::new(max.x.max(p.x), max.y.max(p.y));
    }
    let scale = (max - min).norm();
    let eps = 1e-14 * scale * scale;

    let mut lower: Vec<Vec2> = Vec::with_capacity(pts.len());
    for &p in &pts {
        while lower.len() >= 2 && orient(lower[lower.len() - 2], lower[lower.len() - 1], p) <= eps {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Vec2> = Vec::with_capacity(pts.len());
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && orient(upper[upper.len() - 2], upper[upper.len() - 1], p) <= eps {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    // near-coincident vertices survive the sort-based dedup; fold them
    let tiny = 1e-14 * scale;
    let mut out: Vec<Vec2> = Vec::with_capacity(lower.len());
    for p in lower {
        if out.last().is_none_or(|q: &Vec2| q.dist(p) > tiny) {
            out.push(p);
        }
    }
    while out.len() > 1 && out[0].dist(*out.last().unwrap()) <= tiny {
        out.pop();
    }
    out
}

/// Minimal convex polygon containing `points`.
///
/// Fails with `DegenerateHull` when every point lies within
/// `DEGENERATE_REL · diam` of a single line.
pub fn convex_hull(points: &[Vec2]) -> Result<ConvexPolygon, GeometryError> {
    if points.iter().any(|p| !p.is_finite()) {
        return Err(GeometryError::NonFinite);
    }
    let chain = hull_chain(points);
    let diam = point_diameter(&chain);
    let tolerance = DEGENERATE_REL * diam;
    if chain.len() < 3 || hull_width(&chain) <= tolerance {
        return Err(GeometryError::DegenerateHull { tolerance });
    }
    if chain.len() > HULL_VERTEX_CAP {
        return Err(GeometryError::HullTooComplex {
            count: chain.len(),
            cap: HULL_VERTEX_CAP,
        });
    }
    Ok(ConvexPolygon::from_ccw_unchecked(chain))
}

/// Minimum width of a convex chain (min over edges of the farthest vertex).
fn hull_width(chain: &[Vec2]) -> f64 {
    let n = chain.len();
    let mut best = f64::INFINITY;
    for i in 0..n {
        let a = chain[i];
        let b = chain[(i + 1) % n];
        let len = a.dist(b);
        if len == 0.0 {
            continue;
        }
        let far = chain
            .iter()
            .map(|&p| orient(a, b, p).abs() / len)
            .fold(0.0, f64::max);
        best = best.min(far);
    }
    best
}
