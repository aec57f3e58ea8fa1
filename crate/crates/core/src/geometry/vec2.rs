use std::f64::consts::{FRAC_PI_2, TAU};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use crate::error::GeometryError;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn try_new(x: f64, y: f64) -> Result<Self, GeometryError> {
        if x.is_finite() && y.is_finite() {
            Ok(Self { x, y })
        } else {
            Err(GeometryError::NonFinite)
        }
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    #[inline]
    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3-D cross product.
    #[inline]
    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn dist(self, o: Vec2) -> f64 {
        (self - o).norm()
    }

    /// Rotation by +π/2.
    #[inline]
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    #[inline]
    pub fn rotate(self, angle: f64) -> Vec2 {
        let (s, c) = angle.sin_cos();
        Vec2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    #[inline]
    pub fn lerp(self, o: Vec2, t: f64) -> Vec2 {
        self + (o - self) * t
    }
}

/// Twice the signed area of triangle `(o, a, b)`; positive for a left turn.
#[inline]
pub fn orient(o: Vec2, a: Vec2, b: Vec2) -> f64 {
    (a - o).cross(b - o)
}

impl Add for Vec2 {
    type Output = Vec2;
    #[inline]
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for Vec2 {
    #[inline]
    fn add_assign(&mut self, o: Vec2) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    #[inline]
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl Div<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn div(self, s: f64) -> Vec2 {
        Vec2::new(self.x / s, self.y / s)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    #[inline]
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl fmt::Display for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// A viewing direction θ together with the axis θ⊥ (θ rotated by +π/2)
/// that parametrises the projection line Π_θ.
///
/// Points are described in direction coordinates: `coord(p) = p·θ⊥` says
/// which fiber (line parallel to θ) the point sits on, `height(p) = p·θ`
/// says how far along θ it is. Larger height means closer to the observer.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Direction {
    angle: f64,
    along: Vec2,
    perp: Vec2,
}

impl Direction {
    /// Angles that are exact multiples of π/2 in floating point get exact
    /// axis vectors.
    pub fn from_radians(angle: f64) -> Self {
        let mut a = angle.rem_euclid(TAU);
        if a >= TAU {
            a = 0.0;
        }
        let quarter = a / FRAC_PI_2;
        let (s, c) = if quarter == quarter.round() {
            [(0.0, 1.0), (1.0, 0.0), (0.0, -1.0), (-1.0, 0.0)][quarter as usize % 4]
        } else {
            a.sin_cos()
        };
        Self {
            angle: a,
            along: Vec2::new(c, s),
            perp: Vec2::new(-s, c),
        }
    }

    pub fn from_degrees(deg: f64) -> Self {
        let d = deg.rem_euclid(360.0);
        if d % 90.0 == 0.0 {
            return Self::from_radians((d / 90.0) * FRAC_PI_2);
        }
        Self::from_radians(deg.to_radians())
    }

    pub fn from_vector(v: Vec2) -> Option<Self> {
        if !v.is_finite() || v.norm() == 0.0 {
            return None;
        }
        Some(Self::from_radians(v.y.atan2(v.x)))
    }

    /// `count` directions equally spaced on the circle, starting at angle 0.
    pub fn equally_spaced(count: usize) -> Vec<Direction> {
        (0..count)
            .map(|i| Direction::from_radians(TAU * i as f64 / count as f64))
            .collect()
    }

    #[inline]
    pub fn angle(&self) -> f64 {
        self.angle
    }

    #[inline]
    pub fn degrees(&self) -> f64 {
        self.angle.to_degrees()
    }

    #[inline]
    pub fn along(&self) -> Vec2 {
        self.along
    }

    #[inline]
    pub fn perp(&self) -> Vec2 {
        self.perp
    }

    #[inline]
    pub fn coord(&self, p: Vec2) -> f64 {
        p.dot(self.perp)
    }

    #[inline]
    pub fn height(&self, p: Vec2) -> f64 {
        p.dot(self.along)
    }

    /// Inverse of `(coord, height)`.
    #[inline]
    pub fn point_at(&self, coord: f64, height: f64) -> Vec2 {
        self.perp * coord + self.along * height
    }
}

/// Closed interval on the θ⊥ axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    /// Orders the endpoints.
    pub fn new(a: f64, b: f64) -> Self {
        if a <= b {
            Self { lo: a, hi: b }
        } else {
            Self { lo: b, hi: a }
        }
    }

    #[inline]
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    #[inline]
    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    #[inline]
    pub fn contains(&self, t: f64) -> bool {
        self.lo <= t && t <= self.hi
    }

    /// Closed-interval intersection test.
    #[inline]
    pub fn meets(&self, o: &Interval) -> bool {
        self.lo <= o.hi && o.lo <= self.hi
    }

    pub fn hull(&self, o: &Interval) -> Interval {
        Interval {
            lo: self.lo.min(o.lo),
            hi: self.hi.max(o.hi),
        }
    }
}

/// Sorts and merges intervals that overlap or touch within `join_tol`.
pub fn merge_intervals(mut items: Vec<Interval>, join_tol: f64) -> Vec<Interval> {
    items.sort_by(|a, b| a.lo.total_cmp(&b.lo).then(a.hi.total_cmp(&b.hi)));
    let mut out: Vec<Interval> = Vec::with_capacity(items.len());
    for iv in items {
        match out.last_mut() {
            Some(last) if iv.lo <= last.hi + join_tol => last.hi = last.hi.max(iv.hi),
            _ => out.push(iv),
        }
    }
    out
}
