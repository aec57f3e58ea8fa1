use std::f64::consts::{FRAC_PI_2, TAU};

use super::polygon::ConvexPolygon;
use super::vec2::{Direction, Vec2};
use crate::error::GeometryError;

/// The orthogonal part of a similarity: rotation by `rotation` radians,
/// preceded by the mirror `(x, y) ↦ (x, −y)` when `reflect` is set.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Orthogonal {
    rotation: f64,
    reflect: bool,
    cos: f64,
    sin: f64,
}

impl Orthogonal {
    pub const IDENTITY: Orthogonal = Orthogonal {
        rotation: 0.0,
        reflect: false,
        cos: 1.0,
        sin: 0.0,
    };

    pub fn new(rotation: f64, reflect: bool) -> Self {
        let rotation = normalize_angle(rotation);
        let quarter = rotation / FRAC_PI_2;
        let (sin, cos) = if quarter == quarter.round() {
            [(0.0, 1.0), (1.0, 0.0), (0.0, -1.0), (-1.0, 0.0)][quarter as usize % 4]
        } else {
            rotation.sin_cos()
        };
        Self {
            rotation,
            reflect,
            cos,
            sin,
        }
    }

    #[inline]
    pub fn rotation(&self) -> f64 {
        self.rotation
    }

    #[inline]
    pub fn reflect(&self) -> bool {
        self.reflect
    }

    #[inline]
    pub fn apply(&self, v: Vec2) -> Vec2 {
        let y = if self.reflect { -v.y } else { v.y };
        Vec2::new(self.cos * v.x - self.sin * y, self.sin * v.x + self.cos * y)
    }

    /// `self ∘ other`. Uses `M R_φ = R_{−φ} M`.
    pub fn compose(&self, other: &Orthogonal) -> Orthogonal {
        let (rot, os) = if self.reflect {
            (self.rotation - other.rotation, -other.sin)
        } else {
            (self.rotation + other.rotation, other.sin)
        };
        Orthogonal {
            rotation: normalize_angle(rot),
            reflect: self.reflect ^ other.reflect,
            cos: self.cos * other.cos - self.sin * os,
            sin: self.sin * other.cos + self.cos * os,
        }
    }

    pub fn inverse(&self) -> Orthogonal {
        if self.reflect {
            // reflections are involutions
            *self
        } else {
            Orthogonal::new(-self.rotation, false)
        }
    }

    /// Image of a direction under this map.
    pub fn push_direction(&self, d: &Direction) -> Direction {
        if self.reflect {
            Direction::from_radians(self.rotation - d.angle())
        } else {
            Direction::from_radians(self.rotation + d.angle())
        }
    }

    /// Preimage of a direction: the angle is negated through a reflection
    /// and has the rotation subtracted otherwise.
    pub fn pull_direction(&self, d: &Direction) -> Direction {
        self.inverse().push_direction(d)
    }

    /// Same element of O(2), angles compared modulo 2π.
    pub fn approx_eq(&self, o: &Orthogonal, tol: f64) -> bool {
        self.reflect == o.reflect && angle_distance(self.rotation, o.rotation) <= tol
    }
}

pub(crate) fn normalize_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Distance between two angles on the circle.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// `p ↦ scale · O(p) + translation` for any positive scale.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Conformal {
    scale: f64,
    orth: Orthogonal,
    translation: Vec2,
}

impl Conformal {
    #[inline]
    fn apply(&self, p: Vec2) -> Vec2 {
        self.orth.apply(p) * self.scale + self.translation
    }

    fn compose(&self, o: &Conformal) -> Conformal {
        Conformal {
            scale: self.scale * o.scale,
            orth: self.orth.compose(&o.orth),
            translation: self.apply(o.translation),
        }
    }

    fn inverse(&self) -> Conformal {
        let orth = self.orth.inverse();
        let scale = 1.0 / self.scale;
        Conformal {
            scale,
            orth,
            translation: -(orth.apply(self.translation) * scale),
        }
    }

    fn apply_polygon(&self, p: &ConvexPolygon) -> ConvexPolygon {
        let mut v: Vec<Vec2> = p.vertices().iter().map(|&q| self.apply(q)).collect();
        if self.orth.reflect {
            v.reverse();
        }
        ConvexPolygon::from_ccw_unchecked(v)
    }
}

/// A contracting similarity of the plane.
///
/// Acts as `scale · R(rotation) · M · p + translation`, where `M` is the
/// identity or the x-axis mirror. Distances scale exactly by `scale`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Similarity {
    inner: Conformal,
}

impl Similarity {
    pub fn new(
        scale: f64,
        rotation: f64,
        reflect: bool,
        translation: Vec2,
    ) -> Result<Self, GeometryError> {
        if !(scale.is_finite() && rotation.is_finite() && translation.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        if !(scale > 0.0 && scale < 1.0) {
            return Err(GeometryError::InvalidScale(scale));
        }
        Ok(Self {
            inner: Conformal {
                scale,
                orth: Orthogonal::new(rotation, reflect),
                translation,
            },
        })
    }

    /// Pure homothety `p ↦ scale · p + translation`.
    pub fn homothety(scale: f64, translation: Vec2) -> Result<Self, GeometryError> {
        Self::new(scale, 0.0, false, translation)
    }

    #[inline]
    pub fn scale(&self) -> f64 {
        self.inner.scale
    }

    #[inline]
    pub fn rotation(&self) -> f64 {
        self.inner.orth.rotation
    }

    #[inline]
    pub fn reflect(&self) -> bool {
        self.inner.orth.reflect
    }

    #[inline]
    pub fn translation(&self) -> Vec2 {
        self.inner.translation
    }

    #[inline]
    pub fn orthogonal(&self) -> Orthogonal {
        self.inner.orth
    }

    #[inline]
    pub fn apply(&self, p: Vec2) -> Vec2 {
        self.inner.apply(p)
    }

    /// Image polygon, kept counter-clockwise (vertex order is reversed
    /// under a reflection).
    pub fn apply_polygon(&self, p: &ConvexPolygon) -> ConvexPolygon {
        self.inner.apply_polygon(p)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Similarity) -> Similarity {
        Similarity {
            inner: self.inner.compose(&other.inner),
        }
    }

    /// The unique point with `s(p) = p`.
    pub fn fixed_point(&self) -> Vec2 {
        // (I − sA) p = t, A orthogonal; solve the 2x2 system directly.
        let s = self.inner.scale;
        let ex = self.inner.orth.apply(Vec2::new(1.0, 0.0)) * s;
        let ey = self.inner.orth.apply(Vec2::new(0.0, 1.0)) * s;
        let (a, b, c, d) = (1.0 - ex.x, -ey.x, -ex.y, 1.0 - ey.y);
        let t = self.inner.translation;
        let det = a * d - b * c;
        Vec2::new((d * t.x - b * t.y) / det, (a * t.y - c * t.x) / det)
    }

    pub fn inverse(&self) -> Expansion {
        Expansion {
            inner: self.inner.inverse(),
        }
    }
}

/// Inverse of a contraction. Scale exceeds 1, so it is kept apart from
/// [`Similarity`]; it only serves pullbacks of cylinders and directions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Expansion {
    inner: Conformal,
}

impl Expansion {
    #[inline]
    pub fn scale(&self) -> f64 {
        self.inner.scale
    }

    #[inline]
    pub fn is_expanding(&self) -> bool {
        self.inner.scale > 1.0
    }

    #[inline]
    pub fn orthogonal(&self) -> Orthogonal {
        self.inner.orth
    }

    #[inline]
    pub fn apply(&self, p: Vec2) -> Vec2 {
        self.inner.apply(p)
    }

    pub fn apply_polygon(&self, p: &ConvexPolygon) -> ConvexPolygon {
        self.inner.apply_polygon(p)
    }

    /// Direction of the image of a half-line with direction `d`.
    pub fn map_direction(&self, d: &Direction) -> Direction {
        self.inner.orth.push_direction(d)
    }
}
