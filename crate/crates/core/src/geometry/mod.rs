//! Planar primitives: vectors and directions, similarities, convex
//! polygons, discs and upper envelopes.

pub mod disc;
pub mod envelope;
pub mod polygon;
pub mod similarity;
pub mod vec2;

pub use disc::{chebyshev_disc, inscribed_enclosing, min_enclosing_disc, Disc};
pub use envelope::{
    upper_envelope, upper_envelope_with, Envelope, EnvelopeAlgorithm, EnvelopeCell,
    EnvelopeRegistry, MergeEnvelope, Ownership, SweepEnvelope, TopChain,
};
pub use polygon::{convex_hull, ConvexPolygon};
pub use similarity::{angle_distance, Expansion, Orthogonal, Similarity};
pub use vec2::{orient, Direction, Interval, Vec2};

/// Relative tolerance; absolute tolerances are `rel · size` for the
/// characteristic size of the object at hand.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { rel: 1e-9 }
    }
}

impl Tolerance {
    pub fn new(rel: f64) -> Self {
        Self { rel }
    }

    pub fn scaled(&self, size: f64) -> f64 {
        self.rel * size
    }
}
