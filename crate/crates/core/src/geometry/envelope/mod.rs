//! Upper envelope of a family of convex polygons seen from a direction θ.
//!
//! Every polygon contributes its *top chain*: the concave piecewise-linear
//! function `t ↦ max{x·θ : x ∈ P, x·θ⊥ = t}` over its projected interval.
//! The envelope is the pointwise maximum of those chains, stored as cells
//! over the θ⊥ axis; each cell records the polygons attaining the maximum
//! there. A polygon that owns a cell of positive width has a point whose
//! half-line in direction θ meets the union only at that point.

mod merge;
mod sweep;

use std::collections::BTreeMap;
use std::sync::Arc;

use smallvec::SmallVec;

pub use merge::MergeEnvelope;
pub use sweep::SweepEnvelope;

use super::polygon::ConvexPolygon;
use super::vec2::{Direction, Interval};
use super::Tolerance;
use crate::error::GeometryError;

pub type Owners = SmallVec<[u32; 2]>;

/// Concave top boundary of one polygon in `(coord, height)` coordinates,
/// with strictly increasing coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct TopChain {
    pts: Vec<(f64, f64)>,
}

impl TopChain {
    pub fn new(poly: &ConvexPolygon, d: &Direction) -> Self {
        let mut pts: Vec<(f64, f64)> = poly
            .vertices()
            .iter()
            .map(|&v| (d.coord(v), d.height(v)))
            .collect();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.1.total_cmp(&a.1)));
        // keep the highest point per coordinate, up to rounding
        let eps = 1e-12 * poly.diameter();
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(pts.len());
        for p in pts {
            match merged.last_mut() {
                Some(last) if p.0 - last.0 <= eps => {
                    if p.1 > last.1 {
                        last.1 = p.1;
                    }
                }
                _ => merged.push(p),
            }
        }
        let pts = merged;
        let mut chain: Vec<(f64, f64)> = Vec::with_capacity(pts.len());
        for p in pts {
            while chain.len() >= 2 {
                let a = chain[chain.len() - 2];
                let b = chain[chain.len() - 1];
                let turn = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
                if turn >= 0.0 {
                    chain.pop();
                } else {
                    break;
                }
            }
            chain.push(p);
        }
        Self { pts: chain }
    }

    #[inline]
    pub fn points(&self) -> &[(f64, f64)] {
        &self.pts
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.pts[0].0
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.pts[self.pts.len() - 1].0
    }

    pub fn span(&self) -> Interval {
        Interval {
            lo: self.lo(),
            hi: self.hi(),
        }
    }

    /// Top height at coordinate `t`, `None` outside the projection.
    pub fn eval(&self, t: f64) -> Option<f64> {
        if t < self.lo() || t > self.hi() {
            return None;
        }
        if self.pts.len() == 1 {
            return Some(self.pts[0].1);
        }
        let k = self
            .pts
            .partition_point(|p| p.0 < t)
            .clamp(1, self.pts.len() - 1);
        let (a, b) = (self.pts[k - 1], self.pts[k]);
        if b.0 == a.0 {
            return Some(a.1.max(b.1));
        }
        let s = (t - a.0) / (b.0 - a.0);
        Some(a.1 + (b.1 - a.1) * s)
    }
}

/// One envelope cell: the maximum is affine on `[lo, hi]`, running from
/// `h_lo` to `h_hi`, and is attained by every polygon in `owners`.
#[derive(Clone, Debug, PartialEq)]
pub struct EnvelopeCell {
    pub lo: f64,
    pub hi: f64,
    pub h_lo: f64,
    pub h_hi: f64,
    pub owners: Owners,
}

impl EnvelopeCell {
    #[inline]
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    #[inline]
    pub fn height_at(&self, t: f64) -> f64 {
        let w = self.hi - self.lo;
        if w <= 0.0 {
            return self.h_lo.max(self.h_hi);
        }
        self.h_lo + (self.h_hi - self.h_lo) * ((t - self.lo) / w)
    }
}

/// Appends `cell`, fusing it into the previous one when the owners match
/// and the two affine pieces are collinear.
pub(crate) fn push_cell(out: &mut Vec<EnvelopeCell>, cell: EnvelopeCell, tie_tol: f64) {
    if cell.hi <= cell.lo || cell.hi.is_nan() || cell.lo.is_nan() {
        return;
    }
    if let Some(last) = out.last_mut() {
        let line_tol = 1e-3 * tie_tol;
        if last.hi == cell.lo
            && last.owners == cell.owners
            && (last.h_hi - cell.h_lo).abs() <= line_tol
        {
            let slope = (last.h_hi - last.h_lo) / (last.hi - last.lo);
            let predicted = last.h_lo + slope * (cell.hi - last.lo);
            if (predicted - cell.h_hi).abs() <= line_tol {
                last.hi = cell.hi;
                last.h_hi = cell.h_hi;
                return;
            }
        }
    }
    out.push(cell);
}

pub(crate) fn union_owners(a: &Owners, b: &Owners) -> Owners {
    let mut out = Owners::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let next = match (a.get(i), b.get(j)) {
            (Some(&x), Some(&y)) if x == y => {
                i += 1;
                j += 1;
                x
            }
            (Some(&x), Some(&y)) if x < y => {
                i += 1;
                x
            }
            (Some(_), Some(&y)) => {
                j += 1;
                y
            }
            (Some(&x), None) => {
                i += 1;
                x
            }
            (None, Some(&y)) => {
                j += 1;
                y
            }
            (None, None) => unreachable!(),
        };
        out.push(next);
    }
    out
}

/// A way of turning top chains into envelope cells.
pub trait EnvelopeAlgorithm: Send + Sync {
    fn name(&self) -> &'static str;

    /// Sorted, non-overlapping cells of positive width. Two heights within
    /// `tie_tol` of each other at both ends of a cell count as a tie.
    fn cells(&self, chains: &[TopChain], tie_tol: f64) -> Vec<EnvelopeCell>;
}

/// Envelope algorithms selectable by name.
#[derive(Clone)]
pub struct EnvelopeRegistry {
    algorithms: Vec<Arc<dyn EnvelopeAlgorithm>>,
}

impl Default for EnvelopeRegistry {
    fn default() -> Self {
        let mut reg = Self {
            algorithms: Vec::new(),
        };
        reg.register(Arc::new(MergeEnvelope));
        reg.register(Arc::new(SweepEnvelope));
        reg
    }
}

impl EnvelopeRegistry {
    /// Registers an algorithm, replacing any with the same name.
    pub fn register(&mut self, algo: Arc<dyn EnvelopeAlgorithm>) {
        self.algorithms.retain(|a| a.name() != algo.name());
        self.algorithms.push(algo);
    }

    pub fn get(&self, name: &str) -> Option<Arc<dyn EnvelopeAlgorithm>> {
        self.algorithms.iter().find(|a| a.name() == name).cloned()
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.algorithms.iter().map(|a| a.name()).collect()
    }
}

/// Per-polygon result of reading an envelope.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Ownership {
    /// Polygons owning cells of total width above the width tolerance,
    /// with their merged runs.
    pub visible: BTreeMap<u32, Vec<Interval>>,
    /// Polygons that reach the envelope only on a set of (numerically)
    /// zero width, with one coordinate where they touch it.
    pub marginal: BTreeMap<u32, f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Envelope {
    direction: Direction,
    cells: Vec<EnvelopeCell>,
    tie_tol: f64,
}

impl Envelope {
    #[inline]
    pub fn direction(&self) -> &Direction {
        &self.direction
    }

    #[inline]
    pub fn cells(&self) -> &[EnvelopeCell] {
        &self.cells
    }

    #[inline]
    pub fn tie_tol(&self) -> f64 {
        self.tie_tol
    }

    /// Sorted distinct cell endpoints.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::with_capacity(self.cells.len() + 1);
        for c in &self.cells {
            if out.last() != Some(&c.lo) {
                out.push(c.lo);
            }
            out.push(c.hi);
        }
        out
    }

    /// Total width of the cells (measure of the union of projections).
    pub fn covered_width(&self) -> f64 {
        self.cells.iter().map(|c| c.width()).sum()
    }

    fn cells_at(&self, t: f64) -> impl Iterator<Item = &EnvelopeCell> {
        let k = self.cells.partition_point(|c| c.hi < t);
        self.cells[k..]
            .iter()
            .take(2)
            .filter(move |c| c.lo <= t && t <= c.hi)
    }

    /// Envelope height at `t`; at a breakpoint the larger one-sided limit.
    pub fn height_at(&self, t: f64) -> Option<f64> {
        self.cells_at(t).map(|c| c.height_at(t)).reduce(f64::max)
    }

    /// Owners of the cells whose closure contains `t`.
    pub fn owners_at(&self, t: f64) -> Owners {
        self.cells_at(t)
            .fold(Owners::new(), |acc, c| union_owners(&acc, &c.owners))
    }

    /// Per-owner runs: maximal unions of adjacent owned cells.
    pub fn runs(&self) -> BTreeMap<u32, Vec<Interval>> {
        let mut runs: BTreeMap<u32, Vec<Interval>> = BTreeMap::new();
        for c in &self.cells {
            for &o in &c.owners {
                let list = runs.entry(o).or_default();
                match list.last_mut() {
                    Some(last) if last.hi == c.lo => last.hi = c.hi,
                    _ => list.push(Interval { lo: c.lo, hi: c.hi }),
                }
            }
        }
        runs
    }

    /// Splits the family into visible and marginal members.
    ///
    /// `chains[i]` must be the chain that produced owner index `i`.
    pub fn ownership(&self, chains: &[TopChain], width_tol: f64) -> Ownership {
        let mut out = Ownership::default();
        for (owner, runs) in self.runs() {
            let total: f64 = runs.iter().map(|r| r.width()).sum();
            if total > width_tol {
                out.visible.insert(owner, runs);
            } else if let Some(r) = runs.first() {
                out.marginal.insert(owner, r.mid());
            }
        }
        for (i, chain) in chains.iter().enumerate() {
            let id = i as u32;
            if out.visible.contains_key(&id) || out.marginal.contains_key(&id) {
                continue;
            }
            if let Some(t) = self.touch_point(chain) {
                out.marginal.insert(id, t);
            }
        }
        out
    }

    /// A coordinate where `chain` comes within the tie tolerance of the
    /// envelope. Both are piecewise linear, so checking the breakpoints of
    /// each inside the chain's span suffices.
    fn touch_point(&self, chain: &TopChain) -> Option<f64> {
        let close = |t: f64| match (chain.eval(t), self.height_at(t)) {
            (Some(h), Some(env)) => h >= env - self.tie_tol,
            _ => false,
        };
        for &(t, _) in chain.points() {
            if close(t) {
                return Some(t);
            }
        }
        let span = chain.span();
        let k = self.cells.partition_point(|c| c.hi < span.lo);
        for c in &self.cells[k..] {
            if c.lo > span.hi {
                break;
            }
            for t in [c.lo, c.hi] {
                if span.contains(t) && close(t) {
                    return Some(t);
                }
            }
        }
        None
    }
}

/// Envelope of `chains` with the given algorithm.
pub fn envelope_from_chains(
    chains: &[TopChain],
    d: &Direction,
    tie_tol: f64,
    algo: &dyn EnvelopeAlgorithm,
) -> Result<Envelope, GeometryError> {
    if chains.is_empty() {
        return Err(GeometryError::EmptyFamily);
    }
    Ok(Envelope {
        direction: *d,
        cells: algo.cells(chains, tie_tol),
        tie_tol,
    })
}

/// Tie tolerance for a family: `rel · max diameter`.
pub fn family_tie_tol(polys: &[ConvexPolygon], tol: &Tolerance) -> f64 {
    tol.scaled(polys.iter().map(|p| p.diameter()).fold(0.0, f64::max))
}

/// Upper envelope with an explicit algorithm.
pub fn upper_envelope_with(
    polys: &[ConvexPolygon],
    d: &Direction,
    tol: &Tolerance,
    algo: &dyn EnvelopeAlgorithm,
) -> Result<Envelope, GeometryError> {
    if polys.is_empty() {
        return Err(GeometryError::EmptyFamily);
    }
    let chains: Vec<TopChain> = polys.iter().map(|p| TopChain::new(p, d)).collect();
    envelope_from_chains(&chains, d, family_tie_tol(polys, tol), algo)
}

/// Upper envelope with the default tolerance and the merge algorithm.
pub fn upper_envelope(polys: &[ConvexPolygon], d: &Direction) -> Result<Envelope, GeometryError> {
    upper_envelope_with(polys, d, &Tolerance::default(), &MergeEnvelope)
}
