//! Visible cylinders, covers of the visible part, the brute-force point
//! oracle, and the counting quantities behind the growth bound.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::IfsError;
use crate::geometry::envelope::{envelope_from_chains, family_tie_tol};
use crate::geometry::{
    ConvexPolygon, Direction, Envelope, EnvelopeAlgorithm, Interval, MergeEnvelope, Similarity,
    Tolerance, TopChain, Vec2,
};
use crate::ifs::{CylinderFamily, IfsSystem, Level, Word};

/// A word whose hull owns envelope cells of positive total width.
#[derive(Clone, Debug, PartialEq)]
pub struct VisibleWord {
    pub word: Word,
    /// Owned runs on the θ⊥ axis, sorted and disjoint.
    pub runs: Vec<Interval>,
}

impl VisibleWord {
    pub fn width(&self) -> f64 {
        self.runs.iter().map(|r| r.width()).sum()
    }
}

/// A word that reaches the envelope only on a set of zero width.
#[derive(Clone, Debug, PartialEq)]
pub struct MarginalWord {
    pub word: Word,
    /// A θ⊥ coordinate where it touches the envelope.
    pub at: f64,
}

/// Visible words of one cylinder family from one direction.
#[derive(Clone, Debug)]
pub struct VisibleSetReport {
    pub direction: Direction,
    pub level: Level,
    /// Lexicographic word order.
    pub visible: Vec<VisibleWord>,
    pub marginal: Vec<MarginalWord>,
    /// Width covered by the envelope.
    pub total_width: f64,
    pub envelope: Envelope,
}

impl VisibleSetReport {
    pub fn is_visible(&self, word: &Word) -> bool {
        self.visible.binary_search_by(|v| v.word.cmp(word)).is_ok()
    }

    pub fn is_marginal(&self, word: &Word) -> bool {
        self.marginal.binary_search_by(|v| v.word.cmp(word)).is_ok()
    }

    /// `|V_θ^k|`, optionally counting marginal words too.
    pub fn count(&self, include_marginal: bool) -> usize {
        self.visible.len()
            + if include_marginal {
                self.marginal.len()
            } else {
                0
            }
    }

    /// Sum of the widths of all visible runs.
    pub fn run_width(&self) -> f64 {
        self.visible.iter().map(|v| v.width()).sum()
    }
}

/// Visibility within an arbitrary cylinder family.
pub fn visible_in_family(
    family: &CylinderFamily,
    d: &Direction,
    tol: &Tolerance,
    algo: &dyn EnvelopeAlgorithm,
) -> Result<VisibleSetReport, IfsError> {
    let chains: Vec<TopChain> = family
        .hulls
        .par_iter()
        .map(|h| TopChain::new(h, d))
        .collect();
    let tie_tol = family_tie_tol(&family.hulls, tol);
    let envelope = envelope_from_chains(&chains, d, tie_tol, algo)?;
    let own = envelope.ownership(&chains, tie_tol);
    let visible = own
        .visible
        .into_iter()
        .map(|(i, runs)| VisibleWord {
            word: family.words[i as usize].clone(),
            runs,
        })
        .collect();
    let marginal = own
        .marginal
        .into_iter()
        .map(|(i, at)| MarginalWord {
            word: family.words[i as usize].clone(),
            at,
        })
        .collect();
    Ok(VisibleSetReport {
        direction: *d,
        level: family.level,
        visible,
        marginal,
        total_width: envelope.covered_width(),
        envelope,
    })
}

/// `(k, θ)`-visible words: depth-`k` cylinders owning part of the envelope.
pub fn k_visible(ifs: &IfsSystem, d: &Direction, k: usize) -> Result<VisibleSetReport, IfsError> {
    k_visible_with(ifs, d, k, &MergeEnvelope)
}

pub fn k_visible_with(
    ifs: &IfsSystem,
    d: &Direction,
    k: usize,
    algo: &dyn EnvelopeAlgorithm,
) -> Result<VisibleSetReport, IfsError> {
    visible_in_family(&ifs.cylinders(k)?, d, &Tolerance::default(), algo)
}

/// Visible words of the stopping `T_δ`.
pub fn stopped_visible(
    ifs: &IfsSystem,
    d: &Direction,
    delta: f64,
) -> Result<VisibleSetReport, IfsError> {
    visible_in_family(
        &ifs.cylinders_stopped(delta)?,
        d,
        &Tolerance::default(),
        &MergeEnvelope,
    )
}

/// Hulls of the visible depth-`k` words; together they cover `V_θF`.
pub fn visible_cover(
    ifs: &IfsSystem,
    d: &Direction,
    k: usize,
) -> Result<Vec<ConvexPolygon>, IfsError> {
    if k == 0 {
        return Ok(vec![ifs.hull().clone()]);
    }
    let report = k_visible(ifs, d, k)?;
    Ok(report
        .visible
        .iter()
        .map(|v| {
            v.word
                .map(ifs)
                .expect("nonempty word")
                .apply_polygon(ifs.hull())
        })
        .collect())
}

/// Discrete sample of `V_θF`: the highest cylinder representative in each
/// fiber bucket.
#[derive(Clone, Debug)]
pub struct VisiblePointCloud {
    pub direction: Direction,
    pub depth: usize,
    pub fiber_resolution: usize,
    pub points: Vec<Vec2>,
    /// Depth-`depth` word of each retained point.
    pub words: Vec<Word>,
}

impl VisiblePointCloud {
    /// Distinct length-`k` prefixes of the retained words.
    pub fn prefixes(&self, k: usize) -> Vec<Word> {
        let mut out: Vec<Word> = self.words.iter().map(|w| w.prefix(k)).collect();
        out.sort();
        out.dedup();
        out
    }
}

pub const MIN_FIBER_RESOLUTION: usize = 256;

/// Brute-force oracle for the visible part.
///
/// Each depth-`depth` cylinder contributes the image of the hull centroid.
/// Points are bucketed by θ⊥ coordinate into `fiber_resolution` bins over
/// `proj_θ H`, and each bin keeps its highest point (lowest word on ties).
/// Cylinders are visited without being stored, so the depth is limited
/// by [`ORACLE_CAP`] rather than by memory.
pub fn visible_points(
    ifs: &IfsSystem,
    d: &Direction,
    depth: usize,
    fiber_resolution: usize,
) -> Result<VisiblePointCloud, IfsError> {
    if fiber_resolution < MIN_FIBER_RESOLUTION {
        return Err(IfsError::InvalidParameter(format!(
            "fiber resolution must be at least {MIN_FIBER_RESOLUTION}, got {fiber_resolution}"
        )));
    }
    let n = ifs.len() as u128;
    let needed = (0..depth)
        .try_fold(1u128, |acc, _| acc.checked_mul(n))
        .unwrap_or(u128::MAX);
    if needed > ORACLE_CAP as u128 {
        return Err(IfsError::ResourceLimit {
            needed,
            cap: ORACLE_CAP,
        });
    }
    let bins = Bins {
        d: *d,
        span: ifs.hull().project_interval(d),
        count: fiber_resolution,
        centroid: ifs.hull().centroid(),
    };
    let best = if depth == 0 {
        let mut best = vec![None; fiber_resolution];
        bins.offer(&mut best, bins.centroid, Word::default());
        best
    } else {
        (0..ifs.len() as u16)
            .into_par_iter()
            .map(|i| {
                let mut best = vec![None; fiber_resolution];
                let mut word = vec![i];
                descend(
                    ifs,
                    &bins,
                    ifs.maps()[i as usize],
                    &mut word,
                    depth,
                    &mut best,
                );
                best
            })
            .reduce_with(|mut a, b| {
                // earlier subtrees win ties, keeping lexicographic preference
                for (x, y) in a.iter_mut().zip(b) {
                    if let Some((hy, _, _)) = y {
                        if x.as_ref().is_none_or(|(hx, _, _)| hy > *hx) {
                            *x = y;
                        }
                    }
                }
                a
            })
            .expect("at least two maps")
    };
    let (points, words) = best.into_iter().flatten().map(|(_, p, w)| (p, w)).unzip();
    Ok(VisiblePointCloud {
        direction: *d,
        depth,
        fiber_resolution,
        points,
        words,
    })
}

/// Largest number of cylinder representatives the oracle visits.
pub const ORACLE_CAP: usize = 200_000_000;

type Slot = Option<(f64, Vec2, Word)>;

struct Bins {
    d: Direction,
    span: Interval,
    count: usize,
    centroid: Vec2,
}

impl Bins {
    fn offer(&self, best: &mut [Slot], p: Vec2, word: Word) {
        let u = (self.d.coord(p) - self.span.lo) / self.span.width();
        let bin = ((u * self.count as f64).floor().max(0.0) as usize).min(self.count - 1);
        let h = self.d.height(p);
        if best[bin].as_ref().is_none_or(|(bh, _, _)| h > *bh) {
            best[bin] = Some((h, p, word));
        }
    }

    fn would_take(&self, best: &[Slot], p: Vec2) -> Option<usize> {
        let u = (self.d.coord(p) - self.span.lo) / self.span.width();
        let bin = ((u * self.count as f64).floor().max(0.0) as usize).min(self.count - 1);
        let h = self.d.height(p);
        best[bin]
            .as_ref()
            .is_none_or(|(bh, _, _)| h > *bh)
            .then_some(bin)
    }
}

fn descend(
    ifs: &IfsSystem,
    bins: &Bins,
    map: Similarity,
    word: &mut Vec<u16>,
    depth: usize,
    best: &mut [Slot],
) {
    if word.len() == depth {
        let p = map.apply(bins.centroid);
        if let Some(bin) = bins.would_take(best, p) {
            best[bin] = Some((bins.d.height(p), p, Word(word.clone())));
        }
        return;
    }
    for (j, m) in ifs.maps().iter().enumerate() {
        word.push(j as u16);
        descend(ifs, bins, map.compose(m), word, depth, best);
        word.pop();
    }
}

/// Direction of `S_{i}^{-1} l_θ`.
pub fn pullback_direction(ifs: &IfsSystem, first: u16, d: &Direction) -> Direction {
    ifs.maps()[first as usize].orthogonal().pull_direction(d)
}

/// For a word visible at depth `k` from `d1`, whether its suffix is
/// visible at depth `k − 1` from the pulled-back direction. Vacuously
/// true for words that are not visible.
pub fn pullback_visibility_check(
    ifs: &IfsSystem,
    word: &Word,
    d1: &Direction,
    k: usize,
) -> Result<bool, IfsError> {
    if k < 2 || word.len() != k {
        return Err(IfsError::InvalidParameter(format!(
            "pullback needs a word of length k >= 2, got length {} at k = {k}",
            word.len()
        )));
    }
    let report = k_visible(ifs, d1, k)?;
    if !report.is_visible(word) {
        return Ok(true);
    }
    let first = word.first().expect("nonempty word");
    let d2 = pullback_direction(ifs, first, d1);
    Ok(k_visible(ifs, &d2, k - 1)?.is_visible(&word.suffix()))
}

/// Pullback check for every visible word at depth `k`, sharing the
/// depth-`k − 1` envelopes between words with the same first symbol.
/// Returns the words whose suffix fails.
pub fn pullback_failures(ifs: &IfsSystem, d1: &Direction, k: usize) -> Result<Vec<Word>, IfsError> {
    if k < 2 {
        return Err(IfsError::InvalidParameter(format!(
            "pullback needs k >= 2, got {k}"
        )));
    }
    let report = k_visible(ifs, d1, k)?;
    let lower = ifs.cylinders(k - 1)?;
    let mut by_first: BTreeMap<u16, Vec<&Word>> = BTreeMap::new();
    for v in &report.visible {
        by_first
            .entry(v.word.first().expect("nonempty word"))
            .or_default()
            .push(&v.word);
    }
    let mut failures = Vec::new();
    for (first, words) in by_first {
        let d2 = pullback_direction(ifs, first, d1);
        let sub = visible_in_family(&lower, &d2, &Tolerance::default(), &MergeEnvelope)?;
        failures.extend(
            words
                .into_iter()
                .filter(|w| !sub.is_visible(&w.suffix()))
                .cloned(),
        );
    }
    Ok(failures)
}

/// Number of polygons meeting the closed strip of half-width `eps`
/// around the line through `line_point` with direction `line_dir`.
pub fn strip_count(
    polys: &[ConvexPolygon],
    line_point: Vec2,
    line_dir: &Direction,
    eps: f64,
) -> usize {
    polys
        .iter()
        .filter(|p| p.strip_intersects(line_point, line_dir, eps))
        .count()
}

/// `q(ε) = |H|(2ε + 4 a₂ r_max) / (π (a₁ r_min)²)`.
pub fn q_epsilon(ifs: &IfsSystem, eps: f64) -> f64 {
    let r = ifs.a1() * ifs.r_min();
    ifs.diameter() * (2.0 * eps + 4.0 * ifs.a2() * ifs.r_max()) / (PI * r * r)
}

/// `N_θ(k, a)` for one window: words whose runs meet `window` (closed).
/// Marginal words count when their touch point lies in the window and
/// `include_marginal` is set.
pub fn count_visible_window(
    report: &VisibleSetReport,
    window: &Interval,
    include_marginal: bool,
) -> usize {
    let visible = report
        .visible
        .iter()
        .filter(|v| v.runs.iter().any(|r| r.meets(window)))
        .count();
    let marginal = if include_marginal {
        report
            .marginal
            .iter()
            .filter(|m| window.contains(m.at))
            .count()
    } else {
        0
    };
    visible + marginal
}

/// Supremum of `N_θ(k, a)` over windows of width `a` inside `proj_θ H`.
/// The count only changes when a window end crosses a run end, so windows
/// starting or ending at run ends suffice.
pub fn max_window_count(
    report: &VisibleSetReport,
    span: &Interval,
    a: f64,
    include_marginal: bool,
) -> usize {
    let mut ends: Vec<f64> = report
        .visible
        .iter()
        .flat_map(|v| v.runs.iter().flat_map(|r| [r.lo, r.hi]))
        .collect();
    if include_marginal {
        ends.extend(report.marginal.iter().map(|m| m.at));
    }
    ends.push(span.lo);
    ends.push(span.hi);
    let a = a.min(span.width());
    ends.iter()
        .flat_map(|&e| [e, e - a])
        .map(|lo| {
            let lo = lo.clamp(span.lo, (span.hi - a).max(span.lo));
            count_visible_window(report, &Interval::new(lo, lo + a), include_marginal)
        })
        .max()
        .unwrap_or(0)
}
