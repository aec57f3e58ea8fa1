//! Box-counting estimates for attractors and visible parts, and the
//! theoretical upper bounds on the dimension of visible parts.

use std::collections::HashSet;
use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::DimensionError;
use crate::geometry::{Direction, MergeEnvelope, Tolerance, Vec2};
use crate::ifs::{IfsSystem, Level};
use crate::visibility::{q_epsilon, visible_in_family, visible_points};

pub const MIN_SCALES: usize = 4;
pub const MIN_POINTS: usize = 1000;
pub const MIN_DECADES: f64 = 1.5;
/// Coarsest grid sizes dropped from box-counting regressions.
pub const DISCARD_COARSEST: usize = 2;

/// Least-squares fit of `log M(δ_b)` against `−log δ_b`.
#[derive(Clone, Debug, PartialEq)]
pub struct DimensionEstimate {
    /// `(box size, count)` pairs used in the fit, sizes decreasing.
    pub scales: Vec<(f64, f64)>,
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

impl DimensionEstimate {
    /// Fits the slope; needs at least four strictly decreasing positive
    /// sizes with positive counts, and a slope in `[0, 2]`.
    pub fn from_counts(scales: Vec<(f64, f64)>) -> Result<Self, DimensionError> {
        let est = Self::fit_unchecked(scales)?;
        if !(-1e-9..=2.0 + 1e-9).contains(&est.slope) {
            return Err(DimensionError::SlopeOutOfRange(est.slope));
        }
        Ok(est)
    }

    /// As [`Self::from_counts`] without the slope range check.
    pub fn fit_unchecked(scales: Vec<(f64, f64)>) -> Result<Self, DimensionError> {
        if scales.len() < MIN_SCALES {
            return Err(DimensionError::InsufficientScales {
                needed: MIN_SCALES,
                got: scales.len(),
            });
        }
        let ordered = scales
            .iter()
            .all(|&(s, m)| s > 0.0 && m > 0.0 && s.is_finite())
            && scales.windows(2).all(|w| w[1].0 < w[0].0);
        if !ordered {
            return Err(DimensionError::UnorderedScales);
        }
        let xs: Vec<f64> = scales.iter().map(|&(s, _)| -s.ln()).collect();
        let ys: Vec<f64> = scales.iter().map(|&(_, m)| m.ln()).collect();
        let n = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / n;
        let my = ys.iter().sum::<f64>() / n;
        let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
        let slope = sxy / sxx;
        let intercept = my - slope * mx;
        let r2 = if syy == 0.0 {
            1.0
        } else {
            (sxy * sxy) / (sxx * syy)
        };
        Ok(Self {
            scales,
            slope,
            intercept,
            r2,
        })
    }
}

/// Box-counting estimate together with the half-cell-offset rerun.
#[derive(Clone, Debug, PartialEq)]
pub struct BoxDimension {
    pub estimate: DimensionEstimate,
    pub offset: DimensionEstimate,
}

impl BoxDimension {
    /// Difference between the anchored and offset slopes.
    pub fn anchor_sensitivity(&self) -> f64 {
        (self.estimate.slope - self.offset.slope).abs()
    }
}

/// Dyadic box counting on grids anchored at the bounding-box corner.
///
/// Box sizes are `E / 2^j` for `j = 1..=grid`, with `E` the larger side
/// of the bounding box; the two coarsest sizes are dropped.
pub fn box_dimension(points: &[Vec2], grid: usize) -> Result<BoxDimension, DimensionError> {
    if points.len() < MIN_POINTS {
        return Err(DimensionError::InsufficientPoints {
            needed: MIN_POINTS,
            got: points.len(),
        });
    }
    let sizes = dyadic_sizes(points, grid)?;
    let bb = bounds(points);
    let estimate = DimensionEstimate::from_counts(count_boxes(points, &sizes, bb, 0.0))?;
    let offset = DimensionEstimate::from_counts(count_boxes(points, &sizes, bb, 0.5))?;
    Ok(BoxDimension { estimate, offset })
}

fn bounds(points: &[Vec2]) -> (Vec2, Vec2) {
    points.iter().fold(
        (
            Vec2::new(f64::INFINITY, f64::INFINITY),
            Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
        ),
        |(lo, hi), p| {
            (
                Vec2::new(lo.x.min(p.x), lo.y.min(p.y)),
                Vec2::new(hi.x.max(p.x), hi.y.max(p.y)),
            )
        },
    )
}

fn dyadic_sizes(points: &[Vec2], grid: usize) -> Result<Vec<f64>, DimensionError> {
    let (lo, hi) = bounds(points);
    let extent = (hi.x - lo.x).max(hi.y - lo.y);
    if !(extent > 0.0 && extent.is_finite()) {
        return Err(DimensionError::InvalidParameter(
            "points have zero extent".into(),
        ));
    }
    let sizes: Vec<f64> = (1..=grid)
        .skip(DISCARD_COARSEST)
        .map(|j| extent / 2f64.powi(j as i32))
        .collect();
    if sizes.len() < MIN_SCALES {
        return Err(DimensionError::InsufficientScales {
            needed: MIN_SCALES,
            got: sizes.len(),
        });
    }
    let decades = (sizes[0] / sizes[sizes.len() - 1]).log10();
    if decades < MIN_DECADES {
        return Err(DimensionError::InsufficientSpan {
            decades,
            needed: MIN_DECADES,
        });
    }
    Ok(sizes)
}

/// Occupied cells per size; `shift` offsets the anchor by that fraction
/// of a cell. The last cell along each axis is closed, so points on the
/// far edge of the bounding box do not open an extra row.
fn count_boxes(
    points: &[Vec2],
    sizes: &[f64],
    (anchor, far): (Vec2, Vec2),
    shift: f64,
) -> Vec<(f64, f64)> {
    sizes
        .par_iter()
        .map(|&s| {
            let origin = anchor - Vec2::new(shift * s, shift * s);
            let last = |extent: f64| ((extent / s).ceil() as i64 - 1).max(0);
            let (mx, my) = (last(far.x - origin.x), last(far.y - origin.y));
            let cells: HashSet<(i64, i64)> = points
                .iter()
                .map(|p| {
                    let q = (*p - origin) / s;
                    ((q.x.floor() as i64).min(mx), (q.y.floor() as i64).min(my))
                })
                .collect();
            (s, cells.len() as f64)
        })
        .collect()
}

/// Cylinder representatives of depth `depth`: images of the hull centroid.
pub fn attractor_sample(ifs: &IfsSystem, depth: usize) -> Result<Vec<Vec2>, DimensionError> {
    let fam = ifs.cylinders(depth)?;
    let c = ifs.hull().centroid();
    Ok(fam.maps.iter().map(|m| m.apply(c)).collect())
}

/// Regression of visible-word counts against cylinder size.
#[derive(Clone, Debug, PartialEq)]
pub struct CoverDimension {
    /// Scale per level is `|H| · max r_w` over the visible words.
    pub estimate: DimensionEstimate,
    /// Scale per level is `|H| · max r_w` over the whole family.
    pub uniform_slope: f64,
    /// `|V_θ|` per level.
    pub counts: Vec<usize>,
}

/// Slope of `log |V_θ|` against `−log` of the cylinder diameter over the
/// given levels.
pub fn cover_dimension(
    ifs: &IfsSystem,
    d: &Direction,
    levels: &[Level],
) -> Result<CoverDimension, DimensionError> {
    let mut actual = Vec::with_capacity(levels.len());
    let mut uniform = Vec::with_capacity(levels.len());
    let mut counts = Vec::with_capacity(levels.len());
    for &level in levels {
        let fam = match level {
            Level::Depth(k) => ifs.cylinders(k)?,
            Level::Stopped(delta) => ifs.cylinders_stopped(delta)?,
        };
        let report = visible_in_family(&fam, d, &Tolerance::default(), &MergeEnvelope)?;
        let n = report.count(false);
        let ratio_of = |i: usize| fam.maps.get(i).map_or(1.0, |m| m.scale());
        let max_visible = report
            .visible
            .iter()
            .filter_map(|v| fam.position(&v.word))
            .map(ratio_of)
            .fold(0.0, f64::max);
        let max_all = (0..fam.len()).map(ratio_of).fold(0.0, f64::max);
        actual.push((ifs.diameter() * max_visible, n as f64));
        uniform.push((ifs.diameter() * max_all, n as f64));
        counts.push(n);
    }
    Ok(CoverDimension {
        estimate: DimensionEstimate::from_counts(actual)?,
        uniform_slope: DimensionEstimate::fit_unchecked(uniform)?.slope,
        counts,
    })
}

/// A dimension upper bound with the quantities it is built from.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    /// `ε` for the strip bound, `δ` for the stopping bound.
    pub parameter: f64,
    pub q: f64,
    pub lambda: f64,
    /// The constant `K` of the stopping bound; `None` for the strip bound.
    pub k_const: Option<f64>,
    /// Strip bound: `q` and `1/r_min`. Stopping bound: `1 − log K/log δ`
    /// and `1 + log r_min/log δ`.
    pub component1: f64,
    pub component2: f64,
    pub bound: f64,
    /// Stopping bound evaluated with the stopped family's own ratios.
    pub exact_bound: Option<f64>,
}

/// `λ(ε) = max(q(ε), 1/r_min)` and the bound `log λ / −log r_max`.
pub fn theoretical_bound(ifs: &IfsSystem, eps: f64) -> Result<BoundReport, DimensionError> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(DimensionError::InvalidParameter(format!(
            "epsilon must be positive, got {eps}"
        )));
    }
    let q = q_epsilon(ifs, eps);
    let inv = 1.0 / ifs.r_min();
    let lambda = q.max(inv);
    Ok(BoundReport {
        parameter: eps,
        q,
        lambda,
        k_const: None,
        component1: q,
        component2: inv,
        bound: lambda.ln() / -ifs.r_max().ln(),
        exact_bound: None,
    })
}

/// `K = |H|(2 + 4a₂)/(π(a₁ r_min)²)`.
pub fn stopping_constant(ifs: &IfsSystem) -> f64 {
    let r = ifs.a1() * ifs.r_min();
    ifs.diameter() * (2.0 + 4.0 * ifs.a2()) / (PI * r * r)
}

/// Bound from the stopping `T_δ` with `ε = δ`:
/// `max(1 − log K/log δ, 1 + log r_min/log δ)`.
///
/// `q` and `lambda` are those of the stopped family, whose extreme ratios
/// are found without enumerating its words; `exact_bound` is
/// `log λ / −log r'_max` for that family.
pub fn stopping_bound(ifs: &IfsSystem, delta: f64) -> Result<BoundReport, DimensionError> {
    if !(delta > 0.0 && delta < 1.0f64.min(ifs.r_min())) {
        return Err(DimensionError::InvalidParameter(format!(
            "delta must lie in (0, min(1, r_min)) = (0, {}), got {delta}",
            ifs.r_min()
        )));
    }
    let k = stopping_constant(ifs);
    let ld = delta.ln();
    let component1 = 1.0 - k.ln() / ld;
    let component2 = 1.0 + ifs.r_min().ln() / ld;
    let ratios = ifs.stopped_ratios(delta);
    let (r_lo, r_hi) = (ratios[0], ratios[ratios.len() - 1]);
    let a1r = ifs.a1() * r_lo;
    let q = ifs.diameter() * (2.0 * delta + 4.0 * ifs.a2() * r_hi) / (PI * a1r * a1r);
    let lambda = q.max(1.0 / r_lo);
    Ok(BoundReport {
        parameter: delta,
        q,
        lambda,
        k_const: Some(k),
        component1,
        component2,
        bound: component1.max(component2),
        exact_bound: Some(lambda.ln() / -r_hi.ln()),
    })
}

/// Settings for [`dimension_profile`].
#[derive(Clone, Debug, PartialEq)]
pub struct ProfileParams {
    /// Levels for the cover regression.
    pub levels: Vec<Level>,
    /// Depth and fiber count of the oracle cloud.
    pub oracle_depth: usize,
    pub fiber_resolution: usize,
    /// Finest dyadic level of the box counting.
    pub grid: usize,
    /// `δ` for the stopping bound.
    pub bound_delta: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProfileRow {
    pub direction_deg: f64,
    pub cover_slope: f64,
    /// `None` when the oracle cloud is too small to box-count.
    pub oracle_slope: Option<f64>,
    pub r2: f64,
    pub bound_delta: f64,
    pub bound_value: f64,
    pub hypothesis_failed: bool,
}

/// Cover slope, oracle box-counting slope and stopping bound per
/// direction, in direction order. Rows carry `hypothesis_failed` when the
/// caller's hypothesis checks did not pass.
pub fn dimension_profile(
    ifs: &IfsSystem,
    directions: &[Direction],
    params: &ProfileParams,
    hypotheses_pass: bool,
) -> Result<Vec<ProfileRow>, DimensionError> {
    let bound = stopping_bound(ifs, params.bound_delta)?;
    directions
        .par_iter()
        .map(|d| {
            let cover = cover_dimension(ifs, d, &params.levels)?;
            let cloud = visible_points(ifs, d, params.oracle_depth, params.fiber_resolution)?;
            let oracle_slope = match box_dimension(&cloud.points, params.grid) {
                Ok(b) => Some(b.estimate.slope),
                Err(DimensionError::InsufficientPoints { .. }) => None,
                Err(e) => return Err(e),
            };
            Ok(ProfileRow {
                direction_deg: d.degrees(),
                cover_slope: cover.estimate.slope,
                oracle_slope,
                r2: cover.estimate.r2,
                bound_delta: params.bound_delta,
                bound_value: bound.bound,
                hypothesis_failed: !hypotheses_pass,
            })
        })
        .collect()
}
