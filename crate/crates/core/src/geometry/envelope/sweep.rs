use super::{push_cell, EnvelopeAlgorithm, EnvelopeCell, Owners, TopChain};

/// Brute force: sweep over every chain vertex and every pairwise crossing
/// of chain segments, taking the argmax at the middle of each elementary
/// interval. Quadratic in the number of segments; meant for small
/// families and as a cross-check of [`super::MergeEnvelope`].
#[derive(Clone, Copy, Debug, Default)]
pub struct SweepEnvelope;

/// Chain index and the two endpoints `(coord, height)` of one edge.
type Segment = (usize, (f64, f64), (f64, f64));

impl EnvelopeAlgorithm for SweepEnvelope {
    fn name(&self) -> &'static str {
        "sweep"
    }

    fn cells(&self, chains: &[TopChain], tie_tol: f64) -> Vec<EnvelopeCell> {
        let mut xs: Vec<f64> = Vec::new();
        let mut segs: Vec<Segment> = Vec::new();
        for (i, c) in chains.iter().enumerate() {
            xs.extend(c.points().iter().map(|p| p.0));
            for w in c.points().windows(2) {
                segs.push((i, w[0], w[1]));
            }
        }
        for (k, &(i, a0, a1)) in segs.iter().enumerate() {
            for &(j, b0, b1) in &segs[k + 1..] {
                if i == j {
                    continue;
                }
                let lo = a0.0.max(b0.0);
                let hi = a1.0.min(b1.0);
                if hi <= lo || hi.is_nan() || lo.is_nan() {
                    continue;
                }
                let line = |p: (f64, f64), q: (f64, f64), t: f64| {
                    p.1 + (q.1 - p.1) * (t - p.0) / (q.0 - p.0)
                };
                let d_lo = line(a0, a1, lo) - line(b0, b1, lo);
                let d_hi = line(a0, a1, hi) - line(b0, b1, hi);
                if (d_lo > 0.0 && d_hi < 0.0) || (d_lo < 0.0 && d_hi > 0.0) {
                    xs.push(lo + (hi - lo) * (d_lo / (d_lo - d_hi)));
                }
            }
        }
        xs.sort_by(f64::total_cmp);
        xs.dedup();

        let mut out = Vec::new();
        for w in xs.windows(2) {
            let (t0, t1) = (w[0], w[1]);
            let mid = 0.5 * (t0 + t1);
            let mut best: Option<(usize, f64)> = None;
            let mut heights: Vec<(usize, f64)> = Vec::new();
            for (i, c) in chains.iter().enumerate() {
                if let Some(h) = c.eval(mid) {
                    heights.push((i, h));
                    if best.is_none_or(|(_, bh)| h > bh) {
                        best = Some((i, h));
                    }
                }
            }
            let Some((top, top_h)) = best else {
                continue;
            };
            let owners: Owners = heights
                .iter()
                .filter(|&&(_, h)| h >= top_h - tie_tol)
                .map(|&(i, _)| i as u32)
                .collect();
            let chain = &chains[top];
            let h_lo = chain.eval(t0).unwrap_or(top_h);
            let h_hi = chain.eval(t1).unwrap_or(top_h);
            push_cell(
                &mut out,
                EnvelopeCell {
                    lo: t0,
                    hi: t1,
                    h_lo,
                    h_hi,
                    owners,
                },
                tie_tol,
            );
        }
        out
    }
}
