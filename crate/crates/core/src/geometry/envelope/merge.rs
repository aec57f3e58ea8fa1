use super::{push_cell, union_owners, EnvelopeAlgorithm, EnvelopeCell, Owners, TopChain};

/// Divide and conquer: envelopes of the two halves of the family are
/// merged by a linear sweep over their combined breakpoints. Halves above
/// a size threshold are built in parallel; the result does not depend on
/// scheduling.
#[derive(Clone, Copy, Debug, Default)]
pub struct MergeEnvelope;

const PARALLEL_THRESHOLD: usize = 4096;

impl EnvelopeAlgorithm for MergeEnvelope {
    fn name(&self) -> &'static str {
        "merge"
    }

    fn cells(&self, chains: &[TopChain], tie_tol: f64) -> Vec<EnvelopeCell> {
        let indexed: Vec<(u32, &TopChain)> = chains
            .iter()
            .enumerate()
            .map(|(i, c)| (i as u32, c))
            .collect();
        build(&indexed, tie_tol)
    }
}

fn build(chains: &[(u32, &TopChain)], tie_tol: f64) -> Vec<EnvelopeCell> {
    match chains.len() {
        0 => Vec::new(),
        1 => leaf(chains[0].0, chains[0].1, tie_tol),
        n => {
            let (left, right) = chains.split_at(n / 2);
            let (a, b) = if n > PARALLEL_THRESHOLD {
                rayon::join(|| build(left, tie_tol), || build(right, tie_tol))
            } else {
                (build(left, tie_tol), build(right, tie_tol))
            };
            merge(&a, &b, tie_tol)
        }
    }
}

fn leaf(owner: u32, chain: &TopChain, tie_tol: f64) -> Vec<EnvelopeCell> {
    let mut out = Vec::with_capacity(chain.points().len());
    for w in chain.points().windows(2) {
        let owners: Owners = std::iter::once(owner).collect();
        push_cell(
            &mut out,
            EnvelopeCell {
                lo: w[0].0,
                hi: w[1].0,
                h_lo: w[0].1,
                h_hi: w[1].1,
                owners,
            },
            tie_tol,
        );
    }
    out
}

pub(crate) fn merge(a: &[EnvelopeCell], b: &[EnvelopeCell], tie_tol: f64) -> Vec<EnvelopeCell> {
    let mut out: Vec<EnvelopeCell> = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0usize, 0usize);
    let mut x = f64::NEG_INFINITY;
    loop {
        while i < a.len() && a[i].hi <= x {
            i += 1;
        }
        while j < b.len() && b[j].hi <= x {
            j += 1;
        }
        let (na, nb) = (a.get(i), b.get(j));
        let start = match (na, nb) {
            (None, None) => break,
            (Some(ca), None) => x.max(ca.lo),
            (None, Some(cb)) => x.max(cb.lo),
            (Some(ca), Some(cb)) => x.max(ca.lo.min(cb.lo)),
        };
        let act_a = na.filter(|c| c.lo <= start);
        let act_b = nb.filter(|c| c.lo <= start);
        let mut end = f64::INFINITY;
        for c in [na, nb].into_iter().flatten() {
            end = end.min(if c.lo > start { c.lo } else { c.hi });
        }
        emit(&mut out, start, end, act_a, act_b, tie_tol);
        x = end;
    }
    out
}

fn emit(
    out: &mut Vec<EnvelopeCell>,
    start: f64,
    end: f64,
    ca: Option<&EnvelopeCell>,
    cb: Option<&EnvelopeCell>,
    tol: f64,
) {
    let piece = |c: &EnvelopeCell, lo: f64, hi: f64| EnvelopeCell {
        lo,
        hi,
        h_lo: c.height_at(lo),
        h_hi: c.height_at(hi),
        owners: c.owners.clone(),
    };
    match (ca, cb) {
        (None, None) => {}
        (Some(c), None) | (None, Some(c)) => push_cell(out, piece(c, start, end), tol),
        (Some(ca), Some(cb)) => {
            let (fa0, fa1) = (ca.height_at(start), ca.height_at(end));
            let (fb0, fb1) = (cb.height_at(start), cb.height_at(end));
            let (d0, d1) = (fa0 - fb0, fa1 - fb1);
            if d0.abs() <= tol && d1.abs() <= tol {
                push_cell(
                    out,
                    EnvelopeCell {
                        lo: start,
                        hi: end,
                        h_lo: fa0.max(fb0),
                        h_hi: fa1.max(fb1),
                        owners: union_owners(&ca.owners, &cb.owners),
                    },
                    tol,
                );
            } else if (d0 > tol && d1 < -tol) || (d0 < -tol && d1 > tol) {
                let t = start + (end - start) * (d0 / (d0 - d1));
                let (first, second) = if d0 > 0.0 { (ca, cb) } else { (cb, ca) };
                push_cell(out, piece(first, start, t), tol);
                push_cell(out, piece(second, t, end), tol);
            } else {
                let winner = if d0 + d1 > 0.0 { ca } else { cb };
                push_cell(out, piece(winner, start, end), tol);
            }
        }
    }
}
