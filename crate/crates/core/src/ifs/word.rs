use std::collections::{HashMap, HashSet};
use std::fmt;

use rayon::prelude::*;

use super::IfsSystem;
use crate::error::IfsError;
use crate::geometry::{ConvexPolygon, Similarity};

/// Largest number of cylinders a single enumeration may produce.
pub const DEFAULT_CYLINDER_CAP: usize = 5_000_000;

/// Relative slack for the stopping inequality: a ratio counts as below
/// `δ` only when it is below `δ(1 − STOP_REL)`, so exact ties such as
/// `(1/3)² = 3⁻²` are decided as in exact arithmetic.
const STOP_REL: f64 = 1e-12;

/// A finite word over the map indices. Stored 0-based, displayed 1-based
/// with dots, e.g. `2.7`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<u16>);

impl Word {
    pub fn new(indices: Vec<u16>) -> Self {
        Self(indices)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn indices(&self) -> &[u16] {
        &self.0
    }

    pub fn first(&self) -> Option<u16> {
        self.0.first().copied()
    }

    /// The word without its first symbol.
    pub fn suffix(&self) -> Word {
        Word(self.0.get(1..).unwrap_or_default().to_vec())
    }

    pub fn prefix(&self, k: usize) -> Word {
        Word(self.0[..k.min(self.0.len())].to_vec())
    }

    pub fn starts_with(&self, other: &Word) -> bool {
        self.0.starts_with(&other.0)
    }

    pub fn child(&self, i: u16) -> Word {
        let mut v = self.0.clone();
        v.push(i);
        Word(v)
    }

    /// Composite map `S_{i_1} ∘ ⋯ ∘ S_{i_k}`; `None` for the empty word.
    pub fn map(&self, ifs: &IfsSystem) -> Option<Similarity> {
        let maps = ifs.maps();
        let mut it = self.0.iter();
        let mut s = maps[*it.next()? as usize];
        for &i in it {
            s = s.compose(&maps[i as usize]);
        }
        Some(s)
    }

    /// Composite ratio `r_{i_1} ⋯ r_{i_k}`.
    pub fn ratio(&self, ifs: &IfsSystem) -> f64 {
        self.0
            .iter()
            .map(|&i| ifs.maps()[i as usize].scale())
            .product()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, i) in self.0.iter().enumerate() {
            if n > 0 {
                f.write_str(".")?;
            }
            write!(f, "{}", i + 1)?;
        }
        Ok(())
    }
}

/// Which cylinders a family holds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Level {
    Depth(usize),
    Stopped(f64),
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::Depth(k) => write!(f, "k={k}"),
            Level::Stopped(d) => write!(f, "delta={d}"),
        }
    }
}

/// The stopping `T_δ`: words whose ratio first drops below `δ`.
#[derive(Clone, Debug, PartialEq)]
pub struct Stopping {
    pub delta: f64,
    pub words: Vec<Word>,
}

/// Words with their composite maps and cylinder hulls, in lexicographic
/// word order.
#[derive(Clone, Debug)]
pub struct CylinderFamily {
    pub level: Level,
    pub words: Vec<Word>,
    pub maps: Vec<Similarity>,
    pub hulls: Vec<ConvexPolygon>,
}

impl CylinderFamily {
    #[inline]
    pub fn len(&self) -> usize {
        self.words.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn ratios(&self) -> Vec<f64> {
        self.maps.iter().map(|m| m.scale()).collect()
    }

    pub fn stopping(&self) -> Option<Stopping> {
        match self.level {
            Level::Stopped(delta) => Some(Stopping {
                delta,
                words: self.words.clone(),
            }),
            Level::Depth(_) => None,
        }
    }

    /// Index of `word` in the family.
    pub fn position(&self, word: &Word) -> Option<usize> {
        self.words.binary_search(word).ok()
    }
}

#[inline]
pub(crate) fn below(ratio: f64, delta: f64) -> bool {
    ratio < delta * (1.0 - STOP_REL)
}

impl IfsSystem {
    /// All `N^k` cylinders of depth `k`, capped at [`DEFAULT_CYLINDER_CAP`].
    pub fn cylinders(&self, k: usize) -> Result<CylinderFamily, IfsError> {
        self.cylinders_capped(k, DEFAULT_CYLINDER_CAP)
    }

    pub fn cylinders_capped(&self, k: usize, cap: usize) -> Result<CylinderFamily, IfsError> {
        let n = self.len() as u128;
        let needed = (0..k)
            .try_fold(1u128, |acc, _| acc.checked_mul(n))
            .unwrap_or(u128::MAX);
        if needed > cap as u128 {
            return Err(IfsError::ResourceLimit { needed, cap });
        }
        if k == 0 {
            return Ok(CylinderFamily {
                level: Level::Depth(0),
                words: vec![Word::default()],
                maps: Vec::new(),
                hulls: vec![self.hull().clone()],
            });
        }
        let parts: Vec<Vec<(Word, Similarity)>> = (0..self.len() as u16)
            .into_par_iter()
            .map(|i| {
                let mut out = Vec::new();
                expand_depth(self, Word(vec![i]), self.maps()[i as usize], k, &mut out);
                out
            })
            .collect();
        Ok(self.family(Level::Depth(k), parts.into_iter().flatten().collect()))
    }

    /// The stopping `T_δ` for `0 < δ < 1`, with its cylinders.
    pub fn cylinders_stopped(&self, delta: f64) -> Result<CylinderFamily, IfsError> {
        self.cylinders_stopped_capped(delta, DEFAULT_CYLINDER_CAP)
    }

    pub fn cylinders_stopped_capped(
        &self,
        delta: f64,
        cap: usize,
    ) -> Result<CylinderFamily, IfsError> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(IfsError::InvalidParameter(format!(
                "stopping threshold must lie in (0, 1), got {delta}"
            )));
        }
        let needed = self.stopping_size(delta);
        if needed > cap as u128 {
            return Err(IfsError::ResourceLimit { needed, cap });
        }
        let parts: Vec<Vec<(Word, Similarity)>> = (0..self.len() as u16)
            .into_par_iter()
            .map(|i| {
                let mut out = Vec::new();
                expand_stopped(
                    self,
                    Word(vec![i]),
                    self.maps()[i as usize],
                    delta,
                    &mut out,
                );
                out
            })
            .collect();
        Ok(self.family(Level::Stopped(delta), parts.into_iter().flatten().collect()))
    }

    /// Number of words in `T_δ`, counted without building them.
    pub fn stopping_size(&self, delta: f64) -> u128 {
        let classes = ScaleClasses::new(self);
        let mut memo = HashMap::new();
        classes.count(&mut vec![0; classes.scales.len()], delta, &mut memo)
    }

    fn family(&self, level: Level, entries: Vec<(Word, Similarity)>) -> CylinderFamily {
        let hulls = entries
            .par_iter()
            .map(|(_, m)| m.apply_polygon(self.hull()))
            .collect();
        let (words, maps) = entries.into_iter().unzip();
        CylinderFamily {
            level,
            words,
            maps,
            hulls,
        }
    }

    /// Distinct ratios of `T_δ`, without enumerating the words.
    pub fn stopped_ratios(&self, delta: f64) -> Vec<f64> {
        let classes = ScaleClasses::new(self);
        let m = classes.scales.len();
        let mut seen: HashSet<Vec<u32>> = HashSet::new();
        let mut open = vec![vec![0u32; m]];
        let mut done: Vec<f64> = Vec::new();
        while let Some(e) = open.pop() {
            for j in 0..m {
                let mut c = e.clone();
                c[j] += 1;
                if !seen.insert(c.clone()) {
                    continue;
                }
                let r = classes.ratio(&c);
                if below(r, delta) {
                    done.push(r);
                } else {
                    open.push(c);
                }
            }
        }
        done.sort_by(f64::total_cmp);
        done.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * *b);
        done
    }
}

/// Maps grouped by scale: the ratio of a word only depends on how often
/// each scale occurs in it.
struct ScaleClasses {
    scales: Vec<f64>,
    mult: Vec<u128>,
}

impl ScaleClasses {
    fn new(ifs: &IfsSystem) -> Self {
        let mut scales: Vec<f64> = Vec::new();
        let mut mult: Vec<u128> = Vec::new();
        for m in ifs.maps() {
            match scales.iter().position(|&s| s == m.scale()) {
                Some(i) => mult[i] += 1,
                None => {
                    scales.push(m.scale());
                    mult.push(1);
                }
            }
        }
        Self { scales, mult }
    }

    fn ratio(&self, e: &[u32]) -> f64 {
        self.scales
            .iter()
            .zip(e)
            .map(|(s, &k)| s.powi(k as i32))
            .product()
    }

    fn count(&self, e: &mut Vec<u32>, delta: f64, memo: &mut HashMap<Vec<u32>, u128>) -> u128 {
        if below(self.ratio(e), delta) {
            return 1;
        }
        if let Some(&c) = memo.get(e.as_slice()) {
            return c;
        }
        let mut total = 0u128;
        for j in 0..self.scales.len() {
            e[j] += 1;
            let sub = self.count(e, delta, memo);
            e[j] -= 1;
            total = total.saturating_add(sub.saturating_mul(self.mult[j]));
        }
        memo.insert(e.clone(), total);
        total
    }
}

fn expand_depth(
    ifs: &IfsSystem,
    word: Word,
    map: Similarity,
    k: usize,
    out: &mut Vec<(Word, Similarity)>,
) {
    if word.len() == k {
        out.push((word, map));
        return;
    }
    for (j, m) in ifs.maps().iter().enumerate() {
        expand_depth(ifs, word.child(j as u16), map.compose(m), k, out);
    }
}

fn expand_stopped(
    ifs: &IfsSystem,
    word: Word,
    map: Similarity,
    delta: f64,
    out: &mut Vec<(Word, Similarity)>,
) {
    if below(map.scale(), delta) {
        out.push((word, map));
        return;
    }
    for (j, m) in ifs.maps().iter().enumerate() {
        expand_stopped(ifs, word.child(j as u16), map.compose(m), delta, out);
    }
}
