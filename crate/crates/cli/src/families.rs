//! Builtin IFS families, selected by name from the scene file.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

use toml::Table;
use vispart_core::geometry::{Similarity, Vec2};

use crate::error::CliError;

pub trait Family: Send + Sync {
    fn name(&self) -> &'static str;
    /// Expands the family's parameter table into explicit maps.
    fn maps(&self, params: &Table) -> Result<Vec<Similarity>, CliError>;
}

pub struct FamilyRegistry {
    families: BTreeMap<&'static str, Arc<dyn Family>>,
}

impl Default for FamilyRegistry {
    fn default() -> Self {
        let mut r = Self {
            families: BTreeMap::new(),
        };
        r.register(Arc::new(Koch));
        r.register(Arc::new(Carpet));
        r.register(Arc::new(Sierpinski));
        r
    }
}

impl FamilyRegistry {
    pub fn register(&mut self, family: Arc<dyn Family>) {
        self.families.insert(family.name(), family);
    }

    pub fn get(&self, name: &str) -> Option<Arc<dyn Family>> {
        self.families.get(name).cloned()
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.families.keys().copied().collect()
    }
}

fn float(params: &Table, family: &str, key: &str) -> Result<Option<f64>, CliError> {
    match params.get(key) {
        None => Ok(None),
        Some(toml::Value::Float(x)) => Ok(Some(*x)),
        Some(toml::Value::Integer(i)) => Ok(Some(*i as f64)),
        Some(v) => Err(CliError::invalid(format!(
            "builtin.{family}.{key}: expected a number, got {v}"
        ))),
    }
}

fn reject_unknown(params: &Table, family: &str, known: &[&str]) -> Result<(), CliError> {
    let unknown: Vec<String> = params
        .keys()
        .filter(|k| !known.contains(&k.as_str()))
        .map(|k| format!("builtin.{family}: unknown field `{k}`"))
        .collect();
    if unknown.is_empty() {
        Ok(())
    } else {
        Err(CliError::Validation(unknown))
    }
}

/// Generalised von Koch curve on `[0, 1] × {0}`: four segments of equal
/// length, the middle two tilted by `±(π/2 − α)` so the bump has base
/// angle `α` and points towards +y.
pub struct Koch;

impl Koch {
    pub fn ratio(alpha: f64) -> f64 {
        1.0 / (2.0 * (1.0 + alpha.sin()))
    }

    pub fn build(alpha: f64) -> Result<Vec<Similarity>, CliError> {
        if !(alpha > 0.0 && alpha < FRAC_PI_2) {
            return Err(CliError::invalid(format!(
                "builtin.koch.alpha_deg must lie in (0, 90), got {}",
                alpha.to_degrees()
            )));
        }
        let r = Self::ratio(alpha);
        let beta = FRAC_PI_2 - alpha;
        let apex = Vec2::new(r + r * beta.cos(), r * beta.sin());
        Ok(vec![
            Similarity::new(r, 0.0, false, Vec2::ZERO)?,
            Similarity::new(r, beta, false, Vec2::new(r, 0.0))?,
            Similarity::new(r, -beta, false, apex)?,
            Similarity::new(r, 0.0, false, Vec2::new(1.0 - r, 0.0))?,
        ])
    }
}

impl Family for Koch {
    fn name(&self) -> &'static str {
        "koch"
    }

    fn maps(&self, params: &Table) -> Result<Vec<Similarity>, CliError> {
        reject_unknown(params, "koch", &["alpha_deg"])?;
        let deg = float(params, "koch", "alpha_deg")?.unwrap_or(30.0);
        Self::build(deg.to_radians())
    }
}

/// Homotheties of ratio `1/n` onto the cells `[row, col]` of the `n × n`
/// grid of the unit square. Without `digits`, every cell but the centre
/// (odd `n`) is used.
pub struct Carpet;

impl Carpet {
    pub fn build(n: usize, digits: &[(usize, usize)]) -> Result<Vec<Similarity>, CliError> {
        if n < 2 {
            return Err(CliError::invalid(format!(
                "builtin.carpet.n must be at least 2, got {n}"
            )));
        }
        let bad: Vec<String> = digits
            .iter()
            .filter(|&&(r, c)| r >= n || c >= n)
            .map(|(r, c)| {
                format!("builtin.carpet.digits: cell [{r}, {c}] outside the {n}x{n} grid")
            })
            .collect();
        if !bad.is_empty() {
            return Err(CliError::Validation(bad));
        }
        let s = 1.0 / n as f64;
        digits
            .iter()
            .map(|&(r, c)| {
                Ok(Similarity::homothety(
                    s,
                    Vec2::new(c as f64 * s, r as f64 * s),
                )?)
            })
            .collect()
    }

    pub fn default_digits(n: usize) -> Vec<(usize, usize)> {
        (0..n)
            .flat_map(|r| (0..n).map(move |c| (r, c)))
            .filter(|&(r, c)| !(n % 2 == 1 && r == n / 2 && c == n / 2))
            .collect()
    }
}

impl Family for Carpet {
    fn name(&self) -> &'static str {
        "carpet"
    }

    fn maps(&self, params: &Table) -> Result<Vec<Similarity>, CliError> {
        reject_unknown(params, "carpet", &["n", "digits"])?;
        let n = match params.get("n") {
            None => 3,
            Some(toml::Value::Integer(i)) if *i >= 0 => *i as usize,
            Some(v) => {
                return Err(CliError::invalid(format!(
                    "builtin.carpet.n: expected a positive integer, got {v}"
                )))
            }
        };
        let digits = match params.get("digits") {
            None => Self::default_digits(n),
            Some(v) => {
                let cells: Vec<[usize; 2]> = v
                    .clone()
                    .try_into()
                    .map_err(|e| CliError::invalid(format!("builtin.carpet.digits: {e}")))?;
                cells.into_iter().map(|[r, c]| (r, c)).collect()
            }
        };
        Self::build(n, &digits)
    }
}

/// Three half-size homotheties onto the corners of the unit equilateral
/// triangle.
pub struct Sierpinski;

impl Family for Sierpinski {
    fn name(&self) -> &'static str {
        "sierpinski"
    }

    fn maps(&self, params: &Table) -> Result<Vec<Similarity>, CliError> {
        reject_unknown(params, "sierpinski", &[])?;
        let h = 3f64.sqrt() / 2.0;
        [Vec2::ZERO, Vec2::new(0.5, 0.0), Vec2::new(0.25, 0.5 * h)]
            .into_iter()
            .map(|t| Ok(Similarity::homothety(0.5, t)?))
            .collect()
    }
}
