//! Scene files: one TOML document per experiment.
//!
//! ```toml
//! name = "carpet"
//!
//! [builtin.carpet]          # or [builtin.koch] alpha_deg = 30, or [builtin.sierpinski]
//! n = 3
//! digits = [[0, 0], [0, 1], [0, 2], [1, 0], [1, 2], [2, 0], [2, 1], [2, 2]]
//!
//! # or explicit maps, applied as scale · R(rotate_deg) · M · p + translate
//! # [[maps]]
//! # scale = 0.5
//! # rotate_deg = 0.0
//! # reflect = false
//! # translate = [0.0, 0.0]
//!
//! [run]                     # every key optional
//! directions = 16
//! depth = 2
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};
use toml::Table;
use vispart_core::geometry::{EnvelopeRegistry, Similarity, Vec2};
use vispart_core::ifs::IfsSystem;
use vispart_core::visibility::MIN_FIBER_RESOLUTION;

use crate::error::CliError;
use crate::families::FamilyRegistry;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneConfig {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub maps: Option<Vec<MapSpec>>,
    /// A single `family = { params }` entry.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin: Option<Table>,
    #[serde(default)]
    pub run: RunParams,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    pub scale: f64,
    #[serde(default)]
    pub rotate_deg: f64,
    #[serde(default)]
    pub reflect: bool,
    #[serde(default)]
    pub translate: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunParams {
    /// Number of directions for sweeps; equally spaced unless
    /// `random_directions`, then drawn from `seed`.
    pub directions: usize,
    pub random_directions: bool,
    /// Single direction for `visible`, `render` and orbit checks.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub direction_deg: Option<f64>,
    pub depth: usize,
    /// Use the stopping `T_δ` instead of a fixed depth.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    /// Strip half-width for the strip bound, in the units of the maps.
    pub epsilon: f64,
    /// Grid size of the projection-interval check.
    pub grid: usize,
    pub cover_depths: Vec<usize>,
    /// When nonempty, cover regressions use these stoppings instead.
    pub cover_deltas: Vec<f64>,
    pub bound_delta: f64,
    pub bound_deltas: Vec<f64>,
    pub oracle_depth: usize,
    pub fiber_resolution: usize,
    /// Finest dyadic level of box counting.
    pub box_grid: usize,
    pub max_group_order: usize,
    pub seed: u64,
    pub envelope: String,
    pub include_marginal: bool,
    /// Output directory.
    pub out: String,
}

impl Default for RunParams {
    fn default() -> Self {
        Self {
            directions: 16,
            random_directions: false,
            direction_deg: None,
            depth: 2,
            delta: None,
            epsilon: 0.1,
            grid: 720,
            cover_depths: vec![2, 3, 4, 5, 6],
            cover_deltas: Vec::new(),
            bound_delta: 1e-6,
            bound_deltas: (2..=8).map(|j| 10f64.powi(-j)).collect(),
            oracle_depth: 6,
            fiber_resolution: 4096,
            box_grid: 10,
            max_group_order: 1024,
            seed: 0,
            envelope: "merge".into(),
            include_marginal: false,
            out: "out".into(),
        }
    }
}

pub fn parse_scene(path: &Path) -> Result<SceneConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_scene_str(&text, path)
}

/// Parses and validates; `path` only labels errors.
pub fn parse_scene_str(text: &str, path: &Path) -> Result<SceneConfig, CliError> {
    let config: SceneConfig = toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((0, 0), |s| line_col(text, s.start));
        CliError::Parse {
            path: path.to_path_buf(),
            line,
            column,
            message: e.message().to_string(),
        }
    })?;
    config.validate()?;
    Ok(config)
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, column)
}

pub fn to_toml(config: &SceneConfig) -> String {
    toml::to_string(config).expect("scene config serializes")
}

impl SceneConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        let mut errs = Vec::new();
        match (&self.maps, &self.builtin) {
            (Some(_), Some(_)) => {
                errs.push("give either `maps` or `builtin`, not both".to_string())
            }
            (None, None) => errs.push("one of `maps` or `builtin` is required".to_string()),
            _ => {}
        }
        if let Some(maps) = &self.maps {
            if maps.len() < 2 {
                errs.push(format!("maps: need at least 2 maps, got {}", maps.len()));
            }
            for (i, m) in maps.iter().enumerate() {
                if !(m.scale > 0.0 && m.scale < 1.0) {
                    errs.push(format!(
                        "maps[{i}].scale must lie in (0, 1), got {}",
                        m.scale
                    ));
                }
                if !(m.rotate_deg.is_finite() && m.translate.iter().all(|x| x.is_finite())) {
                    errs.push(format!("maps[{i}]: non-finite value"));
                }
            }
        }
        if let Some(b) = &self.builtin {
            let reg = FamilyRegistry::default();
            if b.len() != 1 {
                errs.push(format!(
                    "builtin: expected exactly one family, got {}",
                    b.len()
                ));
            }
            for name in b.keys() {
                if reg.get(name).is_none() {
                    errs.push(format!(
                        "builtin: unknown family `{name}` (known: {})",
                        reg.names().join(", ")
                    ));
                }
            }
        }
        self.run.check(&mut errs);
        if errs.is_empty() {
            Ok(())
        } else {
            Err(CliError::Validation(errs))
        }
    }

    /// Explicit maps, with builtins expanded.
    pub fn resolved_maps(&self) -> Result<Vec<Similarity>, CliError> {
        if let Some(maps) = &self.maps {
            return maps
                .iter()
                .map(|m| {
                    Ok(Similarity::new(
                        m.scale,
                        m.rotate_deg.to_radians(),
                        m.reflect,
                        Vec2::new(m.translate[0], m.translate[1]),
                    )?)
                })
                .collect();
        }
        let builtin = self
            .builtin
            .as_ref()
            .ok_or_else(|| CliError::invalid("no maps"))?;
        let (name, params) = builtin
            .iter()
            .next()
            .ok_or_else(|| CliError::invalid("empty builtin"))?;
        let family = FamilyRegistry::default()
            .get(name)
            .ok_or_else(|| CliError::invalid(format!("builtin: unknown family `{name}`")))?;
        let params = match params {
            toml::Value::Table(t) => t.clone(),
            v => {
                return Err(CliError::invalid(format!(
                    "builtin.{name}: expected a table, got {v}"
                )))
            }
        };
        family.maps(&params)
    }

    pub fn system(&self) -> Result<IfsSystem, CliError> {
        Ok(IfsSystem::new(self.resolved_maps()?)?)
    }
}

impl RunParams {
    fn check(&self, errs: &mut Vec<String>) {
        let unit = |x: f64| x > 0.0 && x < 1.0;
        if self.directions == 0 {
            errs.push("run.directions: the direction list is empty".into());
        }
        if self.delta.is_some_and(|d| !unit(d)) {
            errs.push(format!(
                "run.delta must lie in (0, 1), got {}",
                self.delta.unwrap()
            ));
        }
        if self.direction_deg.is_some_and(|d| !d.is_finite()) {
            errs.push("run.direction_deg must be finite".into());
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            errs.push(format!(
                "run.epsilon must be positive, got {}",
                self.epsilon
            ));
        }
        if self.grid == 0 {
            errs.push("run.grid must be positive".into());
        }
        let levels = if self.cover_deltas.is_empty() {
            self.cover_depths.len()
        } else {
            self.cover_deltas.len()
        };
        if levels < vispart_core::dimension::MIN_SCALES {
            errs.push(format!(
                "run.cover_depths/cover_deltas: need at least {} levels, got {levels}",
                vispart_core::dimension::MIN_SCALES
            ));
        }
        if self.cover_deltas.iter().any(|&d| !unit(d)) {
            errs.push("run.cover_deltas must lie in (0, 1)".into());
        }
        if !unit(self.bound_delta) {
            errs.push(format!(
                "run.bound_delta must lie in (0, 1), got {}",
                self.bound_delta
            ));
        }
        if self.bound_deltas.is_empty() || self.bound_deltas.iter().any(|&d| !unit(d)) {
            errs.push("run.bound_deltas must be a nonempty list of values in (0, 1)".into());
        }
        if self.fiber_resolution < MIN_FIBER_RESOLUTION {
            errs.push(format!(
                "run.fiber_resolution must be at least {MIN_FIBER_RESOLUTION}, got {}",
                self.fiber_resolution
            ));
        }
        if self.max_group_order == 0 {
            errs.push("run.max_group_order must be positive".into());
        }
        if EnvelopeRegistry::default().get(&self.envelope).is_none() {
            errs.push(format!(
                "run.envelope: unknown algorithm `{}` (known: {})",
                self.envelope,
                EnvelopeRegistry::default().names().join(", ")
            ));
        }
    }
}
