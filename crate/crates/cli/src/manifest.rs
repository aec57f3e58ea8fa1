//! Run manifest: resolved system, check results and hashed outputs.

use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};
use vispart_core::ifs::IfsSystem;

use crate::error::CliError;
use crate::scene::SceneConfig;

#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub seed: u64,
    pub scene: SceneConfig,
    pub system: SystemSummary,
    pub checks: Option<CheckSummary>,
    pub outputs: Vec<OutputRecord>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MapRecord {
    pub scale: f64,
    pub rotate_deg: f64,
    pub reflect: bool,
    pub translate: [f64; 2],
}

#[derive(Clone, Debug, Serialize)]
pub struct SystemSummary {
    pub maps: Vec<MapRecord>,
    pub hull: Vec<[f64; 2]>,
    pub diameter: f64,
    pub r_min: f64,
    pub r_max: f64,
    pub a1: f64,
    pub a2: f64,
    pub similarity_dimension: f64,
}

impl SystemSummary {
    pub fn of(ifs: &IfsSystem) -> Self {
        Self {
            maps: ifs
                .maps()
                .iter()
                .map(|m| MapRecord {
                    scale: m.scale(),
                    rotate_deg: m.rotation().to_degrees(),
                    reflect: m.reflect(),
                    translate: [m.translation().x, m.translation().y],
                })
                .collect(),
            hull: ifs.hull().vertices().iter().map(|v| [v.x, v.y]).collect(),
            diameter: ifs.diameter(),
            r_min: ifs.r_min(),
            r_max: ifs.r_max(),
            a1: ifs.a1(),
            a2: ifs.a2(),
            similarity_dimension: ifs.similarity_dimension(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckSummary {
    pub cosc: bool,
    pub projection_interval: bool,
    pub group_finite: bool,
    pub group_order: usize,
    pub directions_checked: usize,
    pub forced: bool,
}

impl CheckSummary {
    pub fn pass(&self) -> bool {
        self.cosc && self.projection_interval && self.group_finite
    }

    /// Names of the failed hypotheses.
    pub fn reasons(&self) -> Vec<&'static str> {
        let mut r = Vec::new();
        if !self.cosc {
            r.push("cosc");
        }
        if !self.projection_interval {
            r.push("projection_interval");
        }
        if !self.group_finite {
            r.push("rotation_group");
        }
        r
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OutputRecord {
    pub path: String,
    pub sha256: String,
}

/// Writes each `(file name, bytes)` into `dir` and records its hash.
pub fn write_outputs(
    dir: &Path,
    files: &[(String, Vec<u8>)],
) -> Result<Vec<OutputRecord>, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    files
        .iter()
        .map(|(name, bytes)| {
            let path: PathBuf = dir.join(name);
            std::fs::write(&path, bytes).map_err(|e| CliError::io(&path, e))?;
            Ok(OutputRecord {
                path: name.clone(),
                sha256: hex::encode(Sha256::digest(bytes)),
            })
        })
        .collect()
}

pub fn write_manifest(dir: &Path, manifest: &RunManifest) -> Result<PathBuf, CliError> {
    let path = dir.join(format!("manifest-{}.json", manifest.command));
    let mut text =
        serde_json::to_string_pretty(manifest).map_err(|e| CliError::Render(e.to_string()))?;
    text.push('\n');
    std::fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
    Ok(path)
}
