//! Subcommands. Each returns the process exit code: 0 ok, 2 hypothesis
//! failure; runtime errors surface as `Err` (exit 1).

use std::io::Write;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vispart_core::dimension::{
    dimension_profile, stopping_bound, theoretical_bound, ProfileParams,
};
use vispart_core::geometry::{Direction, EnvelopeRegistry, Tolerance};
use vispart_core::ifs::{
    check_cosc, check_projection_interval, default_projection_directions, CoscReport,
    CylinderFamily, IfsSystem, Level, ProjectionReport, RotationGroup,
};
use vispart_core::visibility::{q_epsilon, visible_in_family, visible_points, VisibleSetReport};

use crate::error::CliError;
use crate::format::{csv, g12, g12_opt};
use crate::manifest::{write_manifest, write_outputs, CheckSummary, RunManifest, SystemSummary};
use crate::render::{envelope_polylines, Figure};
use crate::scene::SceneConfig;

pub const EXIT_OK: i32 = 0;
pub const EXIT_HYPOTHESIS: i32 = 2;

/// Relative tolerance of the hypothesis checks.
pub const CHECK_TOL: f64 = 1e-9;
/// Angular tolerance of the rotation-group closure.
pub const GROUP_TOL: f64 = 1e-9;
pub const DEFAULT_DIRECTION_DEG: f64 = 90.0;
pub const FIGURE_WIDTH_PX: u32 = 800;

pub const VISIBLE_HEADER: [&str; 4] = ["word", "run_lo", "run_hi", "run_width"];
pub const DIM_HEADER: [&str; 6] = [
    "direction_deg",
    "cover_slope",
    "oracle_slope",
    "r2",
    "bound_delta",
    "bound_value",
];
pub const BOUNDS_HEADER: [&str; 7] = [
    "delta",
    "q",
    "lambda",
    "K",
    "component1",
    "component2",
    "bound",
];

/// Command-line values that override the scene's `run` table.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub direction: Option<f64>,
    pub depth: Option<usize>,
    pub delta: Option<f64>,
    pub epsilon: Option<f64>,
    pub grid: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub force: bool,
    pub include_marginal: bool,
    pub envelope: Option<String>,
    pub png: bool,
}

/// A scene with overrides applied and validated.
#[derive(Clone, Debug)]
pub struct Job {
    pub config: SceneConfig,
    pub out: PathBuf,
    pub force: bool,
    pub png: bool,
}

impl Job {
    pub fn new(mut config: SceneConfig, o: &Overrides) -> Result<Self, CliError> {
        let run = &mut config.run;
        if o.direction.is_some() {
            run.direction_deg = o.direction;
        }
        if let Some(k) = o.depth {
            run.depth = k;
            run.delta = None;
        }
        if o.delta.is_some() {
            run.delta = o.delta;
        }
        if let Some(e) = o.epsilon {
            run.epsilon = e;
        }
        if let Some(g) = o.grid {
            run.grid = g;
        }
        if let Some(s) = o.seed {
            run.seed = s;
        }
        if o.include_marginal {
            run.include_marginal = true;
        }
        if let Some(e) = &o.envelope {
            run.envelope = e.clone();
        }
        let out = o.out.clone().unwrap_or_else(|| PathBuf::from(&run.out));
        config.validate()?;
        Ok(Self {
            config,
            out,
            force: o.force,
            png: o.png,
        })
    }

    fn direction(&self) -> Direction {
        Direction::from_degrees(
            self.config
                .run
                .direction_deg
                .unwrap_or(DEFAULT_DIRECTION_DEG),
        )
    }

    /// Sweep directions: equally spaced, or uniform draws from the seed.
    pub fn directions(&self) -> Vec<Direction> {
        let run = &self.config.run;
        if run.random_directions {
            let mut rng = ChaCha8Rng::seed_from_u64(run.seed);
            (0..run.directions)
                .map(|_| Direction::from_radians(rng.gen_range(0.0..std::f64::consts::TAU)))
                .collect()
        } else {
            Direction::equally_spaced(run.directions)
        }
    }

    fn family(&self, ifs: &IfsSystem) -> Result<CylinderFamily, CliError> {
        Ok(match self.config.run.delta {
            Some(delta) => ifs.cylinders_stopped(delta)?,
            None => ifs.cylinders(self.config.run.depth)?,
        })
    }

    fn manifest(
        &self,
        command: &str,
        ifs: &IfsSystem,
        checks: Option<CheckSummary>,
    ) -> RunManifest {
        RunManifest {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: command.into(),
            seed: self.config.run.seed,
            scene: self.config.clone(),
            system: SystemSummary::of(ifs),
            checks,
            outputs: Vec::new(),
        }
    }

    fn finish(
        &self,
        command: &str,
        ifs: &IfsSystem,
        checks: Option<CheckSummary>,
        files: Vec<(String, Vec<u8>)>,
    ) -> Result<(), CliError> {
        let mut m = self.manifest(command, ifs, checks);
        m.outputs = write_outputs(&self.out, &files)?;
        write_manifest(&self.out, &m)?;
        Ok(())
    }
}

/// Results of the three hypothesis checks.
#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub cosc: CoscReport,
    pub projection: ProjectionReport,
    pub group: RotationGroup,
    /// Directions used by the projection check came from a group orbit.
    pub orbit: bool,
}

impl CheckOutcome {
    pub fn summary(&self, forced: bool) -> CheckSummary {
        CheckSummary {
            cosc: self.cosc.pass,
            projection_interval: self.projection.pass,
            group_finite: self.group.closed,
            group_order: self.group.order(),
            directions_checked: self.projection.directions_checked,
            forced,
        }
    }
}

/// Convex open set condition, interval projections and finiteness of the
/// rotation group. With a finite group and a single direction, the
/// projection check runs on the orbit of that direction.
pub fn run_checks(job: &Job, ifs: &IfsSystem, direction_deg: Option<f64>) -> CheckOutcome {
    let run = &job.config.run;
    let cosc = check_cosc(ifs, CHECK_TOL);
    let group = ifs.rotation_group(run.max_group_order, GROUP_TOL);
    let (dirs, orbit) = match direction_deg {
        Some(deg) if group.closed => (group.orbit(&Direction::from_degrees(deg)), true),
        _ => (default_projection_directions(ifs, run.grid), false),
    };
    let projection = check_projection_interval(ifs, &dirs, CHECK_TOL);
    CheckOutcome {
        cosc,
        projection,
        group,
        orbit,
    }
}

fn describe(ifs: &IfsSystem, name: &str, out: &mut dyn Write) -> Result<(), CliError> {
    writeln!(
        out,
        "scene {name}: {} maps, hull {} vertices, diameter {}, r_min {}, r_max {}, similarity dimension {}",
        ifs.len(),
        ifs.hull().len(),
        g12(ifs.diameter()),
        g12(ifs.r_min()),
        g12(ifs.r_max()),
        g12(ifs.similarity_dimension())
    )
    .map_err(stdout_err)
}

fn stdout_err(e: std::io::Error) -> CliError {
    CliError::io("<stdout>", e)
}

fn pass(b: bool) -> &'static str {
    if b {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn cmd_check(job: &Job, out: &mut dyn Write) -> Result<i32, CliError> {
    let ifs = job.config.system()?;
    describe(&ifs, &job.config.name, out)?;
    let c = run_checks(job, &ifs, job.config.run.direction_deg);
    let w = |out: &mut dyn Write, s: String| writeln!(out, "{s}").map_err(stdout_err);
    w(out, format!("cosc {}", pass(c.cosc.pass)))?;
    for &(i, j, area) in &c.cosc.violating_pairs {
        w(
            out,
            format!("  overlap maps=({},{}) area={}", i + 1, j + 1, g12(area)),
        )?;
    }
    w(
        out,
        format!(
            "projection_interval {} directions={} source={}",
            pass(c.projection.pass),
            c.projection.directions_checked,
            if c.orbit {
                "group_orbit"
            } else {
                "grid+critical"
            }
        ),
    )?;
    for f in &c.projection.failures {
        let base = ifs.hull().project_interval(&f.direction).lo;
        for g in &f.gaps {
            w(
                out,
                format!(
                    "  gap direction_deg={} lo={} hi={} offset_lo={} offset_hi={}",
                    g12(f.direction.degrees()),
                    g12(g.lo),
                    g12(g.hi),
                    g12(g.lo - base),
                    g12(g.hi - base)
                ),
            )?;
        }
    }
    w(
        out,
        format!(
            "rotation_group {} order={} closed={}",
            pass(c.group.closed),
            c.group.order(),
            c.group.closed
        ),
    )?;
    let summary = c.summary(false);
    if summary.pass() {
        w(out, "result PASS".into())?;
    } else {
        w(
            out,
            format!("result FAIL reasons={}", summary.reasons().join(",")),
        )?;
    }
    job.finish("check", &ifs, Some(summary.clone()), Vec::new())?;
    Ok(if summary.pass() {
        EXIT_OK
    } else {
        EXIT_HYPOTHESIS
    })
}

/// Runs the checks ahead of a computation; `Err` means stop with the
/// returned exit code.
fn gate(
    job: &Job,
    ifs: &IfsSystem,
    direction_deg: Option<f64>,
    err: &mut dyn Write,
) -> Result<Result<CheckSummary, i32>, CliError> {
    let summary = run_checks(job, ifs, direction_deg).summary(job.force);
    if summary.pass() {
        return Ok(Ok(summary));
    }
    let reasons = summary.reasons().join(",");
    if job.force {
        writeln!(
            err,
            "warning: hypotheses failed ({reasons}); continuing because of --force"
        )
        .map_err(stdout_err)?;
        Ok(Ok(summary))
    } else {
        writeln!(
            err,
            "hypotheses failed ({reasons}); rerun with --force to continue"
        )
        .map_err(stdout_err)?;
        Ok(Err(EXIT_HYPOTHESIS))
    }
}

fn visible_report(
    job: &Job,
    fam: &CylinderFamily,
    d: &Direction,
) -> Result<VisibleSetReport, CliError> {
    let algo = EnvelopeRegistry::default()
        .get(&job.config.run.envelope)
        .ok_or_else(|| {
            CliError::invalid(format!(
                "unknown envelope algorithm `{}`",
                job.config.run.envelope
            ))
        })?;
    Ok(visible_in_family(fam, d, &Tolerance::default(), &*algo)?)
}

/// CSV rows `word,run_lo,run_hi,run_width` in word order; marginal words
/// appear as zero-width runs when included.
pub fn visible_csv(report: &VisibleSetReport, include_marginal: bool) -> String {
    let mut rows: Vec<(&vispart_core::ifs::Word, Vec<String>)> = Vec::new();
    for v in &report.visible {
        for r in &v.runs {
            rows.push((
                &v.word,
                vec![v.word.to_string(), g12(r.lo), g12(r.hi), g12(r.width())],
            ));
        }
    }
    if include_marginal {
        for m in &report.marginal {
            rows.push((
                &m.word,
                vec![m.word.to_string(), g12(m.at), g12(m.at), g12(0.0)],
            ));
        }
    }
    rows.sort_by(|a, b| a.0.cmp(b.0));
    let rows: Vec<Vec<String>> = rows.into_iter().map(|(_, r)| r).collect();
    csv(&VISIBLE_HEADER, &rows)
}

pub fn cmd_visible(job: &Job, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let ifs = job.config.system()?;
    let checks = match gate(job, &ifs, Some(job.direction().degrees()), err)? {
        Ok(s) => s,
        Err(code) => return Ok(code),
    };
    let run = &job.config.run;
    let d = job.direction();
    let fam = job.family(&ifs)?;
    let report = visible_report(job, &fam, &d)?;
    let cloud = visible_points(&ifs, &d, run.oracle_depth, run.fiber_resolution)?;
    writeln!(
        out,
        "direction {} level {}: {} cylinders, {} visible, {} marginal, covered width {}, q(epsilon={}) = {}",
        g12(d.degrees()),
        fam.level,
        fam.len(),
        report.count(false),
        report.marginal.len(),
        g12(report.total_width),
        g12(run.epsilon),
        g12(q_epsilon(&ifs, run.epsilon))
    )
    .map_err(stdout_err)?;
    let figure = Figure {
        hull: Some(ifs.hull().clone()),
        cylinders: fam.hulls.clone(),
        visible: report
            .visible
            .iter()
            .filter_map(|v| fam.position(&v.word).map(|i| fam.hulls[i].clone()))
            .collect(),
        envelope: envelope_polylines(&report.envelope),
        oracle: cloud.points.clone(),
    };
    let mut files = vec![
        (
            "visible.csv".to_string(),
            visible_csv(&report, run.include_marginal).into_bytes(),
        ),
        (
            "visible.svg".to_string(),
            figure.to_svg(FIGURE_WIDTH_PX as f64).into_bytes(),
        ),
    ];
    if job.png {
        files.push(("visible.png".to_string(), figure.to_png(FIGURE_WIDTH_PX)?));
    }
    job.finish("visible", &ifs, Some(checks), files)?;
    Ok(EXIT_OK)
}

pub fn dim_params(job: &Job) -> ProfileParams {
    let run = &job.config.run;
    let levels = if run.cover_deltas.is_empty() {
        run.cover_depths.iter().map(|&k| Level::Depth(k)).collect()
    } else {
        run.cover_deltas
            .iter()
            .map(|&d| Level::Stopped(d))
            .collect()
    };
    ProfileParams {
        levels,
        oracle_depth: run.oracle_depth,
        fiber_resolution: run.fiber_resolution,
        grid: run.box_grid,
        bound_delta: run.bound_delta,
    }
}

pub fn cmd_dim(job: &Job, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let ifs = job.config.system()?;
    let checks = match gate(job, &ifs, None, err)? {
        Ok(s) => s,
        Err(code) => return Ok(code),
    };
    let dirs = job.directions();
    let rows = dimension_profile(&ifs, &dirs, &dim_params(job), checks.pass())?;
    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                g12(r.direction_deg),
                g12(r.cover_slope),
                g12_opt(r.oracle_slope),
                g12(r.r2),
                g12(r.bound_delta),
                g12(r.bound_value),
            ]
        })
        .collect();
    let flagged = rows.iter().filter(|r| r.hypothesis_failed).count();
    writeln!(
        out,
        "{} directions, cover slopes in [{}, {}], similarity dimension {}{}",
        rows.len(),
        g12(rows
            .iter()
            .map(|r| r.cover_slope)
            .fold(f64::INFINITY, f64::min)),
        g12(rows
            .iter()
            .map(|r| r.cover_slope)
            .fold(f64::NEG_INFINITY, f64::max)),
        g12(ifs.similarity_dimension()),
        if flagged > 0 {
            format!(", {flagged} rows flagged hypothesis_failed")
        } else {
            String::new()
        }
    )
    .map_err(stdout_err)?;
    job.finish(
        "dim",
        &ifs,
        Some(checks),
        vec![("dim.csv".into(), csv(&DIM_HEADER, &table).into_bytes())],
    )?;
    Ok(EXIT_OK)
}

pub fn cmd_bounds(job: &Job, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let ifs = job.config.system()?;
    let checks = match gate(job, &ifs, None, err)? {
        Ok(s) => s,
        Err(code) => return Ok(code),
    };
    let run = &job.config.run;
    let deltas = match run.delta {
        Some(d) => vec![d],
        None => run.bound_deltas.clone(),
    };
    let mut table = Vec::with_capacity(deltas.len());
    for &delta in &deltas {
        let b = stopping_bound(&ifs, delta)?;
        table.push(vec![
            g12(delta),
            g12(b.q),
            g12(b.lambda),
            g12_opt(b.k_const),
            g12(b.component1),
            g12(b.component2),
            g12(b.bound),
        ]);
    }
    let strip = theoretical_bound(&ifs, run.epsilon)?;
    writeln!(
        out,
        "strip bound epsilon={}: q={} lambda={} bound={}",
        g12(run.epsilon),
        g12(strip.q),
        g12(strip.lambda),
        g12(strip.bound)
    )
    .map_err(stdout_err)?;
    job.finish(
        "bounds",
        &ifs,
        Some(checks),
        vec![(
            "bounds.csv".into(),
            csv(&BOUNDS_HEADER, &table).into_bytes(),
        )],
    )?;
    Ok(EXIT_OK)
}

/// Figure of the cylinders at the configured level; with a direction,
/// also the visible cylinders, envelope and oracle cloud.
pub fn cmd_render(job: &Job, out: &mut dyn Write) -> Result<i32, CliError> {
    let ifs = job.config.system()?;
    let run = &job.config.run;
    let fam = job.family(&ifs)?;
    let mut figure = Figure {
        hull: Some(ifs.hull().clone()),
        cylinders: fam.hulls.clone(),
        ..Figure::default()
    };
    if run.direction_deg.is_some() {
        let d = job.direction();
        let report = visible_report(job, &fam, &d)?;
        figure.visible = report
            .visible
            .iter()
            .filter_map(|v| fam.position(&v.word).map(|i| fam.hulls[i].clone()))
            .collect();
        figure.envelope = envelope_polylines(&report.envelope);
        figure.oracle = visible_points(&ifs, &d, run.oracle_depth, run.fiber_resolution)?.points;
    }
    let mut files = vec![(
        "render.svg".to_string(),
        figure.to_svg(FIGURE_WIDTH_PX as f64).into_bytes(),
    )];
    if job.png {
        files.push(("render.png".to_string(), figure.to_png(FIGURE_WIDTH_PX)?));
    }
    writeln!(
        out,
        "rendered {} cylinders at level {} into {}",
        fam.len(),
        fam.level,
        job.out.display()
    )
    .map_err(stdout_err)?;
    job.finish("render", &ifs, None, files)?;
    Ok(EXIT_OK)
}

/// Resolves the output directory of a job relative to `base` when it is
/// not absolute.
pub fn output_dir(job: &Job, base: &Path) -> PathBuf {
    if job.out.is_absolute() {
        job.out.clone()
    } else {
        base.join(&job.out)
    }
}
