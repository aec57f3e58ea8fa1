use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use vispart_cli::commands::{
    cmd_bounds, cmd_check, cmd_dim, cmd_render, cmd_visible, Job, Overrides,
};
use vispart_cli::scene::parse_scene;
use vispart_cli::CliError;

/// Visible parts of planar self-similar sets.
#[derive(Parser)]
#[command(name = "vispart", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the convex open set condition, interval projections and the rotation group.
    Check(Common),
    /// Visible cylinders from one direction: CSV of runs and an SVG figure.
    Visible(Common),
    /// Cover and oracle dimension estimates per direction.
    Dim(Common),
    /// Stopping bounds for a list of deltas.
    Bounds(Common),
    /// Figure of the cylinders (and visibility, with --direction).
    Render(Common),
}

#[derive(Args)]
struct Common {
    /// Scene file (TOML).
    #[arg(long)]
    scene: PathBuf,
    /// Viewing direction in degrees.
    #[arg(long, allow_hyphen_values = true)]
    direction: Option<f64>,
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    /// Number of grid directions for the projection check.
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Continue even if the hypothesis checks fail.
    #[arg(long)]
    force: bool,
    /// Count and list marginal (zero-width) visible words.
    #[arg(long)]
    include_marginal: bool,
    /// Envelope algorithm: merge or sweep.
    #[arg(long)]
    envelope: Option<String>,
    /// Also write a PNG raster of the figure.
    #[arg(long)]
    png: bool,
}

impl Common {
    fn job(&self) -> Result<Job, CliError> {
        let config = parse_scene(&self.scene)?;
        Job::new(
            config,
            &Overrides {
                direction: self.direction,
                depth: self.depth,
                delta: self.delta,
                epsilon: self.epsilon,
                grid: self.grid,
                seed: self.seed,
                out: self.out.clone(),
                force: self.force,
                include_marginal: self.include_marginal,
                envelope: self.envelope.clone(),
                png: self.png,
            },
        )
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let mut out = std::io::stdout().lock();
    let mut err = std::io::stderr().lock();
    match cli.command {
        Command::Check(c) => cmd_check(&c.job()?, &mut out),
        Command::Visible(c) => cmd_visible(&c.job()?, &mut out, &mut err),
        Command::Dim(c) => cmd_dim(&c.job()?, &mut out, &mut err),
        Command::Bounds(c) => cmd_bounds(&c.job()?, &mut out, &mut err),
        Command::Render(c) => cmd_render(&c.job()?, &mut out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
