//! Command-line front end: loads models (presets or JSON descriptions),
//! dispatches the invariant computations, and emits deterministic,
//! schema-versioned reports.
//!
//! Exit codes: 0 on success, 1 when a computation fails on valid inputs or
//! the acceptance suite reports a failing criterion, 2 on configuration
//! errors (bad flags, bad config files, out-of-range knobs).

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::{EdgeInputs, InvariantsInputs, ToeplitzInputs};
use config::{load_config_file, load_preset, LoadedModel};

/// A failure carrying its exit-code class.
pub enum Failure {
    /// Configuration mistake: exit 2.
    Config(String),
    /// Computation failed on valid inputs: exit 1.
    Compute(String),
}

impl Failure {
    pub fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::Compute(m) => m,
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Compute(_) => 1,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

/// Numerical workbench for chiral tight-binding models with a glide
/// symmetry: bulk invariants, half-space kernel counts, real-space edge
/// spectra, and certified homotopies.
#[derive(Parser)]
#[command(name = "glidetop", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bulk and edge invariants: windings, the mod-2 family index, and the
    /// local mod-2 invariant of edge symbols
    Invariants(InvariantsArgs),
    /// Real-space bulk-edge correspondence: strip spectra, zero modes, and
    /// the analytic counts they must match
    Edge(EdgeArgs),
    /// Half-space compressions at fixed momentum: kernel dimensions,
    /// Fredholm indices, and the grading-pair identity checks
    Toeplitz(ToeplitzArgs),
    /// Verify the shipped symbol homotopies (doubling and rotation paths)
    Homotopy(HomotopyArgs),
    /// Finite chain scenarios: spectra and zero modes of dimerised chains
    Ssh(SshArgs),
    /// Run the full acceptance suite; nonzero exit on any failing criterion
    Accept(AcceptArgs),
}

#[derive(Args)]
struct SourceArgs {
    /// Built-in model preset (Ur, Ug, Up, Ub, ssh_red, ssh_blue, ssh_green)
    #[arg(long, value_name = "NAME", conflicts_with = "config")]
    preset: Option<String>,
    /// JSON model description file
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
}

impl SourceArgs {
    fn load(&self) -> Result<(LoadedModel, String), Failure> {
        match (&self.preset, &self.config) {
            (Some(name), None) => Ok((load_preset(name)?, format!("preset:{name}"))),
            (None, Some(path)) => Ok((load_config_file(path)?, path.display().to_string())),
            (None, None) => Err(Failure::Config(
                "a model source is required: --preset NAME or --config PATH".to_string(),
            )),
            (Some(_), Some(_)) => unreachable!("clap rejects --preset with --config"),
        }
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Write the report to this file instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Report format
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct InvariantsArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Momentum grid points for the family index
    #[arg(long, default_value_t = 8, value_parser = parse_grid)]
    grid: usize,
    /// Half-space section cutoff
    #[arg(long, default_value_t = 16, value_parser = parse_cutoff)]
    cutoff: usize,
    /// Kernel tolerance
    #[arg(long, default_value_t = 1e-8, value_parser = parse_tol)]
    tol: f64,
    /// Apply a seeded glide-compatible bulk perturbation (pg models only)
    #[arg(long, value_name = "INT")]
    seed: Option<u64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct EdgeArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Momentum grid points
    #[arg(long, default_value_t = 8, value_parser = parse_grid)]
    grid: usize,
    /// Strip depth in unit cells
    #[arg(long, default_value_t = 32, value_parser = parse_cells)]
    cells: usize,
    /// Half-space section cutoff for the analytic side
    #[arg(long, default_value_t = 16, value_parser = parse_cutoff)]
    cutoff: usize,
    /// Zero-mode and kernel tolerance
    #[arg(long, default_value_t = 1e-8, value_parser = parse_tol)]
    tol: f64,
    /// Apply a seeded glide-compatible bulk perturbation (pg models only)
    #[arg(long, value_name = "INT")]
    seed: Option<u64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ToeplitzArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Momentum grid points
    #[arg(long, default_value_t = 8, value_parser = parse_grid)]
    grid: usize,
    /// Section cutoff
    #[arg(long, default_value_t = 16, value_parser = parse_cutoff)]
    cutoff: usize,
    /// Kernel tolerance
    #[arg(long, default_value_t = 1e-8, value_parser = parse_tol)]
    tol: f64,
    /// Apply a seeded glide-compatible bulk perturbation (pg models only)
    #[arg(long, value_name = "INT")]
    seed: Option<u64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct HomotopyArgs {
    /// Parameter samples along each path (odd, so the midpoint is sampled)
    #[arg(long = "grid", default_value_t = 33, value_parser = parse_odd_samples)]
    grid: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SshArgs {
    /// Chain pattern: blue, red, green, or red_plus_green
    #[arg(long, value_name = "NAME")]
    pattern: String,
    /// Boundary coupling strength (red_plus_green only)
    #[arg(long, default_value_t = 0.0, value_parser = parse_coupling, allow_hyphen_values = true)]
    a: f64,
    /// Chain length in unit cells
    #[arg(long, default_value_t = 32, value_parser = parse_cells)]
    cells: usize,
    /// Zero-mode tolerance
    #[arg(long, default_value_t = 1e-8, value_parser = parse_tol)]
    tol: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct AcceptArgs {
    /// Also write the structured outcomes to this file
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

fn bounded(s: &str, lo: usize, hi: usize) -> Result<usize, String> {
    let v: usize = s.parse().map_err(|e| format!("{e}"))?;
    if (lo..=hi).contains(&v) {
        Ok(v)
    } else {
        Err(format!("value must lie in {lo}..={hi}"))
    }
}

fn parse_grid(s: &str) -> Result<usize, String> {
    bounded(s, 1, 256)
}

fn parse_cutoff(s: &str) -> Result<usize, String> {
    bounded(s, 4, 256)
}

fn parse_cells(s: &str) -> Result<usize, String> {
    bounded(s, 4, 512)
}

fn parse_tol(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v.is_finite() && v > 1e-14 && v <= 0.1 {
        Ok(v)
    } else {
        Err("tolerance must lie in (1e-14, 0.1]".to_string())
    }
}

fn parse_odd_samples(s: &str) -> Result<usize, String> {
    let v: usize = s.parse().map_err(|e| format!("{e}"))?;
    if (3..=1001).contains(&v) && v % 2 == 1 {
        Ok(v)
    } else {
        Err("sample count must be odd and within 3..=1001".to_string())
    }
}

fn parse_coupling(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v.is_finite() && v.abs() <= 100.0 {
        Ok(v)
    } else {
        Err("coupling must be finite with |a| <= 100".to_string())
    }
}

fn deliver(text: &str, output: &OutputArgs) -> Result<(), Failure> {
    match &output.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Config(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Invariants(args) => {
            let (model, source) = args.source.load()?;
            let text = commands::invariants(InvariantsInputs {
                model,
                source: &source,
                grid: args.grid,
                cutoff: args.cutoff,
                tol: args.tol,
                seed: args.seed,
                format: args.output.format,
            })?;
            deliver(&text, &args.output)?;
            Ok(0)
        }
        Command::Edge(args) => {
            let (model, source) = args.source.load()?;
            let text = commands::edge(EdgeInputs {
                model,
                source: &source,
                grid: args.grid,
                cells: args.cells,
                cutoff: args.cutoff,
                tol: args.tol,
                seed: args.seed,
                format: args.output.format,
            })?;
            deliver(&text, &args.output)?;
            Ok(0)
        }
        Command::Toeplitz(args) => {
            let (model, source) = args.source.load()?;
            let text = commands::toeplitz(ToeplitzInputs {
                model,
                source: &source,
                grid: args.grid,
                cutoff: args.cutoff,
                tol: args.tol,
                seed: args.seed,
                format: args.output.format,
            })?;
            deliver(&text, &args.output)?;
            Ok(0)
        }
        Command::Homotopy(args) => {
            let text = commands::homotopy(args.grid, args.output.format)?;
            deliver(&text, &args.output)?;
            Ok(0)
        }
        Command::Ssh(args) => {
            let text = commands::ssh(
                &args.pattern,
                args.a,
                args.cells,
                args.tol,
                args.output.format,
            )?;
            deliver(&text, &args.output)?;
            Ok(0)
        }
        Command::Accept(args) => commands::accept(args.out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}
