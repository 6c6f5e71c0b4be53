//! Command-line front end for the cluster-state teleportation simulator.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cluster_teleport::harness::{
    parse_coeffs, DEFAULT_FIDELITY_TOL, DEFAULT_RANDOM_INPUTS, DEFAULT_SEED, DEFAULT_TRIALS,
};
use cluster_teleport::{emit_report, run, Mode, OutputFormat, RunConfig, Scheme};

#[derive(Parser)]
#[command(
    name = "cluster-teleport",
    version,
    about = "Teleport two-qubit states through a four-qubit cluster channel"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every measurement branch for one or more inputs.
    Enumerate(Common),
    /// Monte Carlo trials with Born-rule outcome draws.
    Sample(Common),
    /// Brute-force the correction operators for each outcome pair.
    Derive(Common),
    /// Check the tabulated corrections against derivation.
    Verify(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Text,
}

#[derive(Args)]
struct Common {
    /// 1: α|00⟩ + δ|11⟩ inputs, 2: arbitrary inputs with a CZ step.
    #[arg(long, value_enum, default_value = "2")]
    scheme: SchemeArg,
    /// Comma-separated input amplitudes, e.g. `0.6,0.8j` or `0.5,0.5,-0.5,0.5+0j`.
    #[arg(long, allow_hyphen_values = true)]
    coeffs: Option<String>,
    /// Number of random inputs when no coefficients are given.
    #[arg(long, default_value_t = DEFAULT_RANDOM_INPUTS)]
    random_inputs: usize,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Fidelity tolerance.
    #[arg(long, default_value_t = DEFAULT_FIDELITY_TOL)]
    tol: f64,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    /// Rescale --coeffs to unit norm instead of rejecting them.
    #[arg(long)]
    renormalize: bool,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn config(mode: Mode, c: &Common) -> cluster_teleport::Result<RunConfig> {
    let scheme = match c.scheme {
        SchemeArg::One => Scheme::Scheme1,
        SchemeArg::Two => Scheme::Scheme2,
    };
    let mut cfg = RunConfig::new(scheme, mode);
    cfg.input_coeffs = c.coeffs.as_deref().map(parse_coeffs).transpose()?;
    cfg.renormalize = c.renormalize;
    cfg.random_inputs = c.random_inputs;
    cfg.trials = c.trials;
    cfg.seed = c.seed;
    cfg.fidelity_tol = c.tol;
    cfg.output_format = match c.format {
        FormatArg::Json => OutputFormat::Json,
        FormatArg::Csv => OutputFormat::Csv,
        FormatArg::Text => OutputFormat::Text,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (mode, common) = match &cli.command {
        Command::Enumerate(c) => (Mode::Enumerate, c),
        Command::Sample(c) => (Mode::Sample, c),
        Command::Derive(c) => (Mode::Derive, c),
        Command::Verify(c) => (Mode::Verify, c),
    };
    let cfg = match config(mode, common) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let report = match run(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let bytes = emit_report(&report, cfg.output_format);
    let written = match &common.out {
        Some(path) => fs::write(path, &bytes),
        None => io::stdout().lock().write_all(&bytes),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(2);
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        for f in &report.aggregates.failures {
            eprintln!("check failed: {f}");
        }
        ExitCode::from(1)
    }
}
