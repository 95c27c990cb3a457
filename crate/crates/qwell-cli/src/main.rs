//! Command-line frontend: reads a potential profile, solves it by any or
//! all methods, samples eigenfunctions, and cross-checks everything
//! against the finite-difference solver.
//!
//! Exit codes: 0 when every requested computation succeeded and every
//! comparison in the emitted report passed its tolerance, 1 for usage,
//! file, or validation problems, 2 for numerical failures and tolerance
//! misses. Verbosity is controlled by the `QWI_LOG` environment variable
//! (`QWI_LOG=info`, `QWI_LOG=debug`, ...).

mod report;
mod samples;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use qwell::classical::{Method, DEFAULT_RESOLUTION};
use qwell::{PotentialProfile, ProfileConfig, UnitSystem};

use report::{OracleOptions, RunReport};
use samples::SampleKind;

#[derive(Debug)]
pub(crate) enum CliError {
    /// Bad invocation, unreadable file, malformed or invalid profile.
    Usage(String),
    /// The solvers themselves gave up.
    Numerical(String),
}

pub(crate) type CliResult<T> = Result<T, CliError>;

#[derive(Parser)]
#[command(
    name = "qwell",
    version,
    about = "Bound states of piecewise-constant quantum wells",
    long_about = "Computes bound-state energies and eigenfunctions of piecewise-constant \
                  potential wells by wavefunction matching, transfer matrices, and wave \
                  impedances, with an independent finite-difference cross-check."
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve for bound-state energies
    Solve {
        /// Profile JSON file (boundaries, potentials, optional hbar/mass)
        profile: PathBuf,
        /// Solver to run
        #[arg(long, value_enum, default_value_t = MethodArg::All)]
        method: MethodArg,
        /// Output format
        #[arg(long, value_enum, default_value_t = FormatArg::Json)]
        format: FormatArg,
        /// Write to this file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
        /// Bracketing samples across the energy search window
        #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
        resolution: usize,
        /// Omit the metadata block (for golden-file diffing)
        #[arg(long)]
        no_meta: bool,
    },
    /// Sample one bound state's wavefunction and density as CSV
    Wavefunction {
        /// Profile JSON file
        profile: PathBuf,
        /// Bound state index, 0 is the ground state
        #[arg(default_value_t = 0)]
        state_index: usize,
        /// Density source
        #[arg(long, value_enum, default_value_t = SampleMethodArg::Classical)]
        method: SampleMethodArg,
        /// Number of sample points across the well and tails
        #[arg(long, default_value_t = 1024)]
        samples: usize,
        /// Decreasing imaginary offsets for the greens limit, comma separated
        #[arg(long, value_delimiter = ',')]
        eps_schedule: Option<Vec<f64>>,
        /// Bracketing samples across the energy search window
        #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
        resolution: usize,
        /// Write to this file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run all three methods plus the finite-difference check and compare
    Compare {
        /// Profile JSON file
        profile: PathBuf,
        /// Grid points for the finite-difference solver
        #[arg(long, default_value_t = 20001)]
        oracle_points: usize,
        /// Bracketing samples across the energy search window
        #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
        resolution: usize,
        /// Write to this file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
        /// Omit the metadata block (for golden-file diffing)
        #[arg(long)]
        no_meta: bool,
    },
}

#[derive(Debug, Copy, Clone, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Classical,
    Transfer,
    Impedance,
    All,
}

#[derive(Debug, Copy, Clone, PartialEq, Eq, ValueEnum)]
enum SampleMethodArg {
    Classical,
    Impedance,
    Greens,
}

#[derive(Debug, Copy, Clone, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // help and version requests land here too; they are not errors
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            std::process::exit(code);
        }
    };
    env_logger::Builder::from_env(env_logger::Env::new().filter("QWI_LOG")).init();
    match run(cli) {
        Ok(true) => {}
        Ok(false) => std::process::exit(2),
        Err(CliError::Usage(message)) => {
            eprintln!("error: {message}");
            std::process::exit(1);
        }
        Err(CliError::Numerical(message)) => {
            eprintln!("error: {message}");
            std::process::exit(2);
        }
    }
}

/// Returns whether every comparison in the emitted output passed.
fn run(cli: Cli) -> CliResult<bool> {
    match cli.command {
        Cmd::Solve {
            profile,
            method,
            format,
            out,
            resolution,
            no_meta,
        } => {
            let (pot, units) = load_profile(&profile)?;
            let methods = match method {
                MethodArg::All => {
                    vec![Method::Classical, Method::Transfer, Method::Impedance]
                }
                MethodArg::Classical => vec![Method::Classical],
                MethodArg::Transfer => vec![Method::Transfer],
                MethodArg::Impedance => vec![Method::Impedance],
            };
            if method != MethodArg::All {
                let only = methods[0];
                if !qwell::spectrum::supports(&pot, only) {
                    return Err(CliError::Usage(format!(
                        "the {only} method handles exactly three regions; this profile has {}. \
                         Use --method transfer (any region count) or the compare command \
                         (adds the finite-difference check)",
                        pot.region_count()
                    )));
                }
            }
            let report = report::build(
                &pot,
                &units,
                &methods,
                resolution,
                None,
                no_meta,
                meta_args(),
            )?;
            let rendered = match format {
                FormatArg::Json => render_json(&report),
                FormatArg::Csv => report::solve_csv(&report, methods.len() == 1),
            };
            emit(&out, &rendered)?;
            Ok(report.passed)
        }
        Cmd::Wavefunction {
            profile,
            state_index,
            method,
            samples,
            eps_schedule,
            resolution,
            out,
        } => {
            let (pot, units) = load_profile(&profile)?;
            let kind = match method {
                SampleMethodArg::Classical => SampleKind::Classical,
                SampleMethodArg::Impedance => SampleKind::Impedance,
                SampleMethodArg::Greens => SampleKind::Greens,
            };
            let table = samples::sample_state(
                &pot,
                &units,
                kind,
                state_index,
                samples,
                resolution,
                eps_schedule.as_deref(),
            )?;
            emit(&out, &table.to_csv())?;
            Ok(true)
        }
        Cmd::Compare {
            profile,
            oracle_points,
            resolution,
            out,
            no_meta,
        } => {
            let (pot, units) = load_profile(&profile)?;
            let methods = [Method::Classical, Method::Transfer, Method::Impedance];
            let report = report::build(
                &pot,
                &units,
                &methods,
                resolution,
                Some(OracleOptions {
                    n_points: oracle_points,
                }),
                no_meta,
                meta_args(),
            )?;
            emit(&out, &render_json(&report))?;
            Ok(report.passed)
        }
    }
}

fn load_profile(path: &PathBuf) -> CliResult<(PotentialProfile, UnitSystem)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let config = ProfileConfig::from_json(&text)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let parts = config
        .into_parts()
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    log::info!(
        "loaded profile {} with {} regions",
        path.display(),
        parts.0.region_count()
    );
    Ok(parts)
}

fn render_json(report: &RunReport) -> String {
    let mut text = serde_json::to_string_pretty(report).expect("report serializes");
    text.push('\n');
    text
}

fn emit(out: &Option<PathBuf>, content: &str) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn meta_args() -> Vec<String> {
    std::env::args().collect()
}
