//! `velling-lab`: run a named numerical experiment and emit a
//! machine-readable report.
//!
//! Exit codes: 0 success, 2 config error, 3 tolerance failure under
//! `--assert`, 4 internal error.

mod config;
mod experiments;
mod report;

use clap::{Parser, ValueEnum};

use config::{load_file, parse_pair_list, ExperimentConfig, Overrides};
use report::Format;

use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "velling-lab",
    about = "Numerical experiments on truncated-series calculus and disk quadrature",
    after_help = "Experiments: schwarzian-solve, spherical-area, second-variation, vk-norm, \
                  wp-compare, average-check, telescope-check, cfrak-table, appendix-suite, \
                  regularized-limit.\nCoefficient lists use 're,im' pairs separated by ';'."
)]
struct Cli {
    /// Experiment name.
    experiment: String,
    /// JSON config file; command-line flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Report destination (defaults to the config's output_path, then stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
    /// Fail with exit code 3 when a declared tolerance is violated.
    #[arg(long = "assert")]
    assert_mode: bool,
    /// Truncation order for series work.
    #[arg(long)]
    order: Option<usize>,
    /// Finite-difference step for the second variation.
    #[arg(long)]
    fd_step: Option<f64>,
    /// Fiber cutoff / sweep length, experiment dependent.
    #[arg(long)]
    j_max: Option<usize>,
    #[arg(long)]
    n_radial: Option<usize>,
    #[arg(long)]
    n_angular: Option<usize>,
    #[arg(long)]
    r_max: Option<f64>,
    #[arg(long)]
    boundary_panels: Option<usize>,
    /// Quadratic-differential coefficients a_2.. as 're,im;re,im;...'.
    #[arg(long)]
    q_coeffs: Option<String>,
    /// Circle-field coefficients c_1.. as 're,im;re,im;...'.
    #[arg(long)]
    fourier_coeffs: Option<String>,
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = Cli::parse();
    init_thread_pool();

    let file = match &cli.config {
        Some(path) => match load_file(path) {
            Ok(cfg) => cfg,
            Err(e) => {
                eprintln!("config error: {e}");
                return 2;
            }
        },
        None => ExperimentConfig::default(),
    };

    let overrides = match build_overrides(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("config error: {e}");
            return 2;
        }
    };

    let resolved = match config::resolve(&cli.experiment, file, overrides) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("config error: {e}");
            return 2;
        }
    };

    let report = match experiments::run(&resolved) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("internal error: {e}");
            return 4;
        }
    };

    let format = match cli.format {
        OutputFormat::Json => Format::Json,
        OutputFormat::Csv => Format::Csv,
    };
    let out = cli
        .out
        .clone()
        .or_else(|| resolved.output_path.as_ref().map(PathBuf::from));
    if let Err(e) = report.emit(format, out.as_deref()) {
        eprintln!("io error: cannot write report: {e}");
        return 4;
    }

    if cli.assert_mode && !report.within_tolerance {
        eprintln!(
            "tolerance failure: {} did not meet its declared tolerances",
            resolved.experiment
        );
        return 3;
    }
    0
}

fn build_overrides(cli: &Cli) -> Result<Overrides, config::ConfigError> {
    Ok(Overrides {
        order: cli.order,
        fd_step: cli.fd_step,
        j_max: cli.j_max,
        n_radial: cli.n_radial,
        n_angular: cli.n_angular,
        r_max: cli.r_max,
        boundary_panels: cli.boundary_panels,
        q_coeffs: cli.q_coeffs.as_deref().map(parse_pair_list).transpose()?,
        fourier_coeffs: cli
            .fourier_coeffs
            .as_deref()
            .map(parse_pair_list)
            .transpose()?,
    })
}

/// Thread count comes from VELLING_LAB_THREADS when set; results do not
/// depend on it (reductions are deterministic pairwise trees).
fn init_thread_pool() {
    if let Ok(text) = std::env::var("VELLING_LAB_THREADS") {
        if let Ok(n) = text.trim().parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}
