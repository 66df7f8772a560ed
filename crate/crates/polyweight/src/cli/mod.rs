//! Batch driver: `polyweight <command> [options]` writes CSV, JSON and SVG reports.

mod config;
mod plot;
mod run;
mod table;

pub use config::{parse_n_list, Command, ExperimentConfig};
pub use plot::line_plot;
pub use run::{run, slope, Check, Metric, RowError, RunReport, SCHEMA_VERSION};
pub use table::{format_float, Cell, Provenance, Table, Value};

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use thiserror::Error;

use crate::weights::WeightError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config line {line}, column {column}: {message}")]
    Config {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Parser)]
#[command(
    name = "polyweight",
    version,
    about = "Weighted polynomial inequality experiments"
)]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// Weight, e.g. `omega(pow:2,sin) * jacobi(0.5,0)`.
    #[arg(long)]
    weight: Option<String>,
    /// Degrees: `4,8,16` or `3..6`.
    #[arg(long, value_parser = parse_degrees)]
    n: Option<Degrees>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    q: Option<f64>,
    /// Constant to check rows against.
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    k_max: Option<u64>,
    /// Read the remaining settings from a `key = value` file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Print the effective config and exit.
    #[arg(long)]
    print_config: bool,
}

/// Wrapper so clap treats the list as one value.
#[derive(Debug, Clone)]
struct Degrees(Vec<u64>);

fn parse_degrees(text: &str) -> Result<Degrees, String> {
    parse_n_list(text).map(Degrees)
}

impl Args {
    fn into_config(self) -> Result<ExperimentConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|source| CliError::Io {
                    path: path.clone(),
                    source,
                })?;
                let mut cfg: ExperimentConfig = text.parse()?;
                cfg.command = self.command;
                cfg
            }
            None => ExperimentConfig::new(self.command),
        };
        macro_rules! set {
            ($($field:ident),*) => { $(if let Some(v) = self.$field { cfg.$field = v; })* };
        }
        set!(weight, p, q, alpha, gamma, tol, seed, restarts, samples, k_max);
        if let Some(Degrees(n)) = self.n {
            cfg.n = n;
        }
        if self.c.is_some() {
            cfg.c = self.c;
        }
        for (slot, value) in [
            (&mut cfg.csv, self.csv),
            (&mut cfg.json, self.json),
            (&mut cfg.svg, self.svg),
        ] {
            if value.is_some() {
                *slot = value;
            }
        }
        Ok(cfg)
    }
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes the CSV (stdout when no path is given), JSON and SVG outputs of a finished run.
pub fn emit(report: &RunReport, cfg: &ExperimentConfig) -> Result<(), CliError> {
    let csv = report.table.to_csv();
    match &cfg.csv {
        Some(path) => write(path, &csv)?,
        None => print!("{csv}"),
    }
    if let Some(path) = &cfg.json {
        write(path, &(serde_json::to_string_pretty(report)? + "\n"))?;
    }
    if let Some(path) = &cfg.svg {
        let (x, y) = &report.plot_axes;
        write(path, &line_plot(&report.table.series(x, y), x, y))?;
    }
    Ok(())
}

fn configure_threads() {
    if let Some(n) = std::env::var("POLYWEIGHT_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
    {
        // a second call (for example from tests) keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global();
    }
}

/// Exit code 0 when every check passes, 1 when any fails, 2 on usage errors.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let print_only = args.print_config;
    let cfg = match args.into_config() {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if print_only {
        print!("{cfg}");
        return ExitCode::SUCCESS;
    }
    configure_threads();
    let report = match run(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = emit(&report, &cfg) {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    for err in &report.errors {
        match err.n {
            Some(n) => eprintln!("n={n}: {}", err.message),
            None => eprintln!("{}", err.message),
        }
    }
    for skip in &report.skipped {
        eprintln!("skipped n={}: {}", skip.n.unwrap_or(0), skip.message);
    }
    let failed = report.checks.iter().filter(|c| !c.pass).count();
    eprintln!(
        "{}: {} rows, {} checks failed, {} errors, {:.2}s",
        report.command,
        report.table.rows.len(),
        failed,
        report.errors.len(),
        report.wall_clock_seconds
    );
    if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

pub fn main() -> ExitCode {
    main_with_args(std::env::args_os())
}
