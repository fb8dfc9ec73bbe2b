//! Batch front end: scenario files in, CSV tables out.
//!
//! Four commands mirror the command-line tool: `price`, `converge`,
//! `simulate` and `localize`. Output goes to the directory named by
//! [`OUTPUT_DIR_ENV`] (default: the working directory).

pub mod config;
pub mod output;
pub mod scenario;

use std::path::{Path, PathBuf};

pub use config::{Coefficient, McConfig, ModelConfig, NumericsConfig, ProductConfig, ScenarioConfig};
pub use output::CsvDoc;
pub use scenario::{ClosedForm, ConvergenceTable, McPoint, PairError, Report, Scenario};

use crate::error::{Error, Result};

pub const OUTPUT_DIR_ENV: &str = "RFRJUMP_OUTPUT_DIR";

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_RUNTIME: i32 = 2;

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Price { config: PathBuf },
    Converge { config: PathBuf, ladder: Vec<f64> },
    Simulate { config: PathBuf, paths: Option<usize>, seed: Option<u64> },
    Localize { config: PathBuf },
}

pub fn output_dir() -> PathBuf {
    std::env::var_os(OUTPUT_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("."))
}

pub fn exit_code(err: &Error) -> i32 {
    if err.is_validation() {
        EXIT_VALIDATION
    } else {
        EXIT_RUNTIME
    }
}

/// Parses a comma-separated `dx` ladder such as `1e-2,5e-3,2.5e-3`.
pub fn parse_ladder(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::Validation(format!("bad dx value `{s}` in ladder")))
        })
        .collect()
}

/// Runs a command and returns the files written to `out_dir`.
pub fn execute(cmd: &Command, out_dir: &Path) -> Result<Vec<PathBuf>> {
    match cmd {
        Command::Price { config } => {
            let s = Scenario::load(config)?;
            let report = s.run()?;
            let name = &s.config.name;
            let mut files = vec![
                output::prices_csv(&s, &report).write(&out_dir.join(format!("{name}_prices.csv")))?,
            ];
            if !report.errors.is_empty() {
                files.push(output::errors_csv(&s, &report).write(&out_dir.join(format!("{name}_errors.csv")))?);
            }
            if !report.mc.is_empty() {
                files.push(output::mc_csv(&s, &report.mc).write(&out_dir.join(format!("{name}_mc.csv")))?);
            }
            Ok(files)
        }
        Command::Converge { config, ladder } => {
            let s = Scenario::load(config)?;
            let table = s.convergence(ladder)?;
            let path = out_dir.join(format!("{}_convergence.csv", s.config.name));
            Ok(vec![output::convergence_csv(&s, &table).write(&path)?])
        }
        Command::Simulate { config, paths, seed } => {
            let mut s = Scenario::load(config)?;
            let mut mc = s.config.mc.clone().unwrap_or_default();
            if let Some(p) = paths {
                mc.paths = *p;
            }
            if let Some(seed) = seed {
                mc.seed = *seed;
            }
            s.config.mc = Some(mc.clone());
            s.config.validate()?;
            let points = s.run_mc(&mc, &[])?;
            let path = out_dir.join(format!("{}_mc.csv", s.config.name));
            Ok(vec![output::mc_csv(&s, &points).write(&path)?])
        }
        Command::Localize { config } => {
            let s = Scenario::load(config)?;
            let cert = s.certificate()?;
            let path = out_dir.join(format!("{}_domain.csv", s.config.name));
            Ok(vec![output::certificate_csv(&s, &cert).write(&path)?])
        }
    }
}
