use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rfrjump::cli::{self, Command};

/// Prices rate derivatives under short-rate models with jumps at fixed dates.
///
/// CSV output goes to $RFRJUMP_OUTPUT_DIR (default: current directory).
/// Exit codes: 0 success, 1 invalid input, 2 runtime failure.
#[derive(Parser)]
#[command(version)]
struct Args {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run every engine listed in the scenario.
    Price { config: PathBuf },
    /// Error table over a dx ladder, e.g. --dx 1e-2,5e-3,2.5e-3,1.25e-3.
    Converge {
        config: PathBuf,
        #[arg(long)]
        dx: String,
    },
    /// Monte-Carlo estimates at the scenario's starting rates.
    Simulate {
        config: PathBuf,
        #[arg(long)]
        paths: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Certified computational domain.
    Localize { config: PathBuf },
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { cli::EXIT_VALIDATION as u8 } else { 0 });
        }
    };
    let command = match args.command {
        Cmd::Price { config } => Ok(Command::Price { config }),
        Cmd::Converge { config, dx } => cli::parse_ladder(&dx).map(|ladder| Command::Converge { config, ladder }),
        Cmd::Simulate { config, paths, seed } => Ok(Command::Simulate { config, paths, seed }),
        Cmd::Localize { config } => Ok(Command::Localize { config }),
    };
    match command.and_then(|c| cli::execute(&c, &cli::output_dir())) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::from(cli::EXIT_OK as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(cli::exit_code(&e) as u8)
        }
    }
}
