use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use sympspec_cli::commands;
use sympspec_cli::exit::{CliResult, Status};
use sympspec_cli::report::{Selection, SuiteConfig};
use sympspec_core::symplectic::Method;

#[derive(Parser)]
#[command(name = "sympspec", version, about = "Symplectic eigenvalues and seeded checks of their extremal properties")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the ascending symplectic eigenvalues of a matrix file.
    Eig {
        input: PathBuf,
        /// skew-canonical, ja-eigen or williamson
        #[arg(long, default_value = "williamson")]
        method: Method,
    },
    /// Write the Williamson decomposition as JSON.
    Williamson {
        input: PathBuf,
        /// Defaults to standard output.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print the geometric mean A#B and its symplectic eigenvalues.
    Mean { a: PathBuf, b: PathBuf },
    /// Print the compression of A to the span of a tuple (columns x_1..x_k, y_1..y_k).
    Compress { a: PathBuf, tuple: PathBuf },
    /// Run verification suites and write a JSON report.
    Verify {
        /// all, williamson, maxmin, wielandt, lidskii-add, lidskii-mult,
        /// phi-extremal, det-product, construction or majorization
        #[arg(long, default_value = "all")]
        suite: Selection,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        nmin: usize,
        #[arg(long, default_value_t = 6)]
        nmax: usize,
        #[arg(long, env = "SYMPSPEC_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9, allow_negative_numbers = true)]
        tol: f64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 100)]
        chains: usize,
        /// Rerun only this trial index.
        #[arg(long)]
        replay: Option<usize>,
        #[arg(long, default_value = "sympspec-report.json")]
        report: PathBuf,
        /// Worker threads; 0 picks one per core.
        #[arg(long, default_value_t = 0)]
        threads: usize,
        /// Same as --threads 1.
        #[arg(long)]
        serial: bool,
    },
    /// Reproduce the AᵀA versus AAᵀ example.
    Repro,
}

fn run(cli: Cli) -> CliResult<Status> {
    match cli.command {
        Command::Eig { input, method } => println!("{}", commands::eig(&input, method)?),
        Command::Williamson { input, output } => {
            if let Some(json) = commands::williamson_cmd(&input, output.as_deref())? {
                println!("{json}");
            }
        }
        Command::Mean { a, b } => println!("{}", commands::mean(&a, &b)?),
        Command::Compress { a, tuple } => println!("{}", commands::compress_cmd(&a, &tuple)?),
        Command::Verify {
            suite,
            trials,
            nmin,
            nmax,
            seed,
            tol,
            samples,
            chains,
            replay,
            report,
            threads,
            serial,
        } => {
            let cfg = SuiteConfig {
                suite,
                trials,
                n_min: nmin,
                n_max: nmax,
                master_seed: seed,
                tol,
                samples,
                chains,
                replay,
                report_path: Some(report),
            };
            let (report, summary) = commands::verify(&cfg, if serial { 1 } else { threads })?;
            println!("{summary}");
            return Ok(report.status());
        }
        Command::Repro => {
            let (out, status) = commands::repro()?;
            println!("{out}");
            return Ok(status);
        }
    }
    Ok(Status::Pass)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(status) => status.into(),
        Err(e) => {
            eprintln!("sympspec: {e}");
            e.status.into()
        }
    }
}
