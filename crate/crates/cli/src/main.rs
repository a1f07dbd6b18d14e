//! `aq`: verification suites, Poisson structures, star products and the
//! Fock-space demos driven from JSON presentation files.

mod commands;
mod error;
mod report;
mod specfile;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use commands::{OracleArgs, PurifyArgs};
use error::CliError;
use report::RunReport;

#[derive(Debug, Parser)]
#[command(name = "aq", version, about = "Symplectic Lie algebroid checks and star products")]
struct Cli {
    /// Worker threads for numeric kernels (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Also write the report as JSON to this path.
    #[arg(long, global = true, value_name = "PATH")]
    report_json: Option<PathBuf>,
    /// Seed for random test data; the AQ_SEED environment variable takes precedence.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Print the elapsed time on stderr and record it in the JSON report.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Algebroid axioms, closedness and nondegeneracy, central extension.
    Check { file: PathBuf },
    /// Induced Poisson bivector, Schouten check and Dirac bracket identity.
    Poisson { file: PathBuf },
    /// Star product of two polynomials on a flat frame.
    Star {
        file: PathBuf,
        #[arg(long = "f", value_name = "EXPR")]
        f: String,
        #[arg(long = "g", value_name = "EXPR")]
        g: String,
        #[arg(long)]
        order: Option<usize>,
    },
    /// Purification of a random near-projector.
    Purify {
        #[arg(long, default_value_t = 20)]
        dim: usize,
        #[arg(long, default_value_t = 0.1)]
        delta0: f64,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, default_value_t = 50)]
        max_iter: usize,
        /// Replace every iterate by its Hermitian part.
        #[arg(long)]
        symmetrize: bool,
    },
    /// Compare the star product with Bargmann-Toeplitz operators on R^2n.
    Oracle {
        file: PathBuf,
        #[arg(long = "f", value_name = "EXPR")]
        f: String,
        #[arg(long = "g", value_name = "EXPR")]
        g: String,
        #[arg(long, default_value_t = 1)]
        order: usize,
        #[arg(long)]
        cutoff: Option<usize>,
        #[arg(long)]
        buffer: Option<usize>,
        /// Comma-separated values such as `1/64,1/32,1/16`.
        #[arg(long, value_name = "LIST", value_parser = parse_grid)]
        hbar_grid: Option<HbarGrid>,
        /// Also recover the symbol coefficients of T_f T_g and compare them.
        #[arg(long)]
        extract: bool,
    },
}

fn parse_number(s: &str) -> Result<f64, String> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a.trim().parse().map_err(|_| format!("bad number `{s}`"))?;
            let b: f64 = b.trim().parse().map_err(|_| format!("bad number `{s}`"))?;
            Ok(a / b)
        }
        None => s.parse().map_err(|_| format!("bad number `{s}`")),
    }
}

#[derive(Debug, Clone)]
struct HbarGrid(Vec<f64>);

fn parse_grid(s: &str) -> Result<HbarGrid, String> {
    s.split(',').map(parse_number).collect::<Result<_, _>>().map(HbarGrid)
}

fn effective_seed(flag: Option<u64>) -> Result<Option<u64>, CliError> {
    match std::env::var("AQ_SEED") {
        Ok(v) => v.trim().parse().map(Some).map_err(|_| CliError::Usage(format!("AQ_SEED=`{v}` is not an integer"))),
        Err(_) => Ok(flag),
    }
}

fn run(cli: &Cli) -> Result<RunReport, CliError> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let seed = effective_seed(cli.seed)?;
    match &cli.command {
        Command::Check { file } => commands::cmd_check(file),
        Command::Poisson { file } => commands::cmd_poisson(file, seed),
        Command::Star { file, f, g, order } => commands::cmd_star(file, f, g, *order, seed),
        Command::Purify { dim, delta0, tol, max_iter, symmetrize } => commands::cmd_purify(&PurifyArgs {
            dim: *dim,
            delta0: *delta0,
            tol: *tol,
            max_iter: *max_iter,
            symmetrize: *symmetrize,
            seed: seed.unwrap_or(1),
        }),
        Command::Oracle { file, f, g, order, cutoff, buffer, hbar_grid, extract } => commands::cmd_oracle(
            file,
            &OracleArgs { f, g, order: *order, cutoff: *cutoff, buffer: *buffer, hbars: hbar_grid.as_ref().map(|g| g.0.clone()), extract: *extract },
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match run(&cli) {
        Ok(mut rep) => {
            for l in &rep.output {
                println!("{l}");
            }
            if cli.timing {
                let ms = start.elapsed().as_secs_f64() * 1e3;
                eprintln!("elapsed: {ms:.1} ms");
                rep.timing_ms = Some(ms);
            }
            if let Some(path) = &cli.report_json {
                if let Err(e) = rep.write_json(path) {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            }
            if rep.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
