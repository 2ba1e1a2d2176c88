use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};
use entropy_lab::basis::SymmetryClass;
use entropy_lab::minimizer::Algorithm;
use entropy_lab::suite::TierFilter;

mod commands;

use commands::CliError;

/// Numerical experiments on the entropic uncertainty functional.
#[derive(Parser, Debug)]
#[command(name = "entropy-lab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Minimize S(ψ) + S(ψ̃) over a truncated oscillator basis.
    Minimize(MinimizeArgs),
    /// Tabulate entropies and norms of the bi-Gaussian family over a range of a.
    ScanBigaussian(ScanArgs),
    /// Run the verification checks.
    Verify(VerifyArgs),
    /// Fit a dilated bi-Gaussian to a stored minimizer.
    Fit(FitArgs),
    /// Sample a stored minimizer on a uniform grid.
    ExportGrid(ExportArgs),
    /// Evaluate the Hausdorff–Young functional.
    Sq(SqArgs),
}

#[derive(clap::Args, Debug)]
struct MinimizeArgs {
    #[arg(long)]
    basis_size: usize,
    #[arg(long, default_value = "full")]
    subspace: SymmetryClass,
    #[arg(long, default_value = "lbfgs")]
    algorithm: Algorithm,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 1e-7)]
    tol: f64,
    #[arg(long)]
    max_iterations: Option<usize>,
    #[arg(long)]
    random_starts: Option<usize>,
    /// Quadrature half-width; defaults to the basis support radius.
    #[arg(long)]
    half_width: Option<f64>,
    /// Quadrature spacing; defaults to the basis resolution.
    #[arg(long)]
    spacing: Option<f64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(clap::Args, Debug)]
struct ScanArgs {
    #[arg(long)]
    a_min: f64,
    #[arg(long)]
    a_max: f64,
    /// Number of rows, from `a-max` down to `a-min`.
    #[arg(long)]
    steps: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(clap::Args, Debug)]
struct VerifyArgs {
    #[arg(long, default_value = "fast")]
    tier: TierFilter,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Also write the report here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format: `text` or `kv`.
    #[arg(long, default_value = "text", value_parser = ["text", "kv"])]
    format: String,
}

#[derive(clap::Args, Debug)]
struct FitArgs {
    #[arg(long)]
    input: PathBuf,
}

#[derive(clap::Args, Debug)]
struct ExportArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 6.0)]
    half_width: f64,
    #[arg(long, default_value_t = 0.01)]
    spacing: f64,
    /// Defaults to standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
#[command(group(ArgGroup::new("source").required(true).args(["input", "preset"])))]
struct SqArgs {
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, value_parser = ["gaussian", "phi1"])]
    preset: Option<String>,
    #[arg(long)]
    q: f64,
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("ENTROPY_LAB_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("ENTROPY_LAB_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot configure {n} threads: {e}")))
}

fn run(cli: Cli) -> Result<u8, CliError> {
    configure_threads()?;
    match cli.command {
        Command::Minimize(a) => commands::minimize(a),
        Command::ScanBigaussian(a) => commands::scan_bigaussian(a),
        Command::Verify(a) => commands::verify(a),
        Command::Fit(a) => commands::fit(a),
        Command::ExportGrid(a) => commands::export_grid(a),
        Command::Sq(a) => commands::sq(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
