use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand as ClapSubcommand, ValueEnum};
use pfc_cli::{run, CliError, InputFormat, Options, Request, Subcommand};

#[derive(Parser)]
#[command(
    name = "pfc",
    version,
    about = "Perron-Frobenius and Krein-Rutman spectral analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(ClapSubcommand)]
enum Command {
    /// Irreducibility, primitivity, period and normal forms of a matrix file.
    Analyze(CommonArgs),
    /// Perron root and vector with Collatz-Wielandt bounds.
    Perron(CommonArgs),
    /// Nyström discretization of a positive kernel on [0,1].
    Jentzsch(CommonArgs),
    /// Positive eigenvector driver on a built-in cone scenario
    /// (lorentz-rotation, lorentz-split, orthant-cycle, nilpotent).
    #[command(name = "kr-harness")]
    KrHarness(CommonArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Mm,
    Csv,
}

#[derive(Args)]
struct CommonArgs {
    #[arg(long, default_value_t = pfc_core::perron::DEFAULT_TOL)]
    tol: f64,
    #[arg(long, default_value_t = pfc_core::perron::DEFAULT_MAX_ITER)]
    max_iter: usize,
    /// Gauss-Legendre nodes for `jentzsch`.
    #[arg(long, default_value_t = 32)]
    nodes: usize,
    /// `const:C`, `poly:c0,c1,...` for sum c_k (st)^k, or `exp[:a]`.
    #[arg(long)]
    kernel: Option<String>,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    theta: f64,
    /// Number of rotation approximants.
    #[arg(long = "K", default_value_t = 4)]
    k: usize,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Include per-stage wall-clock times in the report.
    #[arg(long)]
    timing: bool,
    /// Matrix file, or scenario name for `kr-harness`.
    path: Option<String>,
}

fn request(cli: Cli) -> Request {
    let (subcommand, args) = match cli.command {
        Command::Analyze(a) => (Subcommand::Analyze, a),
        Command::Perron(a) => (Subcommand::Perron, a),
        Command::Jentzsch(a) => (Subcommand::Jentzsch, a),
        Command::KrHarness(a) => (Subcommand::KrHarness, a),
    };
    Request {
        subcommand,
        input: args.path,
        options: Options {
            tol: args.tol,
            max_iter: args.max_iter,
            nodes: args.nodes,
            kernel: args.kernel,
            theta: args.theta,
            k: args.k,
            format: args.format.map(|f| match f {
                Format::Mm => InputFormat::MatrixMarket,
                Format::Csv => InputFormat::Csv,
            }),
            timing: args.timing,
        },
    }
}

/// Writes to stdout, tolerating a closed pipe.
fn emit(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn main() -> ExitCode {
    let req = request(Cli::parse());
    match run(&req) {
        Ok(report) => {
            emit(&report.to_json());
            ExitCode::SUCCESS
        }
        Err(e) => {
            if let CliError::Convergence {
                report: Some(r), ..
            } = &e
            {
                emit(&r.to_json());
            }
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
