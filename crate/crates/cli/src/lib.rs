//! Command-line front end for `skewmm`.
//!
//! Every command is a function from parsed arguments to a result; `run` maps
//! errors to the documented exit codes.

pub mod bench;
pub mod commands;
pub mod error;
pub mod matrix_file;
pub mod selftest;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use error::{exit, CliError};
pub use matrix_file::MatrixFile;

#[derive(Debug, Parser)]
#[command(name = "skewmm", version, about = "Exact rational matrix multiplication via skew polynomials")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a random matrix, dense or supported on given layers.
    Gen(GenArgs),
    /// Multiply two matrix files.
    Mul(MulArgs),
    /// Report the skew-sparsity and layer support of a matrix.
    Analyze(AnalyzeArgs),
    /// Freivalds test of M = A·B (exit 0 if equal, 3 if not).
    Verify(VerifyArgs),
    /// Operation counts over a grid of primes, sparsities and algorithms.
    Bench(BenchArgs),
    /// Check the algebraic invariants at p = 3, 5, 7, 11, 13.
    Selftest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algo {
    Naive,
    Det,
    Mc,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub p: u64,
    /// Comma-separated layer indices in 0..p-1, or `dense`.
    #[arg(long, default_value = "dense")]
    pub layers: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Entries (dense) or field coordinates (layered) are integers in [-R, R].
    #[arg(long, default_value_t = 9)]
    pub coeff_range: i64,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MulArgs {
    #[arg(long, value_enum)]
    pub algo: Algo,
    pub a: PathBuf,
    pub b: PathBuf,
    /// Failure probability bound; required for `mc`.
    #[arg(long)]
    pub nu: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also compute the schoolbook product and compare.
    #[arg(long)]
    pub check: bool,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    pub file: PathBuf,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub m: PathBuf,
    pub a: PathBuf,
    pub b: PathBuf,
    #[arg(long)]
    pub mu: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    pub p_list: Vec<u64>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub t_list: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "det")]
    pub algos: Vec<Algo>,
    /// Comma-separated seeds, or an inclusive range `a..b`.
    #[arg(long, default_value = "1")]
    pub seeds: String,
    /// Failure probability bound for `mc`.
    #[arg(long, default_value_t = 0.05)]
    pub nu: f64,
    #[arg(long, default_value_t = 9)]
    pub coeff_range: i64,
    /// Compare every product against the schoolbook product.
    #[arg(long)]
    pub check: bool,
    /// Write JSON lines here instead of stdout.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let result = match cli.command {
        Command::Gen(a) => commands::gen(&a),
        Command::Mul(a) => commands::mul(&a),
        Command::Analyze(a) => commands::analyze(&a),
        Command::Verify(a) => commands::verify(&a),
        Command::Bench(a) => bench::run(&a),
        Command::Selftest => selftest::run(&mut std::io::stdout()),
    };
    match result {
        Ok(()) => exit::OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
