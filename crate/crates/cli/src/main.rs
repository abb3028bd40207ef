//! `sparsos`: certify nonnegativity of sparse polynomials and polynomial
//! matrices, run the benchmark families and check certificates.
//!
//! Exit codes: 0 feasible / verified, 1 usage or input error, 2 infeasible or
//! verification failed, 3 numerical failure. JSON goes to stdout, logs to
//! stderr.

mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sparsos::cones::ConeKind;
use sparsos::problems::Family;

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_INFEASIBLE: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "sparsos", version, about = "Sparse sum-of-squares certificates (DSOS, SDSOS, SSOS, SOS)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Certify that a polynomial is in the chosen cone.
    Certify(CertifyArgs),
    /// Certify that a symmetric polynomial matrix is in the chosen matrix cone.
    CertifyMatrix(CertifyMatrixArgs),
    /// Best lower bound: min gamma with p + gamma x'x in the cone.
    Lowerbound(LowerboundArgs),
    /// Run a benchmark family and write a CSV table.
    Bench(BenchArgs),
    /// Check a certificate against a polynomial or polynomial matrix.
    Verify(VerifyArgs),
    /// Sparsity structure of a polynomial and the block sizes of each cone.
    GraphInfo(GraphInfoArgs),
}

#[derive(Args, Debug, Clone)]
pub struct SolveFlags {
    /// Cone: dsos, sdsos, ssos or sos.
    #[arg(long, default_value = "ssos")]
    pub cone: ConeKind,
    /// Degree 2d of the certificate (defaults to the polynomial degree, rounded up).
    #[arg(long)]
    pub degree: Option<u32>,
    /// Relative primal/dual residual target of the conic solver.
    #[arg(long, default_value_t = 1e-8)]
    pub feas_tol: f64,
    /// Tolerance used when verifying the extracted certificate.
    #[arg(long, default_value_t = 1e-6)]
    pub verify_tol: f64,
    /// Use the single sparse-Gram formulation for SSOS instead of clique blocks.
    #[arg(long)]
    pub sparse_gram: bool,
}

#[derive(Args, Debug)]
pub struct CertifyArgs {
    /// Polynomial JSON file ("-" for stdin).
    pub input: PathBuf,
    #[command(flatten)]
    pub solve: SolveFlags,
    /// Write the bare certificate JSON here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write the compiled conic program in the text dump format.
    #[arg(long)]
    pub dump_conic: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CertifyMatrixArgs {
    /// Polynomial matrix JSON file ("-" for stdin).
    pub input: PathBuf,
    /// Sparsity pattern JSON (`{"n": r, "edges": [[1, 2], ...]}`); defaults to the nonzero pattern.
    #[arg(long)]
    pub pattern: Option<PathBuf>,
    #[command(flatten)]
    pub solve: SolveFlags,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub dump_conic: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct LowerboundArgs {
    pub input: PathBuf,
    #[command(flatten)]
    pub solve: SolveFlags,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// broyden, matrix, copositive or lyapunov.
    pub family: Family,
    /// Variable counts (Broyden, Lyapunov).
    #[arg(long, value_delimiter = ',', default_values_t = [10usize])]
    pub n: Vec<usize>,
    /// Matrix sides (matrix family).
    #[arg(long, value_delimiter = ',', default_values_t = [30usize])]
    pub r: Vec<usize>,
    /// Numbers of diagonal blocks (copositive).
    #[arg(long, value_delimiter = ',', default_values_t = [2usize])]
    pub l: Vec<usize>,
    /// Block size (copositive).
    #[arg(long, default_value_t = 3)]
    pub e: usize,
    /// Arrow-head size (copositive).
    #[arg(long, default_value_t = 2)]
    pub h: usize,
    /// Number of seeds per parameter set.
    #[arg(long, default_value_t = 1)]
    pub seeds: u64,
    /// First seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Cones to run.
    #[arg(long, value_delimiter = ',', default_values_t = ConeKind::ALL)]
    pub cones: Vec<ConeKind>,
    /// Lyapunov box multipliers: on, off or both.
    #[arg(long, default_value = "both")]
    pub multipliers: String,
    /// Skip cells whose largest PSD block side exceeds this.
    #[arg(long)]
    pub size_cap: Option<usize>,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long, default_value_t = 1e-8)]
    pub feas_tol: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub verify_tol: f64,
    /// CSV output file (stdout when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Polynomial or polynomial matrix JSON.
    pub input: PathBuf,
    /// Certificate JSON, bare or as printed by `certify`.
    pub certificate: PathBuf,
    /// Check the Gram blocks against this cone instead of the certificate's own.
    #[arg(long = "as")]
    pub as_kind: Option<ConeKind>,
    #[arg(long, default_value_t = 1e-6)]
    pub verify_tol: f64,
}

#[derive(Args, Debug)]
pub struct GraphInfoArgs {
    pub input: PathBuf,
    #[arg(long)]
    pub degree: Option<u32>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .target(env_logger::Target::Stderr)
        .init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
