use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "spinpoly",
    version,
    about = "Spin-j rotation matrices as finite spin polynomials"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the rotation matrix exp(iθ n̂·J).
    Rotate(RotateArgs),
    /// Print the exact coefficient polynomials c_k for one spin.
    Coeffs(CoeffsArgs),
    /// Write c_k(θ) sin^k(θ/2) on a θ grid as CSV.
    Sweep(SweepArgs),
    /// Run the cross-checks and report the worst residual of each.
    Verify(VerifyArgs),
    /// Time the polynomial paths against the dense exponential.
    Bench(BenchArgs),
    /// Print the nonzero resolution coefficients, one spin per line.
    Triangles(TrianglesArgs),
    /// Sup-distance of c_k sin^k(θ/2) from its large-spin limit, as CSV.
    Convergence(ConvergenceArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Poly,
    Oracle,
    Vandermonde,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MatrixFormat {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CoeffFormat {
    Rational,
    Decimal,
}

#[derive(Debug, Args)]
pub struct RotateArgs {
    /// Twice the spin, 2j.
    #[arg(long)]
    pub twice_j: u32,
    /// Rotation angle, radians unless --degrees is given.
    #[arg(long, allow_hyphen_values = true)]
    pub theta: f64,
    /// Axis as x,y,z; normalized internally.
    #[arg(long, default_value = "0,0,1", allow_hyphen_values = true)]
    pub axis: String,
    #[arg(long)]
    pub degrees: bool,
    #[arg(long, value_enum, default_value_t = Method::Poly)]
    pub method: Method,
    #[arg(long, value_enum, default_value_t = MatrixFormat::Text)]
    pub out: MatrixFormat,
}

#[derive(Debug, Args)]
pub struct CoeffsArgs {
    #[arg(long)]
    pub twice_j: u32,
    #[arg(long, value_enum, default_value_t = CoeffFormat::Rational)]
    pub format: CoeffFormat,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub twice_j: u32,
    #[arg(long)]
    pub k: u32,
    #[arg(long, allow_hyphen_values = true, default_value_t = -2.0 * std::f64::consts::PI)]
    pub theta_min: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 2.0 * std::f64::consts::PI)]
    pub theta_max: f64,
    #[arg(long, default_value_t = 2001)]
    pub n_points: usize,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 8)]
    pub max_twice_j: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Perturb one coefficient before checking (negative control).
    #[cfg(debug_assertions)]
    #[arg(long, hide = true)]
    pub corrupt_coefficient: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Spins to time, as 2j values separated by commas.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pub twice_j: Vec<u32>,
    #[arg(long, default_value_t = 5)]
    pub reps: usize,
}

#[derive(Debug, Args)]
pub struct TrianglesArgs {
    #[arg(long, default_value_t = 12)]
    pub max_twice_j: u32,
}

#[derive(Debug, Args)]
pub struct ConvergenceArgs {
    #[arg(long)]
    pub k: u32,
    /// 0 for integer spins, 1 for half-integer spins.
    #[arg(long, value_parser = clap::value_parser!(u32).range(0..=1))]
    pub parity: u32,
    /// Ascending 2j values of the given parity, separated by commas.
    #[arg(long, value_delimiter = ',', required = true)]
    pub twice_j: Vec<u32>,
    #[arg(long, default_value_t = 2001)]
    pub n_points: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
