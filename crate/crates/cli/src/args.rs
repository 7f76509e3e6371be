use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::parse::{parse_complex, parse_time, Time};

#[derive(Debug, Parser)]
#[command(name = "laguerre", version, about = "Evolution kernel of the discrete Laguerre operator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// One kernel entry K(n, m, t).
    Kernel(KernelArgs),
    /// The kernel on 0..dim at one time.
    Matrix(MatrixArgs),
    /// Sup norm or a dispersive bound scanned over n, m < dim.
    NormScan(NormScanArgs),
    /// Run the verification suites.
    Verify(VerifyArgs),
    /// Linear or nonlinear evolution of an initial state.
    Evolve(EvolveArgs),
    /// Resolvent kernel G(z; n, m).
    Resolvent(ResolventArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Jacobi-polynomial closed form.
    Closed,
    /// Exact rational moment sum.
    Moment,
    /// Gauss-Laguerre quadrature of the spectral integral.
    Quadrature,
    /// Matrix exponential of a finite section.
    Expm,
    /// Fourier convolution of two one-site profiles.
    Convolution,
    /// Terminating hypergeometric sum.
    Hypergeometric,
}

#[derive(Debug, Args)]
pub struct KernelArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub m: usize,
    /// Time; a decimal or a fraction `p/q`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_time)]
    pub t: Time,
    #[arg(long, value_enum, default_value_t = Method::Closed)]
    pub method: Method,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct MatrixArgs {
    #[arg(long)]
    pub dim: usize,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_time)]
    pub t: Time,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScanQuantity {
    /// max |K| against 1/sqrt(1+t²).
    Sup,
    /// The t^{-1/2}(n+m+1)^{-1/4} decay bound.
    Decay,
    /// The band bound (1+|m-n|)/sqrt(1+t²).
    Band,
    /// The diagonal Bernstein bound.
    Bernstein,
    /// Polynomially weighted sup norm, with --sigma.
    Weighted,
}

#[derive(Debug, Args)]
pub struct NormScanArgs {
    /// A single time; otherwise a log grid from --t-min to --t-max.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_time, conflicts_with_all = ["t_min", "t_max"])]
    pub t: Option<Time>,
    #[arg(long, default_value_t = 0.01)]
    pub t_min: f64,
    #[arg(long, default_value_t = 100.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 40)]
    pub per_decade: usize,
    #[arg(long)]
    pub dim: usize,
    #[arg(long, value_enum, default_value_t = ScanQuantity::Sup)]
    pub quantity: ScanQuantity,
    /// Weight exponent for the weighted quantity.
    #[arg(long, default_value_t = 0.0)]
    pub sigma: f64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    Polynomials,
    Operator,
    Kernel,
    Oracles,
    Estimates,
    Dynamics,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    /// Largest polynomial index used by the index-range checks.
    #[arg(long, default_value_t = 20)]
    pub max_nm: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Series {
    /// `t, l2, linf` per step.
    Summary,
    /// `t, n, re, im` per step and site.
    Trajectory,
}

#[derive(Debug, Args)]
pub struct EvolveArgs {
    /// Initial state: `delta<k>` for a unit mass at site k, or a list of
    /// complex amplitudes such as `1,0.5i,-0.25`.
    #[arg(long, allow_hyphen_values = true)]
    pub init: String,
    /// Final time.
    #[arg(long = "T")]
    pub t_final: f64,
    /// Time step; must divide T.
    #[arg(long)]
    pub dt: f64,
    /// Add the focusing nonlinearity |ψ|^{2σ}ψ.
    #[arg(long)]
    pub nls: bool,
    /// Power σ of the nonlinearity.
    #[arg(long, default_value_t = 1)]
    pub sigma: u32,
    /// Initial working dimension; grows as mass spreads.
    #[arg(long, default_value_t = 64)]
    pub dim: usize,
    #[arg(long, value_enum, default_value_t = Series::Summary)]
    pub series: Series,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct ResolventArgs {
    /// Spectral parameter off [0, ∞), e.g. `-1`, `1+2i`, `-0.5i`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    pub z: laguerre_core::Complex64,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub m: usize,
    #[command(flatten)]
    pub output: Output,
}
