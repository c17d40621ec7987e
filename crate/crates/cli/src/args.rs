use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cso_core::Complex;

#[derive(Debug, Parser)]
#[command(name = "cso", version, about = "Composition sum operator diagnostics and fixed points")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Write the report (or CSV, for `golden figure`) here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Add wall time to the report. Reports are then no longer reproducible
    /// byte for byte.
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Contraction ratios, polynomial fixed-point degrees, independence and
    /// simplicity for an operator.
    Diagnose(DiagnoseArgs),
    /// Construct a fixed point from a singular seed.
    Fixpoint(FixpointArgs),
    /// Golden-mean experiments.
    #[command(subcommand)]
    Golden(GoldenCommand),
    /// Polynomial fixed points up to a degree.
    Polyfix(PolyfixArgs),
}

#[derive(Debug, Args)]
pub struct ConfigArgs {
    /// Operator definition (JSON).
    #[arg(long)]
    pub config: PathBuf,

    /// Override the disc radius from the config.
    #[arg(long)]
    pub radius: Option<f64>,
}

#[derive(Debug, Args)]
pub struct DiagnoseArgs {
    #[command(flatten)]
    pub config: ConfigArgs,

    /// Diagnose the pinned operator `Tf - Tf(c)` instead, `c` as `re[,im]`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub pinned: Option<Complex>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SeedKind {
    Log,
    Pole,
}

#[derive(Debug, Args)]
pub struct FixpointArgs {
    #[command(flatten)]
    pub config: ConfigArgs,

    #[arg(long, value_enum, default_value = "log")]
    pub seed: SeedKind,

    /// Seed location `re[,im]`; must be the fixed point of one map.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub at: Complex,

    /// Pole order for `--seed pole`.
    #[arg(long, default_value_t = 1)]
    pub pole_order: u32,

    /// Seed weight `re[,im]`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "1")]
    pub weight: Complex,

    /// Construction route; see `RouteRegistry`.
    #[arg(long, default_value = "direct")]
    pub route: String,

    /// Derivative order for the derivative route (chosen automatically if
    /// absent).
    #[arg(long)]
    pub order: Option<u32>,

    /// Projection index for the generalized route (chosen automatically if
    /// absent).
    #[arg(long)]
    pub pin: Option<usize>,

    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Debug, Subcommand)]
pub enum GoldenCommand {
    /// Engine fixed points against the word expansion.
    Fp(GoldenFpArgs),
    /// Partial products of the product identity.
    Identity(DepthArgs<16>),
    /// Figure data as CSV.
    Figure(FigureArgs),
    /// Spectrum of the zero-shear operator on polynomials.
    Sfs(SfsArgs),
}

#[derive(Debug, Args)]
pub struct DepthArgs<const D: usize> {
    #[arg(long, default_value_t = D)]
    pub depth: usize,
}

#[derive(Debug, Args)]
pub struct GoldenFpArgs {
    #[arg(long, default_value_t = 18)]
    pub depth: usize,
    #[arg(long, default_value_t = 2.0)]
    pub radius: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    #[arg(long, default_value_t = 18)]
    pub depth: usize,
    /// Evaluate grid points in parallel.
    #[arg(long)]
    pub parallel: bool,
}

#[derive(Debug, Args)]
pub struct SfsArgs {
    /// Polynomials of degree below `2n`.
    #[arg(long, default_value_t = 3)]
    pub n: usize,
}

#[derive(Debug, Args)]
pub struct PolyfixArgs {
    #[command(flatten)]
    pub config: ConfigArgs,

    /// Largest degree searched.
    #[arg(long, default_value_t = 50)]
    pub max_degree: usize,

    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
}

/// `re` or `re,im`.
pub fn parse_complex(s: &str) -> Result<Complex, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |p: &str| p.parse::<f64>().map_err(|e| format!("bad number {p:?}: {e}"));
    let z = match parts.as_slice() {
        [re] => Complex::new(num(re)?, 0.0),
        [re, im] => Complex::new(num(re)?, num(im)?),
        _ => return Err(format!("expected re or re,im, got {s:?}")),
    };
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(format!("non-finite value {s:?}"))
    }
}
