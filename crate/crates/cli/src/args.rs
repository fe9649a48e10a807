use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use duopoly_core::dynamics::{DEFAULT_BURN_IN, DEFAULT_KEEP, DEFAULT_PIECE_GAP, DEFAULT_P_MAX, DEFAULT_TOL};
use duopoly_core::model::{LmaReading, ModelKind, State};

#[derive(Debug, Clone, Parser)]
#[command(name = "duopoly", version, about = "Stability certificates and bifurcation scans for heterogeneous Cournot duopolies")]
#[command(args_override_self = true, propagate_version = true)]
pub struct Cli {
    /// key=value file supplying defaults for any flag; command-line flags win
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Nash equilibrium, price and profits
    Equilibrium(EquilibriumArgs),
    /// Certificate and Jury verdicts at a point, or a stability cross-section
    Stability(StabilityArgs),
    /// Re-derive the stability polynomials through resultants
    VerifyIdentities(VerifyArgs),
    /// Re-check every recorded sample point
    Tables(TablesArgs),
    /// Bifurcation diagram over delta
    Scan1d(Scan1dArgs),
    /// Period map over a parameter plane
    Scan2d(Scan2dArgs),
    /// Flip threshold in delta from the governing polynomial
    Flip(FlipArgs),
    /// Lyapunov exponent of the one-dimensional GR map
    Lyapunov(LyapunovArgs),
    /// Attractor points and piece count
    Phase(PhaseArgs),
    /// Test that one stability region lies inside another on a grid
    CompareRegions(CompareArgs),
    /// Stability under linear costs
    LinearCost(LinearCostArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Equilibrium(_) => "equilibrium",
            Command::Stability(_) => "stability",
            Command::VerifyIdentities(_) => "verify-identities",
            Command::Tables(_) => "tables",
            Command::Scan1d(_) => "scan1d",
            Command::Scan2d(_) => "scan2d",
            Command::Flip(_) => "flip",
            Command::Lyapunov(_) => "lyapunov",
            Command::Phase(_) => "phase",
            Command::CompareRegions(_) => "compare-regions",
            Command::LinearCost(_) => "linear-cost",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Artifact path; standard output when absent
    #[arg(long, short, value_name = "PATH")]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlaneArg {
    /// (c1, delta) with c2 = c1
    C1Delta,
    /// (c1, c2) at fixed delta
    #[value(name = "c1-c2")]
    C1C2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Coordinate {
    X1,
    X2,
    Both,
}

#[derive(Debug, Clone, Args)]
pub struct EquilibriumArgs {
    #[arg(long, value_parser = positive)]
    pub c1: f64,
    #[arg(long, value_parser = positive)]
    pub c2: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct StabilityArgs {
    /// One or more of gr, gb, gl
    #[arg(long, value_parser = model_kind, value_delimiter = ',', required = true)]
    pub model: Vec<ModelKind>,
    #[arg(long, value_parser = positive)]
    pub c1: Option<f64>,
    #[arg(long, value_parser = positive)]
    pub c2: Option<f64>,
    #[arg(long, value_parser = positive)]
    pub delta: Option<f64>,
    /// Render a cross-section over this plane instead of a single point
    #[arg(long, value_enum)]
    pub plane: Option<PlaneArg>,
    #[arg(long, value_parser = range, value_name = "LO:HI")]
    pub p1_range: Option<(f64, f64)>,
    #[arg(long, value_parser = range, value_name = "LO:HI")]
    pub p2_range: Option<(f64, f64)>,
    #[arg(long, value_parser = resolution_2d, default_value = "200", value_name = "N|N1xN2")]
    pub resolution: (usize, usize),
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Defaults to all three models
    #[arg(long, value_parser = model_kind, value_delimiter = ',')]
    pub model: Vec<ModelKind>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct TablesArgs {
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct DynamicsArgs {
    #[arg(long, value_parser = model_kind)]
    pub model: ModelKind,
    /// Argument order of the LMA rule (GL only)
    #[arg(long, value_parser = lma_reading, default_value = "derived")]
    pub lma: LmaReading,
    #[arg(long, value_parser = state, default_value = "0.5,0.5", value_name = "X1,X2")]
    pub x0: State,
    #[arg(long, default_value_t = DEFAULT_BURN_IN)]
    pub burn_in: usize,
}

#[derive(Debug, Clone, Args)]
pub struct DetectArgs {
    #[arg(long, default_value_t = DEFAULT_KEEP)]
    pub keep: usize,
    #[arg(long, value_parser = at_least_one, default_value_t = DEFAULT_P_MAX)]
    pub p_max: usize,
    #[arg(long, value_parser = positive, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
}

#[derive(Debug, Clone, Args)]
pub struct Scan1dArgs {
    #[command(flatten)]
    pub dynamics: DynamicsArgs,
    #[command(flatten)]
    pub detect: DetectArgs,
    #[arg(long, value_parser = positive)]
    pub c1: f64,
    #[arg(long, value_parser = positive)]
    pub c2: f64,
    #[arg(long, value_parser = range, value_name = "LO:HI")]
    pub delta_range: (f64, f64),
    #[arg(long, value_parser = resolution_1d, default_value = "450")]
    pub resolution: usize,
    /// Trailing attractor samples kept per cell
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    /// Coordinate plotted in SVG output
    #[arg(long, value_enum, default_value = "x1")]
    pub coordinate: Coordinate,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct Scan2dArgs {
    #[command(flatten)]
    pub dynamics: DynamicsArgs,
    #[command(flatten)]
    pub detect: DetectArgs,
    #[arg(long, value_enum)]
    pub plane: PlaneArg,
    /// Fixed delta for the c1-c2 plane
    #[arg(long, value_parser = positive)]
    pub delta: Option<f64>,
    #[arg(long, value_parser = range, value_name = "LO:HI")]
    pub p1_range: (f64, f64),
    #[arg(long, value_parser = range, value_name = "LO:HI")]
    pub p2_range: (f64, f64),
    #[arg(long, value_parser = resolution_2d, default_value = "100", value_name = "N|N1xN2")]
    pub resolution: (usize, usize),
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct FlipArgs {
    #[arg(long, value_parser = model_kind)]
    pub model: ModelKind,
    #[arg(long, value_parser = positive)]
    pub c1: f64,
    #[arg(long, value_parser = positive)]
    pub c2: f64,
    #[arg(long, value_parser = range, default_value = "0.01:10", value_name = "LO:HI")]
    pub bracket: (f64, f64),
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct LyapunovArgs {
    #[arg(long, value_parser = positive)]
    pub c1: f64,
    #[arg(long, value_parser = positive)]
    pub c2: f64,
    #[arg(long, value_parser = positive)]
    pub delta: f64,
    /// Initial output of the first firm
    #[arg(long, value_parser = positive, default_value_t = 0.5)]
    pub x1: f64,
    #[arg(long, default_value_t = DEFAULT_BURN_IN)]
    pub burn_in: usize,
    /// Steps averaged after burn-in
    #[arg(long, value_parser = at_least_one, default_value_t = 10_000)]
    pub keep: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct PhaseArgs {
    #[command(flatten)]
    pub dynamics: DynamicsArgs,
    #[arg(long, value_parser = positive)]
    pub c1: f64,
    #[arg(long, value_parser = positive)]
    pub c2: f64,
    #[arg(long, value_parser = positive)]
    pub delta: f64,
    #[arg(long, value_parser = at_least_one, default_value_t = 10_000)]
    pub keep: usize,
    /// Single-linkage gap as a fraction of the bounding-box diagonal
    #[arg(long, value_parser = positive, default_value_t = DEFAULT_PIECE_GAP)]
    pub gap: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    #[arg(long, value_parser = model_kind, default_value = "gr")]
    pub subset: ModelKind,
    #[arg(long, value_parser = model_kind, default_value = "gb")]
    pub superset: ModelKind,
    #[arg(long, value_parser = positive, default_value_t = 20.0)]
    pub c1_max: f64,
    #[arg(long, value_parser = positive, default_value_t = 20.0)]
    pub c2_max: f64,
    #[arg(long, value_parser = positive, default_value_t = 5.0)]
    pub delta_max: f64,
    /// Points per axis as N1xN2xN3
    #[arg(long, value_parser = resolution_3d, default_value = "50x50x40")]
    pub grid: (usize, usize, usize),
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct LinearCostArgs {
    #[arg(long, value_parser = positive)]
    pub c1: f64,
    #[arg(long, value_parser = positive)]
    pub c2: f64,
    #[arg(long, value_parser = positive)]
    pub delta: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

fn number(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("'{s}' is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("'{s}' is not finite"))
    }
}

pub fn positive(s: &str) -> Result<f64, String> {
    let v = number(s)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(format!("{v} must be positive"))
    }
}

fn at_least_one(s: &str) -> Result<usize, String> {
    match s.trim().parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(format!("'{s}' must be a positive integer")),
    }
}

fn model_kind(s: &str) -> Result<ModelKind, String> {
    s.trim().parse()
}

fn lma_reading(s: &str) -> Result<LmaReading, String> {
    s.trim().parse()
}

/// `LO:HI` with `0 <= LO < HI`.
pub fn range(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("'{s}' is not of the form LO:HI"))?;
    let (lo, hi) = (number(a)?, number(b)?);
    if lo < 0.0 || lo >= hi {
        return Err(format!("range {lo}:{hi} must satisfy 0 <= LO < HI"));
    }
    Ok((lo, hi))
}

pub fn state(s: &str) -> Result<State, String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("'{s}' is not of the form X1,X2"))?;
    Ok(State::new(positive(a)?, positive(b)?))
}

fn cells(s: &str) -> Result<usize, String> {
    match s.trim().parse::<usize>() {
        Ok(n) if n >= 2 => Ok(n),
        _ => Err(format!("resolution '{s}' must be an integer of at least 2")),
    }
}

fn resolution_1d(s: &str) -> Result<usize, String> {
    cells(s)
}

/// `N` for a square grid or `N1xN2`.
pub fn resolution_2d(s: &str) -> Result<(usize, usize), String> {
    match s.split_once('x') {
        Some((a, b)) => Ok((cells(a)?, cells(b)?)),
        None => cells(s).map(|n| (n, n)),
    }
}

fn resolution_3d(s: &str) -> Result<(usize, usize, usize), String> {
    let parts: Vec<&str> = s.split('x').collect();
    match parts[..] {
        [a, b, c] => Ok((cells(a)?, cells(b)?, cells(c)?)),
        _ => Err(format!("grid '{s}' is not of the form N1xN2xN3")),
    }
}
