use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "hdx", version, about = "Cochains, Cheeger constants and covers of polygonal complexes")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Global {
    /// Seed for every random choice.
    #[arg(long, global = true, env = "HDX_SEED", default_value_t = 42)]
    pub seed: u64,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Eigenvalue agreement tolerance.
    #[arg(long, global = true)]
    pub tol_eigenvalue: Option<f64>,
    /// Slack on floating-point inequality checks.
    #[arg(long, global = true)]
    pub tol_inequality: Option<f64>,
    /// Off-diagonal norm at which Jacobi sweeps stop.
    #[arg(long, global = true)]
    pub tol_jacobi: Option<f64>,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case", tag = "subcommand")]
pub enum Command {
    /// Write a generated complex as JSON.
    Gen(GenArgs),
    /// Cheeger constants h0, h1, hB0, hB1.
    Cheeger(CheegerArgs),
    /// Least norm of a connected non-coboundary cocycle.
    Cosystole(CosystoleArgs),
    /// Link spectra and the bounds built on them.
    Spectral(SpectralArgs),
    /// The cover defined by a cochain.
    Cover(CoverArgs),
    /// Correct a cochain to a nearby cocycle.
    Correct(CorrectArgs),
    /// Corrupt-and-correct trials, written as CSV.
    Experiment(ExperimentArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Complete,
    Building,
    Presentation,
    Contracted,
    FreeProduct,
    CyclicCover,
}

#[derive(Debug, Args, Serialize)]
pub struct GenArgs {
    pub family: Family,
    /// Dimension of the simplex (complete) or size of the contracted block.
    #[arg(long)]
    pub d: Option<usize>,
    /// Field size (building); must be prime.
    #[arg(long)]
    pub q: Option<usize>,
    /// Number of sheets (cyclic-cover).
    #[arg(long)]
    pub m: Option<usize>,
    /// Presentation such as "<a, b | a b a^-1 b^-1>"; twice for free-product.
    #[arg(long = "pres")]
    pub presentations: Vec<String>,
    /// Output file (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum Kind {
    #[value(name = "h0")]
    #[serde(rename = "h0")]
    H0,
    #[value(name = "h1")]
    #[serde(rename = "h1")]
    H1,
    #[value(name = "hB0", alias = "hb0")]
    #[serde(rename = "hB0")]
    HB0,
    #[value(name = "hB1", alias = "hb1")]
    #[serde(rename = "hB1")]
    HB1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Coeff {
    Sym,
    F2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Sweep,
}

#[derive(Debug, Args, Serialize)]
pub struct CheegerArgs {
    /// One or more complex files; more than one needs --csv.
    #[arg(long, required = true, num_args = 1..)]
    pub complex: Vec<PathBuf>,
    #[arg(long, value_enum, default_value_t = Kind::H1)]
    pub kind: Kind,
    #[arg(long, value_enum, default_value_t = Coeff::F2)]
    pub coeff: Coeff,
    /// Largest degree tried for Sym coefficients.
    #[arg(long, default_value_t = 2)]
    pub nmax: usize,
    /// h0 only: subset enumeration or spectral sweep.
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    pub mode: Mode,
    /// JSON report (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// One CSV row per complex instead of a JSON report.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct CosystoleArgs {
    #[arg(long)]
    pub complex: PathBuf,
    #[arg(long, default_value_t = 3)]
    pub nmax: usize,
    /// Also check norm >= h0(cover) / 2 for every connected class.
    #[arg(long)]
    pub check_covers: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectralCheck {
    Trickle,
    CheegerLower,
    CoverBound,
    Links,
}

#[derive(Debug, Args, Serialize)]
pub struct SpectralArgs {
    #[arg(long)]
    pub complex: PathBuf,
    #[arg(long, value_enum, default_value_t = SpectralCheck::Trickle)]
    pub check: SpectralCheck,
    /// cover-bound only: largest cover degree.
    #[arg(long, default_value_t = 2)]
    pub nmax: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct CoverArgs {
    #[arg(long)]
    pub complex: PathBuf,
    #[arg(long)]
    pub cochain: PathBuf,
    /// Covering file in the complex schema plus projections.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON report (default: stdout).
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodArg {
    Complete,
    Cone,
    Exact,
}

impl From<MethodArg> for hdx_core::correction::Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Complete => Self::Complete,
            MethodArg::Cone => Self::Cone,
            MethodArg::Exact => Self::Exact,
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct CorrectArgs {
    #[arg(long)]
    pub complex: PathBuf,
    #[arg(long)]
    pub cochain: PathBuf,
    #[arg(long, value_enum, default_value_t = MethodArg::Cone)]
    pub method: MethodArg,
    #[arg(long, default_value_t = 0)]
    pub root: usize,
    #[arg(long, default_value_t = 3)]
    pub radius_budget: usize,
    #[arg(long, default_value_t = 25)]
    pub fill_budget: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct ExperimentArgs {
    #[arg(long)]
    pub complex: PathBuf,
    /// Coefficient degree.
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long = "p-corrupt", default_value_t = 0.1)]
    pub p_corrupt: f64,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, value_enum, default_value_t = MethodArg::Exact)]
    pub method: MethodArg,
    #[arg(long, default_value_t = 0)]
    pub root: usize,
    #[arg(long, default_value_t = 3)]
    pub radius_budget: usize,
    #[arg(long, default_value_t = 25)]
    pub fill_budget: usize,
    /// CSV table (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON summary.
    #[arg(long)]
    pub report: Option<PathBuf>,
}
