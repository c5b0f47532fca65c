use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(
    name = "splinegram",
    version,
    about = "Gram matrices, Laurent symbols and spectra of B-spline Gabor systems"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Samples of t^[ℓ](x) in both closed forms, with extrema
    Symbol,
    /// The full n²×n² Gram matrix
    Gram,
    /// One block G^[ℓ] with its Toeplitz and phase factors
    Block,
    /// Eigenvalues of G_n and G_n^[0], interlacing and symbol estimates
    Spectrum,
    /// Spectral widths over an ℓ range and their fitted power law
    Decay,
    /// Circulant approximant: first row, eigenvalues, Hilbert–Schmidt gap
    Circulant,
    /// Frame-bound sequences A_n, B_n over an n-list
    Framebounds,
    /// Data behind one of the five figures (--figure 1..5)
    Figure,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Symbol => "symbol",
            Command::Gram => "gram",
            Command::Block => "block",
            Command::Spectrum => "spectrum",
            Command::Decay => "decay",
            Command::Circulant => "circulant",
            Command::Framebounds => "framebounds",
            Command::Figure => "figure",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// How complex matrices are split into two real matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ComplexRepr {
    ReIm,
    MagPhase,
}

#[derive(Debug, Clone, Args)]
pub struct Options {
    /// Time-shift step a
    #[arg(long = "a", global = true)]
    pub a: Option<f64>,
    /// Frequency-shift step b
    #[arg(long = "b", global = true)]
    pub b: Option<f64>,
    /// B-spline order N
    #[arg(long, global = true)]
    pub order: Option<usize>,
    /// Odd truncation size n
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Modulation difference ℓ
    #[arg(long, global = true, allow_hyphen_values = true, conflicts_with = "ell_range")]
    pub ell: Option<i64>,
    /// Inclusive ℓ range, `lo..hi` or `lo:hi`
    #[arg(long, global = true, value_parser = parse_range)]
    pub ell_range: Option<(i64, i64)>,
    /// Sample count on [-1/2, 1/2]
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// Truncation tolerance of the sinc-sum symbol
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Comma-separated truncation sizes
    #[arg(long, global = true, value_delimiter = ',')]
    pub n_list: Option<Vec<usize>>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; a directory for `figure`. Standard output when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_parser = clap::value_parser!(u8).range(1..=5))]
    pub figure: Option<u8>,
    /// Record a timestamp in the metadata (breaks byte-identical reruns)
    #[arg(long, global = true)]
    pub stamp: bool,
    #[arg(long, global = true, value_enum, default_value_t = ComplexRepr::ReIm)]
    pub complex: ComplexRepr,
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s
        .split_once("..")
        .or_else(|| s.split_once(':'))
        .ok_or_else(|| format!("expected lo..hi or lo:hi, got {s:?}"))?;
    let lo: i64 = lo.trim().parse().map_err(|e| format!("bad range start: {e}"))?;
    let hi: i64 = hi.trim().parse().map_err(|e| format!("bad range end: {e}"))?;
    if hi < lo {
        return Err(format!("empty range {lo}..{hi}"));
    }
    Ok((lo, hi))
}
