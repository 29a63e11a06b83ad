//! `fracspace`: fractional operators, norms and the verification suite from
//! the command line.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::{Format, RunConfig};

#[derive(Debug)]
pub enum CliError {
    /// Configuration or parameter validation failure.
    Config(String),
    /// At least one check failed.
    Failed(usize),
    Io(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Failed(n) => write!(f, "{n} check(s) failed"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Config(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl From<fracspace::Error> for CliError {
    fn from(e: fracspace::Error) -> Self {
        match e {
            fracspace::Error::Io(m) => CliError::Io(m),
            other => CliError::Config(other.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "fracspace", version, about = "Fractional gradients, Bessel potentials and fractional Sobolev norms")]
struct Cli {
    /// JSON run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output formats, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    format: Option<Vec<Format>>,
    /// Grid as `NxL`: points per axis and extent.
    #[arg(long, global = true)]
    grid: Option<String>,
    /// Grid dimension used with `--grid`.
    #[arg(long, global = true)]
    dim: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Input {
    /// Corpus entry to use as input.
    #[arg(long, default_value = "gaussian", conflicts_with = "input")]
    label: String,
    /// Field header (`.json`) with samples in the sibling `.bin`.
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GradientMethod {
    Spectral,
    Quadrature,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum NormChoice {
    Gagliardo,
    Holder,
    Dsp,
    Lp,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Riesz fractional gradient of a field.
    Gradient {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 0.5)]
        s: f64,
        #[arg(long, value_enum, default_value_t = GradientMethod::Spectral)]
        method: GradientMethod,
    },
    /// Bessel potential of a field.
    Bessel {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 0.5)]
        s: f64,
    },
    /// One norm or seminorm of a field.
    Norm {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum)]
        kind: NormChoice,
        #[arg(long, default_value_t = 0.5)]
        s: f64,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value_t = 0.5)]
        mu: f64,
    },
    /// Reconstruction check over the corpus.
    FtcCheck {
        /// Smoothness orders, comma separated.
        #[arg(long, value_delimiter = ',')]
        s: Option<Vec<f64>>,
    },
    /// Translation moduli over corpus entries, exponents and shifts.
    TranslationSweep {
        #[arg(long, value_delimiter = ',')]
        p: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',')]
        h: Option<Vec<f64>>,
    },
    /// Embedding ratios over corpus entries and target exponents.
    EmbeddingSweep {
        #[arg(long, value_delimiter = ',')]
        s: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',')]
        p: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',')]
        q: Option<Vec<f64>>,
    },
    /// L1 norm of the translated kernel difference over s.
    KernelL1 {
        #[arg(long, value_delimiter = ',')]
        s: Option<Vec<f64>>,
    },
    /// K-functional curve of one field.
    Kfunctional {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
    },
    /// Runs the verification suite.
    Verify,
}

fn parse_grid(spec: &str, dim: usize) -> Result<fracspace::GridConfig, CliError> {
    let bad = || CliError::Config(format!("--grid expects NxL, got `{spec}`"));
    let (n, l) = spec.split_once('x').ok_or_else(bad)?;
    Ok(fracspace::GridConfig {
        dim,
        points_per_axis: n.trim().parse().map_err(|_| bad())?,
        extent: l.trim().parse().map_err(|_| bad())?,
    })
}

fn resolve(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &cli.out {
        cfg.output_dir = out.clone();
    }
    if let Some(f) = &cli.format {
        cfg.formats = f.clone();
    }
    match (&cli.grid, cli.dim) {
        (Some(g), dim) => cfg.grid = parse_grid(g, dim.unwrap_or(cfg.grid.dim))?,
        (None, Some(dim)) => cfg.grid.dim = dim,
        (None, None) => {}
    }
    cfg.grid.build::<f64>()?;
    Ok(cfg)
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = resolve(&cli)?;
    match cli.command {
        Command::Gradient { input, s, method } => commands::gradient(&cfg, &input, s, method),
        Command::Bessel { input, s } => commands::bessel(&cfg, &input, s),
        Command::Norm { input, kind, s, p, mu } => commands::norm(&cfg, &input, kind, s, p, mu),
        Command::FtcCheck { s } => commands::ftc_check(&cfg, s),
        Command::TranslationSweep { p, h } => commands::translation_sweep(&cfg, p, h),
        Command::EmbeddingSweep { s, p, q } => commands::embedding_sweep(&cfg, s, p, q),
        Command::KernelL1 { s } => commands::kernel_l1(&cfg, s),
        Command::Kfunctional { input, p } => commands::kfunctional(&cfg, &input, p),
        Command::Verify => commands::verify(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fracspace: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
