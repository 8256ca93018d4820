use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Build block matrices and graph joins with predicted spectra, and audit
/// the predictions.
#[derive(Debug, Parser)]
#[command(name = "spectral-forge", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Write the primary artifact here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Print the full audit report on stderr.
    #[arg(long, global = true)]
    pub verify: bool,
    /// Spectrum match tolerance (overrides SPECTRAL_FORGE_TOL).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Seed for random relabelling.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Mtx,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Assemble a coupled block system from a JSON description.
    Assemble {
        #[arg(long)]
        input: PathBuf,
    },
    /// Two symmetric blocks coupled by a scalar.
    Fiedler {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        rho: f64,
        #[arg(long, default_value_t = 0.0)]
        rho11: f64,
        #[arg(long, default_value_t = 0.0)]
        rho22: f64,
    },
    /// Block system whose coupling only links consecutive blocks.
    Chain {
        #[arg(long)]
        input: PathBuf,
    },
    /// Nonnegative blocks with a circulant coupling matrix.
    Circulant {
        #[arg(long)]
        input: PathBuf,
        /// First coupling row; defaults to the first row of "rho" in the input.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        rho: Option<Vec<f64>>,
    },
    /// Scaled join of two doubly stochastic matrices.
    DsJoin {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        rho: f64,
    },
    /// Affine join of two doubly stochastic matrices.
    DsJoinAffine {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        alpha: f64,
        #[arg(long, default_value_t = 0.0)]
        rho: f64,
    },
    /// Full join of regular graphs given as edge lists.
    GraphJoin {
        #[arg(long = "graph", required = true)]
        graphs: Vec<PathBuf>,
    },
    /// Complete multipartite graph.
    Multipartite {
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
    },
    /// Join of a regular graph with relabelled copies of itself.
    IsoJoin {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Join along a path of regular graphs.
    ChainJoin {
        #[arg(long = "graph", required = true)]
        graphs: Vec<PathBuf>,
    },
    /// Audit a matrix against a claimed spectrum.
    Verify {
        #[arg(long)]
        input: PathBuf,
    },
    /// Energy of a graph or of a spectrum.
    Energy {
        #[arg(long, conflicts_with = "input", required_unless_present = "input")]
        graph: Option<PathBuf>,
        #[arg(long)]
        input: Option<PathBuf>,
    },
}
