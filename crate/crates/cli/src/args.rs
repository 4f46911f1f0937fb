use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "selberg",
    version,
    about = "Selberg zeta functions of compact hyperbolic surfaces"
)]
pub struct Cli {
    /// Working precision in significant decimal digits (at least 20).
    #[arg(long, global = true, default_value_t = 40)]
    pub precision: u32,

    /// `bolza` or a generator file with `gen a b c d` lines.
    #[arg(long, global = true, default_value = "bolza")]
    pub group: String,

    /// Genus of the surface; used when the group file has no `# genus` header
    /// and by the cohomology suites.
    #[arg(long, global = true, default_value_t = 2)]
    pub genus: u32,

    /// Largest geodesic length to enumerate.
    #[arg(long = "Lmax", global = true, default_value = "10")]
    pub l_max: String,

    /// Last index `k` kept in each local factor.
    #[arg(long = "Kmax", global = true, default_value_t = 20)]
    pub k_max: u32,

    /// Laplace spectrum file (`# complete_below x`, `mu x mult n` lines).
    #[arg(long, global = true)]
    pub spectrum: Option<PathBuf>,

    /// Directory for cache and result files.
    #[arg(
        long,
        global = true,
        env = "SELBERG_OUT_DIR",
        default_value = "selberg-out"
    )]
    pub out: PathBuf,

    /// Recompute even when a cache file exists.
    #[arg(long, global = true)]
    pub force: bool,

    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute (or load from cache) the primitive length spectrum.
    Spectrum,
    /// Evaluate the zeta function or its logarithmic derivative.
    Zeta {
        /// Spectral parameter, e.g. `1.2`, `1.2+0.5i`, `0.9-2i`.
        #[arg(allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, value_enum, default_value_t = ZetaMode::Value)]
        mode: ZetaMode,
        /// `trivial` or `theta`.
        #[arg(long, default_value = "trivial")]
        sigma: String,
    },
    /// Run a verification suite.
    Check {
        #[arg(value_enum)]
        suite: Suite,
        /// Largest half-integer index `n` visited by the suite.
        #[arg(long, default_value_t = 5)]
        nmax: u32,
        /// Seed for randomly placed sample points.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ZetaMode {
    Value,
    Logderiv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Patterson,
    Les,
    Residues,
    LocalFactor,
}
