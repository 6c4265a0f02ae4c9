use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "pgt", version, about = "Spectra, transfer probabilities and pretty-good-transfer searches for staggered spin chains")]
pub struct Cli {
    /// Worker threads for parallel sections (defaults to all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Write the primary artifact here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Chain selection shared by several commands.
#[derive(Debug, Args, Clone)]
pub struct ChainArgs {
    /// Number of sites (even, at least 4).
    #[arg(long)]
    pub n: usize,

    /// Second coupling, e.g. `2`, `0.5` or `4/3`.
    #[arg(long, required_unless_present = "scl", conflicts_with = "scl")]
    pub j2: Option<String>,

    /// Strong-coupling limit instead of a finite coupling.
    #[arg(long)]
    pub scl: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenvalues and end-site amplitudes.
    Spectrum {
        #[command(flatten)]
        chain: ChainArgs,
        /// Working precision in bits.
        #[arg(long, default_value_t = 128)]
        prec: u32,
        /// Printed decimal digits (defaults to what the precision supports).
        #[arg(long)]
        digits: Option<u32>,
    },
    /// Transfer probability on an evenly spaced grid `0..=t_max`.
    Evolve {
        #[command(flatten)]
        chain: ChainArgs,
        /// Final time: `8pi`, `12pi/2`, `q=408` (multiples of pi/2) or a decimal.
        #[arg(long)]
        t_max: String,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 12)]
        digits: u32,
    },
    /// Level-by-level search for near-perfect transfer times.
    PgtSearch {
        #[command(flatten)]
        chain: ChainArgs,
        #[arg(long, default_value_t = 30)]
        levels: u32,
        #[arg(long, default_value_t = 6)]
        digits: u32,
        /// Work budget in candidate-irrational evaluations.
        #[arg(long, default_value_t = 1_000_000_000)]
        budget: u128,
        /// Where to write the staircase CSV (defaults to the output path with a `.csv` extension).
        #[arg(long)]
        staircase: Option<PathBuf>,
    },
    /// Periodicity analysis of the four-site chain at a rational coupling.
    Periodicity {
        /// Rational coupling, e.g. `4/3`.
        #[arg(long)]
        j2: String,
        #[arg(long, default_value_t = 12)]
        digits: u32,
    },
    /// Power-law fit of a staircase CSV (columns `time` and `epsilon`).
    Fit {
        /// Staircase CSV written by `pgt-search`.
        #[arg(long)]
        input: PathBuf,
    },
    /// Transfer probability at a fixed time across a coupling grid.
    Crossover {
        /// Number of sites.
        #[arg(long)]
        n: usize,
        /// Evaluation time; `q=Q` means Q pi.
        #[arg(long)]
        t: String,
        /// Smallest J2 on the grid.
        #[arg(long)]
        j2_min: f64,
        /// Largest J2 on the grid.
        #[arg(long)]
        j2_max: f64,
        #[arg(long, default_value_t = 50)]
        points: usize,
        /// Logarithmic spacing.
        #[arg(long)]
        log: bool,
        #[arg(long, default_value_t = 12)]
        digits: u32,
    },
    /// Site occupation of every eigenstate.
    Localization {
        /// Number of sites.
        #[arg(long)]
        n: usize,
        /// Second coupling.
        #[arg(long)]
        j2: String,
        #[arg(long, default_value_t = 30)]
        digits: u32,
    },
    /// Cross-checks the closed forms and the series against the independent oracle.
    Validate {
        /// Largest chain length checked.
        #[arg(long, default_value_t = 32)]
        max_n: usize,
        /// Random times per chain.
        #[arg(long, default_value_t = 3)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}
