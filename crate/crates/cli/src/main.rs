use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;

/// Hidden shifts of difference sets and dihedral hidden subgroups, simulated exactly.
#[derive(Parser, Debug)]
#[command(name = "diffshift", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Master seed; every random choice is derived from it.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Trial count (sampling, recovery or injectivization attempts depending on the command).
    #[arg(long, global = true)]
    pub trials: Option<u64>,
    /// Override the default numerical tolerance.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    /// Input JSON document.
    #[arg(long = "in", global = true)]
    pub input: Option<PathBuf>,
    /// Write the JSON result here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Largest accepted group order.
    #[arg(long, global = true)]
    pub cap: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a difference set from one of the standard families.
    Construct {
        #[command(subcommand)]
        family: Family,
    },
    /// Certify a difference set document; exit 1 with a witness if it fails.
    Verify,
    /// Character-sum flatness report for a subset document.
    Spectrum,
    /// Exact simulation and shift recovery for a shifted difference set.
    SimulateShift {
        /// Planted shift as comma-separated coordinates; drawn from the seed if omitted.
        #[arg(long)]
        secret: Option<String>,
        /// Measurement budget for recovery (default ⌈8/p⌉ from the closed form).
        #[arg(long)]
        max_trials: Option<u64>,
        /// Include the final amplitudes as [re, im] pairs.
        #[arg(long)]
        dump_state: bool,
    },
    /// Sample offsets and test whether the tupled function is injective.
    Injectivize {
        /// Number of offsets (default ⌈2 log₂ v⌉ + 6).
        #[arg(long)]
        copies: Option<usize>,
    },
    /// Plant a hidden reflection subgroup in Z_N ⋊ Z_2, N = 2^{d+1} - 1.
    DihedralMake {
        #[arg(long)]
        d: u32,
    },
    /// Recover the hidden reflection subgroup of a dihedral instance.
    DihedralSolve,
    /// Check Gauss-sum magnitudes over GF(p^n) and, for p = 2, the Singer relation.
    GaussCheck {
        #[arg(long, default_value_t = 2)]
        p: u64,
        #[arg(long)]
        n: usize,
    },
    /// Peak probabilities over a grid of instances.
    Sweep {
        /// Singer prime powers q (combined with every --singer-d).
        #[arg(long, value_delimiter = ',')]
        singer_q: Vec<u64>,
        #[arg(long, value_delimiter = ',')]
        singer_d: Vec<u32>,
        /// Hadamard sizes n (groups Z_2^{2n}).
        #[arg(long, value_delimiter = ',')]
        hadamard: Vec<u32>,
    },
}

#[derive(Subcommand, Debug)]
pub enum Family {
    /// Nonzero squares of GF(p^n), p^n ≡ 3 (mod 4).
    Paley {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// Modulus coefficients, constant term first (default: first irreducible).
        #[arg(long, value_delimiter = ',')]
        modulus: Option<Vec<u64>>,
    },
    /// Support of a bent function on Z_2^{2n}.
    Hadamard {
        /// Use the inner-product function on 2n variables.
        #[arg(long, conflicts_with = "bits")]
        n: Option<usize>,
        /// Truth table as a 0/1 string.
        #[arg(long)]
        bits: Option<String>,
    },
    /// Trace-zero exponents in GF(q^{d+1}).
    Singer {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        d: u32,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli.common, &cli.command) {
        Ok(outcome) => {
            if let Err(e) = commands::emit(&cli.common, &outcome.json) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if outcome.success {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
