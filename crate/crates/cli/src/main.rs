//! `bip`: command-line front end for the bipartition lattice toolkit.

mod commands;
mod report;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::report::Failure;

/// Guard for commands that walk the whole lattice or all chains.
pub const EXHAUSTIVE_MAX_N: usize = 6;
/// Guard for commands that compute one value from their inputs.
pub const SINGLE_VALUE_MAX_N: usize = 16;

#[derive(Parser, Debug)]
#[command(name = "bip", version, about = "Bipartitional relations: lattice, chains, critical cells, Moebius values")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Largest ground set accepted (defaults to 6 for exhaustive commands, 16 otherwise).
    #[arg(long, global = true)]
    pub max_n: Option<usize>,
    /// Include wall-clock time in JSON reports (makes output nondeterministic).
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Args, Debug, Clone)]
pub struct IntervalArgs {
    /// Lower end, text (`1,2!|3`) or JSON form.
    #[arg(long)]
    pub lower: String,
    /// Upper end, text or JSON form.
    #[arg(long)]
    pub upper: String,
    /// Expected ground-set size; inferred from the bounds when omitted.
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List every bipartition of {1..n}, or count them.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        count: bool,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Run an invariant suite over the whole lattice.
    Verify {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Emit the Hasse diagram.
    Hasse {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = HasseFormat::Dot)]
        format: HasseFormat,
        #[command(flatten)]
        common: Common,
    },
    /// Johnson-Trotter listing of permutations, or of the refinements of `--base`.
    Jt {
        #[arg(long, required_unless_present = "base")]
        n: Option<usize>,
        /// Ordered partition such as `1,3|2,4`.
        #[arg(long)]
        base: Option<String>,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Stream maximal chains in enumeration order, one per line.
    Chains {
        #[arg(long)]
        n: Option<usize>,
        /// Only chains of this permutation's group, e.g. `2,1,3`.
        #[arg(long)]
        sigma: Option<String>,
        #[arg(long, requires = "upper")]
        lower: Option<String>,
        #[arg(long, requires = "lower")]
        upper: Option<String>,
        /// Also print the label word of each chain.
        #[arg(long)]
        words: bool,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Critical cells of the chain enumeration of the lattice or of an interval.
    CriticalCells {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, requires = "upper")]
        lower: Option<String>,
        #[arg(long, requires = "lower")]
        upper: Option<String>,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Moebius value of an interval.
    Mobius {
        #[command(flatten)]
        interval: IntervalArgs,
        #[arg(long, value_enum, default_value_t = MobiusMethod::Closed)]
        method: MobiusMethod,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Regular/irregular classification of an interval (JSON).
    Classify {
        #[command(flatten)]
        interval: IntervalArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Product factorization of a regular interval (JSON).
    Factorize {
        #[command(flatten)]
        interval: IntervalArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Johnson-Trotter decomposition of an interval (JSON).
    Decompose {
        #[command(flatten)]
        interval: IntervalArgs,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum HasseFormat {
    Dot,
    Json,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum MobiusMethod {
    Closed,
    Bruteforce,
    Both,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if let Some(msg) = f.message() {
                eprintln!("bip: {msg}");
            }
            ExitCode::from(f.code())
        }
    }
}

impl From<bipartitions::Error> for Failure {
    fn from(e: bipartitions::Error) -> Self {
        match e {
            bipartitions::Error::SizeLimitExceeded { .. } => Failure::SizeGuard(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}
