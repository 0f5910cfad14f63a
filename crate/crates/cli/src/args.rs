//! Command-line arguments.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::range::InclusiveRange;

#[derive(Debug, Parser)]
#[command(name = "antichain", version, about = "Exact antichain counts, chain decompositions and bounds for [t]^n")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Directory holding the count cache and persisted counterexamples.
    #[arg(long, env = "ANTICHAIN_CACHE_DIR", global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Do not read or write the count cache.
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Working precision in bits for bound evaluation.
    #[arg(long, global = true, default_value_t = 128)]
    pub precision: u32,
    /// Seed for randomized suites, decimal or 0x-prefixed hex.
    #[arg(long, global = true, value_parser = parse_seed)]
    pub seed: Option<u64>,
    /// Largest grid `t^n` that may be materialized.
    #[arg(long, global = true, default_value_t = antichain_core::poset::DEFAULT_NODE_BUDGET)]
    pub node_budget: u64,
    /// Worker threads: a positive integer or `auto`.
    #[arg(long, global = true, default_value = "auto")]
    pub threads: String,
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Engine {
    Dp,
    Oracle,
    Weighted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuiteName {
    Thm31,
    Thm33,
    Prop32,
    Lemma35,
    Thm14,
    Section4,
    Chains,
    Engines,
    Entropy,
    Structure,
    All,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count antichains of [t]^n, or the weighted sum with --engine weighted.
    Count {
        #[arg(long)]
        t: Option<u32>,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long, value_enum, default_value_t = Engine::Dp)]
        engine: Engine,
        /// Per-level weights (comma separated; one value applies to every level).
        /// Accepts integers, fractions `a/b` and decimals.
        #[arg(long, value_delimiter = ',')]
        lambda: Vec<String>,
        /// Count an explicit poset document instead of a grid.
        #[arg(long, conflicts_with_all = ["t", "n"])]
        poset: Option<PathBuf>,
    },
    /// Closed-form bounds and the sublinear-error diagnostics.
    Bounds {
        #[arg(long)]
        t: u32,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        c: Option<f64>,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        epsilon_prime: Option<f64>,
    },
    /// Symmetric chain decomposition of [t]^n.
    Chains {
        #[arg(long)]
        t: u32,
        #[arg(long)]
        n: u32,
        /// Check partition, saturation, chain count and uniqueness.
        #[arg(long)]
        verify: bool,
        /// Write the decomposition as JSON to this path (`-` for stdout).
        #[arg(long)]
        emit: Option<PathBuf>,
        /// Print the chain containing this point, e.g. `0,2,1,3,2,1`.
        #[arg(long, value_delimiter = ',')]
        contains: Vec<u32>,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: SuiteName,
        /// Trials for randomized suites (each suite has its own default).
        #[arg(long)]
        trials: Option<usize>,
        /// Grid dimension for suites that take one (lemma35, thm14).
        #[arg(long)]
        n: Option<u32>,
        /// Re-run a single persisted counterexample.
        #[arg(long)]
        replay: Option<PathBuf>,
        /// Where counterexamples are written (default: <cache-dir>/counterexamples).
        #[arg(long)]
        counterexample_dir: Option<PathBuf>,
    },
    /// Table of counts and bounds over ranges of t and n.
    Report {
        /// Inclusive range `a..b`, or a single value.
        #[arg(long)]
        t: InclusiveRange,
        #[arg(long)]
        n: InclusiveRange,
        /// Output file (stdout when absent).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(&hex.replace('_', ""), 16),
        None => s.replace('_', "").parse(),
    };
    parsed.map_err(|e| format!("invalid seed `{s}`: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds() {
        assert_eq!(parse_seed("7"), Ok(7));
        assert_eq!(parse_seed("0x4445_4445_4B31_4E44"), Ok(antichain_core::random::DEFAULT_SEED));
        assert!(parse_seed("0xZZ").is_err());
    }

    #[test]
    fn parses_report() {
        let cli = Cli::try_parse_from(["antichain", "report", "--t", "2..3", "--n", "1..4", "--threads", "2"]).unwrap();
        assert!(matches!(cli.command, Command::Report { .. }));
        assert_eq!(cli.global.threads, "2");
    }
}
