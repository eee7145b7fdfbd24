use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Parser, Debug)]
#[command(name = "multcong", version, about = "Valuations and congruences of multiplicative functions on progressions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Evaluate f(n) exactly.
    Eval,
    /// Scanned valuation and decomposition for A n + B, or the exponent profile at --q.
    Valuation,
    /// Certify f(A n + B) ≡ 0 (mod p^pow).
    Certify,
    /// Certify every cell 1 <= B <= A <= A-max.
    Search,
    /// Check the τ congruences and table identities up to --N.
    TauVerify,
    /// Run a reproduction suite.
    Suite {
        #[arg(value_enum, default_value_t = SuiteName::Corollary)]
        name: SuiteName,
    },
    /// Structure audit for σ_0 mod 2^pow, or the φ congruence search.
    Conjecture {
        #[arg(value_enum)]
        which: ConjectureName,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Eval => "eval",
            Command::Valuation => "valuation",
            Command::Certify => "certify",
            Command::Search => "search",
            Command::TauVerify => "tau-verify",
            Command::Suite { .. } => "suite",
            Command::Conjecture { .. } => "conjecture",
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuiteName {
    /// σ_k exact values on 4n+3, 8n+b, 3n+2, 5n+b and 7n+b.
    Corollary,
    /// σ_k(n) mod 4 off the sums of two squares.
    TwoSquares,
    /// φ closed form against scans.
    Phi,
    /// σ_0: residue shape mod 2 and the odd-prime floor.
    Sigma0,
    /// Decomposition against scan over [1, A-max]^2.
    Crosscheck,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConjectureName {
    /// σ_0 congruences mod 2^pow factor through G'.
    Structure,
    /// No φ congruence mod an odd prime on a coprime progression.
    Phi,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Sigma,
    Phi,
    Tau,
}

/// Every flag; each one overrides the same key in `--config`.
#[derive(Args, Debug, Clone, Default)]
pub struct Flags {
    /// TOML file with any of the keys below (underscored).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[arg(long = "fn", value_enum, global = true)]
    pub function: Option<Family>,
    /// Subscript k of σ_k.
    #[arg(long, global = true)]
    pub k_param: Option<u32>,
    /// Custom function document; replaces --fn.
    #[arg(long, global = true)]
    pub custom: Option<PathBuf>,

    #[arg(long, global = true)]
    pub p: Option<u64>,
    /// Exponent of the modulus p^pow.
    #[arg(long, global = true)]
    pub pow: Option<u64>,
    #[arg(long = "A", global = true)]
    pub a: Option<u64>,
    #[arg(long = "B", global = true)]
    pub b: Option<u64>,
    #[arg(long = "A-max", global = true)]
    pub a_max: Option<u64>,
    /// Bound for tau-verify and the two-squares suite.
    #[arg(long = "N", global = true)]
    pub bound: Option<u64>,
    /// Argument of eval.
    #[arg(long = "n", global = true)]
    pub n: Option<u64>,
    /// Prime whose exponent profile valuation reports.
    #[arg(long, global = true)]
    pub q: Option<u64>,
    /// Comma-separated primes for suites that take several.
    #[arg(long, value_delimiter = ',', global = true)]
    pub primes: Option<Vec<u64>>,
    /// Comma-separated σ subscripts for the two-squares suite.
    #[arg(long, value_delimiter = ',', global = true)]
    pub k_list: Option<Vec<u32>>,

    #[arg(long, global = true)]
    pub n_horizon: Option<u64>,
    #[arg(long, global = true)]
    pub exponent_horizon: Option<u32>,
    #[arg(long, global = true)]
    pub witness_budget: Option<usize>,
    #[arg(long, global = true)]
    pub candidate_bound: Option<u64>,
    /// Scan past the first counterexample.
    #[arg(long, global = true)]
    pub full_scan: bool,

    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    /// τ table cache file.
    #[arg(long, global = true)]
    pub tau_cache: Option<PathBuf>,
    /// τ table size; defaults to what the command needs.
    #[arg(long, global = true)]
    pub tau_horizon: Option<u64>,
}
