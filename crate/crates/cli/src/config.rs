use std::path::{Path, PathBuf};

use multcong_core::arith::DEFAULT_CANDIDATE_BOUND;
use multcong_core::engine::{DEFAULT_EXPONENT_HORIZON, DEFAULT_N_HORIZON, DEFAULT_WITNESS_BUDGET};
use multcong_core::EngineConfig;
use serde::{Deserialize, Serialize};

use crate::args::{Family, Flags, Format};
use crate::CliError;

/// Keys accepted in a `--config` file.
#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(rename = "fn")]
    pub function: Option<Family>,
    pub k_param: Option<u32>,
    pub custom: Option<PathBuf>,
    pub p: Option<u64>,
    pub pow: Option<u64>,
    #[serde(rename = "A")]
    pub a: Option<u64>,
    #[serde(rename = "B")]
    pub b: Option<u64>,
    #[serde(rename = "A_max")]
    pub a_max: Option<u64>,
    #[serde(rename = "N")]
    pub bound: Option<u64>,
    pub n: Option<u64>,
    pub q: Option<u64>,
    pub primes: Option<Vec<u64>>,
    pub k_list: Option<Vec<u32>>,
    pub n_horizon: Option<u64>,
    pub exponent_horizon: Option<u32>,
    pub witness_budget: Option<usize>,
    pub candidate_bound: Option<u64>,
    pub full_scan: Option<bool>,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub tau_cache: Option<PathBuf>,
    pub tau_horizon: Option<u64>,
}

pub fn load_file(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

/// Flags merged over the config file, with defaults applied.
#[derive(Serialize, Debug, Clone)]
pub struct RunConfig {
    pub function: Option<Family>,
    pub k_param: Option<u32>,
    pub custom: Option<PathBuf>,
    pub p: Option<u64>,
    pub pow: Option<u64>,
    pub a: Option<u64>,
    pub b: Option<u64>,
    pub a_max: Option<u64>,
    pub bound: Option<u64>,
    pub n: Option<u64>,
    pub q: Option<u64>,
    pub primes: Option<Vec<u64>>,
    pub k_list: Option<Vec<u32>>,
    pub engine: EngineConfig,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub tau_cache: Option<PathBuf>,
    pub tau_horizon: Option<u64>,
}

fn at_least_one<T: PartialOrd + From<u8>>(name: &str, v: Option<T>) -> Result<(), CliError> {
    match v {
        Some(x) if x < T::from(1) => Err(CliError::Config(format!("`{name}` must be at least 1"))),
        _ => Ok(()),
    }
}

impl RunConfig {
    pub fn merge(flags: &Flags, file: FileConfig) -> Result<Self, CliError> {
        let engine = EngineConfig {
            n_horizon: flags.n_horizon.or(file.n_horizon).unwrap_or(DEFAULT_N_HORIZON),
            exponent_horizon: flags.exponent_horizon.or(file.exponent_horizon).unwrap_or(DEFAULT_EXPONENT_HORIZON),
            witness_budget: flags.witness_budget.or(file.witness_budget).unwrap_or(DEFAULT_WITNESS_BUDGET),
            candidate_bound: flags.candidate_bound.or(file.candidate_bound).unwrap_or(DEFAULT_CANDIDATE_BOUND),
            stop_on_refutation: !(flags.full_scan || file.full_scan.unwrap_or(false)),
        };
        let run = RunConfig {
            function: flags.function.or(file.function),
            k_param: flags.k_param.or(file.k_param),
            custom: flags.custom.clone().or(file.custom),
            p: flags.p.or(file.p),
            pow: flags.pow.or(file.pow),
            a: flags.a.or(file.a),
            b: flags.b.or(file.b),
            a_max: flags.a_max.or(file.a_max),
            bound: flags.bound.or(file.bound),
            n: flags.n.or(file.n),
            q: flags.q.or(file.q),
            primes: flags.primes.clone().or(file.primes),
            k_list: flags.k_list.clone().or(file.k_list),
            engine,
            threads: flags.threads.or(file.threads),
            out: flags.out.clone().or(file.out),
            format: flags.format.or(file.format).unwrap_or(Format::Json),
            tau_cache: flags.tau_cache.clone().or(file.tau_cache),
            tau_horizon: flags.tau_horizon.or(file.tau_horizon),
        };
        at_least_one("n_horizon", Some(run.engine.n_horizon))?;
        at_least_one("exponent_horizon", Some(run.engine.exponent_horizon))?;
        at_least_one("witness_budget", Some(run.engine.witness_budget))?;
        at_least_one("candidate_bound", Some(run.engine.candidate_bound))?;
        at_least_one("threads", run.threads)?;
        at_least_one("tau_horizon", run.tau_horizon)?;
        run.engine.validate().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(run)
    }

    pub fn require<T: Copy>(&self, name: &str, v: Option<T>) -> Result<T, CliError> {
        v.ok_or_else(|| CliError::Usage(format!("missing required value `--{name}`")))
    }
}
