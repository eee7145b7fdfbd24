//! The `multcong` command line.

pub mod args;
pub mod config;
pub mod report;

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::Parser;
use multcong_core::classifier::{
    corollary_suite, decomposition_crosscheck, phi_closed_form_audit, phi_congruence_search, search_congruences,
    sigma0_residue_audit, two_squares_audit,
};
use multcong_core::multfn::{load_custom_file, valuation_profile};
use multcong_core::tau::{
    audit_tau_table, read_cache, required_horizon, tau_table, verify_sd_congruences, write_cache, MAX_TAU_HORIZON,
};
use multcong_core::{
    certify_congruence, scan_valuation, theorem_decomposition, ExtendedNat, FnDescriptor, Status, TauTable,
};
use serde::Serialize;

use args::{Cli, Command, ConjectureName, Family, SuiteName};
use config::{load_file, FileConfig, RunConfig};
use report::{hit_rows, write_report, Report};

/// Environment variable naming the default τ cache directory.
pub const CACHE_DIR_ENV: &str = "MULTCONG_CACHE_DIR";

pub const EXIT_OK: i32 = 0;
/// Refuted certificates and failed suite assertions.
pub const EXIT_FAILED: i32 = 1;
/// Usage, configuration, and runtime errors.
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Config(String),
    Io(String),
    Runtime(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Runtime(m) => write!(f, "error: {m}"),
        }
    }
}

impl From<multcong_core::Error> for CliError {
    fn from(e: multcong_core::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

type Outcome = Result<bool, CliError>;

/// Parses `argv`, runs the command, and returns the exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_FAILED,
        Err(e) => {
            eprintln!("{e}");
            EXIT_ERROR
        }
    }
}

fn execute(cli: &Cli) -> Outcome {
    let file = match &cli.flags.config {
        Some(path) => load_file(path)?,
        None => FileConfig::default(),
    };
    let run = RunConfig::merge(&cli.flags, file)?;
    let work = || dispatch(&cli.command, &run);
    match run.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Runtime(e.to_string()))?
            .install(work),
        None => work(),
    }
}

fn dispatch(command: &Command, run: &RunConfig) -> Outcome {
    let name = command.name();
    match command {
        Command::Eval => eval(run),
        Command::Valuation => valuation(run),
        Command::Certify => certify(run),
        Command::Search => search(run),
        Command::TauVerify => tau_verify(run),
        Command::Suite { name: suite } => run_suite(*suite, run, name),
        Command::Conjecture { which } => conjecture(*which, run, name),
    }
}

fn emit<T: Serialize>(
    command: &str,
    body: &T,
    rows: Option<Vec<&multcong_core::Certificate>>,
    run: &RunConfig,
) -> Result<(), CliError> {
    write_report(&Report { command, body, rows }, run)
}

fn cache_path(run: &RunConfig) -> Option<PathBuf> {
    run.tau_cache.clone().or_else(|| std::env::var_os(CACHE_DIR_ENV).map(|dir| Path::new(&dir).join("tau-table.txt")))
}

/// A τ table of at least `horizon` entries, from the cache when it is large enough.
pub fn load_tau(run: &RunConfig, horizon: u64) -> Result<Arc<TauTable>, CliError> {
    let horizon = run.tau_horizon.unwrap_or(horizon).max(5);
    if horizon > MAX_TAU_HORIZON {
        return Err(CliError::Config(format!(
            "τ table of {horizon} entries exceeds {MAX_TAU_HORIZON}; lower `n_horizon` or `N`"
        )));
    }
    let path = cache_path(run);
    if let Some(path) = &path {
        if let Ok(file) = std::fs::File::open(path) {
            match read_cache(std::io::BufReader::new(file)) {
                Ok(table) if table.horizon() >= horizon => return Ok(Arc::new(table)),
                Ok(_) => log::info!("τ cache {} is too short; rebuilding", path.display()),
                Err(e) => log::warn!("ignoring τ cache {}: {e}", path.display()),
            }
        }
    }
    let table = tau_table(horizon)?;
    if let Some(path) = &path {
        let mut bytes = Vec::new();
        write_cache(&table, &mut bytes).map_err(|e| CliError::Io(e.to_string()))?;
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            let _ = std::fs::create_dir_all(dir);
        }
        if let Err(e) = report::write_atomic(path, &bytes) {
            log::warn!("τ cache not written: {e}");
        }
    }
    Ok(Arc::new(table))
}

/// The function named by `--custom` or `--fn`; `tau_needed` sizes a τ table.
fn function(run: &RunConfig, tau_needed: impl FnOnce() -> Result<u64, CliError>) -> Result<FnDescriptor, CliError> {
    if let Some(path) = &run.custom {
        if run.function.is_some() {
            return Err(CliError::Usage("give either `--fn` or `--custom`, not both".into()));
        }
        return Ok(load_custom_file(path)?);
    }
    match run.require("fn", run.function)? {
        Family::Sigma => Ok(FnDescriptor::sigma(run.require("k-param", run.k_param)?)),
        Family::Phi => Ok(FnDescriptor::phi()),
        Family::Tau => Ok(FnDescriptor::tau(load_tau(run, tau_needed()?)?)),
    }
}

fn last_term(a: u64, b: u64, horizon: u64) -> Result<u64, CliError> {
    a.checked_mul(horizon - 1)
        .and_then(|x| x.checked_add(b))
        .ok_or_else(|| CliError::Config(format!("{a}(n_horizon - 1) + {b} overflows")))
}

#[derive(Serialize)]
struct EvalReport {
    function: String,
    n: u64,
    /// Decimal, exact.
    value: String,
    p: Option<u64>,
    valuation: Option<ExtendedNat>,
}

fn eval(run: &RunConfig) -> Outcome {
    let n = run.require("n", run.n)?;
    let f = function(run, || Ok(n))?;
    let value = f.eval(n)?;
    let valuation = match run.p {
        Some(p) => Some(multcong_core::arith::nu_big(p, &value)?),
        None => None,
    };
    let body = EvalReport { function: f.name().to_string(), n, value: value.to_string(), p: run.p, valuation };
    emit("eval", &body, None, run)?;
    Ok(true)
}

#[derive(Serialize)]
struct ValuationReport {
    function: String,
    scan: multcong_core::CertainNat,
    decomposition: multcong_core::engine::Decomposition,
}

fn valuation(run: &RunConfig) -> Outcome {
    let p = run.require("p", run.p)?;
    if let Some(q) = run.q {
        let f = function(run, || Ok(q))?;
        let profile = valuation_profile(&f, p, q, run.engine.exponent_horizon)?;
        emit("valuation", &profile, None, run)?;
        return Ok(true);
    }
    let (a, b) = (run.require("A", run.a)?, run.require("B", run.b)?);
    let f = function(run, || last_term(a, b, run.engine.n_horizon))?;
    let scan = scan_valuation(&f, p, a, b, run.engine.n_horizon)?;
    let decomposition = theorem_decomposition(&f, p, a, b, &run.engine)?;
    let body = ValuationReport { function: f.name().to_string(), scan, decomposition };
    emit("valuation", &body, None, run)?;
    Ok(true)
}

fn certify(run: &RunConfig) -> Outcome {
    let p = run.require("p", run.p)?;
    let k = run.require("pow", run.pow)?;
    let (a, b) = (run.require("A", run.a)?, run.require("B", run.b)?);
    let f = function(run, || last_term(a, b, run.engine.n_horizon))?;
    let cert = certify_congruence(&f, p, k, a, b, &run.engine)?;
    let refuted = matches!(cert.status, Status::Refuted { .. });
    emit("certify", &cert, Some(vec![&cert]), run)?;
    match cert.status {
        Status::Refuted { witness } => eprintln!("refuted at n = {witness}"),
        Status::Certified => eprintln!("certified"),
        Status::VerifiedToHorizon => eprintln!("verified to n < {}", cert.scan_v.horizon),
    }
    Ok(!refuted)
}

fn search(run: &RunConfig) -> Outcome {
    let p = run.require("p", run.p)?;
    let k = run.require("pow", run.pow)?;
    let a_max = run.require("A-max", run.a_max)?;
    let f = function(run, || last_term(a_max, a_max, run.engine.n_horizon))?;
    let report = search_congruences(&f, p, k, a_max, &run.engine)?;
    emit("search", &report, Some(hit_rows(&report.hits)), run)?;
    let structure_failures = report.structure_failures().count();
    eprintln!(
        "{} cells: {} hits, {} refuted, {} errors, {} structure failures",
        report.cells,
        report.hits.len(),
        report.refuted,
        report.failures.len(),
        structure_failures
    );
    Ok(report.failures.is_empty() && structure_failures == 0)
}

#[derive(Serialize)]
struct TauVerifyReport {
    congruences: multcong_core::tau::SdReport,
    identities: multcong_core::tau::TauAuditReport,
}

fn tau_verify(run: &RunConfig) -> Outcome {
    let n = run.require("N", run.bound)?;
    let table = load_tau(run, required_horizon(n).max(n))?;
    let congruences = verify_sd_congruences(&table, n)?;
    let identities = audit_tau_table(&table, n.min(table.horizon()))?;
    eprintln!("{:<46} {:>8} {:>8} {:>8} {:>12}", "congruence", "checked", "passed", "failed", "inapplicable");
    for row in &congruences.rows {
        eprintln!("{:<46} {:>8} {:>8} {:>8} {:>12}", row.label, row.checked, row.passed, row.failed, row.inapplicable);
    }
    let ok = congruences.all_pass() && identities.all_pass();
    emit("tau-verify", &TauVerifyReport { congruences, identities }, None, run)?;
    Ok(ok)
}

fn run_suite(suite: SuiteName, run: &RunConfig, command: &str) -> Outcome {
    let primes = |default: &[u64]| run.primes.clone().unwrap_or_else(|| default.to_vec());
    match suite {
        SuiteName::Corollary => {
            let r = corollary_suite(&run.engine)?;
            for row in &r.rows {
                eprintln!(
                    "{} {} k={} scanned {} rhs {}",
                    if row.pass { "pass" } else { "FAIL" },
                    row.label,
                    row.k_param,
                    row.scan.value,
                    row.rhs.value
                );
            }
            let ok = r.failures().next().is_none();
            emit(command, &r, None, run)?;
            Ok(ok)
        }
        SuiteName::TwoSquares => {
            let k_list = run.k_list.clone().unwrap_or_else(|| vec![1, 2, 3]);
            let r = two_squares_audit(run.bound.unwrap_or(10_000), &k_list)?;
            let ok = r.failures.is_empty() && r.criterion_mismatches.is_empty();
            emit(command, &r, None, run)?;
            Ok(ok)
        }
        SuiteName::Phi => {
            let r = phi_closed_form_audit(run.a_max.unwrap_or(60), &primes(&[2, 3, 5]), run.engine.n_horizon)?;
            let ok = r.mismatches.is_empty();
            emit(command, &r, None, run)?;
            Ok(ok)
        }
        SuiteName::Sigma0 => {
            let r = sigma0_residue_audit(run.a_max.unwrap_or(400), &primes(&[3, 5, 7]), &run.engine)?;
            let ok = r.holds();
            emit(command, &r, None, run)?;
            Ok(ok)
        }
        SuiteName::Crosscheck => {
            let fns: Vec<FnDescriptor> = (0..4).map(FnDescriptor::sigma).chain([FnDescriptor::phi()]).collect();
            let r = decomposition_crosscheck(&fns, &primes(&[2, 3, 5, 7]), run.a_max.unwrap_or(60), &run.engine)?;
            let ok = r.violations.is_empty();
            emit(command, &r, None, run)?;
            Ok(ok)
        }
    }
}

fn conjecture(which: ConjectureName, run: &RunConfig, command: &str) -> Outcome {
    match which {
        ConjectureName::Structure => {
            let ks = match run.pow {
                Some(k) => vec![k],
                None => vec![2, 3],
            };
            let a_max = run.a_max.unwrap_or(400);
            let reports = ks
                .iter()
                .map(|&k| search_congruences(&FnDescriptor::sigma(0), 2, k, a_max, &run.engine))
                .collect::<Result<Vec<_>, _>>()?;
            let bad: usize = reports.iter().map(|r| r.structure_failures().count() + r.failures.len()).sum();
            let rows = reports.iter().flat_map(|r| hit_rows(&r.hits)).collect();
            emit(command, &reports, Some(rows), run)?;
            eprintln!("{} hits, {bad} failures", reports.iter().map(|r| r.hits.len()).sum::<usize>());
            Ok(bad == 0)
        }
        ConjectureName::Phi => {
            let r = phi_congruence_search(
                &run.primes.clone().unwrap_or_else(|| vec![3, 5, 7]),
                run.a_max.unwrap_or(200),
                &run.engine,
            )?;
            let hits = r.hit_count();
            if hits > 0 {
                eprintln!("{hits} progressions with φ ≡ 0 up to the horizon");
            }
            let rows = r.searches.iter().flat_map(|s| hit_rows(&s.hits)).collect();
            emit(command, &r, Some(rows), run)?;
            Ok(hits == 0)
        }
    }
}
