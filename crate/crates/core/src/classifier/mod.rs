//! Grid searches for congruences and the audits built on them.

mod audits;
mod phi;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use audits::{
    corollary_suite, decomposition_crosscheck, sigma0_residue_audit, square_class_gate, two_squares_audit,
    CorollaryReport, CorollaryRow, CrossCheckKind, CrossCheckReport, CrossCheckViolation, Expectation, FloorViolation,
    Sigma0ResidueReport, TwoSquaresReport,
};
pub use phi::{
    phi_closed_form, phi_closed_form_audit, phi_congruence_search, PhiAuditReport, PhiClosedForm, PhiCongruenceReport,
    PhiMismatch,
};

use crate::arith::{require_prime, Finite};
use crate::engine::{certify_from_scan, scan_terms, Certificate, EngineConfig, Status, TermScan};
use crate::error::{Error, Result};
use crate::multfn::{Family, FnDescriptor};

/// Version of every report layout in this module.
pub const REPORT_SCHEMA: u32 = 1;

/// `P = p_1 ... p_{k-1}` drawn from the primes of `G'`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureRecord {
    pub g_prime: u64,
    pub g_prime_factors: Vec<(u64, u32)>,
    /// `ν_2(σ_0(G')) = Σ ν_2(1 + a_i)`.
    pub nu2_sigma0_g_prime: u64,
    /// Prime factors of `G'` counted with multiplicity.
    pub omega_g_prime: u64,
    pub primes: Vec<u64>,
    pub product: u64,
    pub divides_b: bool,
    pub square_divides_a: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum StructureOutcome {
    Holds(StructureRecord),
    Fails { reason: String, g_prime: u64, nu2_sigma0_g_prime: u64 },
}

impl StructureOutcome {
    pub fn holds(&self) -> bool {
        matches!(self, StructureOutcome::Holds(_))
    }
}

/// Builds `P` for a `σ_0` congruence modulo `2^k` and checks `P | B`, `P^2 | A`.
pub fn conjecture_structure_check(cert: &Certificate) -> Result<StructureOutcome> {
    if cert.function != "sigma_0" || cert.p != 2 || cert.k < 2 {
        return Err(Error::Contract(format!(
            "structure check needs a sigma_0 congruence mod 2^k with k >= 2, got {} mod {}^{}",
            cert.function, cert.p, cert.k
        )));
    }
    if matches!(cert.status, Status::Refuted { .. }) {
        return Err(Error::Contract("structure check on a refuted certificate".into()));
    }
    let prog = &cert.progression;
    let factors = prog.g_prime_factors.factors.clone();
    let nu2: u64 = factors.iter().map(|&(_, e)| (e as u64 + 1).trailing_zeros() as u64).sum();
    let omega = prog.g_prime_factors.big_omega();
    let need = (cert.k - 1) as usize;
    let mut primes = Vec::with_capacity(need);
    for &(q, e) in &factors {
        for _ in 0..e {
            if primes.len() < need {
                primes.push(q);
            }
        }
    }
    if primes.len() < need {
        return Ok(StructureOutcome::Fails {
            reason: format!("G' = {} has {omega} prime factors, fewer than k - 1 = {need}", prog.g_prime),
            g_prime: prog.g_prime,
            nu2_sigma0_g_prime: nu2,
        });
    }
    let product: u64 = primes.iter().product();
    let record = StructureRecord {
        g_prime: prog.g_prime,
        g_prime_factors: factors,
        nu2_sigma0_g_prime: nu2,
        omega_g_prime: omega,
        primes,
        product,
        divides_b: prog.b % product == 0,
        square_divides_a: product.checked_mul(product).is_some_and(|sq| prog.a % sq == 0),
    };
    if !(record.divides_b && record.square_divides_a) {
        return Ok(StructureOutcome::Fails {
            reason: format!("P = {product} fails P | B or P^2 | A"),
            g_prime: prog.g_prime,
            nu2_sigma0_g_prime: nu2,
        });
    }
    Ok(StructureOutcome::Holds(record))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchHit {
    pub a: u64,
    pub b: u64,
    pub p: u64,
    pub k: u64,
    pub certificate: Certificate,
    pub conjecture_structure: Option<StructureOutcome>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NearMiss {
    pub a: u64,
    pub b: u64,
    /// Valuation `k - 1` at this index.
    pub witness: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellFailure {
    pub a: u64,
    pub b: u64,
    pub error: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub schema: u32,
    pub function: String,
    pub p: u64,
    pub k: u64,
    pub cells: u64,
    pub hits: Vec<SearchHit>,
    pub refuted: u64,
    /// Refuted cells whose first counterexample has valuation exactly `k - 1`.
    pub near_misses: Vec<NearMiss>,
    pub failures: Vec<CellFailure>,
    pub config: EngineConfig,
}

enum Cell {
    Hit(Box<SearchHit>),
    Refuted(Option<NearMiss>),
    Failed(CellFailure),
}

fn run_cell(f: &FnDescriptor, p: u64, k: u64, a: u64, b: u64, config: &EngineConfig) -> Cell {
    let attempt = || -> Result<Cell> {
        let out = scan_terms(TermScan { f, p, a, b, skip: 1 }, config.n_horizon, k)?;
        if let (Some(n), false) = (out.witness, out.min.at_least(k)) {
            let near = (out.min == Finite(k - 1)).then_some(NearMiss { a, b, witness: n });
            return Ok(Cell::Refuted(near));
        }
        let certificate = certify_from_scan(f, p, k, a, b, config, out)?;
        let conjecture_structure = if matches!(f.family(), Family::Sigma { k: 0 }) && p == 2 && k >= 2 {
            Some(conjecture_structure_check(&certificate)?)
        } else {
            None
        };
        Ok(Cell::Hit(Box::new(SearchHit { a, b, p, k, certificate, conjecture_structure })))
    };
    attempt().unwrap_or_else(|e| Cell::Failed(CellFailure { a, b, error: e.to_string() }))
}

/// Certifies `f(A n + B) ≡ 0 (mod p^k)` over the given cells, in order.
pub fn search_cells(
    f: &FnDescriptor,
    p: u64,
    k: u64,
    cells: &[(u64, u64)],
    config: &EngineConfig,
) -> Result<SearchReport> {
    require_prime(p)?;
    config.validate()?;
    if k == 0 {
        return Err(Error::Zero("k"));
    }
    let results: Vec<Cell> = cells.par_iter().map(|&(a, b)| run_cell(f, p, k, a, b, config)).collect();
    let mut report = SearchReport {
        schema: REPORT_SCHEMA,
        function: f.name().to_string(),
        p,
        k,
        cells: cells.len() as u64,
        hits: Vec::new(),
        refuted: 0,
        near_misses: Vec::new(),
        failures: Vec::new(),
        config: *config,
    };
    for cell in results {
        match cell {
            Cell::Hit(hit) => report.hits.push(*hit),
            Cell::Refuted(near) => {
                report.refuted += 1;
                report.near_misses.extend(near);
            }
            Cell::Failed(fail) => report.failures.push(fail),
        }
    }
    Ok(report)
}

/// All cells `1 <= B <= A <= a_max`, sorted by `(A, B)`.
pub fn grid(a_max: u64) -> Vec<(u64, u64)> {
    (1..=a_max).flat_map(|a| (1..=a).map(move |b| (a, b))).collect()
}

pub fn search_congruences(f: &FnDescriptor, p: u64, k: u64, a_max: u64, config: &EngineConfig) -> Result<SearchReport> {
    if a_max == 0 {
        return Err(Error::Zero("A_max"));
    }
    search_cells(f, p, k, &grid(a_max), config)
}

impl SearchReport {
    /// Hits whose structure check failed.
    pub fn structure_failures(&self) -> impl Iterator<Item = &SearchHit> {
        self.hits.iter().filter(|h| h.conjecture_structure.as_ref().is_some_and(|s| !s.holds()))
    }
}
