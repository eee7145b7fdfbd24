//! Closed form of `V_p(A, B; φ)` when `B' ≢ 1 (mod p)`, and the audits around it.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::{search_cells, SearchReport, REPORT_SCHEMA};
use crate::arith::{decompose_progression, require_prime, ExtendedNat, Finite};
use crate::engine::{nu_of_value, scan_terms, EngineConfig, TermScan};
use crate::error::Result;
use crate::multfn::FnDescriptor;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum PhiClosedForm {
    Value(ExtendedNat),
    /// `B' ≡ 1 (mod p)`.
    Inapplicable,
}

fn nu_word(p: u64, mut m: u64) -> u64 {
    let mut v = 0;
    while m % p == 0 {
        m /= p;
        v += 1;
    }
    v
}

/// `ν_p(φ(G')) + Σ_{q | G, q ∤ A'} ν_p(q - 1) + (ν_p(G) - 1 if p | G, p ∤ A')`.
pub fn phi_closed_form(p: u64, a: u64, b: u64) -> Result<PhiClosedForm> {
    require_prime(p)?;
    let prog = decompose_progression(a, b)?;
    if prog.b_prime % p == 1 % p {
        return Ok(PhiClosedForm::Inapplicable);
    }
    let phi = FnDescriptor::phi();
    let mut total = nu_of_value(&phi, p, prog.g_prime, 1)?.finite().unwrap_or(0);
    for (q, e) in prog.varying_primes() {
        total += nu_word(p, q - 1);
        if q == p {
            total += e as u64 - 1;
        }
    }
    Ok(PhiClosedForm::Value(Finite(total)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiMismatch {
    pub a: u64,
    pub b: u64,
    pub p: u64,
    pub formula: ExtendedNat,
    /// Minimum over the scanned prefix.
    pub scan: ExtendedNat,
    pub witness: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiAuditReport {
    pub schema: u32,
    pub a_max: u64,
    pub primes: Vec<u64>,
    pub horizon: u64,
    pub applicable: u64,
    pub inapplicable: u64,
    pub agreements: u64,
    pub mismatches: Vec<PhiMismatch>,
}

/// Compares the closed form with scanned valuations on `1 <= B <= A <= a_max`.
///
/// A cell agrees when a term attains the formula value and none falls below it.
pub fn phi_closed_form_audit(a_max: u64, primes: &[u64], horizon: u64) -> Result<PhiAuditReport> {
    use rayon::prelude::*;
    let phi = FnDescriptor::phi();
    let cells: Vec<(u64, u64, u64)> =
        primes.iter().flat_map(|&p| super::grid(a_max).into_iter().map(move |(a, b)| (p, a, b))).collect();
    let results = cells
        .par_iter()
        .map(|&(p, a, b)| -> Result<Option<Result<(), PhiMismatch>>> {
            let PhiClosedForm::Value(formula) = phi_closed_form(p, a, b)? else { return Ok(None) };
            let stop = formula.finite().map_or(0, |v| v + 1);
            let out = scan_terms(TermScan { f: &phi, p, a, b, skip: 1 }, horizon, stop)?;
            Ok(Some(if out.min == formula {
                Ok(())
            } else {
                Err(PhiMismatch { a, b, p, formula, scan: out.min, witness: out.witness })
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut report = PhiAuditReport {
        schema: REPORT_SCHEMA,
        a_max,
        primes: primes.to_vec(),
        horizon,
        applicable: 0,
        inapplicable: 0,
        agreements: 0,
        mismatches: Vec::new(),
    };
    for r in results {
        match r {
            None => report.inapplicable += 1,
            Some(Ok(())) => {
                report.applicable += 1;
                report.agreements += 1;
            }
            Some(Err(m)) => {
                report.applicable += 1;
                report.mismatches.push(m);
            }
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiCongruenceReport {
    pub schema: u32,
    pub a_max: u64,
    pub searches: Vec<SearchReport>,
}

impl PhiCongruenceReport {
    pub fn hit_count(&self) -> usize {
        self.searches.iter().map(|s| s.hits.len()).sum()
    }
}

/// Searches coprime `1 <= B' <= A' <= a_max` for `φ(A' n + B') ≡ 0 (mod p)`.
pub fn phi_congruence_search(primes: &[u64], a_max: u64, config: &EngineConfig) -> Result<PhiCongruenceReport> {
    let cells: Vec<(u64, u64)> = super::grid(a_max).into_iter().filter(|&(a, b)| a.gcd(&b) == 1).collect();
    let searches =
        primes.iter().map(|&p| search_cells(&FnDescriptor::phi(), p, 1, &cells, config)).collect::<Result<Vec<_>>>()?;
    for s in &searches {
        for h in &s.hits {
            log::warn!("phi({}n+{}) ≡ 0 (mod {}) up to the horizon", h.a, h.b, h.p);
        }
    }
    Ok(PhiCongruenceReport { schema: REPORT_SCHEMA, a_max, searches })
}
