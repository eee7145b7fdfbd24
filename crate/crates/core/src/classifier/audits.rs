//! σ_k and σ_0 audits, and the decomposition cross-check.

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{search_cells, SearchReport, REPORT_SCHEMA};
use crate::arith::{decompose_progression, factorize_u64, quadratic_class, ExtendedNat, Finite};
use crate::engine::{
    nu_of_value, scan_terms, theorem_decomposition, CertainNat, Certificate, EngineConfig, Status, TermScan,
};
use crate::error::Result;
use crate::multfn::{Family, FnDescriptor};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Expectation {
    Equals(u64),
    AtLeast(u64),
    /// Reported, never failed.
    Probe,
}

impl Expectation {
    fn met(self, v: ExtendedNat) -> bool {
        match self {
            Expectation::Equals(x) => v == Finite(x),
            Expectation::AtLeast(x) => v.at_least(x),
            Expectation::Probe => true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorollaryRow {
    pub label: String,
    pub k_param: u32,
    pub p: u64,
    pub a: u64,
    pub b: u64,
    pub expectation: Expectation,
    pub scan: CertainNat,
    pub rhs: CertainNat,
    /// `rhs <= scan`, with equality when `rhs` is exact.
    pub decomposition_agrees: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorollaryReport {
    pub schema: u32,
    pub horizon: u64,
    pub rows: Vec<CorollaryRow>,
}

impl CorollaryReport {
    pub fn failures(&self) -> impl Iterator<Item = &CorollaryRow> {
        self.rows.iter().filter(|r| !r.pass)
    }
}

pub const COROLLARY_ODD_K: [u32; 6] = [1, 3, 5, 7, 9, 11];
pub const SEVEN_K: [u32; 2] = [3, 9];

struct RowSpec {
    label: &'static str,
    k: u32,
    p: u64,
    a: u64,
    b: u64,
    expectation: Expectation,
}

fn corollary_rows() -> Vec<RowSpec> {
    let mut rows = Vec::new();
    let exact: [(&str, u64, u64, u64, u64); 7] = [
        ("V2(4,3)", 2, 4, 3, 2),
        ("V2(8,7)", 2, 8, 7, 3),
        ("V2(8,5)", 2, 8, 5, 1),
        ("V2(8,3)", 2, 8, 3, 2),
        ("V3(3,2)", 3, 3, 2, 1),
        ("V5(5,2)", 5, 5, 2, 1),
        ("V5(5,3)", 5, 5, 3, 1),
    ];
    for k in COROLLARY_ODD_K {
        for (label, p, a, b, v) in exact {
            rows.push(RowSpec { label, k, p, a, b, expectation: Expectation::Equals(v) });
        }
    }
    for k in SEVEN_K {
        for (label, b) in [("V7(7,3)", 3), ("V7(7,5)", 5), ("V7(7,6)", 6)] {
            rows.push(RowSpec { label, k, p: 7, a: 7, b, expectation: Expectation::AtLeast(1) });
        }
        rows.push(RowSpec { label: "V7(7,4)", k, p: 7, a: 7, b: 4, expectation: Expectation::Probe });
    }
    rows
}

fn agrees(rhs: &CertainNat, scan: ExtendedNat) -> bool {
    rhs.value <= scan && (!rhs.is_exact() || rhs.value == scan)
}

/// Scanned σ_k valuations on the progressions `4n+3`, `8n+b`, `3n+2`, `5n+b`, `7n+b`.
pub fn corollary_suite(config: &EngineConfig) -> Result<CorollaryReport> {
    config.validate()?;
    let rows = corollary_rows()
        .par_iter()
        .map(|r| {
            let f = FnDescriptor::sigma(r.k);
            let scan = crate::engine::scan_valuation(&f, r.p, r.a, r.b, config.n_horizon)?;
            let d = theorem_decomposition(&f, r.p, r.a, r.b, config)?;
            Ok(CorollaryRow {
                label: r.label.to_string(),
                k_param: r.k,
                p: r.p,
                a: r.a,
                b: r.b,
                expectation: r.expectation,
                decomposition_agrees: agrees(&d.rhs_total, scan.value),
                pass: r.expectation.met(scan.value),
                scan,
                rhs: d.rhs_total,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CorollaryReport { schema: REPORT_SCHEMA, horizon: config.n_horizon, rows })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoSquaresFailure {
    pub n: u64,
    pub k: u32,
    pub residue_mod_4: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoSquaresReport {
    pub schema: u32,
    pub n_max: u64,
    pub k_list: Vec<u32>,
    /// Enumeration cross-check covers `n <= oracle_limit`.
    pub oracle_limit: u64,
    pub non_sums: u64,
    /// `n` where the factor criterion and enumeration disagree.
    pub criterion_mismatches: Vec<u64>,
    pub failures: Vec<TwoSquaresFailure>,
}

pub const TWO_SQUARES_ORACLE_LIMIT: u64 = 10_000;

/// Some prime `q ≡ 3 (mod 4)` divides `n` to an odd power.
fn fails_two_squares(n: u64) -> Result<bool> {
    Ok(factorize_u64(n)?.factors.iter().any(|&(q, e)| q % 4 == 3 && e % 2 == 1))
}

fn sums_of_two_squares(limit: u64) -> Vec<bool> {
    let mut hit = vec![false; limit as usize + 1];
    let mut a = 0u64;
    while a * a <= limit {
        let mut b = a;
        while a * a + b * b <= limit {
            hit[(a * a + b * b) as usize] = true;
            b += 1;
        }
        a += 1;
    }
    hit
}

/// Checks `σ_k(n) ≡ 0 (mod 4)` for every `n <= n_max` that is not a sum of two squares.
pub fn two_squares_audit(n_max: u64, k_list: &[u32]) -> Result<TwoSquaresReport> {
    if n_max == 0 {
        return Err(crate::error::Error::Zero("N"));
    }
    if k_list.contains(&0) {
        return Err(crate::error::Error::InvalidArgument("k values must be at least 1".into()));
    }
    let oracle_limit = n_max.min(TWO_SQUARES_ORACLE_LIMIT);
    let oracle = sums_of_two_squares(oracle_limit);
    let fns: Vec<(u32, FnDescriptor)> = k_list.iter().map(|&k| (k, FnDescriptor::sigma(k))).collect();
    let mut report = TwoSquaresReport {
        schema: REPORT_SCHEMA,
        n_max,
        k_list: k_list.to_vec(),
        oracle_limit,
        non_sums: 0,
        criterion_mismatches: Vec::new(),
        failures: Vec::new(),
    };
    for n in 1..=n_max {
        let fails = fails_two_squares(n)?;
        if n <= oracle_limit && fails == oracle[n as usize] {
            report.criterion_mismatches.push(n);
        }
        if !fails {
            continue;
        }
        report.non_sums += 1;
        for (k, f) in &fns {
            let r = f.eval_mod(n, 4)?;
            if r != 0 {
                report.failures.push(TwoSquaresFailure { n, k: *k, residue_mod_4: r });
            }
        }
    }
    Ok(report)
}

/// For a σ_k hit (`k >= 1`, `p = 2`) whose scan exceeds the fixed part, whether `B'`
/// is neither a square nor twice a square modulo `A'`. `None` when the gate does
/// not apply.
pub fn square_class_gate(cert: &Certificate, f: &FnDescriptor) -> Result<Option<bool>> {
    let sigma_k = matches!(f.family(), Family::Sigma { k } if *k >= 1);
    if !sigma_k || cert.p != 2 || matches!(cert.status, Status::Refuted { .. }) {
        return Ok(None);
    }
    if cert.scan_v.value <= cert.term_fixed {
        return Ok(None);
    }
    let class = quadratic_class(cert.progression.b_prime, cert.progression.a_prime)?;
    Ok(Some(!class.is_square_mod && !class.is_twice_square_mod))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FloorViolation {
    pub a: u64,
    pub b: u64,
    pub p: u64,
    pub floor: u64,
    pub scan: ExtendedNat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sigma0ResidueReport {
    pub schema: u32,
    pub a_max: u64,
    pub horizon: u64,
    /// Cells with `G = 1` and `B` a square modulo `A`.
    pub square_cells: u64,
    /// Coprime cells where `(B/A) = 1` although `B` is not a square modulo `A`.
    pub kronecker_gap_cells: u64,
    /// `σ_0` mod 2 over the square cells; every hit violates the parity argument.
    pub square_search: SearchReport,
    pub odd_primes: Vec<u64>,
    pub odd_cells: u64,
    /// Cells whose scan never reaches `ν_p(σ_0(G'))`.
    pub floor_violations: Vec<FloorViolation>,
}

impl Sigma0ResidueReport {
    pub fn holds(&self) -> bool {
        self.square_search.hits.is_empty() && self.square_search.failures.is_empty() && self.floor_violations.is_empty()
    }
}

/// `σ_0` congruences: none mod 2 on coprime square cells, none above the floor for odd `p`.
pub fn sigma0_residue_audit(a_max: u64, odd_primes: &[u64], config: &EngineConfig) -> Result<Sigma0ResidueReport> {
    let sigma0 = FnDescriptor::sigma(0);
    let grid = super::grid(a_max);
    let mut square = Vec::new();
    let mut kronecker_gap_cells = 0;
    for &(a, b) in &grid {
        if a.gcd(&b) != 1 {
            continue;
        }
        let class = quadratic_class(b, a)?;
        if class.is_square_mod {
            square.push((a, b));
        } else if class.kronecker == 1 {
            kronecker_gap_cells += 1;
        }
    }
    let square_search = search_cells(&sigma0, 2, 1, &square, config)?;

    let cells: Vec<(u64, u64, u64)> =
        odd_primes.iter().flat_map(|&p| grid.iter().map(move |&(a, b)| (p, a, b))).collect();
    let results = cells
        .par_iter()
        .map(|&(p, a, b)| -> Result<Option<FloorViolation>> {
            crate::arith::require_prime(p)?;
            let prog = decompose_progression(a, b)?;
            let floor = nu_of_value(&sigma0, p, prog.g_prime, 1)?.finite().unwrap_or(0);
            let out = scan_terms(TermScan { f: &sigma0, p, a, b, skip: 1 }, config.n_horizon, floor + 1)?;
            Ok((!(out.min <= Finite(floor))).then_some(FloorViolation { a, b, p, floor, scan: out.min }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Sigma0ResidueReport {
        schema: REPORT_SCHEMA,
        a_max,
        horizon: config.n_horizon,
        square_cells: square.len() as u64,
        kronecker_gap_cells,
        square_search,
        odd_primes: odd_primes.to_vec(),
        odd_cells: cells.len() as u64,
        floor_violations: results.into_iter().flatten().collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CrossCheckKind {
    /// A term has valuation below the decomposition.
    BelowDecomposition,
    /// The decomposition is exact but no term attains it.
    ExactNotAttained,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossCheckViolation {
    pub function: String,
    pub p: u64,
    pub a: u64,
    pub b: u64,
    pub kind: CrossCheckKind,
    pub rhs: CertainNat,
    /// Minimum over the scanned prefix.
    pub scan: ExtendedNat,
    pub witness: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossCheckReport {
    pub schema: u32,
    pub a_max: u64,
    pub primes: Vec<u64>,
    pub functions: Vec<String>,
    pub horizon: u64,
    pub cells: u64,
    pub exact_cells: u64,
    pub exact_equal: u64,
    pub violations: Vec<CrossCheckViolation>,
}

impl CrossCheckReport {
    pub fn count(&self, kind: CrossCheckKind) -> usize {
        self.violations.iter().filter(|v| v.kind == kind).count()
    }
}

/// Decomposition against scan over all `(A, B) ∈ [1, a_max]^2`.
///
/// The scan stops at the first term at or below the decomposition, which settles
/// both directions for that cell.
pub fn decomposition_crosscheck(
    fns: &[FnDescriptor],
    primes: &[u64],
    a_max: u64,
    config: &EngineConfig,
) -> Result<CrossCheckReport> {
    config.validate()?;
    let mut cells = Vec::new();
    for fi in 0..fns.len() {
        for &p in primes {
            for a in 1..=a_max {
                for b in 1..=a_max {
                    cells.push((fi, p, a, b));
                }
            }
        }
    }
    let results = cells
        .par_iter()
        .map(|&(fi, p, a, b)| -> Result<(bool, bool, Option<CrossCheckViolation>)> {
            let f = &fns[fi];
            let d = theorem_decomposition(f, p, a, b, config)?;
            let rhs = d.rhs_total;
            let stop = rhs.value.finite().map_or(0, |v| v + 1);
            let out = scan_terms(TermScan { f, p, a, b, skip: 1 }, config.n_horizon, stop)?;
            let kind = if out.min < rhs.value {
                Some(CrossCheckKind::BelowDecomposition)
            } else if rhs.is_exact() && out.min != rhs.value {
                Some(CrossCheckKind::ExactNotAttained)
            } else {
                None
            };
            let violation = kind.map(|kind| CrossCheckViolation {
                function: f.name().to_string(),
                p,
                a,
                b,
                kind,
                rhs,
                scan: out.min,
                witness: out.witness,
            });
            let exact = rhs.is_exact();
            Ok((exact, exact && violation.is_none(), violation))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut report = CrossCheckReport {
        schema: REPORT_SCHEMA,
        a_max,
        primes: primes.to_vec(),
        functions: fns.iter().map(|f| f.name().to_string()).collect(),
        horizon: config.n_horizon,
        cells: cells.len() as u64,
        exact_cells: 0,
        exact_equal: 0,
        violations: Vec::new(),
    };
    for (exact, equal, violation) in results {
        report.exact_cells += exact as u64;
        report.exact_equal += equal as u64;
        report.violations.extend(violation);
    }
    Ok(report)
}
