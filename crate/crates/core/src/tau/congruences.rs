//! The exceptional congruences tying τ to divisor sums modulo small prime powers.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{tau_prime_power_mod, TauTable};
use crate::arith::factorize_u64;
use crate::arith::modular::{inv_mod, mul_mod, pow_mod, reduce_i128};
use crate::error::{Error, Result};
use crate::multfn::sigma_mod;

/// Which arguments a congruence speaks about.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Domain {
    /// Arguments `a n + b` for indices `n = 0..=N`.
    Progression { a: u64, b: u64 },
    /// Arguments `m = 1..=N` with `m mod modulus` in `residues`.
    Residues { modulus: u64, residues: Vec<u64> },
}

/// Multiplier in front of the divisor sum, as a function of the argument `m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TwistFactor {
    Constant(u64),
    /// `m^e`; negative exponents use the inverse of `m` modulo the congruence modulus.
    ArgumentPower(i64),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CongruenceRhs {
    /// `twist(m) * σ_k(m)`.
    TwistedSigma {
        twist: TwistFactor,
        sigma_k: u32,
    },
    Zero,
}

/// `τ(m) ≡ rhs(m) (mod modulus)` for every `m` in `domain`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SdCongruence {
    pub label: String,
    pub domain: Domain,
    pub modulus: u64,
    pub rhs: CongruenceRhs,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceRow {
    pub label: String,
    pub modulus: u64,
    pub checked: u64,
    pub passed: u64,
    pub failed: u64,
    pub inapplicable: u64,
    /// Smallest argument `m` at which the congruence failed.
    pub first_failure: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SdReport {
    pub n: u64,
    pub rows: Vec<CongruenceRow>,
}

impl SdReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.failed == 0)
    }
}

fn twisted(label: &str, domain: Domain, modulus: u64, twist: TwistFactor, k: u32) -> SdCongruence {
    SdCongruence { label: label.to_string(), domain, modulus, rhs: CongruenceRhs::TwistedSigma { twist, sigma_k: k } }
}

/// The nine divisor-sum congruences followed by the three classical zero
/// congruences `τ(7n+b) ≡ 0 (mod 7)`, `b ∈ {3, 5, 6}`.
pub fn sd_congruences() -> Vec<SdCongruence> {
    use TwistFactor::*;
    let prog = |a, b| Domain::Progression { a, b };
    let res = |modulus, residues: &[u64]| Domain::Residues { modulus, residues: residues.to_vec() };
    let mut out = vec![
        twisted("tau(8n+1) = sigma_11 mod 2^11", prog(8, 1), 1 << 11, Constant(1), 11),
        twisted("tau(8n+3) = 1217 sigma_11 mod 2^13", prog(8, 3), 1 << 13, Constant(1217), 11),
        twisted("tau(8n+5) = 1537 sigma_11 mod 2^12", prog(8, 5), 1 << 12, Constant(1537), 11),
        twisted("tau(8n+7) = 705 sigma_11 mod 2^14", prog(8, 7), 1 << 14, Constant(705), 11),
        twisted("tau(m) = m^-610 sigma_1231 mod 3^6, m = 3n+1", prog(3, 1), 729, ArgumentPower(-610), 1231),
        twisted("tau(m) = m^-610 sigma_1231 mod 3^7, m = 3n+2", prog(3, 2), 2187, ArgumentPower(-610), 1231),
        twisted("tau(m) = m^-30 sigma_71 mod 5^3, 5 !| m", res(5, &[1, 2, 3, 4]), 125, ArgumentPower(-30), 71),
        twisted("tau(m) = m sigma_9 mod 7, m = 0,1,2,4 mod 7", res(7, &[0, 1, 2, 4]), 7, ArgumentPower(1), 9),
        twisted("tau(m) = m sigma_9 mod 7^2, m = 3,5,6 mod 7", res(7, &[3, 5, 6]), 49, ArgumentPower(1), 9),
    ];
    for b in [3, 5, 6] {
        out.push(SdCongruence {
            label: format!("tau(7n+{b}) = 0 mod 7"),
            domain: prog(7, b),
            modulus: 7,
            rhs: CongruenceRhs::Zero,
        });
    }
    out
}

/// Table horizon needed to check every congruence up to index/argument bound `n`.
pub fn required_horizon(n: u64) -> u64 {
    sd_congruences()
        .iter()
        .map(|c| match &c.domain {
            Domain::Progression { a, b } => a * n + b,
            Domain::Residues { .. } => n,
        })
        .max()
        .unwrap_or(n)
}

#[derive(Clone, Copy)]
enum Outcome {
    Skip,
    Pass,
    Fail(u64),
    Inapplicable,
}

fn tau_mod(table: &TauTable, m: u64, modulus: u64) -> Result<u64> {
    let f = factorize_u64(m)?;
    let mut acc = 1 % modulus;
    for &(q, e) in &f.factors {
        acc = mul_mod(acc, tau_prime_power_mod(table, q, e, modulus)?, modulus);
    }
    Ok(acc)
}

fn check(table: &TauTable, c: &SdCongruence, m: u64) -> Result<Outcome> {
    let lhs = match table.get(m) {
        Some(v) => reduce_i128(v, c.modulus),
        None => tau_mod(table, m, c.modulus)?,
    };
    let rhs = match &c.rhs {
        CongruenceRhs::Zero => 0,
        CongruenceRhs::TwistedSigma { twist, sigma_k } => {
            let factor = match *twist {
                TwistFactor::Constant(v) => v % c.modulus,
                TwistFactor::ArgumentPower(e) if e >= 0 => pow_mod(m, e as u64, c.modulus),
                TwistFactor::ArgumentPower(e) => match inv_mod(m % c.modulus, c.modulus) {
                    Some(inv) => pow_mod(inv, e.unsigned_abs(), c.modulus),
                    None => return Ok(Outcome::Inapplicable),
                },
            };
            mul_mod(factor, sigma_mod(*sigma_k, m, c.modulus)?, c.modulus)
        }
    };
    Ok(if lhs == rhs { Outcome::Pass } else { Outcome::Fail(m) })
}

fn verify_one(table: &TauTable, c: &SdCongruence, n: u64) -> Result<CongruenceRow> {
    let argument = |i: u64| -> Option<u64> {
        match &c.domain {
            Domain::Progression { a, b } => Some(a * i + b),
            Domain::Residues { modulus, residues } => (i >= 1 && residues.contains(&(i % modulus))).then_some(i),
        }
    };
    let outcomes: Vec<Outcome> = (0..=n)
        .into_par_iter()
        .map(|i| match argument(i) {
            Some(m) => check(table, c, m),
            None => Ok(Outcome::Skip),
        })
        .collect::<Result<_>>()?;
    let mut row = CongruenceRow {
        label: c.label.clone(),
        modulus: c.modulus,
        checked: 0,
        passed: 0,
        failed: 0,
        inapplicable: 0,
        first_failure: None,
    };
    for o in outcomes {
        match o {
            Outcome::Skip => {}
            Outcome::Pass => {
                row.checked += 1;
                row.passed += 1;
            }
            Outcome::Fail(m) => {
                row.checked += 1;
                row.failed += 1;
                row.first_failure.get_or_insert(m);
            }
            Outcome::Inapplicable => row.inapplicable += 1,
        }
    }
    Ok(row)
}

/// Checks every congruence of [`sd_congruences`] for indices (or arguments) up to `n`.
pub fn verify_sd_congruences(table: &TauTable, n: u64) -> Result<SdReport> {
    let need = required_horizon(n);
    if table.horizon() < need {
        return Err(Error::InvalidArgument(format!(
            "tau table horizon {} is below the {need} needed for N = {n}",
            table.horizon()
        )));
    }
    let rows = sd_congruences().iter().map(|c| verify_one(table, c, n)).collect::<Result<_>>()?;
    Ok(SdReport { n, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tau::tau_table;

    #[test]
    fn first_examples() {
        let t = tau_table(20).unwrap();
        let cs = sd_congruences();
        // n = 0 of the first congruence: τ(1) = 1 = σ_11(1).
        assert!(matches!(check(&t, &cs[0], 1).unwrap(), Outcome::Pass));
        // τ(3) = 252 ≡ 1217 σ_11(3) (mod 2^13)
        assert_eq!((1217u64 * 177148) % 8192, 252);
        assert!(matches!(check(&t, &cs[1], 3).unwrap(), Outcome::Pass));
        assert!(matches!(check(&t, &cs[9], 3).unwrap(), Outcome::Pass));
    }

    #[test]
    fn small_run_passes() {
        let n = 200;
        let t = tau_table(required_horizon(n)).unwrap();
        let report = verify_sd_congruences(&t, n).unwrap();
        assert_eq!(report.rows.len(), 12);
        assert!(report.all_pass(), "{report:#?}");
        assert!(report.rows.iter().all(|r| r.inapplicable == 0));
        // arguments 1..=200 with m ≡ 3,5,6 (mod 7)
        assert_eq!(report.rows[8].checked, (1..=200).filter(|m| [3, 5, 6].contains(&(m % 7))).count() as u64);
    }

    #[test]
    fn index_reading_of_the_ternary_twist_fails() {
        // Reading n^{-610} with n the index of 3n+1 rather than the argument breaks the
        // congruence, e.g. at n = 1: τ(4) vs 1 * σ_1231(4) mod 3^6.
        let t = tau_table(10).unwrap();
        let lhs = reduce_i128(t.get(4).unwrap(), 729);
        let rhs = sigma_mod(1231, 4, 729).unwrap();
        assert_ne!(lhs, rhs);
    }

    #[test]
    fn short_table_rejected() {
        let t = tau_table(100).unwrap();
        assert!(verify_sd_congruences(&t, 100).is_err());
    }
}
