//! Consistency checks of a τ table against the classical identities.

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::{TauTable, LEADING_TAU};
use crate::arith::{factorize_u64, is_prime};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TauAuditReport {
    pub n: u64,
    pub leading: Vec<i128>,
    pub leading_ok: bool,
    pub multiplicative_checked: u64,
    /// `τ(n) != ∏ τ(q^e)` over the factorization of `n`.
    pub multiplicative_failures: Vec<u64>,
    pub recurrence_checked: u64,
    /// Prime powers `q^{e+1}` breaking `τ(q^{e+1}) = τ(q) τ(q^e) - q^11 τ(q^{e-1})`.
    pub recurrence_failures: Vec<u64>,
    /// `τ(n)` odd exactly when `n` is an odd square.
    pub parity_failures: Vec<u64>,
    pub primes_checked: u64,
    /// Primes with `τ(q)^2 > 4 q^11`.
    pub deligne_failures: Vec<u64>,
}

impl TauAuditReport {
    pub fn all_pass(&self) -> bool {
        self.leading_ok
            && self.multiplicative_failures.is_empty()
            && self.recurrence_failures.is_empty()
            && self.parity_failures.is_empty()
            && self.deligne_failures.is_empty()
    }
}

fn is_odd_square(n: u64) -> bool {
    let r = n.isqrt();
    r * r == n && n % 2 == 1
}

/// Checks `τ(1..=n)` straight from the table entries.
pub fn audit_tau_table(table: &TauTable, n: u64) -> Result<TauAuditReport> {
    if n == 0 {
        return Err(Error::Zero("N"));
    }
    if n > table.horizon() {
        return Err(Error::InvalidArgument(format!("audit bound {n} exceeds the table horizon {}", table.horizon())));
    }
    let t = |m: u64| table.get(m).expect("within horizon");
    let leading: Vec<i128> = (1..=n.min(5)).map(t).collect();
    let mut report = TauAuditReport {
        n,
        leading_ok: leading[..] == LEADING_TAU[..leading.len()],
        leading,
        multiplicative_checked: 0,
        multiplicative_failures: Vec::new(),
        recurrence_checked: 0,
        recurrence_failures: Vec::new(),
        parity_failures: Vec::new(),
        primes_checked: 0,
        deligne_failures: Vec::new(),
    };
    for m in 1..=n {
        let tm = t(m);
        if (tm % 2 != 0) != is_odd_square(m) {
            report.parity_failures.push(m);
        }
        let factors = factorize_u64(m)?.factors;
        if factors.len() >= 2 {
            report.multiplicative_checked += 1;
            let mut prod = BigInt::one();
            for &(q, e) in &factors {
                prod *= t(q.pow(e));
            }
            if prod != BigInt::from(tm) {
                report.multiplicative_failures.push(m);
            }
        }
        if let [(q, e)] = factors[..] {
            if e == 1 {
                report.primes_checked += 1;
                let lhs = BigInt::from(tm) * BigInt::from(tm);
                if lhs > BigInt::from(4u32) * BigInt::from(q).pow(11) {
                    report.deligne_failures.push(q);
                }
            } else {
                report.recurrence_checked += 1;
                let prev = if e == 2 { 1 } else { t(q.pow(e - 2)) };
                let rhs =
                    BigInt::from(t(q)) * BigInt::from(t(q.pow(e - 1))) - BigInt::from(q).pow(11) * BigInt::from(prev);
                if rhs != BigInt::from(tm) {
                    report.recurrence_failures.push(m);
                }
            }
        }
    }
    debug_assert!(report.primes_checked == (1..=n).filter(|&m| is_prime(m)).count() as u64);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tau::tau_table;

    #[test]
    fn table_passes_audit() {
        let r = audit_tau_table(&tau_table(3000).unwrap(), 3000).unwrap();
        assert!(r.all_pass(), "{r:?}");
        assert_eq!(r.leading, LEADING_TAU.to_vec());
        assert_eq!(r.primes_checked, 430);
    }

    #[test]
    fn corrupted_entry_is_caught() {
        let mut values = tau_table(200).unwrap().values().to_vec();
        values[5] += 2; // τ(6)
        let table = TauTable { horizon: 200, values: std::iter::once(0).chain(values).collect() };
        let r = audit_tau_table(&table, 200).unwrap();
        assert_eq!(r.multiplicative_failures, [6]);
        assert!(!r.all_pass());
    }

    #[test]
    fn bound_beyond_table() {
        assert!(audit_tau_table(&tau_table(50).unwrap(), 51).is_err());
    }
}
