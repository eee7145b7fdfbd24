//! Ramanujan's τ from the q-expansion of `q ∏ (1 - q^n)^24`.
//!
//! The table is built from Jacobi's identity
//! `∏ (1 - q^n)^3 = Σ_{k>=0} (-1)^k (2k+1) q^{k(k+1)/2}`: the sparse cube series is
//! multiplied into a dense accumulator eight times. Everything is exact `i128`
//! arithmetic with overflow checks; the coefficients stay far below `2^127` for
//! every horizon under [`MAX_TAU_HORIZON`].

mod audit;
mod cache;
mod congruences;

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;

use crate::arith::modular::{mul_mod, reduce_i128};
use crate::arith::require_prime;
use crate::error::{Error, Result};

pub use audit::{audit_tau_table, TauAuditReport};
pub use cache::{read_cache, write_cache};
pub use congruences::{
    required_horizon, sd_congruences, verify_sd_congruences, CongruenceRhs, CongruenceRow, Domain, SdCongruence,
    SdReport, TwistFactor,
};

/// Largest horizon accepted by [`tau_table`].
pub const MAX_TAU_HORIZON: u64 = 500_000;

/// The leading coefficients `τ(1..=5)` of the expansion.
pub const LEADING_TAU: [i128; 5] = [1, -24, 252, -1472, 4830];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauTable {
    horizon: u64,
    /// `values[n]` is `τ(n)`; index 0 is unused and holds 0.
    values: Vec<i128>,
}

impl TauTable {
    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    pub fn get(&self, n: u64) -> Option<i128> {
        if n == 0 || n > self.horizon {
            None
        } else {
            Some(self.values[n as usize])
        }
    }

    /// `τ(1), ..., τ(N)`.
    pub fn values(&self) -> &[i128] {
        &self.values[1..]
    }

    pub(crate) fn from_values(values: Vec<i128>) -> Result<Self> {
        let horizon = values.len() as u64;
        let table = TauTable { horizon, values: std::iter::once(0).chain(values).collect() };
        table.check_leading()?;
        Ok(table)
    }

    fn check_leading(&self) -> Result<()> {
        for (i, &want) in LEADING_TAU.iter().enumerate() {
            let n = i as u64 + 1;
            if let Some(got) = self.get(n) {
                if got != want {
                    return Err(Error::InvalidArgument(format!("tau({n}) = {got}, expected {want}")));
                }
            }
        }
        Ok(())
    }

    fn coverage(&self, q: u64, e: u32) -> Error {
        Error::Coverage { function: format!("tau (table horizon {})", self.horizon), q, e }
    }

    fn tau_prime(&self, q: u64, e: u32) -> Result<i128> {
        self.get(q).ok_or_else(|| self.coverage(q, e))
    }
}

/// Coefficients of `∏_{n>=1} (1 - q^n)` below `q^len`, from the pentagonal number theorem.
pub fn euler_function_series(len: usize) -> Vec<i64> {
    let mut out = vec![0i64; len];
    if len == 0 {
        return out;
    }
    out[0] = 1;
    for k in 1.. {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let g1 = k * (3 * k - 1) / 2;
        let g2 = k * (3 * k + 1) / 2;
        if g1 >= len {
            break;
        }
        out[g1] += sign;
        if g2 < len {
            out[g2] += sign;
        }
    }
    out
}

/// Sparse `(exponent, coefficient)` terms of `∏ (1 - q^n)^3` below `q^len`.
fn cube_terms(len: usize) -> Vec<(usize, i128)> {
    (0..)
        .map(|k: usize| (k * (k + 1) / 2, k))
        .take_while(|&(d, _)| d < len)
        .map(|(d, k)| {
            let c = (2 * k + 1) as i128;
            (d, if k % 2 == 0 { c } else { -c })
        })
        .collect()
}

fn multiply_sparse(dense: &[i128], sparse: &[(usize, i128)]) -> Result<Vec<i128>> {
    let mut out = vec![0i128; dense.len()];
    for (i, slot) in out.iter_mut().enumerate() {
        let mut acc: i128 = 0;
        for &(d, c) in sparse {
            if d > i {
                break;
            }
            let term =
                c.checked_mul(dense[i - d]).ok_or_else(|| Error::Overflow(format!("tau series coefficient {i}")))?;
            acc = acc.checked_add(term).ok_or_else(|| Error::Overflow(format!("tau series coefficient {i}")))?;
        }
        *slot = acc;
    }
    Ok(out)
}

/// `τ(1..=N)` as exact integers.
pub fn tau_table(horizon: u64) -> Result<TauTable> {
    if horizon == 0 {
        return Err(Error::Zero("tau horizon"));
    }
    if horizon > MAX_TAU_HORIZON {
        return Err(Error::ResourceLimit(format!("tau horizon {horizon} exceeds {MAX_TAU_HORIZON}")));
    }
    // τ(n) is the coefficient of q^{n-1} in ∏(1 - q^n)^24.
    let len = horizon as usize;
    let cube = cube_terms(len);
    let mut series = vec![0i128; len];
    for &(d, c) in &cube {
        series[d] = c;
    }
    for _ in 1..8 {
        series = multiply_sparse(&series, &cube)?;
    }
    TauTable::from_values(series)
}

/// Shared table, for descriptors that hold it by reference.
pub fn shared_tau_table(horizon: u64) -> Result<Arc<TauTable>> {
    tau_table(horizon).map(Arc::new)
}

/// `τ(q^e)` by the recurrence `τ(q^{m+1}) = τ(q) τ(q^m) - q^11 τ(q^{m-1})`.
pub fn tau_prime_power(table: &TauTable, q: u64, e: u32) -> Result<BigInt> {
    require_prime(q)?;
    tau_prime_power_unchecked(table, q, e)
}

pub(crate) fn tau_prime_power_unchecked(table: &TauTable, q: u64, e: u32) -> Result<BigInt> {
    if e == 0 {
        return Ok(BigInt::one());
    }
    let tq = BigInt::from(table.tau_prime(q, e)?);
    let q11 = BigInt::from(q).pow(11);
    let mut prev = BigInt::one();
    let mut cur = tq.clone();
    for _ in 1..e {
        let next = &tq * &cur - &q11 * &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(cur)
}

/// `τ(q^e) mod m`, via the recurrence reduced modulo `m`.
pub(crate) fn tau_prime_power_mod(table: &TauTable, q: u64, e: u32, m: u64) -> Result<u64> {
    if e == 0 {
        return Ok(1 % m);
    }
    let tq = reduce_i128(table.tau_prime(q, e)?, m);
    let q11 = crate::arith::modular::pow_mod(q, 11, m);
    let (mut prev, mut cur) = (1 % m, tq);
    for _ in 1..e {
        let next = (mul_mod(tq, cur, m) + m - mul_mod(q11, prev, m)) % m;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}
