use std::borrow::Cow;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use once_cell::sync::Lazy;
use serde::{Deserialize, Serialize};

use super::extended::{ExtendedNat, Finite, Infinity};
use super::modular::{mul_mod, pow_mod};
use crate::error::{Error, Result};

/// Bound of the shared prime table used for trial division and sieving.
pub const SMALL_PRIME_BOUND: u64 = 1 << 20;

/// Default upper bound on candidates examined by [`primes_in_progression`].
pub const DEFAULT_CANDIDATE_BOUND: u64 = 1_000_000;

static SMALL_PRIMES: Lazy<Vec<u64>> = Lazy::new(|| sieve_primes(SMALL_PRIME_BOUND));

/// Sieve of Eratosthenes, primes `<= limit`.
pub fn sieve_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

/// All primes `<= limit`, borrowed from the shared table when possible.
pub fn primes_up_to(limit: u64) -> Cow<'static, [u64]> {
    if limit <= SMALL_PRIME_BOUND {
        let end = SMALL_PRIMES.partition_point(|&q| q <= limit);
        Cow::Borrowed(&SMALL_PRIMES[..end])
    } else {
        Cow::Owned(sieve_primes(limit))
    }
}

/// Deterministic Miller-Rabin for the full `u64` range.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n <= SMALL_PRIME_BOUND {
        return SMALL_PRIMES.binary_search(&n).is_ok();
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub(crate) fn require_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// `sign * prod(p^e)`; primes strictly increasing, exponents positive.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    pub sign: i8,
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn one() -> Self {
        Factorization { sign: 1, factors: Vec::new() }
    }

    /// Reconstructs the factored integer. Fails only if it does not fit in `i128`.
    pub fn value(&self) -> Result<i128> {
        let mut acc: i128 = self.sign as i128;
        for &(p, e) in &self.factors {
            for _ in 0..e {
                acc = acc.checked_mul(p as i128).ok_or_else(|| Error::Overflow("factorization product".into()))?;
            }
        }
        Ok(acc)
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn exponent_of(&self, p: u64) -> u32 {
        self.factors.binary_search_by_key(&p, |&(q, _)| q).map_or(0, |i| self.factors[i].1)
    }

    /// Number of prime factors counted with multiplicity.
    pub fn big_omega(&self) -> u64 {
        self.factors.iter().map(|&(_, e)| e as u64).sum()
    }
}

/// Factorizes a nonzero integer.
///
/// Trial division by the shared prime table, then Miller-Rabin and Pollard rho on
/// the remaining cofactor. Cofactors above `u64::MAX` that survive trial division
/// are rejected with [`Error::ResourceLimit`].
pub fn factorize(n: i128) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::Zero("factorize argument"));
    }
    let sign = if n < 0 { -1 } else { 1 };
    let mut m = n.unsigned_abs();
    if let Ok(m64) = u64::try_from(m) {
        return Ok(Factorization { sign, factors: factor_word(m64) });
    }
    let mut factors = Vec::new();
    for &p in SMALL_PRIMES.iter() {
        let p128 = p as u128;
        if p128 * p128 > m {
            break;
        }
        if m % p128 == 0 {
            let mut e = 0;
            while m % p128 == 0 {
                m /= p128;
                e += 1;
            }
            factors.push((p, e));
        }
    }
    if m > 1 {
        let bound = SMALL_PRIME_BOUND as u128;
        if m <= bound * bound {
            factors.push((m as u64, 1));
        } else {
            let m64 = u64::try_from(m)
                .map_err(|_| Error::ResourceLimit(format!("cofactor {m} of {n} exceeds the u64 range")))?;
            let mut big = Vec::new();
            split_u64(m64, &mut big);
            big.sort_unstable();
            for q in big {
                match factors.last_mut() {
                    Some((last, e)) if *last == q => *e += 1,
                    _ => factors.push((q, 1)),
                }
            }
        }
    }
    Ok(Factorization { sign, factors })
}

/// Trial division in word arithmetic up to `2^16`, then Pollard rho.
fn factor_word(mut m: u64) -> Vec<(u64, u32)> {
    const TRIAL: u64 = 1 << 16;
    let mut factors = Vec::new();
    for &p in SMALL_PRIMES.iter() {
        if p > TRIAL || p * p > m {
            break;
        }
        if m % p == 0 {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            factors.push((p, e));
        }
    }
    if m > 1 {
        if m < TRIAL * TRIAL {
            factors.push((m, 1));
        } else {
            let mut big = Vec::new();
            split_u64(m, &mut big);
            big.sort_unstable();
            for q in big {
                match factors.last_mut() {
                    Some((last, e)) if *last == q => *e += 1,
                    _ => factors.push((q, 1)),
                }
            }
        }
    }
    factors
}

/// Convenience wrapper for positive `u64` arguments.
pub fn factorize_u64(n: u64) -> Result<Factorization> {
    factorize(n as i128)
}

fn split_u64(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(n);
    split_u64(d, out);
    split_u64(n / d, out);
}

/// Brent's variant with fixed seeds, so results are deterministic.
fn pollard_rho(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    for c in 1u64.. {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = x.abs_diff(y).gcd(&n);
        }
        if d != n {
            return d;
        }
    }
    unreachable!()
}

/// `p`-adic valuation of a machine integer; the sign is ignored and `nu(p, 0) = ∞`.
pub fn nu(p: u64, m: i128) -> Result<ExtendedNat> {
    require_prime(p)?;
    Ok(nu_unchecked(p, m.unsigned_abs()))
}

/// `p`-adic valuation of an arbitrary-precision integer.
pub fn nu_big(p: u64, m: &BigInt) -> Result<ExtendedNat> {
    require_prime(p)?;
    Ok(nu_big_unchecked(p, m))
}

pub(crate) fn nu_unchecked(p: u64, mut m: u128) -> ExtendedNat {
    if m == 0 {
        return Infinity;
    }
    let p = p as u128;
    let mut e = 0;
    while m % p == 0 {
        m /= p;
        e += 1;
    }
    Finite(e)
}

pub(crate) fn nu_big_unchecked(p: u64, m: &BigInt) -> ExtendedNat {
    if m.is_zero() {
        return Infinity;
    }
    if let Some(small) = m.abs().to_u128() {
        return nu_unchecked(p, small);
    }
    let p = BigInt::from(p);
    let mut m = m.abs();
    let mut e = 0;
    loop {
        let (q, r) = m.div_rem(&p);
        if !r.is_zero() {
            return Finite(e);
        }
        m = q;
        e += 1;
    }
}

/// Outcome of a Dirichlet witness search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeSearch {
    pub primes: Vec<u64>,
    /// Set when fewer than `budget` primes were found below the candidate bound.
    pub exhausted: bool,
}

/// The first `budget` primes `q ≡ b (mod a)` with `q ∤ exclude`, in increasing order.
pub fn primes_in_progression(a: u64, b: u64, exclude: u64, budget: usize) -> Result<PrimeSearch> {
    primes_in_progression_bounded(a, b, exclude, budget, DEFAULT_CANDIDATE_BOUND)
}

/// As [`primes_in_progression`], examining candidates up to `candidate_bound`.
pub fn primes_in_progression_bounded(
    a: u64,
    b: u64,
    exclude: u64,
    budget: usize,
    candidate_bound: u64,
) -> Result<PrimeSearch> {
    if a == 0 {
        return Err(Error::Zero("progression modulus"));
    }
    if exclude == 0 {
        return Err(Error::Zero("excluded product"));
    }
    let g = a.gcd(&b);
    if g != 1 {
        return Err(Error::NotCoprime { a, b, gcd: g });
    }
    let mut q = match b % a {
        0 => a,
        r => r,
    };
    let mut primes = Vec::with_capacity(budget);
    while primes.len() < budget && q <= candidate_bound {
        if is_prime(q) && exclude % q != 0 {
            primes.push(q);
        }
        q = match q.checked_add(a) {
            Some(next) => next,
            None => break,
        };
    }
    let exhausted = primes.len() < budget;
    Ok(PrimeSearch { primes, exhausted })
}
