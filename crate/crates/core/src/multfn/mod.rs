//! Multiplicative functions given by their values at prime powers.

mod custom;
mod profile;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::modular::{mul_mod, pow_mod, reduce_i128};
use crate::arith::{factorize_u64, nu_big_unchecked, nu_unchecked, require_prime, ExtendedNat, Finite};
use crate::error::{Error, Result};
use crate::tau::{tau_prime_power_mod, tau_prime_power_unchecked, TauTable};

pub use custom::{load_custom, load_custom_file, DEFAULT_CUSTOM_TAU_HORIZON};
pub use profile::{valuation_profile, ClosedForm, ProfileShape, ProfileSource, ValuationProfile};

/// Explicit `(q, e) -> f(q^e)` values for a user-defined function.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PrimePowerTable {
    entries: BTreeMap<(u64, u32), BigInt>,
}

impl PrimePowerTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts `f(q^e) = value`. `e = 0` is only accepted with value 1.
    pub fn insert(&mut self, q: u64, e: u32, value: BigInt) -> Result<()> {
        require_prime(q)?;
        if e == 0 && !value.is_one() {
            return Err(Error::InvalidArgument(format!("f({q}^0) must be 1, got {value}")));
        }
        self.entries.insert((q, e), value);
        Ok(())
    }

    pub fn get(&self, q: u64, e: u32) -> Option<&BigInt> {
        self.entries.get(&(q, e))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn has_zero(&self) -> bool {
        self.entries.values().any(Zero::is_zero)
    }
}

#[derive(Clone, Debug)]
pub enum Family {
    /// `σ_k(n) = Σ_{d | n} d^k`.
    Sigma {
        k: u32,
    },
    /// Euler's totient.
    Phi,
    /// Ramanujan's τ, backed by a table of `τ(1..=N)`.
    Tau(Arc<TauTable>),
    Table(Arc<PrimePowerTable>),
}

/// An integer-valued multiplicative function.
#[derive(Clone, Debug)]
pub struct FnDescriptor {
    name: String,
    family: Family,
    zero_possible: bool,
}

impl fmt::Display for FnDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl FnDescriptor {
    pub fn sigma(k: u32) -> Self {
        FnDescriptor { name: format!("sigma_{k}"), family: Family::Sigma { k }, zero_possible: false }
    }

    pub fn phi() -> Self {
        FnDescriptor { name: "phi".into(), family: Family::Phi, zero_possible: false }
    }

    /// τ backed by `table`. τ may vanish as far as anything proven goes, so
    /// `zero_possible` is set.
    pub fn tau(table: Arc<TauTable>) -> Self {
        FnDescriptor { name: "tau".into(), family: Family::Tau(table), zero_possible: true }
    }

    pub fn from_table(name: impl Into<String>, table: PrimePowerTable) -> Self {
        let zero_possible = table.has_zero();
        FnDescriptor { name: name.into(), family: Family::Table(Arc::new(table)), zero_possible }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn zero_possible(&self) -> bool {
        self.zero_possible
    }

    pub fn is_sigma_family(&self) -> bool {
        matches!(self.family, Family::Sigma { .. })
    }

    /// Exact `f(q^e)`.
    pub fn eval_prime_power(&self, q: u64, e: u32) -> Result<BigInt> {
        require_prime(q)?;
        self.eval_prime_power_unchecked(q, e)
    }

    pub(crate) fn eval_prime_power_unchecked(&self, q: u64, e: u32) -> Result<BigInt> {
        if e == 0 {
            return Ok(BigInt::one());
        }
        match &self.family {
            Family::Sigma { k } => {
                let x = BigInt::from(q).pow(*k);
                let mut term = BigInt::one();
                let mut sum = BigInt::one();
                for _ in 0..e {
                    term *= &x;
                    sum += &term;
                }
                Ok(sum)
            }
            Family::Phi => Ok(BigInt::from(q).pow(e - 1) * (q - 1)),
            Family::Tau(table) => tau_prime_power_unchecked(table, q, e),
            Family::Table(table) => {
                table.get(q, e).cloned().ok_or_else(|| Error::Coverage { function: self.name.clone(), q, e })
            }
        }
    }

    /// Exact `f(n)` as the product of its prime-power values.
    pub fn eval(&self, n: u64) -> Result<BigInt> {
        if n == 0 {
            return Err(Error::Zero("argument of a multiplicative function"));
        }
        let mut acc = BigInt::one();
        for (q, e) in factorize_u64(n)?.factors {
            acc *= self.eval_prime_power_unchecked(q, e)?;
        }
        Ok(acc)
    }

    /// `f(n) mod m` in `[0, m)`, without forming `f(n)` for the built-in families.
    pub fn eval_mod(&self, n: u64, m: u64) -> Result<u64> {
        if n == 0 {
            return Err(Error::Zero("argument of a multiplicative function"));
        }
        if m < 2 {
            return Err(Error::InvalidArgument(format!("modulus {m} is below 2")));
        }
        let mut acc = 1u64;
        for (q, e) in factorize_u64(n)?.factors {
            let v = match &self.family {
                Family::Sigma { k } => sigma_prime_power_mod(*k, q, e, m),
                Family::Phi => mul_mod(pow_mod(q, (e - 1) as u64, m), (q - 1) % m, m),
                Family::Tau(table) => tau_prime_power_mod(table, q, e, m)?,
                Family::Table(_) => {
                    let v = self.eval_prime_power_unchecked(q, e)?;
                    let r = v % BigInt::from(m);
                    reduce_i128(r.to_i128().expect("residue fits"), m)
                }
            };
            acc = mul_mod(acc, v, m);
        }
        Ok(acc)
    }

    /// `ν_p(f(q^e))`, validating that `p` and `q` are prime.
    pub fn nu_prime_power(&self, p: u64, q: u64, e: u32) -> Result<ExtendedNat> {
        require_prime(p)?;
        require_prime(q)?;
        self.nu_prime_power_unchecked(p, q, e)
    }

    /// `ν_p(f(q^e))` with closed-form shortcuts for the built-in families.
    pub(crate) fn nu_prime_power_unchecked(&self, p: u64, q: u64, e: u32) -> Result<ExtendedNat> {
        if e == 0 {
            return Ok(ExtendedNat::ZERO);
        }
        Ok(match &self.family {
            Family::Sigma { k } => Finite(sigma_prime_power_nu(p, q, *k, e)),
            Family::Phi => {
                if q == p {
                    Finite(e as u64 - 1)
                } else {
                    nu_unchecked(p, (q - 1) as u128)
                }
            }
            Family::Tau(table) if e == 1 => match table.get(q) {
                Some(v) => nu_unchecked(p, v.unsigned_abs()),
                None => {
                    return Err(Error::Coverage { function: self.name.clone(), q, e });
                }
            },
            _ => nu_big_unchecked(p, &self.eval_prime_power_unchecked(q, e)?),
        })
    }

    /// `ν_p(f(q))` for a prime `q`; for `σ_k` this is `ν_p(1 + q^k)`, read off a
    /// single word-size residue when it is nonzero.
    pub(crate) fn nu_prime_unchecked(&self, p: u64, q: u64) -> Result<ExtendedNat> {
        if let Family::Sigma { k } = self.family {
            if q != p && k > 0 {
                if let Some(v) = nu_one_plus_power(p, q, k) {
                    return Ok(Finite(v));
                }
            }
        }
        self.nu_prime_power_unchecked(p, q, 1)
    }

    /// Registered structural fact for `e ↦ ν_p(f(q^e))`, when one is known.
    pub fn registered_profile(&self, p: u64, q: u64) -> Option<ClosedForm> {
        profile::registered(self, p, q)
    }
}

fn sigma_prime_power_mod(k: u32, q: u64, e: u32, m: u64) -> u64 {
    let x = pow_mod(q, k as u64, m);
    let mut term = 1 % m;
    let mut sum = 1 % m;
    for _ in 0..e {
        term = mul_mod(term, x, m);
        sum = (sum + term) % m;
    }
    sum
}

/// `σ_k(n) mod m`.
pub(crate) fn sigma_mod(k: u32, n: u64, m: u64) -> Result<u64> {
    let mut acc = 1 % m;
    for (q, e) in factorize_u64(n)?.factors {
        acc = mul_mod(acc, sigma_prime_power_mod(k, q, e, m), m);
    }
    Ok(acc)
}

/// `ν_p(σ_k(q^e))` for primes `p`, `q`, `e >= 1`.
///
/// `σ_0(q^e) = e + 1` and `σ_k(p^e) ≡ 1 (mod p)` for `k >= 1`. Otherwise, with `x = q^k`,
/// `σ_k(q^e) = (x^{e+1} - 1) / (x - 1)`, whose valuation is a difference of two
/// valuations of `q^N - 1`.
pub(crate) fn sigma_prime_power_nu(p: u64, q: u64, k: u32, e: u32) -> u64 {
    if k == 0 {
        return nu_unchecked(p, e as u128 + 1).finite().unwrap_or(0);
    }
    if q == p {
        return 0;
    }
    let k = k as u64;
    nu_pow_minus_one(p, q, k * (e as u64 + 1)) - nu_pow_minus_one(p, q, k)
}

/// `ν_p(1 + q^k)` when it is below the word-size precision, else `None`.
fn nu_one_plus_power(p: u64, q: u64, k: u32) -> Option<u64> {
    if p == 2 {
        let r = q.wrapping_pow(k).wrapping_add(1);
        return (r != 0).then(|| r.trailing_zeros() as u64);
    }
    // Largest power of p up to 2^32, so products stay in a word.
    let mut m = p;
    while m * p <= 1 << 32 {
        m *= p;
    }
    let (mut base, mut e, mut acc) = (q % m, k, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    let mut r = (acc + 1) % m;
    if r == 0 {
        return None;
    }
    let mut v = 0;
    while r % p == 0 {
        r /= p;
        v += 1;
    }
    Some(v)
}

/// Largest power of `p` below `2^63`, so residues fit comfortably in `u64`.
fn word_prime_power(p: u64) -> u64 {
    let mut modulus = p;
    while let Some(next) = modulus.checked_mul(p).filter(|&m| m < (1 << 63)) {
        modulus = next;
    }
    modulus
}

/// `ν_p(q^n - 1)` for distinct primes `p`, `q` and `n >= 1`.
pub(crate) fn nu_pow_minus_one(p: u64, q: u64, n: u64) -> u64 {
    let modulus = word_prime_power(p);
    let exp = (1..).find(|&j| p.pow(j) == modulus).expect("modulus is a power of p") as u64;
    let r = pow_mod(q, n, modulus);
    if r != 1 {
        let diff = (r + modulus - 1) % modulus;
        return nu_unchecked(p, diff as u128).finite().expect("nonzero residue");
    }
    // The valuation reaches the word-size precision; widen with big integers.
    let p_big = BigUint::from(p);
    let q_big = BigUint::from(q);
    let n_big = BigUint::from(n);
    let mut prec = exp * 2;
    loop {
        let m = p_big.pow(prec as u32);
        let r = q_big.modpow(&n_big, &m);
        if !r.is_one() {
            let diff = (r + &m - 1u32) % &m;
            return nu_big_unchecked(p, &BigInt::from(diff)).finite().expect("nonzero residue");
        }
        prec *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{nu_big, Infinity};
    use crate::tau::tau_table;

    #[test]
    fn prime_power_examples() {
        assert_eq!(FnDescriptor::sigma(0).eval_prime_power(3, 2).unwrap(), BigInt::from(3));
        assert_eq!(FnDescriptor::sigma(1).eval_prime_power(7, 1).unwrap(), BigInt::from(8));
        assert_eq!(FnDescriptor::phi().eval_prime_power(2, 3).unwrap(), BigInt::from(4));
        assert!(FnDescriptor::phi().eval_prime_power(4, 1).is_err());
    }

    #[test]
    fn eval_examples() {
        assert_eq!(FnDescriptor::sigma(0).eval(25).unwrap(), BigInt::from(3));
        assert_eq!(FnDescriptor::sigma(1).eval(15).unwrap(), BigInt::from(24));
        assert_eq!(FnDescriptor::phi().eval(14).unwrap(), BigInt::from(6));
        assert_eq!(FnDescriptor::phi().eval(1).unwrap(), BigInt::from(1));
        assert!(FnDescriptor::phi().eval(0).is_err());
    }

    #[test]
    fn eval_mod_examples() {
        let s11 = FnDescriptor::sigma(11);
        assert_eq!(s11.eval_mod(3, 2048).unwrap(), 177148 % 2048);
        assert_eq!(FnDescriptor::sigma(0).eval_mod(49, 4).unwrap(), 3);
        assert!(s11.eval_mod(3, 1).is_err());
        // Independent oracle: 1 + 11^71 as a big integer, reduced mod 125.
        let oracle = (BigUint::from(11u32).pow(71) + 1u32) % 125u32;
        let expected = oracle.to_u64().unwrap();
        assert_eq!(FnDescriptor::sigma(71).eval_mod(11, 125).unwrap(), expected);
        assert_eq!(expected, 87);
    }

    #[test]
    fn sigma_closed_forms() {
        for q in crate::arith::sieve_primes(50) {
            for e in 0..=10u32 {
                assert_eq!(FnDescriptor::sigma(0).eval_prime_power(q, e).unwrap(), BigInt::from(e + 1));
                for k in 1..=3u32 {
                    let direct: BigInt = (0..=e).map(|i| BigInt::from(q).pow(i * k)).sum();
                    assert_eq!(FnDescriptor::sigma(k).eval_prime_power(q, e).unwrap(), direct);
                }
                if e >= 1 {
                    let phi = BigInt::from(q).pow(e - 1) * (q - 1);
                    assert_eq!(FnDescriptor::phi().eval_prime_power(q, e).unwrap(), phi);
                }
            }
        }
    }

    #[test]
    fn fast_valuations_match_big_integers() {
        let primes = crate::arith::sieve_primes(40);
        let fns = [
            FnDescriptor::sigma(0),
            FnDescriptor::sigma(1),
            FnDescriptor::sigma(3),
            FnDescriptor::sigma(11),
            FnDescriptor::phi(),
        ];
        for f in &fns {
            for &p in &primes[..6] {
                for &q in &primes {
                    for e in 0..=12u32 {
                        let fast = f.nu_prime_power(p, q, e).unwrap();
                        let slow = nu_big(p, &f.eval_prime_power(q, e).unwrap()).unwrap();
                        assert_eq!(fast, slow, "{f} p={p} q={q} e={e}");
                    }
                }
            }
        }
    }

    #[test]
    fn prime_valuation_shortcut() {
        for p in [2u64, 3, 5, 7, 691] {
            for q in crate::arith::sieve_primes(400) {
                for k in [1u32, 2, 3, 11, 71, 1231] {
                    let f = FnDescriptor::sigma(k);
                    assert_eq!(
                        f.nu_prime_unchecked(p, q).unwrap(),
                        f.nu_prime_power_unchecked(p, q, 1).unwrap(),
                        "p={p} q={q} k={k}"
                    );
                }
            }
        }
        assert_eq!(nu_one_plus_power(5, 3, 2), Some(1));
    }

    #[test]
    fn deep_valuation_uses_wide_path() {
        // ν_3(2^n - 1) = 1 + ν_3(n) for even n, which exceeds the 39 digits of
        // 3-adic precision that fit in a word.
        let n = 2 * 3u64.pow(39);
        assert_eq!(nu_pow_minus_one(3, 2, n), 40);
        assert_eq!(nu_pow_minus_one(2, 3, 1 << 40), 2 + 40);
    }

    #[test]
    fn table_function_coverage_and_zero() {
        let mut t = PrimePowerTable::new();
        t.insert(2, 1, BigInt::from(0)).unwrap();
        let f = FnDescriptor::from_table("t", t);
        assert!(f.zero_possible());
        assert_eq!(f.eval(2).unwrap(), BigInt::from(0));
        assert_eq!(f.nu_prime_power(3, 2, 1).unwrap(), Infinity);
        assert!(matches!(f.eval(6), Err(Error::Coverage { q: 3, e: 1, .. })));
        assert!(matches!(f.eval(4), Err(Error::Coverage { q: 2, e: 2, .. })));
    }

    #[test]
    fn tau_descriptor() {
        let f = FnDescriptor::tau(Arc::new(tau_table(100).unwrap()));
        assert_eq!(f.eval(6).unwrap(), BigInt::from(-6048));
        assert_eq!(f.eval_mod(4, 1000).unwrap(), reduce_i128(-1472, 1000));
        assert_eq!(f.nu_prime_power(2, 2, 1).unwrap(), Finite(3));
        assert!(f.eval(101).is_err());
    }
}
