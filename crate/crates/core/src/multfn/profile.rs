//! Valuation profiles `e ↦ ν_p(f(q^e))`.
//!
//! Registered closed forms are the structural facts that let the engine certify an
//! infinite minimum over exponents. Anything found by sampling is reported as
//! detected and never certifies on its own.

use serde::{Deserialize, Serialize};

use super::{nu_pow_minus_one, Family, FnDescriptor};
use crate::arith::modular::pow_mod;
use crate::arith::{factorize_u64, nu_unchecked, require_prime, ExtendedNat, Finite};
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum ClosedForm {
    /// `e ↦ 0`.
    Zero,
    /// `e ↦ 0` when `period ∤ e + 1`, else `base + ν_p((e + 1) / period)`.
    Gated { p: u64, period: u64, base: u64 },
    /// `0 ↦ 0` and `e ↦ base + slope (e - 1)` for `e >= 1`.
    Affine { base: u64, slope: u64 },
}

impl ClosedForm {
    pub fn value(&self, e: u32) -> ExtendedNat {
        let e = e as u64;
        match *self {
            ClosedForm::Zero => ExtendedNat::ZERO,
            ClosedForm::Gated { p, period, base } => {
                if (e + 1) % period != 0 {
                    ExtendedNat::ZERO
                } else {
                    Finite(base) + nu_unchecked(p, ((e + 1) / period) as u128)
                }
            }
            ClosedForm::Affine { base, slope } => {
                if e == 0 {
                    ExtendedNat::ZERO
                } else {
                    Finite(base + slope * (e - 1))
                }
            }
        }
    }

    /// `min_{e >= a}` of the profile, with the smallest exponent attaining it.
    pub fn min_from(&self, a: u32) -> (ExtendedNat, u32) {
        match *self {
            ClosedForm::Zero => (ExtendedNat::ZERO, a),
            ClosedForm::Gated { p, period, base } => {
                // Among e = a, a + 1 one of e + 1 escapes `period` (when > 1) or `p`.
                let modulus = if period > 1 { period } else { p };
                let e = if (a as u64 + 1) % modulus != 0 { a } else { a + 1 };
                let value = if period > 1 { ExtendedNat::ZERO } else { Finite(base) };
                debug_assert_eq!(self.value(e), value);
                (value, e)
            }
            ClosedForm::Affine { .. } => (self.value(a), a),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileSource {
    /// A proven structural fact of the function family.
    Registered,
    /// Periodicity observed in a finite sample.
    Detected,
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum ProfileShape {
    ClosedForm {
        rule: ClosedForm,
    },
    /// `values[e]` for `e < preperiod + period`; afterwards `values` repeats with `period`.
    EventuallyPeriodic {
        preperiod: usize,
        period: usize,
        values: Vec<ExtendedNat>,
    },
    Unknown {
        sampled: Vec<ExtendedNat>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValuationProfile {
    pub p: u64,
    pub q: u64,
    pub source: ProfileSource,
    pub shape: ProfileShape,
}

/// Multiplicative order of `x` modulo the prime `p` (`x` not divisible by `p`).
fn order_mod_prime(x: u64, p: u64) -> u64 {
    let mut ord = p - 1;
    let fac = factorize_u64(p - 1).expect("p - 1 >= 1");
    for (r, _) in fac.factors {
        while ord % r == 0 && pow_mod(x, ord / r, p) == 1 {
            ord /= r;
        }
    }
    ord
}

pub(super) fn registered(f: &FnDescriptor, p: u64, q: u64) -> Option<ClosedForm> {
    match f.family() {
        Family::Sigma { k } => {
            if *k == 0 {
                return Some(ClosedForm::Gated { p, period: 1, base: 0 });
            }
            if q == p {
                return Some(ClosedForm::Zero);
            }
            let k = *k as u64;
            let period = if p == 2 {
                if pow_mod(q, k, 4) == 1 {
                    1
                } else {
                    2
                }
            } else {
                order_mod_prime(pow_mod(q, k, p), p)
            };
            let base = nu_pow_minus_one(p, q, k * period) - nu_pow_minus_one(p, q, k);
            Some(ClosedForm::Gated { p, period, base })
        }
        Family::Phi => Some(if q == p {
            ClosedForm::Affine { base: 0, slope: 1 }
        } else {
            ClosedForm::Affine { base: nu_unchecked(p, (q - 1) as u128).finite().unwrap_or(0), slope: 0 }
        }),
        Family::Tau(_) | Family::Table(_) => None,
    }
}

/// Smallest `(preperiod, period)` explaining `values`, requiring at least three
/// observed repetitions of the period.
fn detect_period(values: &[ExtendedNat]) -> Option<(usize, usize)> {
    let len = values.len();
    for period in 1..=len / 3 {
        let mut pre = 0;
        for i in (0..len - period).rev() {
            if values[i] != values[i + period] {
                pre = i + 1;
                break;
            }
        }
        if len - pre >= 3 * period {
            return Some((pre, period));
        }
    }
    None
}

/// Describes `e ↦ ν_p(f(q^e))`: the registered closed form if there is one,
/// otherwise a sample of `e = 0..=horizon` with any periodicity it shows.
pub fn valuation_profile(f: &FnDescriptor, p: u64, q: u64, horizon: u32) -> Result<ValuationProfile> {
    require_prime(p)?;
    require_prime(q)?;
    if let Some(rule) = f.registered_profile(p, q) {
        return Ok(ValuationProfile {
            p,
            q,
            source: ProfileSource::Registered,
            shape: ProfileShape::ClosedForm { rule },
        });
    }
    let sampled = (0..=horizon).map(|e| f.nu_prime_power_unchecked(p, q, e)).collect::<Result<Vec<_>>>()?;
    Ok(match detect_period(&sampled) {
        Some((preperiod, period)) => ValuationProfile {
            p,
            q,
            source: ProfileSource::Detected,
            shape: ProfileShape::EventuallyPeriodic {
                preperiod,
                period,
                values: sampled[..preperiod + period].to_vec(),
            },
        },
        None => ValuationProfile { p, q, source: ProfileSource::Sampled, shape: ProfileShape::Unknown { sampled } },
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::arith::modular::mul_mod;
    use crate::arith::sieve_primes;
    use crate::tau::tau_table;

    fn naive_order(x: u64, p: u64) -> u64 {
        let mut y = x % p;
        let mut d = 1;
        while y != 1 {
            y = mul_mod(y, x, p);
            d += 1;
        }
        d
    }

    #[test]
    fn registered_forms_agree_with_direct_valuations() {
        let primes = sieve_primes(60);
        let fns: Vec<FnDescriptor> =
            [0, 1, 2, 3, 5, 11].into_iter().map(FnDescriptor::sigma).chain([FnDescriptor::phi()]).collect();
        for f in &fns {
            for &p in &primes[..5] {
                for &q in &primes {
                    let rule = f.registered_profile(p, q).expect("registered");
                    for e in 0..=64u32 {
                        let direct = crate::arith::nu_big(p, &f.eval_prime_power(q, e).unwrap()).unwrap();
                        assert_eq!(rule.value(e), direct, "{f} p={p} q={q} e={e} {rule:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn min_from_matches_brute_force() {
        let primes = sieve_primes(30);
        for f in [FnDescriptor::sigma(0), FnDescriptor::sigma(3), FnDescriptor::phi()] {
            for &p in &primes[..4] {
                for &q in &primes {
                    let rule = f.registered_profile(p, q).unwrap();
                    for a in 0..10u32 {
                        let brute = (a..a + 40).map(|e| rule.value(e)).min().unwrap();
                        let (v, e) = rule.min_from(a);
                        assert_eq!(v, brute);
                        assert_eq!(rule.value(e), v);
                        assert!(e >= a);
                    }
                }
            }
        }
    }

    #[test]
    fn profile_examples() {
        let prof = valuation_profile(&FnDescriptor::sigma(0), 2, 3, 64).unwrap();
        assert_eq!(prof.source, ProfileSource::Registered);
        assert_eq!(prof.shape, ProfileShape::ClosedForm { rule: ClosedForm::Gated { p: 2, period: 1, base: 0 } });
        let prof = valuation_profile(&FnDescriptor::phi(), 3, 7, 64).unwrap();
        let ProfileShape::ClosedForm { rule } = prof.shape else { panic!() };
        assert_eq!(rule, ClosedForm::Affine { base: 1, slope: 0 });
        assert_eq!(rule.value(0), Finite(0));
        assert_eq!(rule.value(5), Finite(1));
    }

    #[test]
    fn tau_profile_is_sampled() {
        let f = FnDescriptor::tau(Arc::new(tau_table(10).unwrap()));
        let prof = valuation_profile(&f, 691, 2, 64).unwrap();
        assert_ne!(prof.source, ProfileSource::Registered);
        match prof.shape {
            ProfileShape::EventuallyPeriodic { ref values, .. } => assert_eq!(values[0], Finite(0)),
            ProfileShape::Unknown { ref sampled } => assert_eq!(sampled.len(), 65),
            ProfileShape::ClosedForm { .. } => panic!("tau has no registered form"),
        }
    }

    #[test]
    fn period_detection() {
        let v: Vec<ExtendedNat> = [5, 0, 1, 0, 1, 0, 1, 0, 1].map(Finite).to_vec();
        assert_eq!(detect_period(&v), Some((1, 2)));
        let v: Vec<ExtendedNat> = (0..10).map(Finite).collect();
        assert_eq!(detect_period(&v), None);
    }

    #[test]
    fn order_by_factorization() {
        for p in sieve_primes(300).into_iter().skip(1) {
            for x in 1..p.min(40) {
                assert_eq!(order_mod_prime(x, p), naive_order(x, p));
            }
        }
    }
}
