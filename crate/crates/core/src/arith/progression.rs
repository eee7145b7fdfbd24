use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::primes::{factorize_u64, Factorization};
use crate::error::{Error, Result};

/// The progression `A n + B` together with its gcd decomposition.
///
/// `g = gcd(a, b)`, `a = g * a_prime`, `b = g * b_prime`, and `g_prime` collects the
/// full `q`-parts of `g` for the primes `q` dividing both `g` and `a_prime`. Those are
/// the primes whose exponent in `A n + B` is the same for every `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Progression {
    pub a: u64,
    pub b: u64,
    pub g: u64,
    pub a_prime: u64,
    pub b_prime: u64,
    pub g_prime: u64,
    pub g_factors: Factorization,
    pub a_prime_factors: Factorization,
    pub g_prime_factors: Factorization,
}

impl Progression {
    /// Value of the `n`-th term, if it fits in `u64`.
    pub fn term(&self, n: u64) -> Option<u64> {
        self.a.checked_mul(n)?.checked_add(self.b)
    }

    /// Primes `q | G` with `q ∤ A'`, paired with `ν_q(G)`.
    pub fn varying_primes(&self) -> impl Iterator<Item = (u64, u32)> + '_ {
        self.g_factors.factors.iter().copied().filter(|&(q, _)| self.a_prime % q != 0)
    }
}

pub fn decompose_progression(a: u64, b: u64) -> Result<Progression> {
    if a == 0 {
        return Err(Error::Zero("A"));
    }
    if b == 0 {
        return Err(Error::Zero("B"));
    }
    let g = a.gcd(&b);
    let a_prime = a / g;
    let b_prime = b / g;
    let g_factors = factorize_u64(g)?;
    let a_prime_factors = factorize_u64(a_prime)?;
    let fixed: Vec<(u64, u32)> = g_factors.factors.iter().copied().filter(|&(q, _)| a_prime % q == 0).collect();
    let g_prime = fixed.iter().map(|&(q, e)| q.pow(e)).product();
    Ok(Progression {
        a,
        b,
        g,
        a_prime,
        b_prime,
        g_prime,
        g_factors,
        a_prime_factors,
        g_prime_factors: Factorization { sign: 1, factors: fixed },
    })
}

/// The largest divisor of `n` coprime to `c`: `∏_{q | n, q ∤ c} q^{ν_q(n)}`.
pub fn coprime_part(n: u64, c: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::Zero("n"));
    }
    if c == 0 {
        return Err(Error::Zero("C"));
    }
    let mut n = n;
    let mut g = n.gcd(&c);
    while g > 1 {
        n /= g;
        g = n.gcd(&g);
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decomposition_examples() {
        let p = decompose_progression(12, 3).unwrap();
        assert_eq!((p.g, p.a_prime, p.b_prime, p.g_prime), (3, 4, 1, 1));
        let p = decompose_progression(7, 3).unwrap();
        assert_eq!((p.g, p.a_prime, p.b_prime, p.g_prime), (1, 7, 3, 1));
        let p = decompose_progression(8, 4).unwrap();
        assert_eq!((p.g, p.a_prime, p.b_prime, p.g_prime), (4, 2, 1, 4));
        assert_eq!(p.varying_primes().count(), 0);
        let p = decompose_progression(36, 6).unwrap();
        assert_eq!((p.g, p.a_prime, p.b_prime, p.g_prime), (6, 6, 1, 6));
        assert!(decompose_progression(0, 3).is_err());
        assert!(decompose_progression(3, 0).is_err());
    }

    #[test]
    fn decomposition_round_trip_grid() {
        for a in 1..=200u64 {
            for b in 1..=200u64 {
                let p = decompose_progression(a, b).unwrap();
                assert_eq!(p.g * p.a_prime, a);
                assert_eq!(p.g * p.b_prime, b);
                assert_eq!(p.a_prime.gcd(&p.b_prime), 1);
                assert_eq!(p.g % p.g_prime, 0);
                assert!(p.g_prime_factors.primes().all(|q| p.a_prime % q == 0));
            }
        }
    }

    #[test]
    fn coprime_part_examples() {
        assert_eq!(coprime_part(25, 3).unwrap(), 25);
        assert_eq!(coprime_part(12, 6).unwrap(), 1);
        assert_eq!(coprime_part(360, 10).unwrap(), 9);
        assert_eq!(coprime_part(1, 1).unwrap(), 1);
    }
}
