use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::modular::mul_mod;
use crate::error::{Error, Result};

/// Largest modulus for which residues are enumerated directly.
pub const MAX_ENUMERATED_MODULUS: u64 = 1 << 24;

/// Residue behaviour of `B'` modulo `A'`.
///
/// The square tests are decided by enumerating residues, so they are exact for
/// composite moduli too. `kronecker` is the symbol `(B'/A')`, which for composite
/// `A'` can be `+1` while `B'` is not a square.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadraticClass {
    pub is_square_mod: bool,
    pub is_twice_square_mod: bool,
    pub kronecker: i8,
    /// Smallest `x >= 0` with `x^2 ≡ B' (mod A')`.
    pub square_root: Option<u64>,
    /// Smallest `x >= 0` with `2 x^2 ≡ B' (mod A')`.
    pub twice_square_root: Option<u64>,
}

pub fn quadratic_class(b_prime: u64, a_prime: u64) -> Result<QuadraticClass> {
    if a_prime == 0 {
        return Err(Error::Zero("A'"));
    }
    let g = a_prime.gcd(&b_prime);
    if g != 1 {
        return Err(Error::NotCoprime { a: a_prime, b: b_prime, gcd: g });
    }
    if a_prime > MAX_ENUMERATED_MODULUS {
        return Err(Error::ResourceLimit(format!(
            "residue enumeration modulo {a_prime} (limit {MAX_ENUMERATED_MODULUS})"
        )));
    }
    let target = b_prime % a_prime;
    let mut square_root = None;
    let mut twice_square_root = None;
    for x in 0..a_prime {
        let sq = mul_mod(x, x, a_prime);
        if square_root.is_none() && sq == target {
            square_root = Some(x);
        }
        if twice_square_root.is_none() && mul_mod(2, sq, a_prime) == target {
            twice_square_root = Some(x);
        }
        if square_root.is_some() && twice_square_root.is_some() {
            break;
        }
    }
    Ok(QuadraticClass {
        is_square_mod: square_root.is_some(),
        is_twice_square_mod: twice_square_root.is_some(),
        kronecker: kronecker(b_prime as i128, a_prime as i128),
        square_root,
        twice_square_root,
    })
}

/// Kronecker symbol `(a/n)`.
pub fn kronecker(a: i128, n: i128) -> i8 {
    const TAB2: [i8; 8] = [0, 1, 0, -1, 0, -1, 0, 1];
    if n == 0 {
        return if a.abs() == 1 { 1 } else { 0 };
    }
    if a % 2 == 0 && n % 2 == 0 {
        return 0;
    }
    let mut a = a;
    let mut b = n;
    let v = b.trailing_zeros();
    b >>= v;
    let mut k: i8 = if v % 2 == 0 { 1 } else { TAB2[(a & 7) as usize] };
    if b < 0 {
        b = -b;
        if a < 0 {
            k = -k;
        }
    }
    loop {
        if a == 0 {
            return if b > 1 { 0 } else { k };
        }
        let v = a.trailing_zeros();
        a >>= v;
        if v % 2 == 1 {
            k *= TAB2[(b & 7) as usize];
        }
        if a & b & 2 != 0 {
            k = -k;
        }
        let r = a.abs();
        a = b % r;
        b = r;
    }
}
