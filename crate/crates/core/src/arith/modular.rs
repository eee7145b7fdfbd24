//! Word-size modular arithmetic. All moduli fit in `u64`; products go through `u128`.

use num_integer::Integer;

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut result = 1u64;
    let mut b = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul_mod(result, b, m);
        }
        b = mul_mod(b, b, m);
        exp >>= 1;
    }
    result
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let ext = (a as i128 % m as i128).extended_gcd(&(m as i128));
    if ext.gcd != 1 {
        return None;
    }
    Some(ext.x.rem_euclid(m as i128) as u64)
}

/// Solves `a * n ≡ b (mod m)`. Returns `(r, step)` such that the solution set is
/// `n ≡ r (mod step)`, or `None` when there is no solution.
pub fn solve_linear(a: u64, b: u64, m: u64) -> Option<(u64, u64)> {
    let a = a % m;
    let b = b % m;
    let g = a.gcd(&m);
    if b % g != 0 {
        return None;
    }
    let step = m / g;
    if step == 1 {
        return Some((0, 1));
    }
    let inv = inv_mod(a / g, step)?;
    Some((mul_mod(b / g, inv, step), step))
}

/// `-x mod m` for `x` already reduced.
#[inline]
pub fn neg_mod(x: u64, m: u64) -> u64 {
    let x = x % m;
    if x == 0 {
        0
    } else {
        m - x
    }
}

/// Signed residue reduced into `[0, m)`.
#[inline]
pub fn reduce_i128(x: i128, m: u64) -> u64 {
    x.rem_euclid(m as i128) as u64
}
