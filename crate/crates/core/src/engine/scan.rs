//! Block sieve over `ν_p(f(a n + b))`.
//!
//! Each block holds the terms `a n + b` for a run of consecutive `n`. Every prime
//! up to the square root of the largest term is divided out where the linear
//! congruence `a n ≡ -b (mod q)` says it divides; what is left is 1 or a prime.
//! Blocks run in parallel but are merged strictly in order, so the result does not
//! depend on the thread count.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::OnceLock;

use rayon::prelude::*;

use crate::arith::modular::{neg_mod, solve_linear};
use crate::arith::{factorize_u64, primes_up_to, ExtendedNat, SMALL_PRIME_BOUND};
use crate::error::{Error, Result};
use crate::multfn::FnDescriptor;

/// Indices below this are evaluated one at a time before any sieving, which
/// settles most early exits cheaply.
const HEAD: u64 = 64;
const FIRST_BLOCK: u64 = 1024;
const MAX_BLOCK: u64 = 16_384;
const INF: u64 = u64::MAX;

#[inline]
fn add_raw(x: u64, y: u64) -> u64 {
    if x == INF || y == INF {
        INF
    } else {
        x + y
    }
}

/// `ν_p(f(m))` for `m >= 1`, ignoring primes that divide `skip`.
pub(crate) fn nu_of_value(f: &FnDescriptor, p: u64, m: u64, skip: u64) -> Result<ExtendedNat> {
    let mut acc = ExtendedNat::ZERO;
    for (q, e) in factorize_u64(m)?.factors {
        if skip % q != 0 {
            acc = acc + if e == 1 { f.nu_prime_unchecked(p, q)? } else { f.nu_prime_power_unchecked(p, q, e)? };
        }
    }
    Ok(acc)
}

/// Terms `a n + b`, valued by `ν_p(f(coprime_part(a n + b, skip)))`.
#[derive(Clone, Copy)]
pub(crate) struct TermScan<'a> {
    pub f: &'a FnDescriptor,
    pub p: u64,
    pub a: u64,
    pub b: u64,
    pub skip: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct ScanOutcome {
    pub min: ExtendedNat,
    /// Smallest index attaining `min`.
    pub witness: Option<u64>,
    /// Indices `0..scanned` were examined.
    pub scanned: u64,
}

struct SmallPrime {
    q: u64,
    residue: u64,
    step: u64,
    skip: bool,
    /// `ν_p(f(q^e))` by exponent, filled on first use; `None` marks an error.
    nus: Vec<OnceLock<Option<u64>>>,
}

struct Sieve<'a> {
    scan: TermScan<'a>,
    primes: Vec<SmallPrime>,
}

fn blocks(from: u64, horizon: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut start = from;
    let mut size = FIRST_BLOCK;
    while start < horizon {
        let len = size.min(horizon - start);
        out.push((start, len));
        start += len;
        size = (size * 2).min(MAX_BLOCK);
    }
    out
}

impl<'a> Sieve<'a> {
    /// `None` when the terms are too large to sieve with the shared prime table.
    fn new(scan: TermScan<'a>, max_value: u64) -> Option<Self> {
        let root = max_value.isqrt();
        if root > SMALL_PRIME_BOUND {
            return None;
        }
        let mut primes = Vec::new();
        for &q in primes_up_to(root).iter() {
            let Some((residue, step)) = solve_linear(scan.a, neg_mod(scan.b % q, q), q) else {
                continue;
            };
            let mut max_exp = 0;
            let mut pw = 1u64;
            while let Some(next) = pw.checked_mul(q).filter(|&v| v <= max_value) {
                pw = next;
                max_exp += 1;
            }
            let skip = scan.skip % q == 0;
            let nus = if skip { Vec::new() } else { (0..=max_exp).map(|_| OnceLock::new()).collect() };
            primes.push(SmallPrime { q, residue, step, skip, nus });
        }
        Some(Sieve { scan, primes })
    }

    fn nu(&self, sp: &SmallPrime, e: u32) -> Result<u64> {
        let TermScan { f, p, .. } = self.scan;
        let eval = || {
            if e == 1 {
                f.nu_prime_unchecked(p, sp.q)
            } else {
                f.nu_prime_power_unchecked(p, sp.q, e)
            }
        };
        match sp.nus[e as usize].get_or_init(|| eval().ok().map(ExtendedNat::to_raw)) {
            Some(v) => Ok(*v),
            None => eval().map(ExtendedNat::to_raw),
        }
    }

    /// Raw valuations of the block `start..start + len`.
    fn block(&self, start: u64, len: u64) -> Result<Vec<u64>> {
        let TermScan { f, p, a, b, skip } = self.scan;
        let len = len as usize;
        let mut rem: Vec<u64> = (0..len as u64).map(|i| a * (start + i) + b).collect();
        let mut acc = vec![0u64; len];
        for sp in &self.primes {
            let first = ((sp.residue + sp.step - start % sp.step) % sp.step) as usize;
            for i in (first..len).step_by(sp.step as usize) {
                let mut e = 0u32;
                while rem[i] % sp.q == 0 {
                    rem[i] /= sp.q;
                    e += 1;
                }
                if !sp.skip && e > 0 {
                    let nu = self.nu(sp, e).map_err(|err| err.at_index(start + i as u64))?;
                    acc[i] = add_raw(acc[i], nu);
                }
            }
        }
        for i in 0..len {
            let q = rem[i];
            if q > 1 && skip % q != 0 {
                let nu = f.nu_prime_unchecked(p, q).map_err(|err| err.at_index(start + i as u64))?;
                acc[i] = add_raw(acc[i], nu.to_raw());
            }
        }
        Ok(acc)
    }
}

/// Running `(value, index)` minimum; ties keep the smaller index.
#[derive(Clone, Copy)]
struct Best(u64, u64);

impl Best {
    const NONE: Best = Best(INF, u64::MAX);

    fn take(&mut self, other: Best) {
        if (other.0, other.1) < (self.0, self.1) {
            *self = other;
        }
    }
}

struct BlockResult {
    best: Best,
    /// First index below the stop threshold, with the minimum up to it.
    stop: Option<(u64, Best)>,
}

fn summarize(acc: &[u64], start: u64, stop_below: u64) -> BlockResult {
    let mut best = Best::NONE;
    for (i, &v) in acc.iter().enumerate() {
        best.take(Best(v, start + i as u64));
        if v < stop_below {
            return BlockResult { best, stop: Some((start + i as u64, best)) };
        }
    }
    BlockResult { best, stop: None }
}

/// Minimum of the valuations over `n < horizon`.
///
/// With `stop_below > 0` the scan ends at the first index whose valuation is
/// below it, and the minimum is taken over the indices up to that one. The
/// outcome never depends on the block layout or the thread count.
pub(crate) fn scan_terms(scan: TermScan<'_>, horizon: u64, stop_below: u64) -> Result<ScanOutcome> {
    if horizon == 0 {
        return Err(Error::InvalidArgument("scan horizon must be at least 1".into()));
    }
    let TermScan { f, p, a, b, skip } = scan;
    let max_value = a
        .checked_mul(horizon - 1)
        .and_then(|v| v.checked_add(b))
        .ok_or_else(|| Error::Overflow(format!("{a} n + {b} for n < {horizon}")))?;

    let finish = |best: Best, scanned: u64| {
        let min = ExtendedNat::from_raw(best.0);
        if !min.is_finite() {
            log::info!("{f}: no finite {p}-adic valuation on {a} n + {b} for n < {scanned}");
        }
        Ok(ScanOutcome { min, witness: min.is_finite().then_some(best.1), scanned })
    };

    let mut best = Best::NONE;
    for n in 0..HEAD.min(horizon) {
        let v = nu_of_value(f, p, a * n + b, skip).map_err(|e| e.at_index(n))?.to_raw();
        best.take(Best(v, n));
        if v < stop_below {
            return finish(best, n + 1);
        }
    }
    if horizon <= HEAD {
        return finish(best, horizon);
    }

    let sieve = Sieve::new(scan, max_value);
    let direct = |start: u64, len: u64| -> Result<Vec<u64>> {
        (start..start + len)
            .map(|n| nu_of_value(f, p, a * n + b, skip).map(ExtendedNat::to_raw).map_err(|e| e.at_index(n)))
            .collect()
    };
    let layout = blocks(HEAD, horizon);
    let stop = AtomicUsize::new(usize::MAX);
    let results: Vec<Option<Result<BlockResult>>> = layout
        .par_iter()
        .enumerate()
        .map(|(idx, &(start, len))| {
            if stop.load(Ordering::Relaxed) < idx {
                return None;
            }
            let acc = match &sieve {
                Some(s) => s.block(start, len),
                None => direct(start, len),
            };
            let out = acc.map(|acc| summarize(&acc, start, stop_below));
            if !matches!(out, Ok(BlockResult { stop: None, .. })) {
                stop.fetch_min(idx, Ordering::Relaxed);
            }
            Some(out)
        })
        .collect();

    for (res, &(start, len)) in results.into_iter().zip(&layout) {
        let block = res.expect("blocks up to the first stop are always computed")?;
        if let Some((n, prefix)) = block.stop {
            best.take(prefix);
            return finish(best, n + 1);
        }
        best.take(block.best);
        debug_assert!(start + len <= horizon);
    }
    finish(best, horizon)
}
