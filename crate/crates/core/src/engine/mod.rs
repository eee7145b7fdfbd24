//! Valuations of `f` along progressions and the decomposition
//! `V_p(A, B; f) >= ν_p(f(G')) + Σ U_p + M_p`.

mod certain;
mod scan;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

pub use certain::{CertainNat, Certainty, Justification, Witness};
pub(crate) use scan::{nu_of_value, scan_terms, ScanOutcome, TermScan};

use crate::arith::{
    decompose_progression, primes_in_progression_bounded, quadratic_class, require_prime, ExtendedNat, Progression,
    DEFAULT_CANDIDATE_BOUND,
};
use crate::error::{Error, Result};
use crate::multfn::FnDescriptor;

pub const DEFAULT_N_HORIZON: u64 = 100_000;
pub const DEFAULT_EXPONENT_HORIZON: u32 = 64;
pub const DEFAULT_WITNESS_BUDGET: usize = 25;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EngineConfig {
    /// Indices `0..n_horizon` are scanned.
    pub n_horizon: u64,
    /// Exponents beyond the first are sampled up to this many steps.
    pub exponent_horizon: u32,
    /// Primes examined in a Dirichlet witness search.
    pub witness_budget: usize,
    /// Candidates above this bound are not examined in a witness search.
    pub candidate_bound: u64,
    /// Stop a certificate scan at the first block holding a counterexample.
    pub stop_on_refutation: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            n_horizon: DEFAULT_N_HORIZON,
            exponent_horizon: DEFAULT_EXPONENT_HORIZON,
            witness_budget: DEFAULT_WITNESS_BUDGET,
            candidate_bound: DEFAULT_CANDIDATE_BOUND,
            stop_on_refutation: true,
        }
    }
}

impl EngineConfig {
    pub fn with_horizon(n_horizon: u64) -> Self {
        EngineConfig { n_horizon, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_horizon == 0 || self.exponent_horizon == 0 || self.witness_budget == 0 || self.candidate_bound == 0 {
            return Err(Error::InvalidArgument("horizons and budgets must be at least 1".into()));
        }
        Ok(())
    }
}

fn check_progression(a: u64, b: u64) -> Result<()> {
    if a == 0 {
        return Err(Error::Zero("A"));
    }
    if b == 0 {
        return Err(Error::Zero("B"));
    }
    Ok(())
}

fn check_coprime(a: u64, b: u64) -> Result<()> {
    let g = a.gcd(&b);
    if g != 1 {
        return Err(Error::NotCoprime { a, b, gcd: g });
    }
    Ok(())
}

fn outcome_bound(out: ScanOutcome) -> CertainNat {
    CertainNat::upper_bound(out.min, out.witness.map(|n| Witness::Index { n }), out.scanned)
}

/// `min_{n < horizon} ν_p(f(A n + B))`, an upper bound for `V_p(A, B; f)`.
pub fn scan_valuation(f: &FnDescriptor, p: u64, a: u64, b: u64, horizon: u64) -> Result<CertainNat> {
    require_prime(p)?;
    check_progression(a, b)?;
    let out = scan_terms(TermScan { f, p, a, b, skip: 1 }, horizon, 1)?;
    Ok(CertainNat::upper_bound(out.min, out.witness.map(|n| Witness::Index { n }), horizon))
}

/// `U_p = min_{e >= 0} ν_p(f(q^{a + e}))` for a prime `q ∤ A'`.
///
/// For such `q` every exponent of `q` in `A' n + B'` occurs, so the minimum runs
/// over all `e`.
#[allow(non_snake_case)]
pub fn compute_U(
    f: &FnDescriptor,
    p: u64,
    a_prime: u64,
    b_prime: u64,
    a: u32,
    q: u64,
    exponent_horizon: u32,
) -> Result<CertainNat> {
    require_prime(p)?;
    require_prime(q)?;
    check_coprime(a_prime, b_prime)?;
    if a_prime % q == 0 {
        return Err(Error::Contract(format!("{q} divides A' = {a_prime}; its part is fixed, not varying")));
    }
    if let Some(rule) = f.registered_profile(p, q) {
        let (value, e) = rule.min_from(a);
        return Ok(CertainNat::exact(
            value,
            Justification::ClosedFormProfile,
            Some(Witness::PrimePower { q, e }),
            exponent_horizon as u64,
        ));
    }
    let mut best = (ExtendedNat::Infinity, a);
    for e in a..=a.saturating_add(exponent_horizon) {
        let v = f.nu_prime_power_unchecked(p, q, e)?;
        if v < best.0 {
            best = (v, e);
            if v == ExtendedNat::ZERO {
                break;
            }
        }
    }
    let witness = Some(Witness::PrimePower { q, e: best.1 });
    Ok(if best.0 == ExtendedNat::ZERO {
        CertainNat::exact(best.0, Justification::ZeroWitness, witness, exponent_horizon as u64)
    } else {
        CertainNat::upper_bound(best.0, witness, exponent_horizon as u64)
    })
}

/// Index of `value` in `a n + b`, if it is a term.
fn index_of(value: u128, a: u64, b: u64) -> Option<u64> {
    let d = value.checked_sub(b as u128)?;
    (d % a as u128 == 0).then(|| u64::try_from(d / a as u128).ok()).flatten()
}

/// A term `scale * y^2` of `a n + b` with `y ≡ root (mod a)`.
fn square_term(root: u64, scale: u64, a: u64, b: u64) -> Option<(u64, u64)> {
    let mut y = root as u128;
    while y == 0 || (scale as u128) * y * y < b as u128 {
        y += a as u128;
    }
    let n = index_of(scale as u128 * y * y, a, b)?;
    Some((n, u64::try_from(y).ok()?))
}

/// `M_p = min_n ν_p(f(coprime_part(A' n + B', C)))`.
#[allow(non_snake_case)]
pub fn compute_M(
    f: &FnDescriptor,
    p: u64,
    a_prime: u64,
    b_prime: u64,
    c: u64,
    config: &EngineConfig,
) -> Result<CertainNat> {
    require_prime(p)?;
    check_progression(a_prime, b_prime)?;
    check_coprime(a_prime, b_prime)?;
    if c == 0 {
        return Err(Error::Zero("C"));
    }
    let horizon = config.n_horizon;
    let out = scan_terms(TermScan { f, p, a: a_prime, b: b_prime, skip: c }, horizon, 1)?;
    if out.min == ExtendedNat::ZERO {
        let witness = out.witness.map(|n| Witness::Index { n });
        return Ok(CertainNat::exact(out.min, Justification::ZeroWitness, witness, horizon));
    }

    let search = primes_in_progression_bounded(a_prime, b_prime, c, config.witness_budget, config.candidate_bound)?;
    for q in search.primes {
        let Some(n) = index_of(q as u128, a_prime, b_prime) else { continue };
        match f.nu_prime_unchecked(p, q) {
            Ok(v) if v == ExtendedNat::ZERO => {
                return Ok(CertainNat::exact(
                    v,
                    Justification::DirichletPrime { q },
                    Some(Witness::Index { n }),
                    horizon,
                ));
            }
            Ok(_) => {}
            Err(err) => {
                log::debug!("witness search stopped at prime {q}: {err}");
                break;
            }
        }
    }

    if p == 2 && f.is_sigma_family() {
        if let Ok(class) = quadratic_class(b_prime, a_prime) {
            let shapes = [(class.square_root, 1u64), (class.twice_square_root, 2)];
            for (root, scale) in shapes {
                let Some((n, y)) = root.and_then(|r| square_term(r, scale, a_prime, b_prime)) else { continue };
                let term = a_prime * n + b_prime;
                if nu_of_value(f, p, term, c)? == ExtendedNat::ZERO {
                    let justification = if scale == 1 {
                        Justification::SquareValue { root: y }
                    } else {
                        Justification::TwiceSquareValue { root: y }
                    };
                    return Ok(CertainNat::exact(
                        ExtendedNat::ZERO,
                        justification,
                        Some(Witness::Index { n }),
                        horizon,
                    ));
                }
            }
        }
    }
    Ok(outcome_bound(ScanOutcome { scanned: horizon, ..out }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UTerm {
    pub q: u64,
    /// `ν_q(G)`.
    pub a: u32,
    pub value: CertainNat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub progression: Progression,
    /// `ν_p(f(G'))`.
    pub term_fixed: ExtendedNat,
    pub terms_u: Vec<UTerm>,
    pub term_m: CertainNat,
    pub rhs_total: CertainNat,
}

fn total(term_fixed: ExtendedNat, terms_u: &[UTerm], term_m: &CertainNat) -> CertainNat {
    let fixed = CertainNat::exact(term_fixed, Justification::ExactSummands, None, 0);
    let mut sum = terms_u.iter().fold(fixed, |acc, t| acc + t.value) + *term_m;
    sum.horizon = term_m.horizon;
    sum
}

pub fn theorem_decomposition(f: &FnDescriptor, p: u64, a: u64, b: u64, config: &EngineConfig) -> Result<Decomposition> {
    require_prime(p)?;
    config.validate()?;
    let progression = decompose_progression(a, b)?;
    let term_fixed = nu_of_value(f, p, progression.g_prime, 1)?;
    let terms_u = progression
        .varying_primes()
        .map(|(q, e)| {
            let value = compute_U(f, p, progression.a_prime, progression.b_prime, e, q, config.exponent_horizon)?;
            Ok(UTerm { q, a: e, value })
        })
        .collect::<Result<Vec<_>>>()?;
    let term_m = compute_M(f, p, progression.a_prime, progression.b_prime, progression.g, config)?;
    let rhs_total = total(term_fixed, &terms_u, &term_m);
    Ok(Decomposition { progression, term_fixed, terms_u, term_m, rhs_total })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Status {
    /// `k <= ν_p(f(G')) + Σ U_p + M_p` with every term exact.
    Certified,
    /// No counterexample below the scan horizon.
    VerifiedToHorizon,
    /// `ν_p(f(A witness + B)) < k`.
    Refuted { witness: u64 },
}

/// The claim `f(A n + B) ≡ 0 (mod p^k)` for all `n >= 0`, with its evidence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub function: String,
    pub p: u64,
    pub k: u64,
    pub progression: Progression,
    pub term_fixed: ExtendedNat,
    pub terms_u: Vec<UTerm>,
    pub term_m: CertainNat,
    pub rhs_total: CertainNat,
    pub scan_v: CertainNat,
    pub status: Status,
    /// `rhs_total <= scan_v`, which always holds for a correct decomposition.
    pub consistent: bool,
    pub config: EngineConfig,
}

pub fn certify_congruence(
    f: &FnDescriptor,
    p: u64,
    k: u64,
    a: u64,
    b: u64,
    config: &EngineConfig,
) -> Result<Certificate> {
    require_prime(p)?;
    check_progression(a, b)?;
    config.validate()?;
    if k == 0 {
        return Err(Error::Zero("k"));
    }
    let stop_below = if config.stop_on_refutation { k } else { 1 };
    let out = scan_terms(TermScan { f, p, a, b, skip: 1 }, config.n_horizon, stop_below)?;
    certify_from_scan(f, p, k, a, b, config, out)
}

/// Finishes a certificate from a scan that was already run.
pub(crate) fn certify_from_scan(
    f: &FnDescriptor,
    p: u64,
    k: u64,
    a: u64,
    b: u64,
    config: &EngineConfig,
    out: ScanOutcome,
) -> Result<Certificate> {
    let scan_v = outcome_bound(out);
    let d = theorem_decomposition(f, p, a, b, config)?;
    let status = match out.witness {
        Some(n) if !out.min.at_least(k) => Status::Refuted { witness: n },
        _ if d.rhs_total.is_exact() && d.rhs_total.value.at_least(k) => Status::Certified,
        _ => Status::VerifiedToHorizon,
    };
    let consistent = d.rhs_total.value <= scan_v.value;
    if !consistent {
        log::warn!("{f} p={p} {a}n+{b}: decomposition {} exceeds scan {}", d.rhs_total.value, scan_v.value);
    }
    Ok(Certificate {
        function: f.name().to_string(),
        p,
        k,
        progression: d.progression,
        term_fixed: d.term_fixed,
        terms_u: d.terms_u,
        term_m: d.term_m,
        rhs_total: d.rhs_total,
        scan_v,
        status,
        consistent,
        config: *config,
    })
}

impl Certificate {
    /// Re-evaluates every witness and invariant against `f`.
    pub fn recheck(&self, f: &FnDescriptor) -> Result<()> {
        let fail = |what: String| Err(Error::Contract(format!("certificate recheck: {what}")));
        if f.name() != self.function {
            return fail(format!("function `{}` is not `{}`", f.name(), self.function));
        }
        let prog = &self.progression;
        if *prog != decompose_progression(prog.a, prog.b)? {
            return fail("progression fields do not match A and B".into());
        }
        let p = self.p;
        if nu_of_value(f, p, prog.g_prime, 1)? != self.term_fixed {
            return fail("fixed term".into());
        }
        let expected = total(self.term_fixed, &self.terms_u, &self.term_m);
        if expected.value != self.rhs_total.value || expected.certainty != self.rhs_total.certainty {
            return fail("right-hand total".into());
        }
        let varying: Vec<(u64, u32)> = prog.varying_primes().collect();
        if varying != self.terms_u.iter().map(|t| (t.q, t.a)).collect::<Vec<_>>() {
            return fail("U terms do not match the primes of G outside A'".into());
        }
        for t in &self.terms_u {
            if let Some(Witness::PrimePower { q, e }) = t.value.witness {
                if q != t.q || e < t.a || f.nu_prime_power(p, q, e)? != t.value.value {
                    return fail(format!("U witness {q}^{e}"));
                }
            }
        }
        if let Some(Witness::Index { n }) = self.term_m.witness {
            let term = prog.a_prime.checked_mul(n).and_then(|v| v.checked_add(prog.b_prime));
            let Some(term) = term else { return fail(format!("M witness {n} overflows")) };
            if nu_of_value(f, p, term, prog.g)? != self.term_m.value {
                return fail(format!("M witness n = {n}"));
            }
        }
        let at = |n: u64| -> Result<ExtendedNat> {
            let term = prog.term(n).ok_or_else(|| Error::Overflow(format!("term {n}")))?;
            nu_of_value(f, p, term, 1)
        };
        if let Some(Witness::Index { n }) = self.scan_v.witness {
            if at(n)? != self.scan_v.value {
                return fail(format!("scan witness n = {n}"));
            }
        }
        match self.status {
            Status::Refuted { witness } => {
                if at(witness)?.at_least(self.k) {
                    return fail(format!("refutation witness n = {witness} satisfies the congruence"));
                }
            }
            Status::Certified => {
                if !(self.rhs_total.is_exact() && self.rhs_total.value.at_least(self.k)) {
                    return fail("certified without an exact bound of at least k".into());
                }
            }
            Status::VerifiedToHorizon => {
                if !self.scan_v.value.at_least(self.k) {
                    return fail("verified with a scan below k".into());
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{Finite, Infinity};

    #[test]
    fn scan_examples() {
        let s1 = FnDescriptor::sigma(1);
        let v = scan_valuation(&s1, 2, 8, 7, 100).unwrap();
        assert_eq!((v.value, v.witness), (Finite(3), Some(Witness::Index { n: 0 })));
        assert_eq!(v.certainty, Certainty::UpperBoundAtHorizon);
        let v = scan_valuation(&FnDescriptor::sigma(0), 2, 1, 1, 10).unwrap();
        assert_eq!((v.value, v.witness), (Finite(0), Some(Witness::Index { n: 0 })));
        assert_eq!(scan_valuation(&s1, 3, 3, 2, 100).unwrap().value, Finite(1));
        assert!(scan_valuation(&s1, 4, 3, 2, 100).is_err());
    }

    #[test]
    fn u_examples() {
        let u = compute_U(&FnDescriptor::sigma(0), 2, 4, 1, 1, 3, 64).unwrap();
        assert_eq!(u.value, Finite(0));
        assert!(u.is_exact());
        assert_eq!(u.witness, Some(Witness::PrimePower { q: 3, e: 2 }));
        let u = compute_U(&FnDescriptor::phi(), 3, 1, 1, 2, 7, 64).unwrap();
        assert_eq!((u.value, u.certainty), (Finite(1), Certainty::CertifiedExact));
        let u = compute_U(&FnDescriptor::phi(), 5, 1, 1, 3, 5, 64).unwrap();
        assert_eq!((u.value, u.certainty), (Finite(2), Certainty::CertifiedExact));
        assert!(matches!(compute_U(&FnDescriptor::phi(), 5, 10, 1, 3, 5, 64), Err(Error::Contract(_))));
    }

    #[test]
    fn m_examples() {
        let cfg = EngineConfig::default();
        let m = compute_M(&FnDescriptor::sigma(0), 2, 4, 1, 3, &cfg).unwrap();
        assert_eq!((m.value, m.certainty), (Finite(0), Certainty::CertifiedExact));
        let m = compute_M(&FnDescriptor::sigma(0), 3, 7, 3, 1, &cfg).unwrap();
        assert_eq!((m.value, m.certainty), (Finite(0), Certainty::CertifiedExact));
        let m = compute_M(&FnDescriptor::sigma(1), 2, 8, 7, 1, &EngineConfig::with_horizon(100)).unwrap();
        assert_eq!((m.value, m.certainty), (Finite(3), Certainty::UpperBoundAtHorizon));
        assert!(compute_M(&FnDescriptor::sigma(1), 2, 4, 2, 1, &cfg).is_err());
    }

    #[test]
    fn square_term_witness() {
        // With B' = 1 the first term 4*0 + 1 already has odd σ_0; n = 6
        // (A'n + B' = 25) is another witness.
        let m = compute_M(&FnDescriptor::sigma(0), 2, 4, 1, 3, &EngineConfig::default()).unwrap();
        assert_eq!(m.witness, Some(Witness::Index { n: 0 }));
        assert_eq!(nu_of_value(&FnDescriptor::sigma(0), 2, 25, 3).unwrap(), Finite(0));
    }

    #[test]
    fn witness_search_and_square_shortcut() {
        let cfg = EngineConfig { n_horizon: 1, ..EngineConfig::default() };
        // 7n + 3 at n = 0 is the prime 3 with σ_0(3) = 2, so ν_3 = 0 directly.
        let m = compute_M(&FnDescriptor::sigma(0), 3, 7, 3, 1, &cfg).unwrap();
        assert!(m.is_exact());
        // 5n + 14 starts 14, 19, 24, ...: no odd σ_1 at n = 0 and every prime term
        // q has σ_1(q) = q + 1 even, so only the square 49 = 5*7 + 14 certifies.
        let m = compute_M(&FnDescriptor::sigma(1), 2, 5, 14, 1, &cfg).unwrap();
        assert_eq!(m.justification, Some(Justification::SquareValue { root: 7 }));
        assert_eq!(m.witness, Some(Witness::Index { n: 7 }));
    }

    #[test]
    fn square_shortcut_when_no_prime_qualifies() {
        let cfg = EngineConfig { n_horizon: 1, witness_budget: 5, ..EngineConfig::default() };
        let m = compute_M(&FnDescriptor::sigma(1), 2, 24, 25, 1, &cfg).unwrap();
        assert_eq!(m.justification, Some(Justification::ZeroWitness));
        // 73 is prime with σ_1(73) = 74; the smallest root of 1 mod 24 lifts to 25^2.
        let m = compute_M(&FnDescriptor::sigma(1), 2, 24, 73, 1, &cfg).unwrap();
        assert_eq!(m.justification, Some(Justification::SquareValue { root: 25 }), "{m:?}");
        assert_eq!(m.witness, Some(Witness::Index { n: 23 }));
        let m = compute_M(&FnDescriptor::sigma(3), 2, 7, 4, 1, &cfg).unwrap();
        assert!(m.is_exact());
    }

    #[test]
    fn decomposition_examples() {
        let cfg = EngineConfig::default();
        let d = theorem_decomposition(&FnDescriptor::sigma(0), 2, 12, 3, &cfg).unwrap();
        assert_eq!(d.term_fixed, Finite(0));
        assert_eq!(d.terms_u.len(), 1);
        assert_eq!((d.terms_u[0].q, d.terms_u[0].value.value), (3, Finite(0)));
        assert_eq!(d.term_m.value, Finite(0));
        assert_eq!(d.rhs_total.value, Finite(0));
        assert!(d.rhs_total.is_exact());

        let d = theorem_decomposition(&FnDescriptor::sigma(0), 2, 9, 3, &cfg).unwrap();
        assert_eq!(d.progression.g_prime, 3);
        assert_eq!(d.term_fixed, Finite(1));
        assert!(d.terms_u.is_empty());
        assert_eq!(d.term_m.value, Finite(0));
        assert_eq!((d.rhs_total.value, d.rhs_total.certainty), (Finite(1), Certainty::CertifiedExact));

        let d = theorem_decomposition(&FnDescriptor::phi(), 3, 1, 1, &cfg).unwrap();
        assert_eq!(d.term_fixed, Finite(0));
        assert!(d.terms_u.is_empty());
        assert_eq!(d.rhs_total.value, d.term_m.value);
    }

    #[test]
    fn certificate_examples() {
        let cfg = EngineConfig::default();
        let c = certify_congruence(&FnDescriptor::sigma(1), 2, 2, 4, 3, &cfg).unwrap();
        assert_ne!(c.status, Status::Refuted { witness: 0 });
        assert!(matches!(c.status, Status::VerifiedToHorizon | Status::Certified));
        assert_eq!(c.scan_v.value, Finite(2));
        c.recheck(&FnDescriptor::sigma(1)).unwrap();

        let c = certify_congruence(&FnDescriptor::sigma(0), 2, 2, 4, 3, &cfg).unwrap();
        assert_eq!(c.status, Status::Refuted { witness: 0 });
        c.recheck(&FnDescriptor::sigma(0)).unwrap();

        // σ_1(2) = 3, so 5n + 2 carries no factor 5 for odd k; the congruence
        // needs k ≡ 2 (mod 4), where 2^k ≡ -1 (mod 5).
        let c = certify_congruence(&FnDescriptor::sigma(1), 5, 1, 5, 2, &cfg).unwrap();
        assert_eq!(c.status, Status::Refuted { witness: 0 });
        let c = certify_congruence(&FnDescriptor::sigma(2), 5, 1, 5, 2, &cfg).unwrap();
        assert!(!matches!(c.status, Status::Refuted { .. }));
        assert_eq!(c.scan_v.value, Finite(1));
    }

    #[test]
    fn certified_status_from_fixed_part() {
        // σ_0(9n + 3): G' = 3 contributes ν_2(σ_0(3)) = 1 exactly; M = 0 exactly.
        let cfg = EngineConfig::default();
        let c = certify_congruence(&FnDescriptor::sigma(0), 2, 1, 9, 3, &cfg).unwrap();
        assert_eq!(c.status, Status::Certified);
        assert!(c.consistent);
        let json = serde_json::to_string(&c).unwrap();
        let back: Certificate = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
        back.recheck(&FnDescriptor::sigma(0)).unwrap();
    }

    #[test]
    fn tampered_certificate_fails_recheck() {
        let cfg = EngineConfig::default();
        let mut c = certify_congruence(&FnDescriptor::sigma(0), 2, 1, 9, 3, &cfg).unwrap();
        c.term_fixed = Finite(2);
        assert!(c.recheck(&FnDescriptor::sigma(0)).is_err());
        let mut c = certify_congruence(&FnDescriptor::sigma(0), 2, 2, 4, 3, &cfg).unwrap();
        c.status = Status::Refuted { witness: 1 };
        // 4*1 + 3 = 7, σ_0 = 2: still a valid refutation
        c.recheck(&FnDescriptor::sigma(0)).unwrap();
        c.status = Status::Certified;
        assert!(c.recheck(&FnDescriptor::sigma(0)).is_err());
    }

    #[test]
    fn table_function_zero_is_infinite() {
        let mut t = crate::multfn::PrimePowerTable::new();
        t.insert(2, 1, 0.into()).unwrap();
        let f = FnDescriptor::from_table("z", t);
        let v = scan_valuation(&f, 3, 4, 2, 1).unwrap();
        assert_eq!(v.value, Infinity);
        assert_eq!(v.witness, None);
        let err = scan_valuation(&f, 3, 4, 2, 5).unwrap_err();
        assert!(matches!(err, Error::AtIndex { n: 1, .. }), "{err}");
    }
}
