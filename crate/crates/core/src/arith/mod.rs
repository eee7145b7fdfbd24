//! Exact integer substrate: valuations, factorization, progressions and residues.

mod extended;
pub mod modular;
mod primes;
mod progression;
mod residue;

pub use extended::{ExtendedNat, Finite, Infinity};
pub use primes::{
    factorize, factorize_u64, is_prime, nu, nu_big, primes_in_progression, primes_in_progression_bounded, primes_up_to,
    sieve_primes, Factorization, PrimeSearch, DEFAULT_CANDIDATE_BOUND, SMALL_PRIME_BOUND,
};
pub use progression::{coprime_part, decompose_progression, Progression};
pub use residue::{kronecker, quadratic_class, QuadraticClass, MAX_ENUMERATED_MODULUS};

pub(crate) use primes::{nu_big_unchecked, nu_unchecked, require_prime};
