//! Valuations of multiplicative functions along arithmetic progressions, and
//! certificates for congruences `f(A n + B) ≡ 0 (mod p^k)`.

pub mod arith;
pub mod classifier;
pub mod engine;
pub mod error;
pub mod multfn;
pub mod tau;

pub use arith::{decompose_progression, ExtendedNat, Finite, Infinity, Progression};
pub use engine::{
    certify_congruence, scan_valuation, theorem_decomposition, CertainNat, Certainty, Certificate, EngineConfig, Status,
};
pub use error::{Error, Result};
pub use multfn::FnDescriptor;
pub use tau::{tau_table, TauTable};
