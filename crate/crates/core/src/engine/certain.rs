use std::ops::Add;

use serde::{Deserialize, Serialize};

use crate::arith::ExtendedNat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certainty {
    /// The value is the exact infinite minimum.
    CertifiedExact,
    /// The value is a minimum over a finite range, hence an upper bound.
    UpperBoundAtHorizon,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// Index `n` of a progression term.
    Index { n: u64 },
    /// Prime power `q^e`.
    PrimePower { q: u64, e: u32 },
}

/// Why a value is exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Justification {
    /// A registered closed form resolves the minimum over all exponents.
    ClosedFormProfile,
    /// A witness attains 0, the absolute lower bound.
    ZeroWitness,
    /// A prime `q ≡ B' (mod A')` with `ν_p(f(q)) = 0`.
    DirichletPrime { q: u64 },
    /// `A' n + B' = root^2` at the witness index.
    SquareValue { root: u64 },
    /// `A' n + B' = 2 root^2` at the witness index.
    TwiceSquareValue { root: u64 },
    /// Every summand is exact.
    ExactSummands,
}

/// A valuation together with how much is known about it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertainNat {
    pub value: ExtendedNat,
    pub certainty: Certainty,
    pub witness: Option<Witness>,
    pub horizon: u64,
    pub justification: Option<Justification>,
}

impl CertainNat {
    pub fn exact(value: ExtendedNat, justification: Justification, witness: Option<Witness>, horizon: u64) -> Self {
        CertainNat { value, certainty: Certainty::CertifiedExact, witness, horizon, justification: Some(justification) }
    }

    pub fn upper_bound(value: ExtendedNat, witness: Option<Witness>, horizon: u64) -> Self {
        CertainNat { value, certainty: Certainty::UpperBoundAtHorizon, witness, horizon, justification: None }
    }

    pub fn is_exact(&self) -> bool {
        self.certainty == Certainty::CertifiedExact
    }
}

/// Sum of valuations: exact only when both sides are.
impl Add for CertainNat {
    type Output = CertainNat;

    fn add(self, rhs: CertainNat) -> CertainNat {
        let value = self.value + rhs.value;
        let horizon = self.horizon.max(rhs.horizon);
        if self.is_exact() && rhs.is_exact() {
            CertainNat::exact(value, Justification::ExactSummands, None, horizon)
        } else {
            CertainNat::upper_bound(value, None, horizon)
        }
    }
}
