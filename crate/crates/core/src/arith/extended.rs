use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::Add;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A valuation value: a non-negative integer or `Infinity` (the valuation of zero).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExtendedNat {
    Finite(u64),
    Infinity,
}

pub use ExtendedNat::{Finite, Infinity};

impl ExtendedNat {
    pub const ZERO: ExtendedNat = Finite(0);

    pub fn is_finite(self) -> bool {
        matches!(self, Finite(_))
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Finite(v) => Some(v),
            Infinity => None,
        }
    }

    /// `true` when `k <= self`, i.e. when the valuation certifies divisibility by `p^k`.
    pub fn at_least(self, k: u64) -> bool {
        self >= Finite(k)
    }

    /// Saturating encoding used by the sieve hot loop: `u64::MAX` stands for infinity.
    pub(crate) fn to_raw(self) -> u64 {
        match self {
            Finite(v) => v.min(u64::MAX - 1),
            Infinity => u64::MAX,
        }
    }

    pub(crate) fn from_raw(raw: u64) -> Self {
        if raw == u64::MAX {
            Infinity
        } else {
            Finite(raw)
        }
    }
}

impl Default for ExtendedNat {
    fn default() -> Self {
        ExtendedNat::ZERO
    }
}

impl From<u64> for ExtendedNat {
    fn from(v: u64) -> Self {
        Finite(v)
    }
}

impl Ord for ExtendedNat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Finite(a), Finite(b)) => a.cmp(b),
            (Finite(_), Infinity) => Ordering::Less,
            (Infinity, Finite(_)) => Ordering::Greater,
            (Infinity, Infinity) => Ordering::Equal,
        }
    }
}

impl PartialOrd for ExtendedNat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for ExtendedNat {
    type Output = ExtendedNat;

    fn add(self, rhs: Self) -> Self {
        match (self, rhs) {
            (Finite(a), Finite(b)) => a.checked_add(b).map_or(Infinity, Finite),
            _ => Infinity,
        }
    }
}

impl Sum for ExtendedNat {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(ExtendedNat::ZERO, Add::add)
    }
}

impl fmt::Display for ExtendedNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Finite(v) => write!(f, "{v}"),
            Infinity => f.write_str("inf"),
        }
    }
}

impl Serialize for ExtendedNat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Finite(v) => serializer.serialize_u64(*v),
            Infinity => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtendedNat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct ExtVisitor;

        impl Visitor<'_> for ExtVisitor {
            type Value = ExtendedNat;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a non-negative integer or \"inf\"")
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<ExtendedNat, E> {
                Ok(Finite(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<ExtendedNat, E> {
                u64::try_from(v).map(Finite).map_err(|_| E::custom("negative valuation"))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<ExtendedNat, E> {
                if v == "inf" {
                    Ok(Infinity)
                } else {
                    Err(E::invalid_value(de::Unexpected::Str(v), &self))
                }
            }
        }

        deserializer.deserialize_any(ExtVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinity_absorbs() {
        assert_eq!(Infinity + Finite(3), Infinity);
        assert_eq!(Finite(3) + Infinity, Infinity);
        assert_eq!(Finite(2) + Finite(3), Finite(5));
        assert_eq!(Infinity.min(Finite(7)), Finite(7));
        assert!(Finite(u64::MAX) < Infinity);
    }

    #[test]
    fn serde_encoding() {
        let v = vec![Finite(4), Infinity];
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"[4,"inf"]"#);
        let back: Vec<ExtendedNat> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
    }
}
