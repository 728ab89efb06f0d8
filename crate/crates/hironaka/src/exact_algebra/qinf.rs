//! Nonnegative-or-infinite rationals, the value type of polyhedron invariants.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A rational number or +∞, totally ordered with ∞ on top.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum QInf {
    Fin(BigRational),
    Inf,
}

impl QInf {
    pub fn int(n: i64) -> Self {
        QInf::Fin(BigRational::from_integer(BigInt::from(n)))
    }
    pub fn frac(n: i64, d: i64) -> Self {
        QInf::Fin(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }
    pub fn zero() -> Self {
        QInf::Fin(BigRational::zero())
    }
    pub fn is_inf(&self) -> bool {
        matches!(self, QInf::Inf)
    }
    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            QInf::Fin(q) => Some(q),
            QInf::Inf => None,
        }
    }
    /// True when the value is a finite multiple of 1/n.
    pub fn on_grid(&self, n: &BigInt) -> bool {
        match self {
            QInf::Inf => true,
            QInf::Fin(q) => (q * BigRational::from_integer(n.clone())).is_integer(),
        }
    }
    /// Parses "inf", "a" or "a/b".
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "inf" {
            return Ok(QInf::Inf);
        }
        let bad = || Error::Input(format!("not a rational or \"inf\": {}", s));
        match s.split_once('/') {
            None => Ok(QInf::Fin(BigRational::from_integer(s.parse().map_err(|_| bad())?))),
            Some((a, b)) => {
                let a: BigInt = a.trim().parse().map_err(|_| bad())?;
                let b: BigInt = b.trim().parse().map_err(|_| bad())?;
                if b.is_zero() {
                    return Err(bad());
                }
                Ok(QInf::Fin(BigRational::new(a, b)))
            }
        }
    }
}

impl From<BigRational> for QInf {
    fn from(q: BigRational) -> Self {
        QInf::Fin(q)
    }
}

impl PartialOrd for QInf {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QInf {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (QInf::Inf, QInf::Inf) => Ordering::Equal,
            (QInf::Inf, _) => Ordering::Greater,
            (_, QInf::Inf) => Ordering::Less,
            (QInf::Fin(a), QInf::Fin(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for QInf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QInf::Inf => write!(f, "inf"),
            QInf::Fin(q) => write!(f, "{}", rational_text(q)),
        }
    }
}

/// "a" for integers, "a/b" otherwise.
pub fn rational_text(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl Serialize for QInf {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for QInf {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        QInf::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// n! as a big integer.
pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Serde helpers for exact rationals as "a/b" strings.
pub mod rational_serde {
    use super::*;

    pub fn serialize<S: Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&rational_text(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        match QInf::parse(&s).map_err(serde::de::Error::custom)? {
            QInf::Fin(q) => Ok(q),
            QInf::Inf => Err(serde::de::Error::custom("expected a finite rational")),
        }
    }
}

/// Serde helpers for lists of exact rationals (points).
pub mod point_serde {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(v: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for q in v {
            seq.serialize_element(&rational_text(q))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<BigRational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| match QInf::parse(s).map_err(serde::de::Error::custom)? {
                QInf::Fin(q) => Ok(q),
                QInf::Inf => Err(serde::de::Error::custom("expected a finite rational")),
            })
            .collect()
    }
}
