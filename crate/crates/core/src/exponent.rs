//! Extended positive exponents `p ∈ (0, ∞]`.

use std::fmt;
use std::str::FromStr;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exponent in `(0, ∞]`.
///
/// Parses from and serializes to a plain number, or the string `"inf"` for
/// the endpoint.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Exponent(f64);

impl Exponent {
    pub const INFINITY: Exponent = Exponent(f64::INFINITY);
    pub const ONE: Exponent = Exponent(1.0);

    pub fn new(p: f64) -> Result<Self> {
        if p > 0.0 {
            Ok(Self(p))
        } else {
            Err(Error::InvalidParams(format!("exponent must be positive, got {p}")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    /// Finite value or an error naming `what`.
    pub fn finite(self, what: &str) -> Result<f64> {
        if self.is_finite() {
            Ok(self.0)
        } else {
            Err(Error::Precondition(format!("{what} must be finite")))
        }
    }

    /// The Hölder conjugate `p'` with `1/p + 1/p' = 1`; defined for `p ≥ 1`.
    pub fn conjugate(self) -> Result<Self> {
        if self.0 < 1.0 {
            return Err(Error::InvalidParams(format!(
                "conjugate exponent needs p >= 1, got {}",
                self.0
            )));
        }
        Ok(if self.0 == 1.0 {
            Self::INFINITY
        } else if self.is_infinite() {
            Self::ONE
        } else {
            Self(self.0 / (self.0 - 1.0))
        })
    }

    /// `s·p`, with `s·∞ = ∞`.
    pub fn scaled(self, s: f64) -> Result<Self> {
        Self::new(self.0 * s)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => Ok(Self::INFINITY),
            other => other
                .parse::<f64>()
                .map_err(|e| Error::InvalidParams(format!("bad exponent {s:?}: {e}")))
                .and_then(Self::new),
        }
    }
}

impl TryFrom<f64> for Exponent {
    type Error = Error;

    fn try_from(p: f64) -> Result<Self> {
        Self::new(p)
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct ExpVisitor;

        impl Visitor<'_> for ExpVisitor {
            type Value = Exponent;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a positive number or \"inf\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Exponent, E> {
                Exponent::new(v).map_err(E::custom)
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Exponent, E> {
                self.visit_f64(v as f64)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Exponent, E> {
                self.visit_f64(v as f64)
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Exponent, E> {
                v.parse().map_err(E::custom)
            }
        }

        d.deserialize_any(ExpVisitor)
    }
}
