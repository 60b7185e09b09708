//! Schatten/L_p exponents in (0, ∞] with Hölder-dual bookkeeping.

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exponent p ∈ (0, ∞]. Infinity is encoded as `f64::INFINITY`.
/// Duality (1/p + 1/p' = 1) is only defined for p ≥ 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponent(f64);

impl Exponent {
    pub const ONE: Exponent = Exponent(1.0);
    pub const TWO: Exponent = Exponent(2.0);
    pub const INFINITY: Exponent = Exponent(f64::INFINITY);

    pub fn new(value: f64) -> Result<Self> {
        if value.is_nan() || value <= 0.0 {
            return Err(Error::input(format!("exponent must lie in (0, inf], got {value}")));
        }
        Ok(Exponent(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    pub fn is_dualizable(self) -> bool {
        self.0 >= 1.0
    }

    /// 1/p, with 1/∞ = 0.
    pub fn recip(self) -> f64 {
        if self.is_infinite() {
            0.0
        } else {
            1.0 / self.0
        }
    }

    /// The Hölder conjugate p' with 1/p + 1/p' = 1; dual(1) = ∞, dual(∞) = 1.
    pub fn dual(self) -> Result<Exponent> {
        if !self.is_dualizable() {
            return Err(Error::input(format!(
                "Hölder dual is undefined for p = {} < 1",
                self.0
            )));
        }
        if self.is_infinite() {
            return Ok(Exponent::ONE);
        }
        if self.0 == 1.0 {
            return Ok(Exponent::INFINITY);
        }
        Ok(Exponent(self.0 / (self.0 - 1.0)))
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            write!(f, "inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl std::str::FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "Inf" | "INF" | "infinity" | "oo" => Ok(Exponent::INFINITY),
            other => {
                let v: f64 = other
                    .parse()
                    .map_err(|_| Error::input(format!("cannot parse exponent '{other}'")))?;
                Exponent::new(v)
            }
        }
    }
}

// JSON has no Infinity literal, so p = ∞ serializes as the string "inf".
impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        if self.is_infinite() {
            serializer.serialize_str("inf")
        } else {
            serializer.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Num(v) => Exponent::new(v).map_err(D::Error::custom),
            Raw::Str(s) => s.parse().map_err(D::Error::custom),
        }
    }
}

/// Checks the Hölder relation 1/p = Σ 1/p_i up to rounding.
pub fn holder_consistent(inputs: &[Exponent], output: Exponent) -> bool {
    let sum: f64 = inputs.iter().map(|p| p.recip()).sum();
    (sum - output.recip()).abs() <= 1e-9
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duality_table() {
        assert_eq!(Exponent::ONE.dual().unwrap(), Exponent::INFINITY);
        assert_eq!(Exponent::INFINITY.dual().unwrap(), Exponent::ONE);
        let p = Exponent::new(4.0).unwrap();
        let q = p.dual().unwrap();
        assert!((q.value() - 4.0 / 3.0).abs() < 1e-15);
        assert!((p.recip() + q.recip() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn sub_one_has_no_dual() {
        let p = Exponent::new(0.5).unwrap();
        assert!(!p.is_dualizable());
        assert!(p.dual().is_err());
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(Exponent::new(0.0).is_err());
        assert!(Exponent::new(-2.0).is_err());
        assert!(Exponent::new(f64::NAN).is_err());
    }

    #[test]
    fn serde_round_trip() {
        let p = Exponent::new(1.5).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        let back: Exponent = serde_json::from_str(&s).unwrap();
        assert_eq!(p, back);
        let inf: Exponent = serde_json::from_str("\"inf\"").unwrap();
        assert!(inf.is_infinite());
    }
}
