//! Exact rationals and their canonical `num/den` text form.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Exact rational number used for every area, weight and bound.
pub type Q = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid rational {input:?}: {reason}")]
pub struct ParseRationalError {
    pub input: String,
    pub reason: &'static str,
}

pub fn int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn frac(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `num/den` or a bare integer. The result is always reduced.
pub fn parse(text: &str) -> Result<Q, ParseRationalError> {
    let err = |reason| ParseRationalError {
        input: text.to_string(),
        reason,
    };
    let text_trim = text.trim();
    let (num, den) = match text_trim.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text_trim, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| err("numerator is not an integer"))?;
    let den = BigInt::from_str(den).map_err(|_| err("denominator is not an integer"))?;
    if den.is_zero() {
        return Err(err("zero denominator"));
    }
    Ok(Q::new(num, den))
}

/// Canonical rendering: reduced, positive denominator, denominator always
/// present (`0/1`, `3/1`, `-1/90`).
pub fn canonical(q: &Q) -> String {
    // BigRational keeps itself reduced with a positive denominator.
    format!("{}/{}", q.numer(), q.denom())
}

/// Wrapper that (de)serializes a rational as a canonical `"num/den"` string.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(pub Q);

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&canonical(&self.0))
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl From<Q> for Rational {
    fn from(q: Q) -> Self {
        Rational(q)
    }
}

impl FromStr for Rational {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s).map(Rational)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&canonical(&self.0))
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        parse(&s).map(Rational).map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form_is_reduced() {
        assert_eq!(canonical(&frac(2, 180)), "1/90");
        assert_eq!(canonical(&frac(3, -6)), "-1/2");
        assert_eq!(canonical(&Q::zero()), "0/1");
        assert_eq!(canonical(&int(4)), "4/1");
    }

    #[test]
    fn parse_accepts_integers_and_fractions() {
        assert_eq!(parse("2/5").unwrap(), frac(2, 5));
        assert_eq!(parse(" -4/10 ").unwrap(), frac(-2, 5));
        assert_eq!(parse("7").unwrap(), int(7));
        assert!(parse("1/0").is_err());
        assert!(parse("x/2").is_err());
        assert!(parse("").is_err());
    }

    #[test]
    fn serde_uses_strings() {
        let r = Rational(frac(6, 4));
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(json, "\"3/2\"");
        let back: Rational = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }
}
