//! Exact rational scalars and their text form (`"p/q"`, `"p"` or a finite
//! decimal such as `"-1.25"`).

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{de, Deserialize, Deserializer, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::BadRational(text.to_string());
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int_part.starts_with('-');
        let whole = match int_part.trim_start_matches(['-', '+']) {
            "" => BigInt::zero(),
            digits => BigInt::from_str(digits).map_err(|_| bad())?,
        };
        let frac = BigInt::from_str(frac_part).map_err(|_| bad())?;
        let den = num_traits::pow(BigInt::from(10), frac_part.len());
        let magnitude = Rational::new(whole * &den + frac, den);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    let r = Rational::from_str(s).map_err(|_| bad())?;
    Ok(r)
}

/// `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Least common multiple of the denominators (1 for an empty iterator).
pub(crate) fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

/// `r * scale` as an `i128`, if it is an integer that fits.
pub(crate) fn scaled_i128(r: &Rational, scale: &BigInt) -> Option<i128> {
    let scaled = r * Rational::from_integer(scale.clone());
    if !scaled.is_integer() {
        return None;
    }
    scaled.to_integer().to_i128()
}

pub(crate) fn from_scaled(v: i128, scale: &BigInt) -> Rational {
    Rational::new(BigInt::from(v), scale.clone())
}

pub(crate) fn abs(r: &Rational) -> Rational {
    r.abs()
}

/// Serde adapter: serializes as a fraction string, accepts strings or JSON
/// integers.
pub mod serde_text {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        RationalText::deserialize(d)?.into_rational().map_err(de::Error::custom)
    }
}

pub mod serde_text_vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&format_rational(r))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Rational>, D::Error> {
        Vec::<RationalText>::deserialize(d)?
            .into_iter()
            .map(|t| t.into_rational().map_err(de::Error::custom))
            .collect()
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
pub(crate) enum RationalText {
    Int(i64),
    Text(String),
}

impl RationalText {
    pub(crate) fn into_rational(self) -> Result<Rational> {
        match self {
            RationalText::Int(v) => Ok(int(v)),
            RationalText::Text(s) => parse_rational(&s),
        }
    }
}
