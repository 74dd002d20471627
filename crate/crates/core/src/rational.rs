//! Exact rational helpers shared by every module.
//!
//! All densities, moments and probabilities are kept as [`Rational`]
//! values and serialized as `"num/den"` strings (or a bare integer when the
//! denominator is one).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Rational {
    Rational::new(num.into(), den.into())
}

pub fn int(value: impl Into<BigInt>) -> Rational {
    Rational::from_integer(value.into())
}

/// `2^exp` as an exact integer.
pub fn pow2(exp: usize) -> BigInt {
    BigInt::one() << exp
}

/// `count / 2^exp`, the density of `count` subsets of a `exp`-element set.
pub fn dyadic(count: impl Into<BigInt>, exp: usize) -> Rational {
    Rational::new(count.into(), pow2(exp))
}

pub fn abs_diff(a: &Rational, b: &Rational) -> Rational {
    (a - b).abs()
}

pub fn is_zero(q: &Rational) -> bool {
    q.is_zero()
}

/// Natural logarithm of a positive rational, for reporting only.
pub fn ln(q: &Rational) -> f64 {
    to_f64(q).ln()
}

pub fn to_f64(q: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

pub fn parse(text: &str) -> Option<Rational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => text.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

/// Serde adapter writing a rational as its `Display` string.
pub mod as_string {
    use super::Rational;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(q)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        super::parse(&text).ok_or_else(|| D::Error::custom(format!("bad rational {text:?}")))
    }
}

pub mod vec_as_string {
    use super::Rational;
    use serde::{ser::SerializeSeq, Serializer};

    pub fn serialize<S: Serializer>(qs: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(qs.len()))?;
        for q in qs {
            seq.serialize_element(&q.to_string())?;
        }
        seq.end()
    }
}

pub mod option_as_string {
    use super::Rational;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(q: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match q {
            Some(q) => s.collect_str(q),
            None => s.serialize_none(),
        }
    }
}
