//! Exact rational scalars and their textual form.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serializer};

use crate::error::Error;

/// The scalar field. Every coefficient, matrix entry and weight coordinate is one of these.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `p/q` or a bare integer `p`. Decimal points and exponents are rejected.
pub fn parse_q(s: &str) -> Result<Q, Error> {
    let t = s.trim();
    let bad = || Error::MalformedRational(s.to_string());
    let int = |x: &str| -> Result<BigInt, Error> {
        let x = x.trim();
        let digits = x.strip_prefix(['-', '+']).unwrap_or(x);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        BigInt::from_str(x).map_err(|_| bad())
    };
    match t.split_once('/') {
        Some((n, d)) => {
            let d = int(d)?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(int(n)?, d))
        }
        None => Ok(Q::from_integer(int(t)?)),
    }
}

/// Canonical text: `p` for integers, `p/q` otherwise (reduced, positive denominator).
pub fn fmt_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Returns `Some(n)` when `x` is a nonnegative integer.
pub fn as_nonneg_int(x: &Q) -> Option<u64> {
    if x.is_integer() && !x.is_negative() {
        x.to_integer().try_into().ok()
    } else {
        None
    }
}

pub fn as_int(x: &Q) -> Option<i64> {
    if x.is_integer() {
        x.to_integer().try_into().ok()
    } else {
        None
    }
}

pub(crate) fn ser_q<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_q(x))
}

pub(crate) fn de_q<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
    let s = String::deserialize(d)?;
    parse_q(&s).map_err(serde::de::Error::custom)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse_q("1/2").unwrap(), q_frac(1, 2));
        assert_eq!(parse_q("-7/2").unwrap(), q_frac(-7, 2));
        assert_eq!(parse_q("4/2").unwrap(), q(2));
        assert_eq!(parse_q(" 5 ").unwrap(), q(5));
    }

    #[test]
    fn rejects_floats_and_garbage() {
        for s in ["0.5", "1e3", "", "/2", "1/0", "a/b", "1/-"] {
            assert!(parse_q(s).is_err(), "{s}");
        }
    }

    #[test]
    fn formatting_is_canonical() {
        assert_eq!(fmt_q(&q_frac(6, -4)), "-3/2");
        assert_eq!(fmt_q(&q(0)), "0");
    }
}
