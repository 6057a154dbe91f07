//! Exact rational arithmetic helpers.
//!
//! Weights and costs are carried as [`Rational`] so that optimal costs and
//! monolog certificates compare exactly. Decimal text (as found in JSON files
//! and on the command line) converts to rationals without rounding.

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"12"`, `"-0.125"`, `"3.5e-2"`, `"1E3"` or `"7/3"` exactly.
pub fn parse(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::Parse(format!("not an exact number: {text:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i64 = s[pos + 1..].parse().map_err(|_| bad())?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() || !whole.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    if exponent.unsigned_abs() > 10_000 {
        return Err(bad());
    }
    let all_digits = format!("{whole}{frac}");
    let mut numer = BigInt::from_str(if all_digits.is_empty() { "0" } else { &all_digits }).map_err(|_| bad())?;
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac.len() as i64;
    let ten = BigInt::from(10);
    Ok(if scale >= 0 {
        Rational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(numer, num_traits::pow(ten, (-scale) as usize))
    })
}

/// Converts a finite `f64` to the exact rational it denotes after decimal
/// round-tripping (shortest representation), e.g. `0.1` becomes `1/10`.
pub fn from_f64(x: f64) -> Result<Rational> {
    if !x.is_finite() {
        return Err(Error::Parse(format!("non-finite number {x}")));
    }
    parse(&format!("{x:e}"))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Decimal rendering when the value has a terminating expansion, `p/q`
/// otherwise. Inverse of [`parse`].
pub fn format(r: &Rational) -> String {
    if r.is_integer() {
        return r.numer().to_string();
    }
    let mut d = r.denom().clone();
    let (two, five) = (BigInt::from(2), BigInt::from(5));
    let (mut twos, mut fives) = (0usize, 0usize);
    while d.is_even() {
        d /= &two;
        twos += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        fives += 1;
    }
    if !d.is_one() {
        return format!("{}/{}", r.numer(), r.denom());
    }
    let places = twos.max(fives);
    let scaled = (r * Rational::from_integer(num_traits::pow(BigInt::from(10), places))).to_integer();
    let digits = scaled.abs().to_string();
    let digits = format!("{digits:0>width$}", width = places + 1);
    let (whole, frac) = digits.split_at(digits.len() - places);
    let sign = if r.is_negative() { "-" } else { "" };
    format!("{sign}{whole}.{frac}")
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values.into_iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

/// Serde adapter: accepts JSON numbers (exactly, via the arbitrary precision
/// representation) or strings, and writes decimals or `"p/q"` strings.
pub(crate) mod exact {
    use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
    use serde_json::Value;
    use std::str::FromStr;

    use super::Rational;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        let text = super::format(r);
        match serde_json::Number::from_str(&text) {
            Ok(n) if !text.contains('/') => n.serialize(s),
            _ => s.serialize_str(&text),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        match Value::deserialize(d)? {
            Value::Number(n) => super::parse(&n.to_string()).map_err(de::Error::custom),
            Value::String(s) => super::parse(&s).map_err(de::Error::custom),
            other => Err(de::Error::custom(format!("expected a number, found {other}"))),
        }
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
            match r {
                Some(r) => super::serialize(r, s),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
            match Value::deserialize(d)? {
                Value::Null => Ok(None),
                Value::Number(n) => super::super::parse(&n.to_string()).map(Some).map_err(de::Error::custom),
                Value::String(s) => super::super::parse(&s).map(Some).map_err(de::Error::custom),
                other => Err(de::Error::custom(format!("expected a number, found {other}"))),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_decimal_forms() {
        assert_eq!(parse("12").unwrap(), int(12));
        assert_eq!(parse("-0.125").unwrap(), ratio(-1, 8));
        assert_eq!(parse("3.5e-2").unwrap(), ratio(7, 200));
        assert_eq!(parse("1E3").unwrap(), int(1000));
        assert_eq!(parse("7/3").unwrap(), ratio(7, 3));
        assert_eq!(parse(".5").unwrap(), ratio(1, 2));
        assert_eq!(parse("1.").unwrap(), int(1));
        assert_eq!(parse("0.1").unwrap(), ratio(1, 10));
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "abc", "1.2.3", "1/0", "--1", "e5", "1e", "NaN", "inf"] {
            assert!(parse(s).is_err(), "{s:?} should not parse");
        }
    }

    #[test]
    fn formats_terminating_and_repeating() {
        assert_eq!(format(&int(7)), "7");
        assert_eq!(format(&ratio(-1, 8)), "-0.125");
        assert_eq!(format(&ratio(1, 3)), "1/3");
        assert_eq!(format(&ratio(7, 200)), "0.035");
        assert_eq!(format(&from_f64(0.1).unwrap()), "0.1");
    }

    proptest! {
        #[test]
        fn format_parse_round_trip(n in -1_000_000i64..1_000_000, d in 1i64..5000) {
            let r = ratio(n, d);
            prop_assert_eq!(parse(&format(&r)).unwrap(), r);
        }
    }
}
