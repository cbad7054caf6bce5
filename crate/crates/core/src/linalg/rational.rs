//! Exact rational scalars and their canonical text form.
//!
//! Text form: optional `-`, decimal digits, optionally `/` and a positive
//! denominator. Fractions must be fully reduced and a denominator of one is
//! written without the slash.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn parse_digits(s: &str) -> Option<BigInt> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) || (s.len() > 1 && s.starts_with('0')) {
        return None;
    }
    s.parse().ok()
}

/// Parses the canonical text form; non-reduced fractions are rejected.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::ParseRational(text.to_string());
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => {
            let num = parse_digits(n).ok_or_else(bad)?;
            let den = parse_digits(d).ok_or_else(bad)?;
            if den.is_zero() || den.is_one() || !num.gcd(&den).is_one() {
                return Err(bad());
            }
            (num, den)
        }
        None => (parse_digits(body).ok_or_else(bad)?, BigInt::one()),
    };
    if negative && num.is_zero() {
        return Err(bad());
    }
    let num = if negative { -num } else { num };
    Ok(Rational::new_raw(num, den))
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values.into_iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Scales a rational row by a positive factor to a primitive integer row.
/// The zero row maps to the zero row.
pub fn primitive_integer_row(row: &[Rational]) -> Vec<BigInt> {
    let den = common_denominator(row);
    let ints: Vec<BigInt> = row.iter().map(|v| v.numer() * (&den / v.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if g.is_zero() || g.is_one() {
        ints
    } else {
        ints.into_iter().map(|v| v / &g).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        for text in ["0", "7", "-3", "1/2", "-22/7", "123456789012345678901234567891/2"] {
            let r = parse_rational(text).unwrap();
            assert_eq!(format_rational(&r), text);
        }
        assert_eq!(parse_rational("-1/3").unwrap(), ratio(-1, 3));
    }

    #[test]
    fn parse_rejects_non_canonical() {
        for text in ["", "-", "+1", "2/4", "1/0", "0/5", "1/-2", " 1", "1.5", "--1", "a", "3/1", "-0/1"] {
            assert!(parse_rational(text).is_err(), "{text:?} accepted");
        }
    }

    #[test]
    fn primitive_rows() {
        let row = vec![ratio(1, 2), ratio(-3, 4), rat(0)];
        assert_eq!(primitive_integer_row(&row), vec![BigInt::from(2), BigInt::from(-3), BigInt::from(0)]);
        let row = vec![rat(4), rat(6)];
        assert_eq!(primitive_integer_row(&row), vec![BigInt::from(2), BigInt::from(3)]);
    }
}
