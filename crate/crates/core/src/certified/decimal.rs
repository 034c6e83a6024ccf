//! Exact decimal-literal parsing.
//!
//! Tolerance and threshold constants enter the system as decimal strings
//! (`"1.13e-3"`, `"0.297"`). Parsing them into `BigRational` keeps them
//! exact, so rational comparisons stay equality-safe; interval backends
//! derive certified enclosures from the rational afterwards.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use super::real::CertifiedReal;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid decimal literal {literal:?}: {reason}")]
pub struct DecimalParseError {
    pub literal: String,
    pub reason: &'static str,
}

/// Parses a plain or scientific decimal literal into an exact rational.
pub fn parse_decimal_rational(s: &str) -> Result<BigRational, DecimalParseError> {
    let err = |reason: &'static str| DecimalParseError { literal: s.to_owned(), reason };
    let t = s.trim();
    if t.is_empty() {
        return Err(err("empty string"));
    }
    let (mantissa, exp10) = match t.find(['e', 'E']) {
        Some(i) => {
            let exp: i64 = t[i + 1..].parse().map_err(|_| err("bad exponent"))?;
            (&t[..i], exp)
        }
        None => (t, 0),
    };
    let (sign, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits.find('.') {
        Some(i) => (&digits[..i], &digits[i + 1..]),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err("no digits"));
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit())
    {
        return Err(err("non-digit in mantissa"));
    }
    let joined = format!("{int_part}{frac_part}");
    let numer: BigInt = joined.parse().map_err(|_| err("mantissa overflow"))?;
    let shift = exp10 - frac_part.len() as i64;
    let ten = BigInt::from(10);
    let scale = ten.pow(shift.unsigned_abs() as u32);
    let value = if shift >= 0 {
        BigRational::from_integer(numer * scale)
    } else {
        BigRational::new(numer, scale)
    };
    Ok(if sign < 0 { -value } else { value })
}

/// Parses a non-negative integer literal: plain digits (`"1724"`),
/// `base^exp` (`"10^31"`), or a scientific/decimal form that reduces to an
/// integer (`"1e31"`, `"6.8e19"`).
pub fn parse_biguint(s: &str) -> Result<num_bigint::BigUint, DecimalParseError> {
    let err = |reason: &'static str| DecimalParseError { literal: s.to_owned(), reason };
    let t = s.trim();
    if t.is_empty() {
        return Err(err("empty string"));
    }
    if let Some((base, exp)) = t.split_once('^') {
        let base: u32 = base.trim().parse().map_err(|_| err("bad base"))?;
        let exp: u32 = exp.trim().parse().map_err(|_| err("bad exponent"))?;
        return Ok(num_bigint::BigUint::from(base).pow(exp));
    }
    if t.bytes().all(|b| b.is_ascii_digit()) {
        return t.parse().map_err(|_| err("bad integer"));
    }
    let r = parse_decimal_rational(t)?;
    if !r.denom().is_one() || r.numer().is_negative() {
        return Err(err("not a non-negative integer"));
    }
    Ok(r.numer().to_biguint().expect("checked non-negative"))
}

/// Certified interval containing an exact rational, built by directed
/// division of the (big-integer) numerator and denominator.
pub fn rational_certified<R: CertifiedReal>(r: &BigRational) -> R {
    let numer_mag = r.numer().magnitude();
    let denom_mag = r.denom().magnitude();
    let q = R::from_biguint(numer_mag).div(&R::from_biguint(denom_mag));
    if r.numer().sign() == Sign::Minus {
        q.neg()
    } else {
        q
    }
}

/// True when the rational is exactly zero (used to gate empty checks).
pub fn is_zero(r: &BigRational) -> bool {
    r.is_zero()
}

/// True when the rational is strictly positive.
pub fn is_positive(r: &BigRational) -> bool {
    r.is_positive()
}

/// Exact rational `1`.
pub fn one() -> BigRational {
    BigRational::one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certified::enclosure::Enclosure;

    #[test]
    fn scientific_literal_parses_exactly() {
        let r = parse_decimal_rational("1.13e-3").unwrap();
        assert_eq!(r, BigRational::new(113.into(), 100_000.into()));
        assert_eq!(
            parse_decimal_rational("0.297").unwrap(),
            BigRational::new(297.into(), 1_000.into())
        );
        assert_eq!(
            parse_decimal_rational("3.33").unwrap(),
            BigRational::new(333.into(), 100.into())
        );
        assert_eq!(parse_decimal_rational("1724").unwrap(), BigRational::from_integer(1724.into()));
        assert_eq!(
            parse_decimal_rational("6.8e19").unwrap(),
            BigRational::from_integer(68_000_000_000_000_000_000u128.into())
        );
        assert_eq!(
            parse_decimal_rational("-2.5e1").unwrap(),
            BigRational::from_integer((-25).into())
        );
    }

    #[test]
    fn integer_literals_accept_all_three_forms() {
        use num_bigint::BigUint;
        assert_eq!(parse_biguint("1724").unwrap(), BigUint::from(1724u32));
        assert_eq!(parse_biguint("10^31").unwrap(), BigUint::from(10u32).pow(31));
        assert_eq!(parse_biguint("1e31").unwrap(), BigUint::from(10u32).pow(31));
        assert_eq!(parse_biguint(" 6.8e19 ").unwrap(), BigUint::from(68u128 * 10u128.pow(18)));
        for bad in ["", "-5", "1.5", "2^", "^3", "1e-2"] {
            assert!(parse_biguint(bad).is_err(), "{bad:?} accepted");
        }
    }

    #[test]
    fn malformed_literals_are_rejected() {
        for bad in ["", "abc", "1.2.3", "1e", "--3", ".e3"] {
            assert!(parse_decimal_rational(bad).is_err(), "{bad:?} accepted");
        }
    }

    #[test]
    fn rational_enclosure_brackets_value() {
        let r = parse_decimal_rational("1.13e-3").unwrap();
        let e: Enclosure = rational_certified(&r);
        assert!(e.lo() <= 0.001_13 && 0.001_13 <= e.hi());
        assert!(e.width() < 1e-18);

        let neg: Enclosure = rational_certified(&parse_decimal_rational("-0.5").unwrap());
        assert!(neg.contains(-0.5));
    }
}
