//! Exact rational scalars and their text forms.
//!
//! Positions, costs, and ratios are arbitrary-precision rationals throughout;
//! nothing on a verification path ever touches floating point. The canonical
//! text form is what [`Rational`]'s `Display` produces: `79/160`, `-1/2`, `2`
//! (reduced, positive denominator, no denominator when it is 1). Decimal
//! strings exist only for human-facing columns and are produced by exact
//! integer long division.

use alloc::string::{String, ToString};

use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Rational = num_rational::BigRational;

/// Shorthand for small literal rationals. Panics if `den` is zero.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parse error carrying the offending literal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRationalError {
    input: String,
}

impl ParseRationalError {
    pub fn input(&self) -> &str {
        &self.input
    }
}

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "invalid rational literal `{}`: expected `p` or `p/q` with integer p, q and q != 0",
            self.input
        )
    }
}

impl core::error::Error for ParseRationalError {}

/// Parses `p` or `p/q` (optionally signed) into a canonical rational.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    Rational::from_str(s.trim()).map_err(|_| ParseRationalError {
        input: s.to_string(),
    })
}

/// Rounds `q` to `digits` fractional digits, half away from zero, using exact
/// integer division. Display-only: the result is a plain decimal string like
/// `-2.950617`.
pub fn decimal_approx(q: &Rational, digits: u32) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let numer = q.numer().abs() * &scale;
    let denom = q.denom().clone();
    // floor((2a + b) / 2b) rounds a/b half away from zero for a, b >= 0.
    let two = BigInt::from(2u32);
    let rounded = (numer * &two + &denom).div_floor(&(denom * &two));
    let mut body = rounded.to_string();
    if digits > 0 {
        let digits = digits as usize;
        while body.len() <= digits {
            body.insert(0, '0');
        }
        body.insert(body.len() - digits, '.');
    }
    if q.is_negative() && !rounded.is_zero() {
        body.insert(0, '-');
    }
    body
}

/// Rounds `q` to `sig` significant digits, half away from zero. A value whose
/// integer part alone has `sig` or more digits rounds to a whole number
/// instead of dropping trailing places. Display-only, like [`decimal_approx`].
pub fn decimal_significant(q: &Rational, sig: u32) -> String {
    if q.is_zero() {
        return decimal_approx(q, sig.saturating_sub(1));
    }
    let trunc = q.to_integer().abs();
    let int_digits = if trunc.is_zero() {
        0
    } else {
        trunc.to_string().len() as u32
    };
    if int_digits >= sig {
        return decimal_approx(q, 0);
    }
    if int_digits > 0 {
        return decimal_approx(q, sig - int_digits);
    }
    // |q| < 1: leading fractional zeros are not significant digits.
    let ten = Rational::from_integer(BigInt::from(10u32));
    let mut scaled = q.abs();
    let mut zeros = 0u32;
    while scaled < Rational::one() {
        scaled *= &ten;
        zeros += 1;
    }
    decimal_approx(q, sig + zeros - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integers_and_fractions() {
        assert_eq!(parse_rational("2").unwrap(), rat(2, 1));
        assert_eq!(parse_rational("-1/2").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational(" 79/160 ").unwrap(), rat(79, 160));
        assert_eq!(parse_rational("6/4").unwrap(), rat(3, 2));
    }

    #[test]
    fn rejects_garbage_and_zero_denominators() {
        for bad in ["", "x", "1/0", "1//2", "1.5", "1/ 2"] {
            let err = parse_rational(bad).unwrap_err();
            assert_eq!(err.input(), bad);
        }
    }

    #[test]
    fn display_is_canonical() {
        assert_eq!(rat(6, 4).to_string(), "3/2");
        assert_eq!(rat(2, 1).to_string(), "2");
        assert_eq!(rat(1, -2).to_string(), "-1/2");
    }

    #[test]
    fn decimal_rounding_is_half_away_from_zero() {
        assert_eq!(decimal_approx(&rat(239, 81), 6), "2.950617");
        assert_eq!(decimal_approx(&rat(1277, 321), 6), "3.978193");
        assert_eq!(decimal_approx(&rat(1, 2), 0), "1");
        assert_eq!(decimal_approx(&rat(-1, 2), 0), "-1");
        assert_eq!(decimal_approx(&rat(1, 8), 2), "0.13");
        assert_eq!(decimal_approx(&rat(-1, 8), 2), "-0.13");
        assert_eq!(decimal_approx(&rat(0, 1), 6), "0.000000");
        assert_eq!(decimal_approx(&rat(-1, 10_000_000), 6), "0.000000");
        assert_eq!(decimal_approx(&rat(999999999, 1000000000), 6), "1.000000");
    }

    #[test]
    fn significant_digit_rendering_tracks_magnitude() {
        assert_eq!(decimal_significant(&rat(239, 81), 10), "2.950617284");
        assert_eq!(decimal_significant(&rat(2399, 801), 10), "2.995006242");
        assert_eq!(decimal_significant(&rat(1, 3), 10), "0.3333333333");
        assert_eq!(decimal_significant(&rat(-1, 3), 10), "-0.3333333333");
        assert_eq!(decimal_significant(&rat(1, 160), 10), "0.006250000000");
        assert_eq!(decimal_significant(&rat(0, 1), 10), "0.000000000");
        assert_eq!(decimal_significant(&rat(100, 1), 10), "100.0000000");
        assert_eq!(decimal_significant(&rat(100, 1), 3), "100");
        assert_eq!(
            decimal_significant(&rat(999_999_999_999, 100), 10),
            "10000000000"
        );
        assert_eq!(decimal_significant(&rat(1, 2), 4), "0.5000");
    }
}
