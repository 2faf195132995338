//! Exact rational arithmetic helpers.
//!
//! Every quantity in this crate — costs, valuations, weights, cut positions,
//! subsidies — is a [`Rational`] (an arbitrary-precision `p/q`).  There are no
//! floating-point numbers anywhere in the solver paths, so equality tests and
//! tight-bound assertions are exact.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::str::FromStr;
use thiserror::Error;

/// Arbitrary-precision rational number used throughout the crate.
pub type Rational = num_rational::BigRational;

/// Convenience constructor for small rationals: `rat(1, 4)` is `1/4`.
///
/// Panics if `denom` is zero.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Error produced when a rational literal cannot be parsed.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid rational literal `{0}`")]
    Invalid(String),
    #[error("zero denominator in rational literal `{0}`")]
    ZeroDenominator(String),
}

/// Parses an exact rational from an integer (`"3"`, `"-2"`), a fraction
/// (`"51/100"`), or a decimal string (`"0.43"`).  Decimal input is converted
/// exactly (no floating point), so `"0.43"` becomes `43/100`.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let t = s.trim();
    if t.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    let invalid = || ParseRationalError::Invalid(s.to_owned());
    if let Some((numer, denom)) = t.split_once('/') {
        let n = BigInt::from_str(numer.trim()).map_err(|_| invalid())?;
        let d = BigInt::from_str(denom.trim()).map_err(|_| invalid())?;
        if d.is_zero() {
            return Err(ParseRationalError::ZeroDenominator(s.to_owned()));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((int_part, frac_part)) = t.split_once('.') {
        let negative = int_part.trim_start().starts_with('-');
        let digits = int_part.trim_start_matches(['+', '-']);
        if !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(invalid());
        }
        let int_val = if digits.is_empty() {
            BigInt::zero()
        } else {
            BigInt::from_str(digits).map_err(|_| invalid())?
        };
        if frac_part.is_empty() || !frac_part.chars().all(|c| c.is_ascii_digit()) {
            return Err(invalid());
        }
        let frac_val = BigInt::from_str(frac_part).map_err(|_| invalid())?;
        let scale = num_traits::pow(BigInt::from(10), frac_part.len());
        let magnitude = Rational::new(int_val * &scale + frac_val, scale);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    BigInt::from_str(t)
        .map(Rational::from_integer)
        .map_err(|_| invalid())
}

/// Formats a rational canonically: `"p"` when the denominator is one,
/// `"p/q"` otherwise (always fully reduced).
pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

/// Decimal approximation with `digits` fractional digits, rounding half away
/// from zero.  For display only — never feed the result back into the solver.
pub fn format_decimal(q: &Rational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = q.numer().abs() * &scale;
    let denom = q.denom().clone();
    // round(scaled / denom) with ties away from zero
    let rounded = (scaled * 2u8 + &denom) / (denom * 2u8);
    let s = rounded.to_string();
    let sign = if q.is_negative() { "-" } else { "" };
    if digits == 0 {
        return format!("{sign}{s}");
    }
    let padded = format!("{s:0>width$}", width = digits + 1);
    let (int_part, frac_part) = padded.split_at(padded.len() - digits);
    format!("{sign}{int_part}.{frac_part}")
}
