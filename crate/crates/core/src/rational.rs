//! Exact rational parsing and formatting.
//!
//! All numeric game data (probabilities, rewards, sojourn times) is kept as
//! arbitrary-precision rationals. Input strings may be written as `p/q`, as
//! plain integers, or as decimals; decimals are converted exactly
//! (`1.6` becomes `8/5`).

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Pow, Signed, ToPrimitive, Zero};
use std::str::FromStr;
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid rational literal `{literal}`: {reason}")]
pub struct ParseRationalError {
    pub literal: String,
    pub reason: String,
}

fn err(literal: &str, reason: impl Into<String>) -> ParseRationalError {
    ParseRationalError {
        literal: literal.to_string(),
        reason: reason.into(),
    }
}

/// Parses `p/q`, integer, or decimal literals into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let trimmed = s.trim();
    if trimmed.is_empty() {
        return Err(err(s, "empty string"));
    }
    if let Some((num, den)) = trimmed.split_once('/') {
        let n = BigInt::from_str(num.trim()).map_err(|e| err(s, e.to_string()))?;
        let d = BigInt::from_str(den.trim()).map_err(|e| err(s, e.to_string()))?;
        if d.is_zero() {
            return Err(err(s, "zero denominator"));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((int_part, frac_part)) = trimmed.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err(s, "malformed decimal"));
        }
        let int_part = if int_part.is_empty() || int_part == "-" || int_part == "+" {
            format!("{int_part}0")
        } else {
            int_part.to_string()
        };
        let whole = BigInt::from_str(&int_part).map_err(|e| err(s, e.to_string()))?;
        let frac = BigInt::from_str(frac_part).map_err(|e| err(s, e.to_string()))?;
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let negative = int_part.starts_with('-');
        let numer = whole * &scale + if negative { -frac } else { frac };
        return Ok(Rational::new(numer, scale));
    }
    let n = BigInt::from_str(trimmed).map_err(|e| err(s, e.to_string()))?;
    Ok(Rational::from_integer(n))
}

/// Canonical string form: `p/q` in lowest terms, or `p` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // fall back to a quotient of lossy conversions for huge components
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Decimal rendering rounded half-away-from-zero to `places` digits.
pub fn format_decimal(r: &Rational, places: usize) -> String {
    let scale = BigInt::from(10u32).pow(places as u32);
    let scaled = r * Rational::from_integer(scale.clone());
    let half = Rational::new(BigInt::from(1), BigInt::from(2));
    let rounded = if scaled.is_negative() {
        -((-scaled + half).floor())
    } else {
        (scaled + half).floor()
    };
    let units = rounded.to_integer();
    let negative = units.is_negative();
    let digits = units.abs().to_string();
    let digits = if digits.len() <= places {
        format!("{}{}", "0".repeat(places + 1 - digits.len()), digits)
    } else {
        digits
    };
    let (whole, frac) = digits.split_at(digits.len() - places);
    let sign = if negative { "-" } else { "" };
    if places == 0 {
        format!("{sign}{whole}")
    } else {
        format!("{sign}{whole}.{frac}")
    }
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn integer(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}
