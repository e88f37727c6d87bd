//! Exact rational helpers: parsing, `num/den` rendering, fixed-precision
//! decimal rendering.

use crate::error::{Error, Result};
use num::bigint::{BigInt, Sign};
use num::rational::BigRational;
use num::{One, Signed, Zero};

/// Render as `num/den` in lowest terms, dropping `/1`.
pub fn format_ratio(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Decimal rendering with `digits` places, truncated toward zero.
pub fn format_decimal(r: &BigRational, digits: u32) -> String {
    let sign = if r.is_negative() { "-" } else { "" };
    let a = r.abs();
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = (a.numer() * &scale) / a.denom();
    let int_part = &scaled / &scale;
    let frac_part = &scaled % &scale;
    format!("{sign}{int_part}.{frac:0>width$}", frac = frac_part, width = digits as usize)
}

/// Parse "a/b", integers, and decimal/scientific forms like "1e-4" or "2.5",
/// all exactly.
pub fn parse_ratio(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty rational".into()));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| bad(s))?;
        let d: BigInt = den.trim().parse().map_err(|_| bad(s))?;
        if d.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        return Ok(BigRational::new(n, d));
    }
    // [sign] digits [. digits] [e [sign] digits]
    let (mantissa, exp10) = match s.split_once(['e', 'E']) {
        Some((m, e)) => {
            let exp: i32 = e.parse().map_err(|_| bad(s))?;
            (m, exp)
        }
        None => (s, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    if frac_part.contains(['+', '-']) {
        return Err(bad(s));
    }
    let digits = format!("{int_part}{frac_part}");
    let n: BigInt = if digits.is_empty() || digits == "-" || digits == "+" {
        return Err(bad(s));
    } else {
        digits.parse().map_err(|_| bad(s))?
    };
    let shift = exp10 - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    Ok(if shift >= 0 {
        BigRational::from_integer(n * ten.pow(shift as u32))
    } else {
        BigRational::new(n, ten.pow((-shift) as u32))
    })
}

/// Exact rational from an unsigned fraction.
pub fn ratio_u(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Nonnegative rational from big unsigned parts.
pub fn ratio_big(num: num::BigUint, den: num::BigUint) -> BigRational {
    BigRational::new(
        BigInt::from_biguint(Sign::Plus, num),
        BigInt::from_biguint(Sign::Plus, den),
    )
}

fn bad(s: &str) -> Error {
    Error::Parse(format!("invalid rational: {s:?}"))
}
