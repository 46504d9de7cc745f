//! Exact rationals.
//!
//! `Rat` is `num_rational::BigRational`; this module adds parsing and
//! formatting helpers used by the file formats.

use crate::error::{invalid, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::str::FromStr;

pub type Rat = num_rational::BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"3"`, `"-2/5"`, or an exact decimal such as `"0.125"` / `"1e-3"`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    if s.is_empty() {
        return Err(invalid("empty rational literal"));
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| invalid(format!("bad numerator in `{s}`")))?;
        let d = BigInt::from_str(d.trim()).map_err(|_| invalid(format!("bad denominator in `{s}`")))?;
        if d.is_zero() {
            return Err(invalid(format!("zero denominator in `{s}`")));
        }
        return Ok(Rat::new(n, d));
    }
    parse_decimal(s)
}

fn parse_decimal(s: &str) -> Result<Rat> {
    let bad = || invalid(format!("bad number `{s}`"));
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = Rat::from_integer(BigInt::from_str(&digits).map_err(|_| bad())?);
    let scale = exp - frac_part.len() as i64;
    let ten = Rat::from_integer(BigInt::from(10));
    if scale >= 0 {
        value *= num_traits::pow(ten, scale as usize);
    } else {
        value /= num_traits::pow(ten, (-scale) as usize);
    }
    Ok(if neg { -value } else { value })
}

/// `"num/den"`, or just `"num"` for integers.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Fall back for huge numerators/denominators.
        let n = r.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// Exact square root of a non-negative rational, if it is a perfect square.
pub fn rat_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(Rat::new(n, d))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rat("-2/4").unwrap(), ratio(-1, 2));
        assert_eq!(parse_rat("0.125").unwrap(), ratio(1, 8));
        assert_eq!(parse_rat("1e-3").unwrap(), ratio(1, 1000));
        assert_eq!(parse_rat("-1.5E2").unwrap(), rat(-150));
        assert_eq!(parse_rat("7").unwrap(), rat(7));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("abc").is_err());
        assert!(parse_rat("").is_err());
    }

    #[test]
    fn formats_canonically() {
        assert_eq!(format_rat(&ratio(6, -4)), "-3/2");
        assert_eq!(format_rat(&rat(5)), "5");
    }

    #[test]
    fn square_roots() {
        assert_eq!(rat_sqrt(&ratio(9, 4)), Some(ratio(3, 2)));
        assert_eq!(rat_sqrt(&rat(2)), None);
        assert_eq!(rat_sqrt(&rat(-4)), None);
    }
}
