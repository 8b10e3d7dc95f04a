//! Rational helpers.

use num::bigint::BigInt;
use num::{BigRational, One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Rat {
    Rat::zero()
}

pub fn one() -> Rat {
    Rat::one()
}

/// 2^-k as a rational.
pub fn pow2_neg(k: u32) -> Rat {
    Rat::new(BigInt::one(), BigInt::one() << k as usize)
}

/// Parses "num/den", an integer, or a finite decimal like "0.025".
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rat::new(n, d));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        if fp.is_empty() || !fp.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = ip.starts_with('-');
        let ip = if ip.is_empty() || ip == "-" { "0" } else { ip.trim_start_matches('-') };
        let ip: BigInt = ip.parse().map_err(|_| bad())?;
        let fv: BigInt = fp.parse().map_err(|_| bad())?;
        let den = num::pow(BigInt::from(10), fp.len());
        let r = Rat::new(ip * &den + fv, den);
        return Ok(if neg { -r } else { r });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rat::from_integer(n))
}

/// Renders as "num/den", always with an explicit denominator.
pub fn fmt_rat(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| if r.is_negative() { f64::MIN } else { f64::MAX })
}

pub fn in_unit(r: &Rat) -> bool {
    !r.is_negative() && *r <= Rat::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_forms() {
        assert_eq!(parse_rat("1/3").unwrap(), rat(1, 3));
        assert_eq!(parse_rat("2").unwrap(), rat(2, 1));
        assert_eq!(parse_rat("0.025").unwrap(), rat(1, 40));
        assert_eq!(parse_rat(".5").unwrap(), rat(1, 2));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn formats_with_denominator() {
        assert_eq!(fmt_rat(&rat(2, 4)), "1/2");
        assert_eq!(fmt_rat(&one()), "1/1");
        assert_eq!(pow2_neg(3), rat(1, 8));
    }
}
