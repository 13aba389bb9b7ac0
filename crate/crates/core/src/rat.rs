//! Exact rational scalars and their `"p/q"` wire form.
//!
//! Every coordinate, length and breakpoint in this crate is a [`Rat`];
//! floating point appears only in entropy estimates, never in geometry.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

pub type Rat = BigRational;

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_zero() -> Rat {
    Rat::zero()
}

pub fn rat_one() -> Rat {
    Rat::one()
}

pub fn is_zero(r: &Rat) -> bool {
    r.is_zero()
}

/// Nearest f64; used only for reporting and convergence estimates.
pub fn to_f64(r: &Rat) -> f64 {
    let num = r.numer();
    let den = r.denom();
    // Exact when both fit; otherwise scale down in tandem.
    match (num.to_string().parse::<f64>(), den.to_string().parse::<f64>()) {
        (Ok(n), Ok(d)) if d.is_finite() && n.is_finite() && d != 0.0 => n / d,
        _ => {
            let bits = num.bits().max(den.bits()).saturating_sub(500);
            let n2: BigInt = num >> bits;
            let d2: BigInt = den >> bits;
            let n = n2.to_string().parse::<f64>().unwrap_or(f64::NAN);
            let d = d2.to_string().parse::<f64>().unwrap_or(f64::NAN);
            n / d
        }
    }
}

/// Parses `"p/q"` or a bare integer `"p"`.
pub fn parse_rat(s: &str) -> Result<Rat, RatParseError> {
    let s = s.trim();
    let (num_s, den_s) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num_s).map_err(|_| RatParseError(s.to_string()))?;
    let den = BigInt::from_str(den_s).map_err(|_| RatParseError(s.to_string()))?;
    if den.is_zero() {
        return Err(RatParseError(s.to_string()));
    }
    Ok(Rat::new(num, den))
}

pub fn format_rat(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatParseError(pub String);

impl fmt::Display for RatParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "malformed rational {:?} (expected \"p/q\")", self.0)
    }
}

impl std::error::Error for RatParseError {}

/// Serde adapter: rationals travel as `"p/q"` strings.
pub mod rat_serde {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rat(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        parse_rat(&s).map_err(serde::de::Error::custom)
    }
}

/// A `"p/q"` string newtype for use inside report structures.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatStr(pub String);

impl From<&Rat> for RatStr {
    fn from(r: &Rat) -> Self {
        RatStr(format_rat(r))
    }
}

pub fn abs(r: &Rat) -> Rat {
    r.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rat("1/3").unwrap(), rat(1, 3));
        assert_eq!(parse_rat("-2/6").unwrap(), rat(-1, 3));
        assert_eq!(parse_rat("5").unwrap(), rat_int(5));
        assert_eq!(format_rat(&rat(2, 4)), "1/2");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn f64_conversion() {
        assert!((to_f64(&rat(1, 3)) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(to_f64(&rat_int(0)), 0.0);
    }
}
