//! Exact rationals and their string form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms with a positive denominator.
pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `base^exp` for a signed exponent; `base` must be nonzero when `exp < 0`.
pub fn pow(base: &Rat, exp: i64) -> Rat {
    if exp >= 0 {
        num_traits::pow(base.clone(), exp as usize)
    } else {
        num_traits::pow(base.recip(), exp.unsigned_abs() as usize)
    }
}

pub fn pow10(exp: i64) -> Rat {
    pow(&int(10), exp)
}

pub fn min(a: &Rat, b: &Rat) -> Rat {
    if a <= b {
        a.clone()
    } else {
        b.clone()
    }
}

pub fn max(a: &Rat, b: &Rat) -> Rat {
    if a >= b {
        a.clone()
    } else {
        b.clone()
    }
}

/// `"p/q"`, always with an explicit denominator.
pub fn format_rat(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Accepts `p/q`, integers, and decimals with an optional exponent (`6e-3`, `0.25`, `-1.5E+2`).
/// Both ASCII `-` and the Unicode minus sign are understood.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let cleaned: String = s.trim().replace('\u{2212}', "-").replace('_', "");
    if cleaned.is_empty() {
        return Err(Error::Parse(format!("empty rational `{s}`")));
    }
    if let Some((p, q)) = cleaned.split_once('/') {
        let p: BigInt = p
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad numerator in `{s}`")))?;
        let q: BigInt = q
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad denominator in `{s}`")))?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in `{s}`")));
        }
        return Ok(Rat::new(p, q));
    }
    parse_decimal(&cleaned).ok_or_else(|| Error::Parse(format!("cannot read `{s}` as a rational")))
}

fn parse_decimal(s: &str) -> Option<Rat> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().ok()?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let joined = format!("{whole}{frac}");
    let n: BigInt = if joined.is_empty() { BigInt::zero() } else { joined.parse().ok()? };
    let mut r = Rat::from_integer(n) * pow10(exponent - frac.len() as i64);
    if neg {
        r = -r;
    }
    Some(r)
}

/// `floor(log2 |r|)` for nonzero `r`.
pub fn ilog2(r: &Rat) -> i64 {
    debug_assert!(!r.is_zero());
    let n = r.numer().abs();
    let d = r.denom();
    let mut e = n.bits() as i64 - d.bits() as i64;
    // 2^e <= n/d < 2^(e+1), adjusting by at most one.
    let lhs = |e: i64| -> bool {
        if e >= 0 {
            (d << e as usize) <= n
        } else {
            d <= &(&n << (-e) as usize)
        }
    };
    if !lhs(e) {
        e -= 1;
    } else if lhs(e + 1) {
        e += 1;
    }
    e
}

pub fn is_integer(r: &Rat) -> bool {
    r.denom().is_one()
}

pub fn floor_int(r: &Rat) -> BigInt {
    r.numer().div_floor(r.denom())
}

pub mod serde_rat {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rat(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rat, D::Error> {
        let raw = String::deserialize(d)?;
        parse_rat(&raw).map_err(serde::de::Error::custom)
    }
}

pub mod serde_rat_vec {
    use super::*;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rat], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&format_rat(r))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rat>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|s| parse_rat(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_forms() {
        assert_eq!(parse_rat("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rat("\u{2212}2/4").unwrap(), rat(-1, 2));
        assert_eq!(parse_rat("1e-3").unwrap(), rat(1, 1000));
        assert_eq!(parse_rat("6e-3").unwrap(), rat(3, 500));
        assert_eq!(parse_rat("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_rat("-1.5E+2").unwrap(), int(-150));
        assert_eq!(parse_rat("17").unwrap(), int(17));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("abc").is_err());
        assert!(parse_rat(".").is_err());
    }

    #[test]
    fn formats_with_denominator() {
        assert_eq!(format_rat(&int(5)), "5/1");
        assert_eq!(format_rat(&rat(-6, 4)), "-3/2");
    }

    #[test]
    fn ilog2_brackets() {
        for (n, d) in [(1, 1), (3, 1), (4, 1), (1, 3), (1, 4), (5, 7), (1023, 1), (1024, 1)] {
            let r = rat(n, d);
            let e = ilog2(&r);
            assert!(pow(&int(2), e) <= r && r < pow(&int(2), e + 1), "{n}/{d} -> {e}");
        }
    }
}
