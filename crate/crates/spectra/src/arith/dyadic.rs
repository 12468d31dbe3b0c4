//! Dyadic rationals `m * 2^e` with directed rounding.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rat::{ilog2, Rat};
use crate::error::{Error, Result};

/// `mant * 2^exp`, normalized so that `mant` is odd (or zero with `exp == 0`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        let mut d = Dyadic { mant, exp };
        d.normalize();
        d
    }

    pub fn zero() -> Self {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Dyadic::new(n.into(), 0)
    }

    fn normalize(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz as usize;
            self.exp += tz as i64;
        }
    }

    pub fn mant(&self) -> &BigInt {
        &self.mant
    }

    pub fn exp(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> i32 {
        if self.mant.is_positive() {
            1
        } else if self.mant.is_negative() {
            -1
        } else {
            0
        }
    }

    pub fn to_rat(&self) -> Rat {
        if self.exp >= 0 {
            Rat::from_integer(&self.mant << self.exp as usize)
        } else {
            Rat::new(self.mant.clone(), BigInt::one() << (-self.exp) as usize)
        }
    }

    /// Exact when `r` has a power-of-two denominator.
    pub fn from_rat_exact(r: &Rat) -> Option<Self> {
        let d = r.denom();
        let tz = d.trailing_zeros().unwrap_or(0);
        if (d >> tz as usize).is_one() {
            Some(Dyadic::new(r.numer().clone(), -(tz as i64)))
        } else {
            None
        }
    }

    /// Largest dyadic `<= r` carrying at most `prec` significant bits.
    pub fn floor_rat(r: &Rat, prec: u32) -> Self {
        if r.is_zero() {
            return Dyadic::zero();
        }
        if let Some(d) = Dyadic::from_rat_exact(r) {
            if d.mant.bits() <= prec as u64 {
                return d;
            }
        }
        // scale so the quotient has prec bits: floor(r * 2^s)
        let s = prec as i64 - 1 - ilog2(r);
        let (n, d) = (r.numer(), r.denom());
        let q = if s >= 0 {
            (n << s as usize).div_floor(d)
        } else {
            n.div_floor(&(d << (-s) as usize))
        };
        Dyadic::new(q, -s)
    }

    /// Largest dyadic `<= a / b` carrying at most `prec` significant bits. `b` must be nonzero.
    pub fn div_floor(a: &Dyadic, b: &Dyadic, prec: u32) -> Self {
        if a.is_zero() {
            return Dyadic::zero();
        }
        let s = prec as i64 + b.mant.bits() as i64 - a.mant.bits() as i64 + 1;
        let (n, d) = if s >= 0 {
            (&a.mant << s as usize, b.mant.clone())
        } else {
            (a.mant.clone(), &b.mant << (-s) as usize)
        };
        Dyadic::new(n.div_floor(&d), a.exp - b.exp - s).round_floor(prec)
    }

    pub fn div_ceil(a: &Dyadic, b: &Dyadic, prec: u32) -> Self {
        -Dyadic::div_floor(&-a, b, prec)
    }

    pub fn ceil_rat(r: &Rat, prec: u32) -> Self {
        -Dyadic::floor_rat(&-r, prec)
    }

    /// Round toward minus infinity keeping `prec` significant bits.
    pub fn round_floor(&self, prec: u32) -> Self {
        let bits = self.mant.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let shift = bits - prec as u64;
        let q = self.mant.div_floor(&(BigInt::one() << shift as usize));
        Dyadic::new(q, self.exp + shift as i64)
    }

    pub fn round_ceil(&self, prec: u32) -> Self {
        -(-self).round_floor(prec)
    }

    pub fn abs(&self) -> Self {
        Dyadic { mant: self.mant.abs(), exp: self.exp }
    }

    pub fn half(&self) -> Self {
        Dyadic::new(self.mant.clone(), self.exp - 1)
    }

    /// `floor(log2 |x|)`; `None` for zero.
    pub fn ilog2(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.exp + self.mant.bits() as i64 - 1)
        }
    }

    pub fn pow2(e: i64) -> Self {
        Dyadic { mant: BigInt::one(), exp: e }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim().replace('\u{2212}', "-");
        let (m, e) = match s.split_once("*2^") {
            Some((m, e)) => (m.to_string(), e.to_string()),
            None => (s.clone(), "0".to_string()),
        };
        let mant: BigInt = m.parse().map_err(|_| Error::Parse(format!("bad dyadic `{s}`")))?;
        let exp: i64 = e.parse().map_err(|_| Error::Parse(format!("bad dyadic exponent `{s}`")))?;
        Ok(Dyadic::new(mant, exp))
    }
}

fn align(a: &Dyadic, b: &Dyadic) -> (BigInt, BigInt, i64) {
    let e = a.exp.min(b.exp);
    (
        &a.mant << (a.exp - e) as usize,
        &b.mant << (b.exp - e) as usize,
        e,
    )
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        let (a, b, _) = align(self, other);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mant, self.exp)
    }
}

impl std::ops::Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { mant: -self.mant, exp: self.exp }
    }
}

impl std::ops::Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }
}

impl std::ops::Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        let (a, b, e) = align(self, rhs);
        Dyadic::new(a + b, e)
    }
}

impl std::ops::Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        let (a, b, e) = align(self, rhs);
        Dyadic::new(a - b, e)
    }
}

impl std::ops::Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mant * &rhs.mant, self.exp + rhs.exp)
    }
}
