//! Closed intervals with dyadic endpoints and outward rounding.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::dyadic::Dyadic;
use super::rat::Rat;
use crate::error::{Error, Result};

/// `[lo, hi]` with every operation rounded outward to `prec` significant bits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: Dyadic,
    hi: Dyadic,
    prec: u32,
}

impl Interval {
    pub fn new(lo: Dyadic, hi: Dyadic, prec: u32) -> Self {
        assert!(lo <= hi, "interval endpoints out of order: {lo} > {hi}");
        Interval { lo, hi, prec }
    }

    pub fn point(d: Dyadic, prec: u32) -> Self {
        Interval { lo: d.clone(), hi: d, prec }
    }

    pub fn from_rat(r: &Rat, prec: u32) -> Self {
        Interval {
            lo: Dyadic::floor_rat(r, prec),
            hi: Dyadic::ceil_rat(r, prec),
            prec,
        }
    }

    pub fn from_rats(lo: &Rat, hi: &Rat, prec: u32) -> Self {
        assert!(lo <= hi);
        Interval {
            lo: Dyadic::floor_rat(lo, prec),
            hi: Dyadic::ceil_rat(hi, prec),
            prec,
        }
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(mut self, prec: u32) -> Self {
        self.prec = prec;
        self
    }

    pub fn lo_rat(&self) -> Rat {
        self.lo.to_rat()
    }

    pub fn hi_rat(&self) -> Rat {
        self.hi.to_rat()
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Dyadic {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Dyadic {
        (&self.lo + &self.hi).half()
    }

    /// `width / min|x|`, or `None` when the interval touches zero.
    pub fn rel_width(&self) -> Option<Rat> {
        if self.contains_zero() {
            return None;
        }
        let mag = if self.lo.signum() > 0 { self.lo.to_rat() } else { -self.hi.to_rat() };
        Some(self.width().to_rat() / mag)
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.signum() <= 0 && self.hi.signum() >= 0
    }

    pub fn contains_rat(&self, r: &Rat) -> bool {
        &self.lo.to_rat() <= r && r <= &self.hi.to_rat()
    }

    pub fn contains(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
            prec: self.prec.max(other.prec),
        }
    }

    fn rounded(lo: Dyadic, hi: Dyadic, prec: u32) -> Interval {
        Interval { lo: lo.round_floor(prec), hi: hi.round_ceil(prec), prec }
    }

    pub fn neg(&self) -> Interval {
        Interval { lo: -&self.hi, hi: -&self.lo, prec: self.prec }
    }

    pub fn add(&self, o: &Interval) -> Interval {
        let p = self.prec.max(o.prec);
        Interval::rounded(&self.lo + &o.lo, &self.hi + &o.hi, p)
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        let p = self.prec.max(o.prec);
        Interval::rounded(&self.lo - &o.hi, &self.hi - &o.lo, p)
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let p = self.prec.max(o.prec);
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Interval::rounded(lo, hi, p)
    }

    pub fn sqr(&self) -> Interval {
        if self.contains_zero() {
            let a = &self.lo * &self.lo;
            let b = &self.hi * &self.hi;
            Interval::rounded(Dyadic::zero(), a.max(b), self.prec)
        } else {
            self.mul(self)
        }
    }

    pub fn recip(&self) -> Result<Interval> {
        if self.contains_zero() {
            return Err(Error::DivisionByZero);
        }
        let one = Dyadic::from_int(1);
        let lo = Dyadic::div_floor(&one, &self.hi, self.prec);
        let hi = Dyadic::div_ceil(&one, &self.lo, self.prec);
        Ok(Interval { lo, hi, prec: self.prec })
    }

    pub fn div(&self, o: &Interval) -> Result<Interval> {
        if o.contains_zero() {
            return Err(Error::DivisionByZero);
        }
        let p = self.prec.max(o.prec);
        let pairs = [(&self.lo, &o.lo), (&self.lo, &o.hi), (&self.hi, &o.lo), (&self.hi, &o.hi)];
        let lo = pairs.iter().map(|(a, b)| Dyadic::div_floor(a, b, p)).min().unwrap();
        let hi = pairs.iter().map(|(a, b)| Dyadic::div_ceil(a, b, p)).max().unwrap();
        Ok(Interval { lo, hi, prec: p })
    }

    pub fn powi(&self, n: u32) -> Interval {
        let mut acc = Interval::point(Dyadic::from_int(1), self.prec);
        if n == 0 {
            return acc;
        }
        if n.is_multiple_of(2) {
            let h = self.sqr().powi(n / 2);
            return h;
        }
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn max0(&self) -> Interval {
        if self.lo.is_zero() || self.lo.signum() > 0 {
            self.clone()
        } else {
            let hi = if self.hi.signum() < 0 { Dyadic::zero() } else { self.hi.clone() };
            Interval { lo: Dyadic::zero(), hi, prec: self.prec }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.lo.signum() > 0
    }

    pub fn is_zero_point(&self) -> bool {
        self.lo.is_zero() && self.hi.is_zero()
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

#[derive(Serialize, Deserialize)]
struct IntervalRepr {
    lo: String,
    hi: String,
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        IntervalRepr { lo: self.lo.to_string(), hi: self.hi.to_string() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = IntervalRepr::deserialize(d)?;
        let lo = Dyadic::parse(&r.lo).map_err(serde::de::Error::custom)?;
        let hi = Dyadic::parse(&r.hi).map_err(serde::de::Error::custom)?;
        if lo > hi {
            return Err(serde::de::Error::custom("interval endpoints out of order"));
        }
        let prec = (lo.mant().bits().max(hi.mant().bits()) as u32).max(64);
        Ok(Interval { lo, hi, prec })
    }
}

/// Interval with `Rat::zero()` endpoints, useful as an accumulator.
pub fn zero(prec: u32) -> Interval {
    Interval::from_rat(&Rat::zero(), prec)
}
