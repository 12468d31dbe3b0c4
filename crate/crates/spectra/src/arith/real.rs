//! A real number known either exactly or by a validated enclosure.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use super::interval::Interval;
use super::rat::{format_rat, Rat};
use crate::error::{Error, Result};

/// Exact arithmetic is kept as long as every operand is exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Real {
    Exact(Rat),
    Approx(Interval),
}

impl Real {
    pub fn exact(r: Rat) -> Self {
        Real::Exact(r)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Real::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&Rat> {
        match self {
            Real::Exact(r) => Some(r),
            Real::Approx(_) => None,
        }
    }

    pub fn lo(&self) -> Rat {
        match self {
            Real::Exact(r) => r.clone(),
            Real::Approx(i) => i.lo_rat(),
        }
    }

    pub fn hi(&self) -> Rat {
        match self {
            Real::Exact(r) => r.clone(),
            Real::Approx(i) => i.hi_rat(),
        }
    }

    pub fn lo_string(&self) -> String {
        match self {
            Real::Exact(r) => format_rat(r),
            Real::Approx(i) => i.lo().to_string(),
        }
    }

    pub fn hi_string(&self) -> String {
        match self {
            Real::Exact(r) => format_rat(r),
            Real::Approx(i) => i.hi().to_string(),
        }
    }

    pub fn contains(&self, r: &Rat) -> bool {
        match self {
            Real::Exact(x) => x == r,
            Real::Approx(i) => i.contains_rat(r),
        }
    }

    pub fn intersects(&self, other: &Real) -> bool {
        self.lo() <= other.hi() && other.lo() <= self.hi()
    }

    pub fn to_interval(&self, prec: u32) -> Interval {
        match self {
            Real::Exact(r) => Interval::from_rat(r, prec),
            Real::Approx(i) => i.clone(),
        }
    }

    pub fn prec(&self) -> Option<u32> {
        match self {
            Real::Exact(_) => None,
            Real::Approx(i) => Some(i.prec()),
        }
    }

    fn pair_prec(a: &Real, b: &Real) -> u32 {
        a.prec().into_iter().chain(b.prec()).max().unwrap_or(64)
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Real::Exact(r) => r.is_positive(),
            Real::Approx(i) => i.is_positive(),
        }
    }

    pub fn contains_zero(&self) -> bool {
        match self {
            Real::Exact(r) => r.is_zero(),
            Real::Approx(i) => i.contains_zero(),
        }
    }

    /// Relative width `(hi - lo) / min|x|`; zero for exact values, `None` if zero is enclosed.
    pub fn rel_width(&self) -> Option<Rat> {
        match self {
            Real::Exact(_) => Some(Rat::zero()),
            Real::Approx(i) => i.rel_width(),
        }
    }

    pub fn neg(&self) -> Real {
        match self {
            Real::Exact(r) => Real::Exact(-r),
            Real::Approx(i) => Real::Approx(i.neg()),
        }
    }

    pub fn add(&self, o: &Real) -> Real {
        match (self, o) {
            (Real::Exact(a), Real::Exact(b)) => Real::Exact(a + b),
            _ => {
                let p = Real::pair_prec(self, o);
                Real::Approx(self.to_interval(p).add(&o.to_interval(p)))
            }
        }
    }

    pub fn sub(&self, o: &Real) -> Real {
        match (self, o) {
            (Real::Exact(a), Real::Exact(b)) => Real::Exact(a - b),
            _ => {
                let p = Real::pair_prec(self, o);
                Real::Approx(self.to_interval(p).sub(&o.to_interval(p)))
            }
        }
    }

    pub fn mul(&self, o: &Real) -> Real {
        match (self, o) {
            (Real::Exact(a), Real::Exact(b)) => Real::Exact(a * b),
            _ => {
                let p = Real::pair_prec(self, o);
                Real::Approx(self.to_interval(p).mul(&o.to_interval(p)))
            }
        }
    }

    pub fn div(&self, o: &Real) -> Result<Real> {
        match (self, o) {
            (Real::Exact(a), Real::Exact(b)) => {
                if b.is_zero() {
                    Err(Error::DivisionByZero)
                } else {
                    Ok(Real::Exact(a / b))
                }
            }
            _ => {
                let p = Real::pair_prec(self, o);
                Ok(Real::Approx(self.to_interval(p).div(&o.to_interval(p))?))
            }
        }
    }

    pub fn recip(&self) -> Result<Real> {
        Real::Exact(Rat::from_integer(1.into())).div(self)
    }

    pub fn sqr(&self) -> Real {
        match self {
            Real::Exact(a) => Real::Exact(a * a),
            Real::Approx(i) => Real::Approx(i.sqr()),
        }
    }

    pub fn powi(&self, n: u32) -> Real {
        match self {
            Real::Exact(a) => Real::Exact(num_traits::pow(a.clone(), n as usize)),
            Real::Approx(i) => Real::Approx(i.powi(n)),
        }
    }

    pub fn scale(&self, r: &Rat) -> Real {
        self.mul(&Real::Exact(r.clone()))
    }

    pub fn sum<'a>(items: impl IntoIterator<Item = &'a Real>) -> Real {
        let mut acc = Real::Exact(Rat::zero());
        for x in items {
            acc = acc.add(x);
        }
        acc
    }

    /// Tightest enclosure common to both; `None` if they are disjoint.
    pub fn meet(&self, o: &Real) -> Option<Real> {
        match (self, o) {
            (Real::Exact(a), _) => o.contains(a).then(|| self.clone()),
            (_, Real::Exact(b)) => self.contains(b).then(|| o.clone()),
            (Real::Approx(a), Real::Approx(b)) => {
                if !a.intersects(b) {
                    return None;
                }
                let lo = a.lo().clone().max(b.lo().clone());
                let hi = a.hi().clone().min(b.hi().clone());
                Some(Real::Approx(Interval::new(lo, hi, a.prec().max(b.prec()))))
            }
        }
    }
}

impl From<Rat> for Real {
    fn from(r: Rat) -> Self {
        Real::Exact(r)
    }
}

impl From<Interval> for Real {
    fn from(i: Interval) -> Self {
        Real::Approx(i)
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Real::Exact(r) => write!(f, "{}", format_rat(r)),
            Real::Approx(i) => write!(f, "{i}"),
        }
    }
}

#[derive(Serialize)]
struct RealRepr {
    lo: String,
    hi: String,
}

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RealRepr { lo: self.lo_string(), hi: self.hi_string() }.serialize(s)
    }
}
