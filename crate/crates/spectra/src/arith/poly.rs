//! Dense univariate polynomials over `Rat`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::dyadic::Dyadic;
use super::interval::Interval;
use super::rat::{format_rat, Rat};
use super::real::Real;

/// Coefficients in ascending degree; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RatPoly {
    #[serde(with = "super::rat::serde_rat_vec")]
    coeffs: Vec<Rat>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: vec![] }
    }

    pub fn constant(c: Rat) -> Self {
        RatPoly::new(vec![c])
    }

    pub fn one() -> Self {
        RatPoly::constant(Rat::one())
    }

    /// `a + b z`
    pub fn linear(a: Rat, b: Rat) -> Self {
        RatPoly::new(vec![a, b])
    }

    /// `prod (r_k - z)`
    pub fn from_roots_reversed(roots: &[Rat]) -> Self {
        roots.iter().fold(RatPoly::one(), |acc, r| acc.mul(&RatPoly::linear(r.clone(), -Rat::one())))
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lc(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn neg(&self) -> RatPoly {
        RatPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, s: &Rat) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, o: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        RatPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        RatPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn mul(&self, o: &RatPoly) -> RatPoly {
        if self.is_zero() || o.is_zero() {
            return RatPoly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly::new(out)
    }

    /// Euclidean division: `self = q * d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &RatPoly) -> (RatPoly, RatPoly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.deg();
        let lc = d.lc();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (RatPoly::zero(), self.clone());
        }
        let mut q = vec![Rat::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] / &lc;
            if !c.is_zero() {
                for (j, dj) in d.coeffs.iter().enumerate() {
                    r[k + j] -= &c * dj;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (RatPoly::new(q), RatPoly::new(r))
    }

    pub fn derivative(&self) -> RatPoly {
        RatPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rat::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    fn eval_interval_naive(&self, x: &Interval) -> Interval {
        let prec = x.prec();
        let mut acc = Interval::from_rat(&Rat::zero(), prec);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(&Interval::from_rat(c, prec));
        }
        acc
    }

    /// Centered-form enclosure `p(m) + p'(X) (X - m)`.
    pub fn eval_interval(&self, x: &Interval) -> Interval {
        let prec = x.prec();
        if x.is_point() {
            return Interval::from_rat(&self.eval(&x.lo_rat()), prec);
        }
        let m = x.mid();
        let pm = Interval::from_rat(&self.eval(&m.to_rat()), prec);
        let dp = self.derivative().eval_interval_naive(x);
        let off = x.sub(&Interval::point(m, prec));
        let centered = pm.add(&dp.mul(&off));
        let naive = self.eval_interval_naive(x);
        // both are valid enclosures; keep the intersection
        if centered.intersects(&naive) {
            let lo = centered.lo().clone().max(naive.lo().clone());
            let hi = centered.hi().clone().min(naive.hi().clone());
            Interval::new(lo, hi, prec)
        } else {
            centered
        }
    }

    pub fn eval_real(&self, x: &Real) -> Real {
        match x {
            Real::Exact(r) => Real::Exact(self.eval(r)),
            Real::Approx(i) => Real::Approx(self.eval_interval(i)),
        }
    }

    pub fn monic(&self) -> RatPoly {
        if self.is_zero() {
            return RatPoly::zero();
        }
        let lc = self.lc();
        self.scale(&lc.recip())
    }

    pub fn gcd(&self, o: &RatPoly) -> RatPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn is_squarefree(&self) -> bool {
        if self.deg() == 0 {
            return true;
        }
        self.gcd(&self.derivative()).deg() == 0
    }

    /// Integer polynomial with the same roots and sign as `self`, coefficients coprime.
    pub fn primitive(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return vec![];
        }
        let lcm = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * Rat::from_integer(lcm.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        ints.into_iter().map(|c| c / &g).collect()
    }

    /// Sign of `self` at a dyadic point using integer Horner evaluation.
    pub fn sign_at(&self, x: &Dyadic) -> i32 {
        let c = self.primitive();
        if c.is_empty() {
            return 0;
        }
        sign_int_poly(&c, x)
    }
}

/// Sign of `sum c_k x^k` at `x = m 2^e`; multiplies through by `2^(-e d)` when `e < 0`.
pub fn sign_int_poly(c: &[BigInt], x: &Dyadic) -> i32 {
    let d = c.len() - 1;
    let m = x.mant();
    let e = x.exp();
    let val = if e >= 0 {
        let xv = m << e as usize;
        let mut acc = BigInt::zero();
        for ck in c.iter().rev() {
            acc = acc * &xv + ck;
        }
        acc
    } else {
        let s = (-e) as usize;
        let mut acc = BigInt::zero();
        for (k, ck) in c.iter().enumerate().rev() {
            acc = acc * m + (ck << (s * (d - k)));
        }
        acc
    };
    if val.is_positive() {
        1
    } else if val.is_negative() {
        -1
    } else {
        0
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format_rat(c),
                1 => format!("({})z", format_rat(c)),
                _ => format!("({})z^{i}", format_rat(c)),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat::{int, rat};

    fn p(c: &[i64]) -> RatPoly {
        RatPoly::new(c.iter().map(|&x| int(x)).collect())
    }

    #[test]
    fn division_identity() {
        let a = p(&[3, -4, 1]);
        let b = p(&[2, -1]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert_eq!(q, p(&[2, -1]));
        assert_eq!(r, p(&[-1]));
    }

    #[test]
    fn squarefree_detection() {
        assert!(p(&[3, -4, 1]).is_squarefree());
        assert!(!p(&[1, -2, 1]).is_squarefree());
        assert!(p(&[7]).is_squarefree());
    }

    #[test]
    fn integer_sign_matches_rational_eval() {
        let q = RatPoly::new(vec![rat(-1, 3), rat(5, 7), rat(1, 2), rat(-2, 9)]);
        for (m, e) in [(3i64, -2i64), (-5, 1), (7, 0), (1, -10), (-9, -3)] {
            let x = Dyadic::new(BigInt::from(m), e);
            let v = q.eval(&x.to_rat());
            let expect = if v.is_positive() { 1 } else if v.is_negative() { -1 } else { 0 };
            assert_eq!(q.sign_at(&x), expect);
        }
    }

    #[test]
    fn interval_eval_encloses() {
        let q = p(&[-2, 0, 1]);
        let x = Interval::from_rats(&rat(13, 10), &rat(3, 2), 60);
        let v = q.eval_interval(&x);
        for t in [rat(13, 10), rat(14, 10), rat(3, 2)] {
            assert!(v.contains_rat(&q.eval(&t)));
        }
    }
}
