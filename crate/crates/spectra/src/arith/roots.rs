//! Real-root isolation by Sturm sequences and bisection refinement.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::dyadic::Dyadic;
use super::interval::Interval;
use super::poly::{sign_int_poly, RatPoly};
use super::rat::{ilog2, Rat};
use crate::error::{Error, Result};

const REFINE_BUDGET: usize = 20_000;

struct Sturm {
    chain: Vec<Vec<BigInt>>,
}

impl Sturm {
    fn new(p: &RatPoly) -> Self {
        let mut polys = vec![p.clone(), p.derivative()];
        loop {
            let n = polys.len();
            if polys[n - 1].is_zero() {
                polys.pop();
                break;
            }
            if polys[n - 1].deg() == 0 {
                break;
            }
            let (_, r) = polys[n - 2].div_rem(&polys[n - 1]);
            polys.push(r.neg());
        }
        Sturm { chain: polys.iter().map(|q| q.primitive()).collect() }
    }

    fn variations(&self, x: &Dyadic) -> usize {
        let mut last = 0;
        let mut v = 0;
        for c in &self.chain {
            let s = sign_int_poly(c, x);
            if s != 0 {
                if last != 0 && s != last {
                    v += 1;
                }
                last = s;
            }
        }
        v
    }
}

fn endpoint_prec(a: &Dyadic, b: &Dyadic) -> u32 {
    (a.mant().bits().max(b.mant().bits()) as u32).max(64)
}

/// A power of two strictly exceeding every root's magnitude.
fn cauchy_radius(p: &RatPoly) -> Dyadic {
    let lc = p.lc().abs();
    let m = p.coeffs()[..p.deg()]
        .iter()
        .map(|c| c.abs() / &lc)
        .fold(Rat::zero(), |a, b| if b > a { b } else { a });
    let bound = m + Rat::from_integer(1.into());
    Dyadic::pow2(ilog2(&bound) + 1)
}

/// One disjoint enclosure per real root, ascending. Endpoints carry a sign change of `p`
/// unless the enclosure is a single point, in which case the point is an exact root.
pub fn isolate_real_roots(p: &RatPoly) -> Result<Vec<Interval>> {
    if p.is_zero() {
        return Err(Error::InvalidInput("cannot isolate roots of the zero polynomial".into()));
    }
    if p.deg() == 0 {
        return Ok(vec![]);
    }
    if !p.is_squarefree() {
        return Err(Error::NonSquarefree);
    }
    let sturm = Sturm::new(p);
    let prim = p.primitive();
    let r = cauchy_radius(p);
    let mut out = Vec::new();
    let mut stack = vec![(-&r, r.clone())];
    while let Some((a, b)) = stack.pop() {
        let count = sturm.variations(&a) - sturm.variations(&b);
        match count {
            0 => {}
            1 => out.push(finish(&sturm, &prim, a, b)),
            _ => {
                let m = (&a + &b).half();
                // push right first so the left half is processed first
                stack.push((m.clone(), b));
                stack.push((a, m));
            }
        }
    }
    out.sort_by(|x, y| x.lo().cmp(y.lo()));
    Ok(out)
}

fn finish(sturm: &Sturm, prim: &[BigInt], mut a: Dyadic, mut b: Dyadic) -> Interval {
    loop {
        if sign_int_poly(prim, &b) == 0 {
            let prec = endpoint_prec(&b, &b);
            return Interval::point(b, prec);
        }
        if sign_int_poly(prim, &a) != 0 {
            let prec = endpoint_prec(&a, &b);
            return Interval::new(a, b, prec);
        }
        let m = (&a + &b).half();
        if sturm.variations(&a) - sturm.variations(&m) == 1 {
            b = m;
        } else {
            a = m;
        }
    }
}

/// Bisects `enclosure` until its width is at most `2^-bits * max(1, |mid|)`.
pub fn refine_root(p: &RatPoly, enclosure: &Interval, bits: u32) -> Result<Interval> {
    if enclosure.is_point() {
        return Ok(enclosure.clone());
    }
    let prim = p.primitive();
    let mut a = enclosure.lo().clone();
    let mut b = enclosure.hi().clone();
    let sa = sign_int_poly(&prim, &a);
    let sb = sign_int_poly(&prim, &b);
    if sa == 0 {
        return Ok(Interval::point(a.clone(), endpoint_prec(&a, &a)));
    }
    if sb == 0 {
        return Ok(Interval::point(b.clone(), endpoint_prec(&b, &b)));
    }
    if sa == sb {
        return Err(Error::NoSignChange);
    }
    for _ in 0..REFINE_BUDGET {
        let m = (&a + &b).half();
        let scale = match m.abs().ilog2() {
            Some(e) if e >= 0 => e,
            _ => 0,
        };
        let width = &b - &a;
        if width <= Dyadic::pow2(scale - bits as i64) {
            let prec = endpoint_prec(&a, &b).max(bits + 8);
            return Ok(Interval::new(a, b, prec));
        }
        let sm = sign_int_poly(&prim, &m);
        if sm == 0 {
            let prec = endpoint_prec(&m, &m);
            return Ok(Interval::point(m, prec));
        }
        if sm == sa {
            a = m;
        } else {
            b = m;
        }
    }
    Err(Error::PrecisionExhausted(format!("root refinement did not reach 2^-{bits}")))
}

/// Isolate and refine every real root of `p`.
pub fn real_roots(p: &RatPoly, bits: u32) -> Result<Vec<Interval>> {
    isolate_real_roots(p)?
        .iter()
        .map(|i| refine_root(p, i, bits))
        .collect()
}
