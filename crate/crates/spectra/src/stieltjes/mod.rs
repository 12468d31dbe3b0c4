//! Inverse spectral problem: measure to Jacobi matrix by the Stieltjes algorithm.
//!
//! Two independent routes run side by side. The rational route divides exact
//! polynomials; the interval route tracks poles and weights of every level as
//! validated enclosures. Their agreement is recorded as checks.

pub mod certify;
pub mod tail;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize};

use crate::arith::rat::{serde_rat_vec, Rat};
use crate::arith::{Dyadic, Interval, RatPoly, Real};
use crate::error::{Error, Result};
use crate::measure::{DiscreteMeasure, EncAtom, EnclosureMeasure, LacunarityParams};
use crate::report::{Check, Report, MAX_DOUBLINGS};

pub use certify::{certify_step, lemma22_envelope, stmt31_bracket, CertifyConfig, HypothesisForm, StepParams, UpperBracket};
pub use tail::{tail_sensitivity_experiment, TailRow};

/// Extra bits carried internally beyond the requested relative precision.
pub const GUARD_BITS: u32 = 64;
pub const DEFAULT_BITS: u32 = 128;
const BISECTION_BUDGET: usize = 20_000;

/// Diagonal `q_1..q_N` and squared off-diagonal `rho_1^2..rho_{N-1}^2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JacobiMatrix {
    #[serde(with = "serde_rat_vec")]
    pub q: Vec<Rat>,
    #[serde(with = "serde_rat_vec")]
    pub rho_sq: Vec<Rat>,
}

impl JacobiMatrix {
    pub fn new(q: Vec<Rat>, rho_sq: Vec<Rat>) -> Result<Self> {
        if q.is_empty() {
            return Err(Error::InvalidInput("Jacobi matrix needs at least one diagonal entry".into()));
        }
        if rho_sq.len() + 1 != q.len() {
            return Err(Error::InvalidInput("need exactly N-1 off-diagonal entries".into()));
        }
        if rho_sq.iter().any(|r| !r.is_positive()) {
            return Err(Error::InvalidInput("off-diagonal squares must be positive".into()));
        }
        Ok(JacobiMatrix { q, rho_sq })
    }

    pub fn size(&self) -> usize {
        self.q.len()
    }
}

impl<'de> Deserialize<'de> for JacobiMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            #[serde(with = "serde_rat_vec")]
            q: Vec<Rat>,
            #[serde(with = "serde_rat_vec")]
            rho_sq: Vec<Rat>,
        }
        let r = Raw::deserialize(d)?;
        JacobiMatrix::new(r.q, r.rho_sq).map_err(serde::de::Error::custom)
    }
}

/// `f(z) = num(z) / den(z) = sum mu_k / (t_k - z)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalHerglotz {
    pub num: RatPoly,
    pub den: RatPoly,
}

impl RationalHerglotz {
    pub fn eval(&self, z: &Rat) -> Option<Rat> {
        let d = self.den.eval(z);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(z) / d)
        }
    }
}

pub fn measure_to_herglotz(mu: &DiscreteMeasure) -> RationalHerglotz {
    let ts = mu.positions();
    let den = RatPoly::from_roots_reversed(&ts);
    let mut num = RatPoly::zero();
    for (k, a) in mu.atoms().iter().enumerate() {
        let others: Vec<Rat> = ts.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, t)| t.clone()).collect();
        num = num.add(&RatPoly::from_roots_reversed(&others).scale(&a.m));
    }
    RationalHerglotz { num, den }
}

/// One exact step `-1/f = z - q + rho^2 f_next`.
pub fn stieltjes_step_rational(f: &RationalHerglotz) -> Result<(Rat, Rat, RationalHerglotz)> {
    let n = f.den.deg();
    if n < 2 {
        return Err(Error::DegreeTooSmall);
    }
    if f.num.deg() + 1 != n {
        return Err(Error::InvalidInput("numerator degree must be one below the denominator".into()));
    }
    let (quot, rem) = f.den.neg().div_rem(&f.num);
    if quot.deg() != 1 || !quot.lc().is_one() {
        return Err(Error::NotNormalized);
    }
    let q = -quot.coeff(0);
    let sign = if n.is_multiple_of(2) { Rat::one() } else { -Rat::one() };
    let rho_sq = rem.lc() * sign;
    if !rho_sq.is_positive() || rem.deg() + 2 != n {
        return Err(Error::InvalidInput("step produced a non-positive remainder".into()));
    }
    let next = RationalHerglotz { num: rem.scale(&rho_sq.recip()), den: f.num.clone() };
    Ok((q, rho_sq, next))
}

/// Output of one interval step: `b`, poles `s_n` and unnormalized weights `w_n`.
#[derive(Clone, Debug, Serialize)]
pub struct StepDecomposition {
    pub b: Real,
    pub rho_sq: Real,
    pub sum_w: Real,
    pub variance: Real,
    pub poles: Vec<Real>,
    pub weights: Vec<Real>,
    /// Atoms `(s_n, w_n / rho^2)`.
    pub next: EnclosureMeasure,
}

fn sign_of(x: &Real) -> Option<i32> {
    match x {
        Real::Exact(r) => Some(if r.is_positive() { 1 } else if r.is_negative() { -1 } else { 0 }),
        Real::Approx(i) => {
            if i.is_positive() {
                Some(1)
            } else if i.hi().signum() < 0 {
                Some(-1)
            } else {
                None
            }
        }
    }
}

/// `sum m_k / (t_k - x)`; `None` if some `t_k - x` is not bounded away from zero.
fn cauchy_sum(mu: &EnclosureMeasure, x: &Real) -> Option<Real> {
    let mut acc = Real::Exact(Rat::zero());
    for a in &mu.atoms {
        let d = a.t.sub(x);
        if d.contains_zero() {
            return None;
        }
        acc = acc.add(&a.m.div(&d).ok()?);
    }
    Some(acc)
}

fn pow2(bits: u32) -> Rat {
    Rat::from_integer(num_bigint::BigInt::one() << bits as usize)
}

fn rat_min(a: &Rat, b: &Rat) -> Rat {
    if a <= b {
        a.clone()
    } else {
        b.clone()
    }
}

fn close_enough(a: &Rat, c: &Rat, bits: u32) -> bool {
    let scale = if a.abs() > c.abs() { a.abs() } else { c.abs() };
    let w = c - a;
    w.is_zero() || w * pow2(bits) <= scale
}

/// Encloses the root of `sum m_k/(t_k - s)` between atoms `i` and `i+1`.
fn locate_pole(mu: &EnclosureMeasure, i: usize, bits: u32, prec: u32, hint: Option<&(Rat, Rat)>, num: Option<&[num_bigint::BigInt]>) -> Result<Real> {
    match num {
        Some(num) => locate_exact(mu, i, bits, prec, hint, num),
        None => locate_approx(mu, i, bits, prec),
    }
}

/// Integer numerator of `sum m_k/(t_k - z)` over the common denominator `prod (t_k - z)`.
fn exact_numerator(mu: &EnclosureMeasure) -> Vec<num_bigint::BigInt> {
    let ts: Vec<Rat> = mu.atoms.iter().map(|a| a.t.lo()).collect();
    let mut num = RatPoly::zero();
    for (k, a) in mu.atoms.iter().enumerate() {
        let others: Vec<Rat> = ts.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, t)| t.clone()).collect();
        num = num.add(&RatPoly::from_roots_reversed(&others).scale(&a.m.lo()));
    }
    num.primitive()
}

/// Bisection on dyadic points with signs from the integer numerator. The width is measured
/// against both `|s|` and the distance to the neighbouring atoms, so tiny gaps are resolved.
fn locate_exact(mu: &EnclosureMeasure, i: usize, bits: u32, prec: u32, hint: Option<&(Rat, Rat)>, num: &[num_bigint::BigInt]) -> Result<Real> {
    let left = mu.t(i).lo();
    let right = mu.t(i + 1).lo();
    // the denominator has i + 1 negative factors between atoms i and i+1
    let den_sign = if i.is_multiple_of(2) { -1 } else { 1 };
    let sign_at = |x: &Dyadic| crate::arith::poly::sign_int_poly(num, x) * den_sign;
    let (mut a, mut c) = (left.clone(), right.clone());
    let (mut a_ok, mut c_ok) = (false, false);
    // a dyadic point strictly between lo and hi, close to their midpoint
    let inner = |lo: &Rat, hi: &Rat, target: &Rat, up: bool| -> Option<Dyadic> {
        let scale = if lo.abs() > hi.abs() { lo.abs() } else { hi.abs() };
        let w = hi - lo;
        let p = if scale.is_zero() { 8 } else { (crate::arith::rat::ilog2(&(scale / &w)) + 8).max(8) as u32 };
        let d = if up { Dyadic::ceil_rat(target, p) } else { Dyadic::floor_rat(target, p) };
        let r = d.to_rat();
        (r > *lo && r < *hi).then_some(d)
    };
    if let Some((h_lo, h_hi)) = hint {
        for (p, up) in [(h_lo, false), (h_hi, true)] {
            if p <= &a || p >= &c {
                continue;
            }
            let Some(d) = inner(&a, &c, p, up) else { continue };
            match sign_at(&d) {
                0 => return Ok(Real::Exact(d.to_rat())),
                -1 => {
                    a = d.to_rat();
                    a_ok = true;
                }
                _ => {
                    c = d.to_rat();
                    c_ok = true;
                }
            }
        }
    }
    let fine = |a: &Rat, c: &Rat| {
        let gap = rat_min(&(a - &left), &(&right - c));
        gap.is_positive() && close_enough(a, c, bits) && (c - a) * pow2(bits) <= gap
    };
    let two = Rat::from_integer(2.into());
    let mut budget = BISECTION_BUDGET;
    while !(a_ok && c_ok && fine(&a, &c)) {
        if budget == 0 {
            return Err(Error::PrecisionExhausted(format!("pole {} not separated after {BISECTION_BUDGET} bisections", i + 1)));
        }
        budget -= 1;
        let mid = (&a + &c) / &two;
        let Some(m) = inner(&a, &c, &mid, false) else {
            return Err(Error::PrecisionExhausted(format!("pole {} bracket degenerated", i + 1)));
        };
        match sign_at(&m) {
            0 => return Ok(Real::Exact(m.to_rat())),
            -1 => {
                a = m.to_rat();
                a_ok = true;
            }
            _ => {
                c = m.to_rat();
                c_ok = true;
            }
        }
    }
    // enough bits that outward rounding stays well inside the gaps
    let scale = if a.abs() > c.abs() { a.abs() } else { c.abs() };
    let need = (crate::arith::rat::ilog2(&(scale / (&c - &a))) + 2).max(0) as u32;
    Ok(Real::Approx(Interval::from_rats(&a, &c, prec.max(need))))
}

fn dyadic_close(a: &Dyadic, c: &Dyadic, bits: u32) -> bool {
    let w = c - a;
    if w.is_zero() {
        return true;
    }
    let scale = std::cmp::max(a.abs(), c.abs());
    Dyadic::new(w.mant().clone(), w.exp() + bits as i64) <= scale
}

/// Bisection on dyadic points for enclosure data; stops once the sign of the sum can no
/// longer be resolved at the working precision.
fn locate_approx(mu: &EnclosureMeasure, i: usize, bits: u32, prec: u32) -> Result<Real> {
    let mut a = Dyadic::ceil_rat(&mu.t(i).hi(), prec);
    let mut c = Dyadic::floor_rat(&mu.t(i + 1).lo(), prec);
    if a >= c {
        return Err(Error::PrecisionExhausted(format!("atoms {} and {} overlap", i + 1, i + 2)));
    }
    let (mut a_ok, mut c_ok) = (false, false);
    let sign_at = |x: &Dyadic| cauchy_sum(mu, &Real::Approx(Interval::point(x.clone(), prec))).and_then(|f| sign_of(&f));
    let mut budget = BISECTION_BUDGET;
    loop {
        if a_ok && c_ok && dyadic_close(&a, &c, bits) {
            break;
        }
        if dyadic_close(&a, &c, bits + GUARD_BITS) || budget == 0 {
            break;
        }
        budget -= 1;
        let m = (&a + &c).half();
        match sign_at(&m) {
            Some(0) => return Ok(Real::Approx(Interval::point(m, prec))),
            Some(-1) => {
                a = m;
                a_ok = true;
            }
            Some(_) => {
                c = m;
                c_ok = true;
            }
            None => {
                // the sum straddles zero at m: tighten each side separately
                let (mut lo, mut hi) = (a.clone(), m.clone());
                while !dyadic_close(&lo, &hi, bits + GUARD_BITS) && budget > 0 {
                    budget -= 1;
                    let mm = (&lo + &hi).half();
                    if sign_at(&mm) == Some(-1) {
                        lo = mm;
                        a_ok = true;
                    } else {
                        hi = mm;
                    }
                }
                a = lo;
                let (mut lo, mut hi) = (m.clone(), c.clone());
                while !dyadic_close(&lo, &hi, bits + GUARD_BITS) && budget > 0 {
                    budget -= 1;
                    let mm = (&lo + &hi).half();
                    if sign_at(&mm) == Some(1) {
                        hi = mm;
                        c_ok = true;
                    } else {
                        lo = mm;
                    }
                }
                c = hi;
                break;
            }
        }
    }
    if !(a_ok && c_ok) {
        return Err(Error::PrecisionExhausted(format!("pole {} not separated from the atoms at {prec} bits", i + 1)));
    }
    Ok(Real::Approx(Interval::new(a, c, prec)))
}

/// One interval step on an enclosure measure. `rho_sq`, when known exactly, normalizes the
/// next measure; otherwise the enclosure of `sum w` is used. `hints` brackets each pole.
pub fn decompose(mu: &EnclosureMeasure, rho_sq: Option<&Rat>, bits: u32, hints: Option<&[(Rat, Rat)]>) -> Result<StepDecomposition> {
    let m = mu.len();
    if m < 2 {
        return Err(Error::DegreeTooSmall);
    }
    let prec = bits + GUARD_BITS;
    let mut poles = Vec::with_capacity(m - 1);
    let mut weights = Vec::with_capacity(m - 1);
    let exact = mu.atoms.iter().all(|a| a.t.is_exact() && a.m.is_exact());
    let num = exact.then(|| exact_numerator(mu));
    for i in 0..m - 1 {
        let s = locate_pole(mu, i, bits, prec, hints.and_then(|h| h.get(i)), num.as_deref())?;
        let mut g = Real::Exact(Rat::zero());
        for a in &mu.atoms {
            g = g.add(&a.m.div(&a.t.sub(&s).sqr())?);
        }
        weights.push(g.recip()?);
        poles.push(s);
    }
    let b = Real::sum(&mu.atoms.iter().map(|a| a.m.mul(&a.t)).collect::<Vec<_>>());
    let second = Real::sum(&mu.atoms.iter().map(|a| a.m.mul(&a.t.sqr())).collect::<Vec<_>>());
    let mass = mu.total_mass();
    let variance = second.div(&mass)?.sub(&b.div(&mass)?.sqr());
    let sum_w = Real::sum(&weights);
    let rho = match rho_sq {
        Some(r) => Real::Exact(r.clone()),
        None => sum_w.meet(&variance).unwrap_or_else(|| sum_w.clone()),
    };
    let next = EnclosureMeasure {
        atoms: poles
            .iter()
            .zip(&weights)
            .map(|(s, w)| Ok(EncAtom { t: s.clone(), m: w.div(&rho)? }))
            .collect::<Result<Vec<_>>>()?,
    };
    Ok(StepDecomposition { b, rho_sq: rho, sum_w, variance, poles, weights, next })
}

/// Interval step on an exact measure, seeded with the closed root bracket where it applies.
pub fn pole_weight_decompose(mu: &DiscreteMeasure, bits: u32) -> Result<StepDecomposition> {
    if mu.len() < 2 {
        return Err(Error::TooFewAtoms);
    }
    let enc = EnclosureMeasure::from_exact(mu);
    let rho = if mu.is_normalized() {
        let f = measure_to_herglotz(mu);
        Some(stieltjes_step_rational(&f)?.1)
    } else {
        None
    };
    decompose(&enc, rho.as_ref(), bits, Some(&exact_hints(&enc)))
}

/// Closed brackets `[t_n + L_n, t_n + U_n]` for an exactly known measure.
pub fn exact_hints(mu: &EnclosureMeasure) -> Vec<(Rat, Rat)> {
    (0..mu.len().saturating_sub(1))
        .map(|i| {
            let t = mu.t(i).lo();
            let (l, u) = stmt31_bracket(mu, i);
            let lo = l.ok().map(|x| &t + x.lo()).unwrap_or_else(|| t.clone());
            let hi = match u {
                UpperBracket::Value(x) => &t + x.hi(),
                _ => mu.t(i + 1).hi(),
            };
            (lo, hi)
        })
        .collect()
}

/// Result of the inverse problem with both routes and optional certificates.
#[derive(Clone, Debug, Serialize)]
pub struct InverseResult {
    pub jacobi: JacobiMatrix,
    /// Spectral data of `f^(1) .. f^(N)`.
    pub levels: Vec<EnclosureMeasure>,
    pub steps: Vec<StepDecomposition>,
    pub consistency: Report,
    pub certs: Report,
    pub bits_used: u32,
}

/// Exact Jacobi matrix and the chain of Herglotz functions `f^(1) .. f^(N)`.
pub fn rational_chain(mu: &DiscreteMeasure) -> Result<(JacobiMatrix, Vec<RationalHerglotz>)> {
    if !mu.is_normalized() {
        return Err(Error::NotNormalized);
    }
    let mut f = measure_to_herglotz(mu);
    let mut q = Vec::new();
    let mut rho_sq = Vec::new();
    let mut chain = vec![f.clone()];
    loop {
        match stieltjes_step_rational(&f) {
            Ok((qn, rn, next)) => {
                q.push(qn);
                rho_sq.push(rn);
                f = next;
                chain.push(f.clone());
            }
            Err(Error::DegreeTooSmall) => {
                // f = c / (t - z) with c = 1 after normalization
                let t = -f.den.coeff(0) / f.den.coeff(1);
                q.push(t);
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok((JacobiMatrix::new(q, rho_sq)?, chain))
}

/// Interval route on an enclosure measure; with `rho_sq` known, each level is normalized by it.
pub fn interval_chain(mu: &EnclosureMeasure, rho_sq: Option<&[Rat]>, bits: u32) -> Result<(Vec<EnclosureMeasure>, Vec<StepDecomposition>)> {
    let mut levels = vec![mu.clone()];
    let mut steps = Vec::new();
    while levels.last().unwrap().len() >= 2 {
        let cur = levels.last().unwrap();
        let n = steps.len();
        let exact = cur.atoms.iter().all(|a| a.t.is_exact() && a.m.is_exact());
        let hints = if exact { Some(exact_hints(cur)) } else { None };
        let step = decompose(cur, rho_sq.and_then(|r| r.get(n)), bits, hints.as_deref())?;
        levels.push(step.next.clone());
        steps.push(step);
    }
    Ok((levels, steps))
}

/// `q_n` and `rho_n^2` enclosures read off the interval route.
pub fn interval_entries(levels: &[EnclosureMeasure], steps: &[StepDecomposition]) -> Result<(Vec<Real>, Vec<Real>)> {
    let mut q: Vec<Real> = steps.iter().map(|s| s.b.clone()).collect();
    let last = levels.last().unwrap();
    q.push(last.m(0).mul(last.t(0)).div(&last.total_mass())?);
    let rho = steps
        .iter()
        .map(|s| s.sum_w.meet(&s.variance).unwrap_or_else(|| s.sum_w.clone()))
        .collect();
    Ok((q, rho))
}

fn consistency_checks(j: &JacobiMatrix, levels: &[EnclosureMeasure], steps: &[StepDecomposition]) -> Result<Report> {
    let mut r = Report::new("consistency");
    let (qe, _) = interval_entries(levels, steps)?;
    for (n, (q, enc)) in j.q.iter().zip(&qe).enumerate() {
        r.push(Check::within("path.q", n + 1, 0, Real::Exact(q.clone()), enc.clone()));
    }
    for (n, (rho, s)) in j.rho_sq.iter().zip(steps).enumerate() {
        r.push(Check::within("path.rho_sq_variance", n + 1, 0, Real::Exact(rho.clone()), s.variance.clone()));
        r.push(Check::within("path.rho_sq_sum_w", n + 1, 0, Real::Exact(rho.clone()), s.sum_w.clone()));
    }
    for (n, (lev, s)) in levels.iter().zip(steps).enumerate() {
        for (k, p) in s.poles.iter().enumerate() {
            r.push(Check::lt("interlace.lower", n + 1, k + 1, lev.t(k).clone(), p.clone()));
            r.push(Check::lt("interlace.upper", n + 1, k + 1, p.clone(), lev.t(k + 1).clone()));
            r.push(Check::gt("weight.positive", n + 1, k + 1, s.weights[k].clone(), Real::Exact(Rat::zero())));
        }
    }
    Ok(r)
}

/// Runs both routes. With `certify`, every step is certified and the interval route is
/// repeated at doubled precision (up to four times) while a verdict stays indeterminate.
pub fn inverse_spectral(mu: &DiscreteMeasure, bits: u32, certify: Option<&CertifyConfig>) -> Result<InverseResult> {
    let (jacobi, _) = rational_chain(mu)?;
    let enc = EnclosureMeasure::from_exact(mu);
    let mut b = bits;
    for round in 0..=MAX_DOUBLINGS {
        let (levels, steps) = match interval_chain(&enc, Some(&jacobi.rho_sq), b) {
            Err(e) if e.is_precision() && round < MAX_DOUBLINGS => {
                b *= 2;
                continue;
            }
            other => other?,
        };
        let consistency = consistency_checks(&jacobi, &levels, &steps)?;
        let mut certs = Report::new("steps");
        if let Some(cfg) = certify {
            for (n, step) in steps.iter().enumerate() {
                let sp = cfg.level_params(n + 1, levels[n].len());
                certs.absorb(certify_step(n + 1, &levels[n], step, &sp)?);
            }
            certs.absorb(lemma22_envelope(&levels, &cfg.params)?);
        }
        let open = certs.has_indeterminate() || consistency.has_indeterminate();
        if !open || round == MAX_DOUBLINGS {
            certs.set("bits_used", b);
            return Ok(InverseResult { jacobi, levels, steps, consistency, certs, bits_used: b });
        }
        b *= 2;
    }
    unreachable!()
}

/// Theorem-level entry bounds for a completely lacunary measure.
///
/// The declared parameters must lie in the admissible region and on the safe side of the
/// extracted ones (`lambda < lambda*`, `kappa < kappa*`, `theta >= theta*`); the window
/// `10/lambda < theta` is checked with the extracted `lambda*`.
pub fn theorem12_check(mu: &DiscreteMeasure, p: &LacunarityParams) -> Result<Report> {
    let mut r = Report::new("thm1.2");
    let ex = crate::measure::lacunarity_params(mu)?;
    let x = |v: &Rat| Real::Exact(v.clone());
    let ri = |a: i64, b: i64| Real::Exact(crate::arith::rat(a, b));
    r.push(Check::gt("thm1.2.region.lambda", 0, 0, x(&p.lambda), ri(1000, 1)));
    r.push(Check::gt("thm1.2.region.kappa", 0, 0, x(&p.kappa), ri(20, 1)));
    r.push(Check::lt("thm1.2.region.theta", 0, 0, x(&p.theta), ri(1, 100)));
    r.push(Check::lt("thm1.2.region.window", 0, 0, Real::Exact(Rat::from_integer(10.into()) / &ex.lambda), x(&p.theta)));
    r.push(Check::lt("thm1.2.hyp.lambda", 0, 0, x(&p.lambda), x(&ex.lambda)));
    r.push(Check::lt("thm1.2.hyp.kappa", 0, 0, x(&p.kappa), x(&ex.kappa)));
    r.push(Check::le("thm1.2.hyp.theta", 0, 0, x(&ex.theta), x(&p.theta)));
    let (j, _) = rational_chain(mu)?;
    let n_atoms = mu.len();
    let t = mu.positions();
    let one = Rat::one();
    for n in 1..=n_atoms {
        let top = &t[n_atoms - n];
        let q = &j.q[n - 1];
        r.push(Check::lt("thm1.2.q.lower", n, 0, x(&((&one - p.lambda.recip()) * top)), x(q)));
        r.push(Check::lt("thm1.2.q.upper", n, 0, x(q), x(&((&one + Rat::from_integer(3.into()) / &p.kappa) * top))));
        if n < n_atoms {
            let below = &t[n_atoms - n - 1];
            let rho = &j.rho_sq[n - 1];
            let ten = Rat::from_integer(10.into());
            r.push(Check::lt("thm1.2.rho_sq.lower", n, 0, x(&(below * below / (&ten * &p.theta))), x(rho)));
            r.push(Check::lt("thm1.2.rho_sq.upper", n, 0, x(rho), x(&(ten / &p.kappa * top * below))));
        }
    }
    let hyp_ok = r.select("thm1.2.region").chain(r.select("thm1.2.hyp")).all(|c| c.verdict == crate::report::Verdict::Pass);
    if !hyp_ok {
        r.warnings.push("HypothesesUnsatisfied: conclusions evaluated anyway".into());
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat::{int, rat};

    fn m(pairs: &[(i64, i64, i64)]) -> DiscreteMeasure {
        DiscreteMeasure::from_pairs(&pairs.iter().map(|&(t, a, b)| (int(t), rat(a, b))).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn herglotz_two_atoms() {
        let f = measure_to_herglotz(&m(&[(1, 1, 2), (3, 1, 2)]));
        assert_eq!(f.num, RatPoly::new(vec![int(2), int(-1)]));
        assert_eq!(f.den, RatPoly::new(vec![int(3), int(-4), int(1)]));
    }

    #[test]
    fn herglotz_pointwise() {
        let f = measure_to_herglotz(&m(&[(0, 1, 4), (4, 3, 4)]));
        assert_eq!(f.eval(&int(2)).unwrap(), rat(1, 4));
    }

    #[test]
    fn step_examples() {
        let f = measure_to_herglotz(&m(&[(1, 1, 2), (3, 1, 2)]));
        let (q, r, next) = stieltjes_step_rational(&f).unwrap();
        assert_eq!((q, r), (int(2), int(1)));
        assert_eq!(next.eval(&int(0)).unwrap(), rat(1, 2));
        let f = measure_to_herglotz(&m(&[(0, 1, 4), (4, 3, 4)]));
        let (q, r, next) = stieltjes_step_rational(&f).unwrap();
        assert_eq!((q, r), (int(3), int(3)));
        assert_eq!(next.eval(&int(0)).unwrap(), int(1));
        assert!(matches!(stieltjes_step_rational(&next), Err(Error::DegreeTooSmall)));
    }

    #[test]
    fn boundary_root_is_exact() {
        let s = pole_weight_decompose(&m(&[(0, 1, 4), (4, 3, 4)]), 30).unwrap();
        assert_eq!(s.poles[0], Real::Exact(int(1)));
        assert_eq!(s.weights[0], Real::Exact(int(3)));
    }

    #[test]
    fn symmetric_pole() {
        let s = pole_weight_decompose(&m(&[(1, 1, 2), (3, 1, 2)]), 30).unwrap();
        assert!(s.poles[0].contains(&int(2)));
        assert!(s.weights[0].contains(&int(1)));
    }

    #[test]
    fn inverse_examples() {
        let r = inverse_spectral(&m(&[(1, 1, 2), (3, 1, 2)]), 64, None).unwrap();
        assert_eq!(r.jacobi.q, vec![int(2), int(2)]);
        assert_eq!(r.jacobi.rho_sq, vec![int(1)]);
        assert_eq!(r.consistency.tally().fail, 0);
        let r = inverse_spectral(&m(&[(5, 1, 1)]), 64, None).unwrap();
        assert_eq!(r.jacobi.q, vec![int(5)]);
        assert!(r.jacobi.rho_sq.is_empty());
    }
}
