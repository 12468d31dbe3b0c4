//! Canonical systems with piecewise constant rank-one Hamiltonians.
//!
//! Directions are stored unnormalized; every quantity used here is either a ratio that is
//! invariant under rescaling a direction or the squared overlap `delta^2`, so the whole
//! translation stays rational. The quarter turn is `(x, y) -> (-y, x)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::rat::{int, rat, serde_rat, Rat};
use crate::arith::{real_roots, RatPoly, Real};
use crate::error::{Error, Result};
use crate::forward::spectral_measure;
use crate::measure::{lacunarity_checks, lacunarity_params, DiscreteMeasure, EncAtom, EnclosureMeasure, LacunarityParams};
use crate::report::{escalate, Check, Report, Verdict};
use crate::stieltjes::{rational_chain, JacobiMatrix, GUARD_BITS};

pub type Direction = (Rat, Rat);

fn dot(a: &Direction, b: &Direction) -> Rat {
    &a.0 * &b.0 + &a.1 * &b.1
}

fn perp(a: &Direction) -> Direction {
    (-a.1.clone(), a.0.clone())
}

fn norm_sq(a: &Direction) -> Rat {
    dot(a, a)
}

/// `<e, f> / <e^perp, f>`
fn overlap_ratio(e: &Direction, f: &Direction) -> Result<Rat> {
    let d = dot(&perp(e), f);
    if d.is_zero() {
        return Err(Error::ParallelDirections);
    }
    Ok(dot(e, f) / d)
}

/// Squared sine of the angle between `e` and `f`.
fn delta_sq(e: &Direction, f: &Direction) -> Rat {
    let d = dot(&perp(e), f);
    &d * &d / (norm_sq(e) * norm_sq(f))
}

/// Positive multiple of `e` with coprime integer coordinates.
fn primitive_direction(e: &Direction) -> Direction {
    let l = e.0.denom().lcm(e.1.denom());
    let a: BigInt = e.0.numer() * (&l / e.0.denom());
    let b: BigInt = e.1.numer() * (&l / e.1.denom());
    let g = a.gcd(&b);
    if g.is_zero() {
        return e.clone();
    }
    (Rat::from_integer(a / &g), Rat::from_integer(b / &g))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndivisibleInterval {
    pub l: Rat,
    pub e: Direction,
}

/// Chain of indivisible intervals, first interval first.
///
/// With `terminal_free` the last interval only supplies the closing direction and its
/// length is not determined by the matrix; otherwise the chain closes on `(1, 0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hamiltonian {
    pub intervals: Vec<IndivisibleInterval>,
    pub terminal_free: bool,
}

impl Hamiltonian {
    pub fn new(intervals: Vec<IndivisibleInterval>, terminal_free: bool) -> Result<Self> {
        if intervals.is_empty() || (terminal_free && intervals.len() < 2) {
            return Err(Error::InvalidInput("Hamiltonian needs at least one interval before the terminal one".into()));
        }
        for iv in &intervals {
            if !iv.l.is_positive() {
                return Err(Error::InvalidInput("interval lengths must be positive".into()));
            }
            if iv.e.0.is_zero() && iv.e.1.is_zero() {
                return Err(Error::InvalidInput("direction must be nonzero".into()));
            }
        }
        Ok(Hamiltonian { intervals, terminal_free })
    }

    /// Directions entering the matrix entries, closing direction included.
    pub fn directions(&self) -> Vec<Direction> {
        let mut d: Vec<Direction> = self.intervals.iter().map(|i| i.e.clone()).collect();
        if !self.terminal_free {
            d.push((Rat::one(), Rat::zero()));
        }
        d
    }

    /// Size of the associated Jacobi matrix.
    pub fn jacobi_size(&self) -> usize {
        self.directions().len() - 1
    }

    pub fn lengths(&self) -> Vec<Rat> {
        self.intervals[..self.jacobi_size()].iter().map(|i| i.l.clone()).collect()
    }

    /// `delta_k^2` for `k = 1..N`.
    pub fn deltas_sq(&self) -> Vec<Rat> {
        self.directions().windows(2).map(|w| delta_sq(&w[0], &w[1])).collect()
    }
}

#[derive(Serialize, Deserialize)]
struct RawInterval {
    #[serde(with = "serde_rat")]
    l: Rat,
    #[serde(with = "crate::arith::rat::serde_rat_vec")]
    e: Vec<Rat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    delta_sq: Option<String>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    free: bool,
}

#[derive(Serialize, Deserialize)]
struct RawHamiltonian {
    intervals: Vec<RawInterval>,
    #[serde(default = "ccw")]
    orientation: String,
    #[serde(default)]
    terminal_free: bool,
}

fn ccw() -> String {
    "ccw".into()
}

impl Serialize for Hamiltonian {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let ds = self.deltas_sq();
        let last = self.intervals.len() - 1;
        let intervals = self
            .intervals
            .iter()
            .enumerate()
            .map(|(k, iv)| RawInterval {
                l: iv.l.clone(),
                e: vec![iv.e.0.clone(), iv.e.1.clone()],
                delta_sq: ds.get(k).map(crate::arith::format_rat),
                free: self.terminal_free && k == last,
            })
            .collect();
        RawHamiltonian { intervals, orientation: ccw(), terminal_free: self.terminal_free }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Hamiltonian {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = RawHamiltonian::deserialize(d)?;
        if raw.orientation != "ccw" {
            return Err(D::Error::custom("only the ccw orientation is supported"));
        }
        let mut intervals = Vec::with_capacity(raw.intervals.len());
        for iv in &raw.intervals {
            if iv.e.len() != 2 {
                return Err(D::Error::custom("direction must have two coordinates"));
            }
            intervals.push(IndivisibleInterval { l: iv.l.clone(), e: (iv.e[0].clone(), iv.e[1].clone()) });
        }
        let h = Hamiltonian::new(intervals, raw.terminal_free).map_err(D::Error::custom)?;
        let ds = h.deltas_sq();
        for (k, iv) in raw.intervals.iter().enumerate() {
            if let Some(given) = &iv.delta_sq {
                let g = crate::arith::parse_rat(given).map_err(D::Error::custom)?;
                if ds.get(k) != Some(&g) {
                    return Err(D::Error::custom(format!("delta_sq of interval {} does not match its directions", k + 1)));
                }
            }
        }
        Ok(h)
    }
}

/// Jacobi entries of the Hamiltonian. Requires `e_1` horizontal.
pub fn hamiltonian_to_jacobi(h: &Hamiltonian) -> Result<JacobiMatrix> {
    let dirs = h.directions();
    if !dirs[0].1.is_zero() {
        return Err(Error::InvalidInput("first direction must be horizontal".into()));
    }
    let n = dirs.len() - 1;
    let l = h.lengths();
    let r = dirs.windows(2).map(|w| overlap_ratio(&w[0], &w[1])).collect::<Result<Vec<_>>>()?;
    let ds = h.deltas_sq();
    let mut q = Vec::with_capacity(n);
    for j in 0..n {
        let prev = if j == 0 { Rat::zero() } else { r[j - 1].clone() };
        q.push((&r[j] + prev) / &l[j]);
    }
    let rho_sq = (0..n - 1).map(|j| (&l[j] * &l[j + 1] * &ds[j]).recip()).collect();
    JacobiMatrix::new(q, rho_sq)
}

/// Inverse of [`hamiltonian_to_jacobi`] with `e_1 = (1, 0)`. `l1` defaults to `1000/q_1`.
pub fn jacobi_to_hamiltonian(j: &JacobiMatrix, l1: Option<&Rat>) -> Result<Hamiltonian> {
    let l1 = match l1 {
        Some(v) => v.clone(),
        None => {
            if j.q[0].is_zero() {
                return Err(Error::DegenerateRatio("q_1 = 0 leaves l_1 = 1000/q_1 undefined".into()));
            }
            int(1000) / &j.q[0]
        }
    };
    if !l1.is_positive() {
        return Err(Error::DegenerateRatio("l_1 must be positive".into()));
    }
    let n = j.size();
    let mut e: Direction = (Rat::one(), Rat::zero());
    let mut l = l1;
    let mut r = &j.q[0] * &l;
    let mut intervals = Vec::with_capacity(n + 1);
    for k in 0..n {
        let ep = perp(&e);
        let next = primitive_direction(&(-&r * &e.0 - &ep.0, -&r * &e.1 - &ep.1));
        intervals.push(IndivisibleInterval { l: l.clone(), e: e.clone() });
        if k + 1 < n {
            let d2 = (Rat::one() + &r * &r).recip();
            l = (&j.rho_sq[k] * &l * d2).recip();
            r = &j.q[k + 1] * &l - &r;
        }
        e = next;
    }
    intervals.push(IndivisibleInterval { l: Rat::one(), e });
    Hamiltonian::new(intervals, true)
}

/// `M = [[A, C], [B, D]]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonodromyPolys {
    #[serde(rename = "A")]
    pub a: RatPoly,
    #[serde(rename = "B")]
    pub b: RatPoly,
    #[serde(rename = "C")]
    pub c: RatPoly,
    #[serde(rename = "D")]
    pub d: RatPoly,
}

type Mat = [[RatPoly; 2]; 2];

fn mat_mul(x: &Mat, y: &Mat) -> Mat {
    let e = |i: usize, k: usize| x[i][0].mul(&y[0][k]).add(&x[i][1].mul(&y[1][k]));
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

fn identity() -> Mat {
    [[RatPoly::one(), RatPoly::zero()], [RatPoly::zero(), RatPoly::one()]]
}

/// `I - z l e^perp e^T / <e, e>`
fn factor(iv: &IndivisibleInterval) -> Mat {
    let e = &iv.e;
    let ep = perp(e);
    let s = &iv.l / norm_sq(e);
    let lin = |c: Rat| RatPoly::linear(Rat::zero(), -(&s * c));
    [
        [RatPoly::one().add(&lin(&ep.0 * &e.0)), lin(&ep.0 * &e.1)],
        [lin(&ep.1 * &e.0), RatPoly::one().add(&lin(&ep.1 * &e.1))],
    ]
}

pub fn monodromy(h: &Hamiltonian) -> MonodromyPolys {
    let k = h.intervals.len();
    let active = if h.terminal_free { k - 1 } else { k };
    let mut m = identity();
    for iv in &h.intervals[..active] {
        m = mat_mul(&factor(iv), &m);
    }
    if h.terminal_free {
        let e = &h.intervals[k - 1].e;
        let (ex, ey) = if e.0.is_zero() { (Rat::zero(), Rat::one()) } else { (Rat::one(), &e.1 / &e.0) };
        let n2 = &ex * &ex + &ey * &ey;
        let c = RatPoly::constant;
        let t = [[c(ex.clone()), c(ey.clone())], [c(-&ey / &n2), c(&ex / &n2)]];
        m = mat_mul(&t, &m);
    }
    let [[a, c], [b, d]] = m;
    MonodromyPolys { a, b, c, d }
}

impl MonodromyPolys {
    pub fn det(&self) -> RatPoly {
        self.a.mul(&self.d).sub(&self.c.mul(&self.b))
    }
}

/// Both spectral measures read off the monodromy.
#[derive(Clone, Debug, Serialize)]
pub struct MonodromyMeasures {
    /// Residues of `C/A`, normalized to unit mass.
    pub mu: EnclosureMeasure,
    pub mu_mass: Real,
    /// Residues of `-B/A`.
    pub nu: EnclosureMeasure,
    /// Linear coefficient of `-B/A` at infinity.
    #[serde(with = "serde_rat")]
    pub linear: Rat,
    pub p: Real,
}

pub fn measures_from_monodromy(m: &MonodromyPolys, bits: u32) -> Result<MonodromyMeasures> {
    if m.a.deg() == 0 {
        return Err(Error::NoSpectrum);
    }
    if !m.a.is_squarefree() {
        return Err(Error::NonSquarefreeA);
    }
    let roots = real_roots(&m.a, bits + GUARD_BITS)?;
    if roots.len() != m.a.deg() {
        return Err(Error::InvalidInput("A has nonreal roots".into()));
    }
    let da = m.a.derivative();
    let mut mu = Vec::with_capacity(roots.len());
    let mut nu = Vec::with_capacity(roots.len());
    let mut shift = Real::Exact(Rat::zero());
    for iv in roots {
        let t = if iv.is_point() { Real::Exact(iv.lo_rat()) } else { Real::Approx(iv) };
        let dt = da.eval_real(&t);
        let mk = m.c.eval_real(&t).neg().div(&dt)?;
        let nk = m.b.eval_real(&t).div(&dt)?;
        shift = shift.add(&nk.mul(&t).div(&t.sqr().add(&Real::Exact(Rat::one())))?);
        mu.push(EncAtom { t: t.clone(), m: mk });
        nu.push(EncAtom { t, m: nk });
    }
    let (quot, _) = m.b.neg().div_rem(&m.a);
    let raw = EnclosureMeasure { atoms: mu };
    let mu_mass = raw.total_mass();
    Ok(MonodromyMeasures {
        mu: raw.normalized()?,
        mu_mass,
        nu: EnclosureMeasure { atoms: nu },
        linear: quot.coeff(1),
        p: Real::Exact(quot.coeff(0)).add(&shift),
    })
}

fn x(r: Rat) -> Real {
    Real::Exact(r)
}

/// Per-step ratios `delta_n^2/delta_{n+1}^2`, `(l_{n+1} delta_{n+1})^2/(l_n delta_n)^2` and
/// `l_{n+1} delta_{n+1}^2 / (l_n delta_n^2)` for `n = 1..N-1`.
pub fn hamiltonian_ratios(h: &Hamiltonian) -> Vec<(Rat, Rat, Rat)> {
    let l = h.lengths();
    let d = h.deltas_sq();
    (0..l.len().saturating_sub(1))
        .map(|n| {
            let dr = &d[n] / &d[n + 1];
            let a = &l[n + 1] * &l[n + 1] * &d[n + 1] / (&l[n] * &l[n] * &d[n]);
            let b = &l[n + 1] * &d[n + 1] / (&l[n] * &d[n]);
            (dr, a, b)
        })
        .collect()
}

fn delta1_window(id: &str, h: &Hamiltonian) -> Vec<Check> {
    let d1 = h.deltas_sq()[0].clone();
    vec![
        Check::lt(format!("{id}.delta1.lower"), 1, 0, x(rat(1, 1001 * 1001)), x(d1.clone())),
        Check::lt(format!("{id}.delta1.upper"), 1, 0, x(d1), x(rat(1, 1000 * 1000))),
    ]
}

/// Lacunary spectral data to Hamiltonian ratio bounds, with `l_1 = 1000/q_1`.
pub fn theorem14_check(mu: &DiscreteMeasure, p: &LacunarityParams) -> Result<(Report, Hamiltonian)> {
    let mut r = Report::new("thm1.4");
    let ex = lacunarity_params(mu)?;
    r.push(Check::gt("thm1.4.region.lambda", 0, 0, x(p.lambda.clone()), x(int(1000))));
    r.push(Check::gt("thm1.4.region.kappa", 0, 0, x(p.kappa.clone()), x(int(100))));
    r.push(Check::lt("thm1.4.region.window", 0, 0, x(int(10) / &p.lambda), x(p.theta.clone())));
    r.push(Check::lt("thm1.4.region.theta", 0, 0, x(p.theta.clone()), x(rat(1, 100))));
    r.push(Check::lt("thm1.4.hyp.lambda", 0, 0, x(p.lambda.clone()), x(ex.lambda.clone())));
    r.push(Check::lt("thm1.4.hyp.kappa", 0, 0, x(p.kappa.clone()), x(ex.kappa.clone())));
    r.push(Check::le("thm1.4.hyp.theta", 0, 0, x(ex.theta.clone()), x(p.theta.clone())));
    if r.checks.iter().any(|c| c.verdict != Verdict::Pass) {
        r.warnings.push("HypothesesUnsatisfied: conclusions evaluated anyway".into());
    }
    let (j, _) = rational_chain(mu)?;
    let h = jacobi_to_hamiltonian(&j, None)?;
    r.extend(delta1_window("thm1.4", &h));
    let k2 = &p.kappa * &p.kappa / int(100);
    let l2 = &p.lambda * &p.lambda / int(100);
    let th = (int(1000) * &p.theta).recip();
    for (n, (dr, a, b)) in hamiltonian_ratios(&h).into_iter().enumerate() {
        r.push(Check::gt("thm1.4.delta_ratio", n + 1, 0, x(dr), x(k2.clone())));
        r.push(Check::gt("thm1.4.l_delta_ratio", n + 1, 0, x(a), x(l2.clone())));
        r.push(Check::gt("thm1.4.l_delta2_ratio", n + 1, 0, x(b), x(th.clone())));
    }
    Ok((r, h))
}

/// Hamiltonian ratio hypotheses to a completely lacunary spectral measure.
pub fn theorem15_check(h: &Hamiltonian, p: &LacunarityParams, bits: u32) -> Result<Report> {
    let j = hamiltonian_to_jacobi(h)?;
    escalate(bits, |b| {
        let mut r = Report::new("thm1.5");
        r.extend(delta1_window("thm1.5.hyp", h));
        let k2 = int(10_000) * &p.kappa * &p.kappa;
        let l2 = int(10_000) * &p.lambda * &p.lambda;
        let th = int(100) / &p.theta;
        for (n, (dr, a, c)) in hamiltonian_ratios(h).into_iter().enumerate() {
            r.push(Check::gt("thm1.5.hyp.delta_ratio", n + 1, 0, x(dr), x(k2.clone())));
            r.push(Check::gt("thm1.5.hyp.l_delta_ratio", n + 1, 0, x(a), x(l2.clone())));
            r.push(Check::gt("thm1.5.hyp.l_delta2_ratio", n + 1, 0, x(c), x(th.clone())));
        }
        if r.checks.iter().any(|c| c.verdict != Verdict::Pass) {
            r.warnings.push("HypothesesUnsatisfied: conclusions evaluated anyway".into());
        }
        let fr = spectral_measure(&j, b)?;
        r.absorb(lacunarity_checks("thm1.5.lacunary", 1, &fr.measure, p)?);
        Ok(r)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(l: Rat, a: i64, b: i64) -> IndivisibleInterval {
        IndivisibleInterval { l, e: (int(a), int(b)) }
    }

    #[test]
    fn two_interval_chain() {
        let h = Hamiltonian::new(vec![iv(int(1), 1, 0), iv(int(1), 1, -1)], false).unwrap();
        let j = hamiltonian_to_jacobi(&h).unwrap();
        assert_eq!(j.q, vec![int(-1), int(0)]);
        assert_eq!(j.rho_sq, vec![int(2)]);
        let h7 = Hamiltonian::new(vec![iv(int(1), 1, 0), iv(int(1), 7, -7)], false).unwrap();
        assert_eq!(hamiltonian_to_jacobi(&h7).unwrap(), j);
    }

    #[test]
    fn parallel_directions_rejected() {
        let h = Hamiltonian::new(vec![iv(int(1), 1, 0), iv(int(1), 3, 0)], true).unwrap();
        assert!(matches!(hamiltonian_to_jacobi(&h), Err(Error::ParallelDirections)));
    }

    #[test]
    fn construction_example() {
        let j = JacobiMatrix::new(vec![int(2), int(2)], vec![int(1)]).unwrap();
        let h = jacobi_to_hamiltonian(&j, None).unwrap();
        assert_eq!(h.intervals[0].l, int(500));
        assert_eq!(h.deltas_sq()[0], rat(1, 1 + 1000 * 1000));
        assert_eq!(h.intervals[1].l, Rat::new((1 + 1000 * 1000).into(), 500.into()));
        assert_eq!(hamiltonian_to_jacobi(&h).unwrap(), j);
    }

    #[test]
    fn single_interval_monodromy() {
        let h = Hamiltonian::new(vec![iv(int(1), 1, 0)], false).unwrap();
        let m = monodromy(&h);
        assert_eq!(m.a, RatPoly::one());
        assert_eq!(m.c, RatPoly::zero());
        assert_eq!(m.d, RatPoly::one());
        assert_eq!(m.b, RatPoly::linear(Rat::zero(), int(-1)));
        assert!(matches!(measures_from_monodromy(&m, 64), Err(Error::NoSpectrum)));
    }

    #[test]
    fn monodromy_measure_matches_jacobi() {
        let j = JacobiMatrix::new(vec![int(2), int(2)], vec![int(1)]).unwrap();
        let h = jacobi_to_hamiltonian(&j, Some(&rat(3, 2))).unwrap();
        let m = monodromy(&h);
        assert_eq!(m.det(), RatPoly::one());
        let mm = measures_from_monodromy(&m, 64).unwrap();
        assert!(mm.mu.t(0).contains(&int(1)) && mm.mu.t(1).contains(&int(3)));
        assert!(mm.mu.m(0).contains(&rat(1, 2)) && mm.mu.m(1).contains(&rat(1, 2)));
        assert!(mm.nu.atoms.iter().all(|a| a.m.is_positive()));
    }

    #[test]
    fn serde_roundtrip() {
        let j = JacobiMatrix::new(vec![int(3), int(1)], vec![int(3)]).unwrap();
        let h = jacobi_to_hamiltonian(&j, None).unwrap();
        let s = serde_json::to_string(&h).unwrap();
        let back: Hamiltonian = serde_json::from_str(&s).unwrap();
        assert_eq!(back, h);
    }
}
