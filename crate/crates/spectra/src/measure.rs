//! Discrete measures, lacunarity parameters and fixture generation.

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize};

use crate::arith::rat::{self, serde_rat};
use crate::arith::{Rat, Real};
use crate::error::{Error, Result};
use crate::report::{Check, Report};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Atom {
    #[serde(with = "serde_rat")]
    pub t: Rat,
    #[serde(with = "serde_rat")]
    pub m: Rat,
}

/// `sum m_k delta_{t_k}` with strictly increasing positions and positive weights.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiscreteMeasure {
    atoms: Vec<Atom>,
    #[serde(skip)]
    total_mass: Rat,
}

impl DiscreteMeasure {
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidInput("measure needs at least one atom".into()));
        }
        for w in atoms.windows(2) {
            if w[0].t >= w[1].t {
                return Err(Error::InvalidInput("atom positions must be strictly increasing".into()));
            }
        }
        if atoms.iter().any(|a| !a.m.is_positive()) {
            return Err(Error::InvalidInput("atom weights must be positive".into()));
        }
        let total_mass = atoms.iter().map(|a| a.m.clone()).sum();
        Ok(DiscreteMeasure { atoms, total_mass })
    }

    pub fn from_pairs(pairs: &[(Rat, Rat)]) -> Result<Self> {
        DiscreteMeasure::new(pairs.iter().map(|(t, m)| Atom { t: t.clone(), m: m.clone() }).collect())
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_mass(&self) -> &Rat {
        &self.total_mass
    }

    pub fn positions(&self) -> Vec<Rat> {
        self.atoms.iter().map(|a| a.t.clone()).collect()
    }

    pub fn weights(&self) -> Vec<Rat> {
        self.atoms.iter().map(|a| a.m.clone()).collect()
    }

    pub fn is_normalized(&self) -> bool {
        self.total_mass.is_one()
    }

    pub fn normalize(&self) -> DiscreteMeasure {
        let s = self.total_mass.clone();
        let atoms = self.atoms.iter().map(|a| Atom { t: a.t.clone(), m: &a.m / &s }).collect();
        DiscreteMeasure { atoms, total_mass: Rat::one() }
    }

    fn require_positive(&self) -> Result<()> {
        if self.atoms.iter().any(|a| !a.t.is_positive()) {
            Err(Error::NeedsPositiveSupport)
        } else {
            Ok(())
        }
    }
}

impl<'de> Deserialize<'de> for DiscreteMeasure {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            atoms: Vec<Atom>,
        }
        let raw = Raw::deserialize(d)?;
        DiscreteMeasure::new(raw.atoms).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LacunarityParams {
    #[serde(with = "serde_rat")]
    pub lambda: Rat,
    #[serde(with = "serde_rat")]
    pub kappa: Rat,
    #[serde(with = "serde_rat")]
    pub theta: Rat,
}

impl LacunarityParams {
    pub fn new(lambda: Rat, kappa: Rat, theta: Rat) -> Self {
        LacunarityParams { lambda, kappa, theta }
    }
}

/// Extremal parameters: smallest position and `m/t` ratios, largest `m/t^2` ratio.
pub fn lacunarity_params(mu: &DiscreteMeasure) -> Result<LacunarityParams> {
    mu.require_positive()?;
    if mu.len() < 2 {
        return Err(Error::TooFewAtoms);
    }
    let mut lambda: Option<Rat> = None;
    let mut kappa: Option<Rat> = None;
    let mut theta: Option<Rat> = None;
    for w in mu.atoms.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let l = &b.t / &a.t;
        let k = (&b.m * &a.t) / (&a.m * &b.t);
        let th = (&b.m * &a.t * &a.t) / (&a.m * &b.t * &b.t);
        lambda = Some(lambda.map_or(l.clone(), |x| rat::min(&x, &l)));
        kappa = Some(kappa.map_or(k.clone(), |x| rat::min(&x, &k)));
        theta = Some(theta.map_or(th.clone(), |x| rat::max(&x, &th)));
    }
    Ok(LacunarityParams::new(lambda.unwrap(), kappa.unwrap(), theta.unwrap()))
}

/// Strict form of all three ratio conditions for every consecutive pair.
pub fn is_completely_lacunary(mu: &DiscreteMeasure, p: &LacunarityParams) -> Result<bool> {
    mu.require_positive()?;
    Ok(mu.atoms.windows(2).all(|w| {
        let (a, b) = (&w[0], &w[1]);
        b.t > &p.lambda * &a.t
            && &b.m * &a.t > &p.kappa * &a.m * &b.t
            && &b.m * &a.t * &a.t < &p.theta * &a.m * &b.t * &b.t
    }))
}

/// `max_n (sum_{k<n} nu_k + r_n^2 sum_{k>n} nu_k / r_k^2) / nu_n`.
pub fn small_space_constant(nu: &DiscreteMeasure) -> Result<Rat> {
    nu.require_positive()?;
    let a = &nu.atoms;
    let n = a.len();
    // prefix sums of nu and suffix sums of nu / r^2
    let mut prefix = vec![Rat::zero(); n + 1];
    for i in 0..n {
        prefix[i + 1] = &prefix[i] + &a[i].m;
    }
    let mut suffix = vec![Rat::zero(); n + 1];
    for i in (0..n).rev() {
        suffix[i] = &suffix[i + 1] + &a[i].m / (&a[i].t * &a[i].t);
    }
    let mut best = Rat::zero();
    for i in 0..n {
        let v = (&prefix[i] + &a[i].t * &a[i].t * &suffix[i + 1]) / &a[i].m;
        if v > best {
            best = v;
        }
    }
    Ok(best)
}

/// Smallest `nu_{k+1}/nu_k` and largest `(nu_{k+1}/r_{k+1}^2)/(nu_k/r_k^2)`:
/// the lacunarity of the two sequences that govern the small-space condition.
pub fn small_space_ratios(nu: &DiscreteMeasure) -> Result<(Rat, Rat)> {
    nu.require_positive()?;
    if nu.len() < 2 {
        return Err(Error::TooFewAtoms);
    }
    let mut grow: Option<Rat> = None;
    let mut decay: Option<Rat> = None;
    for w in nu.atoms.windows(2) {
        let g = &w[1].m / &w[0].m;
        let d = (&w[1].m * &w[0].t * &w[0].t) / (&w[0].m * &w[1].t * &w[1].t);
        grow = Some(grow.map_or(g.clone(), |x| rat::min(&x, &g)));
        decay = Some(decay.map_or(d.clone(), |x| rat::max(&x, &d)));
    }
    Ok((grow.unwrap(), decay.unwrap()))
}

/// Deterministic geometric family. A nonzero `seed` multiplies every ratio by
/// `1 + u/4096`, `u` uniform in `0..=64`, drawn from ChaCha8 seeded with `seed`
/// (a `t` factor then an `m` factor per step).
pub fn generate_lacunary(n_atoms: usize, t_ratio: &Rat, m_ratio: &Rat, t1: &Rat, seed: u64) -> Result<DiscreteMeasure> {
    if n_atoms == 0 {
        return Err(Error::InvalidInput("n_atoms must be at least 1".into()));
    }
    if t_ratio <= &Rat::one() || !m_ratio.is_positive() || !t1.is_positive() {
        return Err(Error::InvalidInput("need t_ratio > 1, m_ratio > 0, t1 > 0".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let factor = |rng: &mut ChaCha8Rng| -> Rat {
        if seed == 0 {
            Rat::one()
        } else {
            Rat::one() + rat::rat(rng.gen_range(0..=64), 4096)
        }
    };
    let mut atoms = Vec::with_capacity(n_atoms);
    let (mut t, mut m) = (t1.clone(), Rat::one());
    atoms.push(Atom { t: t.clone(), m: m.clone() });
    for _ in 1..n_atoms {
        t = t * t_ratio * factor(&mut rng);
        m = m * m_ratio * factor(&mut rng);
        atoms.push(Atom { t: t.clone(), m: m.clone() });
    }
    Ok(DiscreteMeasure::new(atoms)?.normalize())
}

/// Atom of a measure known only through enclosures.
#[derive(Clone, Debug, Serialize)]
pub struct EncAtom {
    pub t: Real,
    pub m: Real,
}

#[derive(Clone, Debug, Serialize)]
pub struct EnclosureMeasure {
    pub atoms: Vec<EncAtom>,
}

impl EnclosureMeasure {
    pub fn from_exact(mu: &DiscreteMeasure) -> Self {
        EnclosureMeasure {
            atoms: mu.atoms.iter().map(|a| EncAtom { t: Real::Exact(a.t.clone()), m: Real::Exact(a.m.clone()) }).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn t(&self, k: usize) -> &Real {
        &self.atoms[k].t
    }

    pub fn m(&self, k: usize) -> &Real {
        &self.atoms[k].m
    }

    pub fn total_mass(&self) -> Real {
        Real::sum(self.atoms.iter().map(|a| &a.m))
    }

    pub fn normalized(&self) -> Result<EnclosureMeasure> {
        let s = self.total_mass();
        let atoms = self
            .atoms
            .iter()
            .map(|a| Ok(EncAtom { t: a.t.clone(), m: a.m.div(&s)? }))
            .collect::<Result<Vec<_>>>()?;
        Ok(EnclosureMeasure { atoms })
    }

    /// Whether every atom's enclosure contains the matching exact atom.
    pub fn encloses(&self, mu: &DiscreteMeasure) -> bool {
        self.len() == mu.len() && self.atoms.iter().zip(mu.atoms()).all(|(e, a)| e.t.contains(&a.t) && e.m.contains(&a.m))
    }
}

/// Certified completely-lacunary test on an enclosure measure, one record per pair and condition.
pub fn lacunarity_checks(id: &str, level: usize, mu: &EnclosureMeasure, p: &LacunarityParams) -> Result<Report> {
    let mut r = Report::new(id);
    let lam = Real::Exact(p.lambda.clone());
    let kap = Real::Exact(p.kappa.clone());
    let th = Real::Exact(p.theta.clone());
    for k in 0..mu.len().saturating_sub(1) {
        let (ta, tb, ma, mb) = (mu.t(k), mu.t(k + 1), mu.m(k), mu.m(k + 1));
        let tr = tb.div(ta)?;
        let kr = mb.mul(ta).div(&ma.mul(tb))?;
        let thr = mb.mul(&ta.sqr()).div(&ma.mul(&tb.sqr()))?;
        r.push(Check::gt(format!("{id}.t_ratio"), level, k + 1, tr, lam.clone()));
        r.push(Check::gt(format!("{id}.m_over_t_ratio"), level, k + 1, kr, kap.clone()));
        r.push(Check::lt(format!("{id}.m_over_t2_ratio"), level, k + 1, thr, th.clone()));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat::{int, pow10, rat};

    fn m(pairs: &[(Rat, Rat)]) -> DiscreteMeasure {
        DiscreteMeasure::from_pairs(pairs).unwrap()
    }

    #[test]
    fn normalize_examples() {
        let a = m(&[(int(1), int(2)), (int(3), int(2))]).normalize();
        assert_eq!(a.weights(), vec![rat(1, 2), rat(1, 2)]);
        assert_eq!(a.normalize(), a);
        let b = m(&[(int(0), int(1)), (int(4), int(3))]).normalize();
        assert_eq!(b.weights(), vec![rat(1, 4), rat(3, 4)]);
    }

    #[test]
    fn params_of_two_atoms() {
        let p = lacunarity_params(&m(&[(int(1), rat(1, 2)), (int(3), rat(1, 2))])).unwrap();
        assert_eq!((p.lambda, p.kappa, p.theta), (int(3), rat(1, 3), rat(1, 9)));
    }

    #[test]
    fn single_atom_errors_and_vacuous_truth() {
        let one = m(&[(int(5), int(1))]);
        assert!(matches!(lacunarity_params(&one), Err(Error::TooFewAtoms)));
        let p = LacunarityParams::new(int(2), int(2), rat(1, 2));
        assert!(is_completely_lacunary(&one, &p).unwrap());
    }

    #[test]
    fn small_space_examples() {
        assert_eq!(small_space_constant(&m(&[(int(3), int(7))])).unwrap(), int(0));
        assert_eq!(small_space_constant(&m(&[(int(1), int(1)), (int(10), int(100))])).unwrap(), int(1));
    }

    #[test]
    fn generator_zero_seed() {
        let g = generate_lacunary(2, &int(4), &int(4), &int(1), 0).unwrap();
        assert_eq!(g, m(&[(int(1), rat(1, 5)), (int(4), rat(4, 5))]));
        let g = generate_lacunary(5, &pow10(4), &(int(6) * pow10(5)), &int(1), 0).unwrap();
        let p = lacunarity_params(&g).unwrap();
        assert_eq!((p.lambda, p.kappa, p.theta), (pow10(4), int(60), rat(6, 1000)));
    }

    #[test]
    fn generator_seeded_is_deterministic_and_bounded() {
        let a = generate_lacunary(6, &int(100), &int(1000), &int(1), 42).unwrap();
        let b = generate_lacunary(6, &int(100), &int(1000), &int(1), 42).unwrap();
        assert_eq!(a, b);
        for w in a.atoms().windows(2) {
            let r = &w[1].t / &w[0].t;
            assert!(r >= int(100) && r <= int(100) * (int(1) + rat(1, 64)));
        }
    }
}
