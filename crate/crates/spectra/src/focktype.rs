//! Jacobi spectral data built from small de Branges space data `(nu_k, r_k)`.
//!
//! The inverse problem for `sigma` is handled in the variables `tau = 1/r`,
//! `alpha = sigma/r`, with indices reversed so that positions increase. One Stieltjes step
//! there yields the next level of `sigma` through `r^(1)_n = 1/s_{N-n}` and
//! `sigma^(1)_n ~ w_{N-n}/s_{N-n}^3`.

use num_traits::{One, Signed};
use serde::Serialize;

use crate::arith::rat::{int, pow, rat, serde_rat, serde_rat_vec, Rat};
use crate::arith::Real;
use crate::error::{Error, Result};
use crate::measure::{Atom, DiscreteMeasure, EncAtom, EnclosureMeasure, LacunarityParams};
use crate::report::{escalate, Check, Report, Verdict};
use crate::stieltjes::{certify_step, decompose, exact_hints, interval_chain, rational_chain, CertifyConfig, HypothesisForm};

#[derive(Clone, Debug, Serialize)]
pub struct FockData {
    pub nu: DiscreteMeasure,
    pub truncation: usize,
    pub sigma: DiscreteMeasure,
    #[serde(with = "serde_rat")]
    pub c: Rat,
}

/// `sigma_k = c nu_k^-1 r_k^2 prod_{l != k, l <= N} (1 - r_k/r_l)^-2`, normalized.
pub fn sigma_from_nu(nu: &DiscreteMeasure, n: usize) -> Result<FockData> {
    if n == 0 || nu.len() < n {
        return Err(Error::InvalidInput(format!("need at least {n} atoms and a positive truncation")));
    }
    if nu.atoms().iter().any(|a| !a.t.is_positive()) {
        return Err(Error::NeedsPositiveSupport);
    }
    let a = &nu.atoms()[..n];
    let raw: Vec<Rat> = (0..n)
        .map(|k| {
            let mut v = &a[k].t * &a[k].t / &a[k].m;
            for (l, b) in a.iter().enumerate() {
                if l != k {
                    let f = Rat::one() - &a[k].t / &b.t;
                    v /= &f * &f;
                }
            }
            v
        })
        .collect();
    let total: Rat = raw.iter().sum();
    let c = total.recip();
    let sigma = DiscreteMeasure::new(a.iter().zip(&raw).map(|(x, s)| Atom { t: x.t.clone(), m: s * &c }).collect())?;
    Ok(FockData { nu: nu.clone(), truncation: n, sigma, c })
}

/// `tau_k = 1/r_k` (decreasing) and `alpha_k = sigma_k / r_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransformedData {
    #[serde(with = "serde_rat_vec")]
    pub alpha: Vec<Rat>,
    #[serde(with = "serde_rat_vec")]
    pub tau: Vec<Rat>,
}

pub fn change_of_variables(fd: &FockData) -> TransformedData {
    let tau = fd.sigma.atoms().iter().map(|a| a.t.recip()).collect();
    let alpha = fd.sigma.atoms().iter().map(|a| &a.m / &a.t).collect();
    TransformedData { alpha, tau }
}

impl TransformedData {
    /// Atoms `(t_n, mu_n) = (tau_{N-n+1}, alpha_{N-n+1})`, positions increasing.
    pub fn reversed(&self) -> Result<DiscreteMeasure> {
        let pairs: Vec<(Rat, Rat)> = self.tau.iter().cloned().zip(self.alpha.iter().cloned()).rev().collect();
        DiscreteMeasure::from_pairs(&pairs)
    }

    pub fn from_reversed(mu: &DiscreteMeasure) -> Self {
        TransformedData { alpha: mu.weights().into_iter().rev().collect(), tau: mu.positions().into_iter().rev().collect() }
    }
}

fn x(r: Rat) -> Real {
    Real::Exact(r)
}

/// Two-sided bound on `sigma_k / sigma_{k+1}` in terms of `r_{k+1}/r_k`, checked exactly.
pub fn ft_main_checks(fd: &FockData, p: &LacunarityParams) -> Report {
    let mut r = Report::new("ft.main_ineq");
    let one = Rat::one();
    let s = fd.sigma.atoms();
    let lo_c = (&one - int(10) / &p.lambda) * &p.kappa;
    let hi_c = (&one + int(10) / &p.lambda) * &p.theta;
    for k in 0..s.len().saturating_sub(1) {
        let ratio = &s[k].m / &s[k + 1].m;
        let rr = &s[k + 1].t / &s[k].t;
        let e = 2 * k as i64;
        r.push(Check::lt("ft.main_ineq.lower", 0, k + 1, x(&lo_c * pow(&rr, e)), x(ratio.clone())));
        r.push(Check::lt("ft.main_ineq.upper", 0, k + 1, x(ratio), x(&hi_c * pow(&rr, e + 2))));
    }
    r
}

/// Entry asymptotics of the Jacobi matrix for `sigma`, exactly, with a truncation-stability check
/// at `N + 1` when `nu` has enough atoms.
pub fn theorem11_check(nu: &DiscreteMeasure, p: &LacunarityParams, n: usize) -> Result<Report> {
    if n < 4 {
        return Err(Error::InvalidInput("truncation must be at least 4".into()));
    }
    let mut r = Report::new("thm1.1");
    let (lam, kap, th) = (&p.lambda, &p.kappa, &p.theta);
    r.push(Check::gt("thm1.1.region.lambda", 0, 0, x(lam.clone()), x(int(1_000_000))));
    r.push(Check::gt("thm1.1.region.kappa", 0, 0, x(kap.clone()), x(int(1_000_000))));
    r.push(Check::lt("thm1.1.region.theta", 0, 0, x(th.clone()), x(rat(1, 1_000_000))));
    let atoms = nu.atoms();
    let span = atoms.len().min(n + 1);
    for k in 0..span - 1 {
        let (a, b) = (&atoms[k], &atoms[k + 1]);
        r.push(Check::gt("thm1.1.hyp.r_ratio", 0, k + 1, x(&b.t / &a.t), x(lam.clone())));
        r.push(Check::gt("thm1.1.hyp.nu_ratio", 0, k + 1, x(&b.m / &a.m), x(kap.clone())));
        let d = (&b.m * &a.t * &a.t) / (&a.m * &b.t * &b.t);
        r.push(Check::lt("thm1.1.hyp.nu_over_r2_ratio", 0, k + 1, x(d), x(th.clone())));
    }
    if r.checks.iter().any(|c| c.verdict != Verdict::Pass) {
        r.warnings.push("HypothesesUnsatisfied: conclusions evaluated anyway".into());
    }
    let fd = sigma_from_nu(nu, n)?;
    r.absorb(ft_main_checks(&fd, p));
    let (j, _) = rational_chain(&fd.sigma)?;
    let one = Rat::one();
    let eq = &one * int(100) / kap;
    let er = int(1000) / kap + int(1000) / lam;
    for i in 0..n - 2 {
        let ratio = &atoms[i].m / &atoms[i + 1].m;
        let centre_q = &atoms[i].t + &ratio * &atoms[i + 1].t;
        let centre_r = &ratio * &atoms[i + 1].t * &atoms[i + 1].t;
        r.push(Check::lt("thm1.1.q.lower", i + 1, 0, x((&one - &eq) * &centre_q), x(j.q[i].clone())));
        r.push(Check::lt("thm1.1.q.upper", i + 1, 0, x(j.q[i].clone()), x((&one + &eq) * &centre_q)));
        r.push(Check::lt("thm1.1.rho_sq.lower", i + 1, 0, x((&one - &er) * &centre_r), x(j.rho_sq[i].clone())));
        r.push(Check::lt("thm1.1.rho_sq.upper", i + 1, 0, x(j.rho_sq[i].clone()), x((&one + &er) * &centre_r)));
    }
    if nu.len() > n {
        let (j2, _) = rational_chain(&sigma_from_nu(nu, n + 1)?.sigma)?;
        let tol = x(pow(&int(2), -20));
        for i in 0..n - 3 {
            let dq = (&j2.q[i] / &j.q[i] - &one).abs();
            let dr = (&j2.rho_sq[i] / &j.rho_sq[i] - &one).abs();
            r.push(Check::lt("thm1.1.truncation.q", i + 1, 0, x(dq), tol.clone()));
            r.push(Check::lt("thm1.1.truncation.rho_sq", i + 1, 0, x(dr), tol.clone()));
        }
    } else {
        r.warnings.push("nu has no atom beyond the truncation: stability not checked".into());
    }
    Ok(r)
}

/// One level of `sigma` obtained from a transformed step: positions `r^(l)` and normalized weights.
#[derive(Clone, Debug, Serialize)]
pub struct FockLevel {
    pub r: Vec<Real>,
    pub sigma: Vec<Real>,
}

/// Transformed measure of a level: positions `1/r` increasing, weights `sigma/r`.
fn transformed_enclosure(r: &[Real], sigma: &[Real]) -> Result<EnclosureMeasure> {
    let mut atoms = Vec::with_capacity(r.len());
    for (rk, sk) in r.iter().zip(sigma).rev() {
        atoms.push(EncAtom { t: rk.recip()?, m: sk.div(rk)? });
    }
    Ok(EnclosureMeasure { atoms })
}

/// Map a transformed step `(s, w)` back to the next level of `sigma`.
fn back_map(s: &[Real], w: &[Real]) -> Result<FockLevel> {
    let m = s.len();
    let mut r = Vec::with_capacity(m);
    let mut raw = Vec::with_capacity(m);
    for i in (0..m).rev() {
        r.push(s[i].recip()?);
        raw.push(w[i].div(&s[i].powi(3))?);
    }
    let total = Real::sum(&raw);
    let sigma = raw.iter().map(|v| v.div(&total)).collect::<Result<Vec<_>>>()?;
    Ok(FockLevel { r, sigma })
}

/// Ratio windows for one and two transformed steps, cross-checked against the direct chain.
pub fn corollary52_check(fd: &FockData, p: &LacunarityParams, bits: u32) -> Result<Report> {
    escalate(bits, |b| corollary52_at(fd, p, b))
}

fn corollary52_at(fd: &FockData, p: &LacunarityParams, bits: u32) -> Result<Report> {
    let mut rep = Report::new("cor5.2");
    let n_atoms = fd.truncation;
    if n_atoms < 3 {
        return Err(Error::InvalidInput("need at least three atoms".into()));
    }
    let (lam, kap, th) = (&p.lambda, &p.kappa, &p.theta);
    let one = Rat::one();

    // level one through the transformed variables
    let mu = change_of_variables(fd).reversed()?;
    let enc = EnclosureMeasure::from_exact(&mu);
    let step = decompose(&enc, None, bits, Some(&exact_hints(&enc)))?;
    let cfg = CertifyConfig { params: p.clone(), form: HypothesisForm::FockBridge };
    rep.absorb(certify_step(1, &enc, &step, &cfg.level_params(1, enc.len()))?);
    let lvl1 = back_map(&step.poles, &step.weights)?;

    // level two: transform level one again
    let enc2 = transformed_enclosure(&lvl1.r, &lvl1.sigma)?;
    let lvl2 = if enc2.len() >= 2 {
        let step2 = decompose(&enc2, None, bits, None)?;
        Some(back_map(&step2.poles, &step2.weights)?)
    } else {
        None
    };

    // direct chain on sigma for comparison
    let (j, _) = rational_chain(&fd.sigma)?;
    let (levels, _) = interval_chain(&EnclosureMeasure::from_exact(&fd.sigma), Some(&j.rho_sq), bits)?;
    for (l, lvl) in [(1usize, Some(&lvl1)), (2, lvl2.as_ref())] {
        let Some(lvl) = lvl else { continue };
        let direct = &levels[l];
        for k in 0..lvl.r.len() {
            rep.push(Check::meets("cor5.2.route.r", l, k + 1, lvl.r[k].clone(), direct.t(k).clone()));
            rep.push(Check::meets("cor5.2.route.sigma", l, k + 1, lvl.sigma[k].clone(), direct.m(k).clone()));
        }
    }

    let s = fd.sigma.atoms();
    let m1 = lvl1.r.len();
    for i in 0..m1.saturating_sub(1) {
        let rr = lvl1.r[i + 1].div(&lvl1.r[i])?;
        rep.push(Check::gt("cor5.2.r_ratio", 1, i + 1, rr, x(lam.clone())));
    }
    // pairs (n, n+1) with n + 1 < M_1: the top pair of the truncated level is excluded
    for i in 0..m1.saturating_sub(2) {
        let n = i + 1;
        let ratio = lvl1.sigma[i].div(&lvl1.sigma[i + 1])?;
        let xr = (&s[n].m * &s[n].t * &s[n].t) / (&s[n + 1].m * &s[n + 1].t * &s[n + 1].t);
        let kn = pow(kap, n as i64);
        let lo = (&one - int(20 * n as i64) / &kn) * &xr;
        let hi = (&one + int(20) / &kn) * &xr;
        rep.push(Check::lt("cor5.2.lower", 1, n, x(lo), ratio.clone()));
        rep.push(Check::lt("cor5.2.upper", 1, n, ratio.clone(), x(hi)));
        let rr = lvl1.r[i + 1].div(&lvl1.r[i])?;
        let e = 2 * n as u32;
        let lo3 = rr.powi(e - 2).scale(&((&one - int(20 * (n * n) as i64) / &kn) * kap));
        let hi3 = rr.powi(e).scale(&((&one + int(20 * n as i64) / &kn) * th));
        rep.push(Check::lt("cor5.3.lower", 1, n, lo3, ratio.clone()));
        rep.push(Check::lt("cor5.3.upper", 1, n, ratio, hi3));
    }
    for (l, lvl) in [(1usize, Some(&lvl1)), (2, lvl2.as_ref())] {
        let Some(lvl) = lvl else { continue };
        let ml = lvl.r.len();
        for i in 0..ml.saturating_sub(2) {
            let n = i + 1;
            let ratio = lvl.sigma[i].div(&lvl.sigma[i + 1])?;
            let rr = lvl.r[i + 1].div(&lvl.r[i])?;
            let e = 2 * n as u32;
            rep.push(Check::lt("cor5.4.lower", l, n, rr.powi(e - 2).scale(&(kap / int(10))), ratio.clone()));
            rep.push(Check::lt("cor5.4.upper", l, n, ratio, rr.powi(e).scale(&(th * int(10)))));
        }
    }
    Ok(rep)
}
