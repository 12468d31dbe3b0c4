//! Direct spectral problem: Jacobi matrix to spectral measure, and the reversed-step bounds.

use num_traits::One;
use serde::Serialize;

use crate::arith::rat::{int, pow, Rat};
use crate::arith::{real_roots, RatPoly, Real};
use crate::error::{Error, Result};
use crate::measure::{lacunarity_checks, EncAtom, EnclosureMeasure, LacunarityParams};
use crate::report::{escalate, Check, Report, Verdict};
use crate::stieltjes::{JacobiMatrix, RationalHerglotz, GUARD_BITS};

/// `f^(1), .., f^(N)` assembled bottom-up from `f^(N) = 1/(q_N - z)`.
pub fn herglotz_levels(j: &JacobiMatrix) -> Vec<RationalHerglotz> {
    let n = j.size();
    let mut out = vec![RationalHerglotz { num: RatPoly::one(), den: RatPoly::linear(j.q[n - 1].clone(), -Rat::one()) }];
    for k in (0..n - 1).rev() {
        let below = out.last().unwrap();
        let z_minus_q = RatPoly::linear(-j.q[k].clone(), Rat::one());
        let den = z_minus_q.mul(&below.den).add(&below.num.scale(&j.rho_sq[k])).neg();
        out.push(RationalHerglotz { num: below.den.clone(), den });
    }
    out.reverse();
    out
}

pub fn assemble_herglotz(j: &JacobiMatrix) -> RationalHerglotz {
    herglotz_levels(j).swap_remove(0)
}

/// Reconstructed spectral measure with the exact Herglotz function it came from.
#[derive(Clone, Debug, Serialize)]
pub struct ForwardResult {
    pub measure: EnclosureMeasure,
    pub herglotz: RationalHerglotz,
}

/// Poles of `f` and residues `-num(t)/den'(t)`, both as enclosures.
pub fn herglotz_measure(f: &RationalHerglotz, bits: u32) -> Result<EnclosureMeasure> {
    let roots = real_roots(&f.den, bits + GUARD_BITS)?;
    if roots.len() != f.den.deg() {
        return Err(Error::InvalidInput("denominator has nonreal roots".into()));
    }
    let d = f.den.derivative();
    let mut atoms = Vec::with_capacity(roots.len());
    for iv in roots {
        let t = if iv.is_point() { Real::Exact(iv.lo_rat()) } else { Real::Approx(iv) };
        let m = f.num.eval_real(&t).neg().div(&d.eval_real(&t))?;
        atoms.push(EncAtom { t, m });
    }
    Ok(EnclosureMeasure { atoms })
}

pub fn spectral_measure(j: &JacobiMatrix, bits: u32) -> Result<ForwardResult> {
    let herglotz = assemble_herglotz(j);
    let measure = herglotz_measure(&herglotz, bits)?;
    Ok(ForwardResult { measure, herglotz })
}

fn x(r: Rat) -> Real {
    Real::Exact(r)
}

/// Entry hypotheses and spectral conclusions for a matrix with rapidly decaying diagonal.
pub fn theorem13_check(j: &JacobiMatrix, p: &LacunarityParams, bits: u32) -> Result<Report> {
    let ten = int(10);
    if &ten / &p.lambda >= Rat::new(1.into(), 1000.into()) {
        return Err(Error::EmptyParameterWindow("10/lambda < theta < 1/1000 needs lambda > 10^4".into()));
    }
    escalate(bits, |b| theorem13_at(j, p, b))
}

fn theorem13_at(j: &JacobiMatrix, p: &LacunarityParams, bits: u32) -> Result<Report> {
    let mut r = Report::new("thm1.3");
    let one = Rat::one();
    r.push(Check::gt("thm1.3.region.lambda", 0, 0, x(p.lambda.clone()), x(int(1000))));
    r.push(Check::gt("thm1.3.region.kappa", 0, 0, x(p.kappa.clone()), x(int(100))));
    r.push(Check::lt("thm1.3.region.window", 0, 0, x(int(10) / &p.lambda), x(p.theta.clone())));
    r.push(Check::lt("thm1.3.region.theta", 0, 0, x(p.theta.clone()), x(Rat::new(1.into(), 1000.into()))));
    let n_size = j.size();
    for n in 0..n_size - 1 {
        let (qa, qb, rho) = (&j.q[n], &j.q[n + 1], &j.rho_sq[n]);
        r.push(Check::gt("thm1.3.hyp.q_ratio", n + 1, 0, x(qa.clone()), x(int(3) * &p.lambda * qb)));
        r.push(Check::lt("thm1.3.hyp.rho_sq.lower", n + 1, 0, x(int(20) / &p.theta * qb * qb), x(rho.clone())));
        r.push(Check::lt("thm1.3.hyp.rho_sq.upper", n + 1, 0, x(rho.clone()), x(qa * qb / (int(20) * &p.kappa))));
    }
    let hyp_ok = r.checks.iter().all(|c| c.verdict == Verdict::Pass);
    if !hyp_ok {
        r.warnings.push("HypothesesUnsatisfied: conclusions evaluated anyway".into());
    }
    let fr = spectral_measure(j, bits)?;
    let mu = &fr.measure;
    for n in 1..=n_size {
        let q = &j.q[n_size - n];
        let t = mu.t(n - 1).clone();
        r.push(Check::lt("thm1.3.t.lower", n, 0, x((&one - p.kappa.recip()) * q), t.clone()));
        r.push(Check::lt("thm1.3.t.upper", n, 0, t, x((&one + p.lambda.recip()) * q)));
    }
    r.absorb(lacunarity_checks("thm1.3.lacunary", 1, mu, p)?);
    Ok(r)
}

/// Localization of the poles of one reversed step at every level of the bottom-up assembly.
///
/// At level `n` the step takes `b = q_n` and the measure `w = rho_n^2 mu^(n+1)` with atoms
/// `s_k` to the poles `t_k` of `f^(n)`. The bounds are only asserted where the standing
/// hypotheses certify; elsewhere they are recorded as not applicable.
pub fn statement41_certify(j: &JacobiMatrix, p: &LacunarityParams, bits: u32) -> Result<Report> {
    escalate(bits, |b| statement41_at(j, p, b))
}

fn statement41_at(j: &JacobiMatrix, p: &LacunarityParams, bits: u32) -> Result<Report> {
    let mut r = Report::new("stmt4.1");
    let levels = herglotz_levels(j);
    let one = Rat::one();
    let (lam, kap, th) = (&p.lambda, &p.kappa, &p.theta);
    for n in 1..j.size() {
        let upper = herglotz_measure(&levels[n], bits)?;
        let cur = herglotz_measure(&levels[n - 1], bits)?;
        let b = x(j.q[n - 1].clone());
        let rho = &j.rho_sq[n - 1];
        let s: Vec<Real> = upper.atoms.iter().map(|a| a.t.clone()).collect();
        let w: Vec<Real> = upper.atoms.iter().map(|a| a.m.scale(rho)).collect();
        let m = cur.len();
        let top = s[m - 2].clone();

        let mut hyp = Report::new("hyp");
        hyp.push(Check::gt("stmt4.1.hyp.b", n, 0, b.clone(), top.scale(lam)));
        for k in 0..m - 2 {
            let sr = s[k + 1].div(&s[k])?;
            let wr = w[k + 1].div(&w[k])?;
            hyp.push(Check::gt("stmt4.1.hyp.s_ratio", n, k + 1, sr.clone(), x(lam.clone())));
            hyp.push(Check::gt("stmt4.1.hyp.w_ratio", n, k + 1, wr.clone(), sr.scale(kap)));
            hyp.push(Check::lt("stmt4.1.hyp.w_over_s2_ratio", n, k + 1, wr.div(&sr.sqr())?, x(th.clone())));
        }
        let sum_w = Real::sum(&w);
        hyp.push(Check::lt("stmt4.1.hyp.sum_w.lower", n, 0, top.sqr().scale(&(int(10) / th)), sum_w.clone()));
        hyp.push(Check::lt("stmt4.1.hyp.sum_w.upper", n, 0, sum_w, b.mul(&top).scale(&(int(10) * kap).recip())));
        let applicable = hyp.checks.iter().all(|c| c.verdict == Verdict::Pass);
        r.absorb(hyp);

        let mut concl = Report::new("concl");
        let lo_f = &one - int(2) / kap;
        let hi_f = &one + int(2) / lam + int(2) / kap;
        for k in 0..m - 1 {
            let gap = s[k].sub(cur.t(k));
            let wb = w[k].div(&b)?;
            concl.push(Check::lt("stmt4.1.gap.lower", n, k + 1, wb.scale(&lo_f), gap.clone()));
            concl.push(Check::lt("stmt4.1.gap.upper", n, k + 1, gap.clone(), wb.scale(&hi_f)));
            let c = pow(kap, k as i64 + 1 - m as i64) / int(5);
            concl.push(Check::lt("cor4.2", n, k + 1, gap, s[k].scale(&c)));
        }
        let t_top = cur.t(m - 1).clone();
        concl.push(Check::lt("stmt4.1.top.lower", n, m, b.clone(), t_top.clone()));
        concl.push(Check::lt("stmt4.1.top.upper", n, m, t_top, b.scale(&(&one + (lam * kap).recip()))));
        for c in concl.checks {
            r.push(if applicable { c } else { c.not_applicable("standing hypotheses not certified") });
        }
    }
    if j.size() == 1 {
        r.warnings.push("single entry: no reversed step".into());
    }
    Ok(r)
}
