//! Sensitivity of the first entries to a receding top atom.

use num_traits::Zero;
use serde::Serialize;

use super::{pole_weight_decompose, rational_chain};
use crate::arith::rat::{format_rat, serde_rat, Rat};
use crate::arith::Real;
use crate::error::{Error, Result};
use crate::measure::{Atom, DiscreteMeasure};
use crate::report::{Check, Report, Table};

#[derive(Clone, Debug, Serialize)]
pub struct TailRow {
    #[serde(with = "serde_rat")]
    pub t_top: Rat,
    #[serde(with = "serde_rat")]
    pub q2: Rat,
    #[serde(with = "serde_rat")]
    pub q2_over_t_top: Rat,
    #[serde(with = "serde_rat")]
    pub q2_over_t_prev: Rat,
    pub s_over_t_top: Real,
    pub w_over_t_top_sq: Real,
}

/// Appends `(t, m_top)` to `base` for each `t`, normalizes, and tabulates `q_2` together with
/// the top pole and weight of the first step.
pub fn tail_sensitivity_experiment(base: &DiscreteMeasure, m_top: &Rat, t_values: &[Rat], bits: u32) -> Result<(Vec<TailRow>, Report)> {
    if base.len() < 2 {
        return Err(Error::TooFewAtoms);
    }
    let t_prev = base.atoms().last().unwrap().t.clone();
    let mut rows = Vec::with_capacity(t_values.len());
    let mut r = Report::new("tail");
    for (i, t) in t_values.iter().enumerate() {
        if t <= &t_prev {
            return Err(Error::InvalidInput("appended atom must lie above the base support".into()));
        }
        let mut atoms = base.atoms().to_vec();
        atoms.push(Atom { t: t.clone(), m: m_top.clone() });
        let raw = DiscreteMeasure::new(atoms)?;
        let below: Rat = base.total_mass() / raw.total_mass();
        let mu = raw.normalize();
        let (j, _) = rational_chain(&mu)?;
        let step = pole_weight_decompose(&mu, bits)?;
        let n = mu.len();
        let s = step.poles[n - 2].clone();
        let w = step.weights[n - 2].clone();
        let tt = Real::Exact(t.clone());
        let s_ratio = s.div(&tt)?;
        let w_ratio = w.div(&tt.sqr())?;
        r.push(Check::gt("tail.top_pole_bound", i + 1, n - 1, s_ratio.clone(), Real::Exact(below)));
        let mut g = Real::Exact(Rat::zero());
        for a in mu.atoms() {
            g = g.add(&Real::Exact(a.m.clone()).div(&s.sub(&Real::Exact(a.t.clone())).sqr())?);
        }
        r.push(Check::meets("tail.root_identity", i + 1, n - 1, w.mul(&g), Real::Exact(Rat::from_integer(1.into()))));
        let q2 = j.q[1].clone();
        rows.push(TailRow {
            t_top: t.clone(),
            q2_over_t_top: &q2 / t,
            q2_over_t_prev: &q2 / &t_prev,
            q2,
            s_over_t_top: s_ratio,
            w_over_t_top_sq: w_ratio,
        });
    }
    let columns = ["t_N", "q_2", "q_2/t_N", "q_2/t_{N-1}", "s_{N-1}/t_N", "w_{N-1}/t_N^2"];
    r.table = Some(Table {
        columns: columns.iter().map(|c| c.to_string()).collect(),
        rows: rows
            .iter()
            .map(|row| {
                vec![
                    format_rat(&row.t_top),
                    format_rat(&row.q2),
                    format_rat(&row.q2_over_t_top),
                    format_rat(&row.q2_over_t_prev),
                    format!("[{}, {}]", row.s_over_t_top.lo_string(), row.s_over_t_top.hi_string()),
                    format!("[{}, {}]", row.w_over_t_top_sq.lo_string(), row.w_over_t_top_sq.hi_string()),
                ]
            })
            .collect(),
    });
    Ok((rows, r))
}
