//! Certified inequality records and their JSON/CSV forms.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::arith::Real;
use crate::error::Result;

/// Number of precision doublings attempted while verdicts stay indeterminate.
pub const MAX_DOUBLINGS: u32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Pass,
    Fail,
    Indeterminate,
    NotApplicable,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Indeterminate => "INDETERMINATE",
            Verdict::NotApplicable => "NOT_APPLICABLE",
        }
    }
}

/// How `lhs` relates to `rhs` in the claim being certified.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `lhs < rhs`
    Lt,
    /// `lhs <= rhs`
    Le,
    /// `lhs` lies inside the enclosure `rhs`
    In,
    /// the two enclosures share a point
    Meets,
}

pub fn decide(lhs: &Real, rel: Relation, rhs: &Real) -> Verdict {
    let (al, ah, bl, bh) = (lhs.lo(), lhs.hi(), rhs.lo(), rhs.hi());
    match rel {
        Relation::Lt => {
            if ah < bl {
                Verdict::Pass
            } else if al >= bh {
                Verdict::Fail
            } else {
                Verdict::Indeterminate
            }
        }
        Relation::Le => {
            if ah <= bl {
                Verdict::Pass
            } else if al > bh {
                Verdict::Fail
            } else {
                Verdict::Indeterminate
            }
        }
        Relation::In => {
            if bl <= al && ah <= bh {
                Verdict::Pass
            } else if ah < bl || al > bh {
                Verdict::Fail
            } else {
                Verdict::Indeterminate
            }
        }
        Relation::Meets => {
            if al <= bh && bl <= ah {
                Verdict::Pass
            } else {
                Verdict::Fail
            }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub statement_id: String,
    pub n: usize,
    pub k: usize,
    pub relation: Relation,
    pub lhs: Real,
    pub rhs: Real,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    pub fn new(id: impl Into<String>, n: usize, k: usize, lhs: Real, rel: Relation, rhs: Real) -> Self {
        let verdict = decide(&lhs, rel, &rhs);
        Check { statement_id: id.into(), n, k, relation: rel, lhs, rhs, verdict, note: None }
    }

    pub fn lt(id: impl Into<String>, n: usize, k: usize, lhs: Real, rhs: Real) -> Self {
        Check::new(id, n, k, lhs, Relation::Lt, rhs)
    }

    pub fn le(id: impl Into<String>, n: usize, k: usize, lhs: Real, rhs: Real) -> Self {
        Check::new(id, n, k, lhs, Relation::Le, rhs)
    }

    /// `lhs > rhs`, stored as `rhs < lhs`.
    pub fn gt(id: impl Into<String>, n: usize, k: usize, lhs: Real, rhs: Real) -> Self {
        Check::new(id, n, k, rhs, Relation::Lt, lhs)
    }

    pub fn within(id: impl Into<String>, n: usize, k: usize, value: Real, enclosure: Real) -> Self {
        Check::new(id, n, k, value, Relation::In, enclosure)
    }

    pub fn meets(id: impl Into<String>, n: usize, k: usize, a: Real, b: Real) -> Self {
        Check::new(id, n, k, a, Relation::Meets, b)
    }

    pub fn with_verdict(mut self, v: Verdict, note: impl Into<String>) -> Self {
        self.verdict = v;
        self.note = Some(note.into());
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn not_applicable(mut self, note: impl Into<String>) -> Self {
        self.verdict = Verdict::NotApplicable;
        self.note = Some(note.into());
        self
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub title: String,
    pub header: BTreeMap<String, String>,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<Table>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    pub pass: usize,
    pub fail: usize,
    pub indeterminate: usize,
    pub not_applicable: usize,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report { title: title.into(), ..Default::default() }
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, cs: impl IntoIterator<Item = Check>) {
        self.checks.extend(cs);
    }

    pub fn absorb(&mut self, other: Report) {
        self.checks.extend(other.checks);
        self.warnings.extend(other.warnings);
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.header.insert(key.to_string(), value.to_string());
    }

    pub fn tally(&self) -> Tally {
        let mut t = Tally::default();
        for c in &self.checks {
            match c.verdict {
                Verdict::Pass => t.pass += 1,
                Verdict::Fail => t.fail += 1,
                Verdict::Indeterminate => t.indeterminate += 1,
                Verdict::NotApplicable => t.not_applicable += 1,
            }
        }
        t
    }

    pub fn has_indeterminate(&self) -> bool {
        self.checks.iter().any(|c| c.verdict == Verdict::Indeterminate)
    }

    pub fn has_fail(&self) -> bool {
        self.checks.iter().any(|c| c.verdict == Verdict::Fail)
    }

    /// Checks whose id starts with `prefix`.
    pub fn select<'a>(&'a self, prefix: &'a str) -> impl Iterator<Item = &'a Check> + 'a {
        self.checks.iter().filter(move |c| c.statement_id.starts_with(prefix))
    }

    pub fn all_pass(&self, prefix: &str) -> bool {
        let mut any = false;
        for c in self.select(prefix) {
            any = true;
            if c.verdict != Verdict::Pass {
                return false;
            }
        }
        any
    }

    /// 0 when nothing failed or stayed open, 1 on a certified failure, 2 if indeterminate.
    pub fn exit_code(&self) -> i32 {
        if self.has_fail() {
            1
        } else if self.has_indeterminate() {
            2
        } else {
            0
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("statement_id,n,k,lhs_lo,lhs_hi,rhs_lo,rhs_hi,verdict\n");
        for c in &self.checks {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                c.statement_id,
                c.n,
                c.k,
                c.lhs.lo_string(),
                c.lhs.hi_string(),
                c.rhs.lo_string(),
                c.rhs.hi_string(),
                c.verdict.as_str()
            );
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Re-run `run` at doubled precision while it reports indeterminate verdicts or runs out of precision.
pub fn escalate(bits: u32, mut run: impl FnMut(u32) -> Result<Report>) -> Result<Report> {
    let mut b = bits;
    for round in 0..=MAX_DOUBLINGS {
        let mut r = match run(b) {
            Err(e) if e.is_precision() && round < MAX_DOUBLINGS => {
                b *= 2;
                continue;
            }
            other => other?,
        };
        if !r.has_indeterminate() || round == MAX_DOUBLINGS {
            r.set("bits_requested", bits);
            r.set("bits_used", b);
            return Ok(r);
        }
        b *= 2;
    }
    unreachable!()
}
