//! Analytic estimates and the grid checks that exercise them.

pub mod concavity;
pub mod constants;
pub mod counterexample;
pub mod decay;
pub mod kernel;
pub mod lemmas;
pub mod main_lemma;
pub mod quadrature;

use std::io;

use serde::Serialize;
use thiserror::Error;

use crate::character::CharacterError;
use crate::hopf::HopfError;

/// Relative and absolute slack for ties.
pub const SLACK_EPS: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundsError {
    #[error("domain violation: {0}")]
    Domain(String),
    #[error("missing Hölder norm for degree {0}")]
    MissingNorm(usize),
    #[error(transparent)]
    Character(#[from] CharacterError),
    #[error(transparent)]
    Hopf(#[from] HopfError),
}

/// `lhs > rhs·(1+ε) + ε`.
pub fn violates(lhs: f64, rhs: f64, eps: f64) -> bool {
    lhs > rhs * (1.0 + eps) + eps || lhs.is_nan() || rhs.is_nan()
}

/// Same rule for values given by their logarithms.
pub fn violates_log(ln_lhs: f64, ln_rhs: f64, eps: f64) -> bool {
    if ln_lhs.is_nan() || ln_rhs.is_nan() {
        return true;
    }
    if ln_lhs == f64::NEG_INFINITY {
        return false;
    }
    ln_lhs > log_add_exp(ln_rhs + eps.ln_1p(), eps.ln())
}

pub fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// `ln Σ exp(xᵢ)`.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + xs.iter().map(|x| (x - hi).exp()).sum::<f64>().ln()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub params: String,
    pub lhs: f64,
    pub rhs: f64,
}

/// Outcome of checking one inequality over a parameter grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub schema: u32,
    pub lemma: String,
    pub grid: String,
    pub eps: f64,
    pub checked: usize,
    pub violations: usize,
    /// Cases recorded as vacuously true.
    pub vacuous: usize,
    /// Smallest `rhs - lhs` seen.
    pub worst_slack: f64,
    /// Largest `lhs / rhs` seen (over cases with `rhs > 0`).
    pub max_ratio: f64,
    pub tightest: Option<Witness>,
    pub witnesses: Vec<Witness>,
}

const MAX_WITNESSES: usize = 16;

impl CheckReport {
    pub fn new(lemma: impl Into<String>, grid: impl Into<String>) -> Self {
        Self::with_eps(lemma, grid, SLACK_EPS)
    }

    pub fn with_eps(lemma: impl Into<String>, grid: impl Into<String>, eps: f64) -> Self {
        CheckReport {
            schema: 1,
            lemma: lemma.into(),
            grid: grid.into(),
            eps,
            checked: 0,
            violations: 0,
            vacuous: 0,
            worst_slack: f64::INFINITY,
            max_ratio: 0.0,
            tightest: None,
            witnesses: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    pub fn record(&mut self, params: impl FnOnce() -> String, lhs: f64, rhs: f64) -> bool {
        let bad = violates(lhs, rhs, self.eps);
        let ratio = if rhs > 0.0 { lhs / rhs } else if lhs > 0.0 { f64::INFINITY } else { 0.0 };
        self.update(params, lhs, rhs, rhs - lhs, ratio, bad)
    }

    /// Record a case whose two sides are given as logarithms.
    pub fn record_log(&mut self, params: impl FnOnce() -> String, ln_lhs: f64, ln_rhs: f64) -> bool {
        let bad = violates_log(ln_lhs, ln_rhs, self.eps);
        let (lhs, rhs) = (ln_lhs.exp(), ln_rhs.exp());
        let ratio = if ln_lhs == f64::NEG_INFINITY { 0.0 } else { (ln_lhs - ln_rhs).exp() };
        self.update(params, lhs, rhs, rhs - lhs, ratio, bad)
    }

    fn update(
        &mut self,
        params: impl FnOnce() -> String,
        lhs: f64,
        rhs: f64,
        slack: f64,
        ratio: f64,
        bad: bool,
    ) -> bool {
        self.checked += 1;
        let tighter = self.tightest.as_ref().is_none_or(|_| ratio > self.max_ratio);
        self.max_ratio = self.max_ratio.max(ratio);
        self.worst_slack = self.worst_slack.min(slack);
        if bad || tighter {
            let w = Witness { params: params(), lhs, rhs };
            if tighter {
                self.tightest = Some(w.clone());
            }
            if bad {
                self.violations += 1;
                if self.witnesses.len() < MAX_WITNESSES {
                    self.witnesses.push(w);
                }
            }
        }
        !bad
    }

    pub fn record_vacuous(&mut self) {
        self.checked += 1;
        self.vacuous += 1;
    }

    pub fn merge(&mut self, other: CheckReport) {
        self.checked += other.checked;
        self.violations += other.violations;
        self.vacuous += other.vacuous;
        self.worst_slack = self.worst_slack.min(other.worst_slack);
        if other.max_ratio > self.max_ratio || self.tightest.is_none() {
            self.tightest = other.tightest.or(self.tightest.take());
        }
        self.max_ratio = self.max_ratio.max(other.max_ratio);
        let room = MAX_WITNESSES.saturating_sub(self.witnesses.len());
        self.witnesses.extend(other.witnesses.into_iter().take(room));
    }

    /// One line: lemma, verdict and the numbers that matter.
    pub fn summary(&self) -> String {
        format!(
            "{}: {} ({} checked, {} violations, worst slack {:.3e}, max ratio {:.6})",
            self.lemma,
            if self.passed() { "pass" } else { "FAIL" },
            self.checked,
            self.violations,
            self.worst_slack,
            self.max_ratio
        )
    }
}

/// CSV summary: lemma, grid, checked, violations, worst slack, max ratio.
pub fn write_csv_summary<W: io::Write>(reports: &[CheckReport], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["lemma", "grid", "checked", "violations", "worst_slack", "max_ratio"])?;
    for r in reports {
        w.write_record([
            r.lemma.clone(),
            r.grid.clone(),
            r.checked.to_string(),
            r.violations.to_string(),
            format!("{:e}", r.worst_slack),
            format!("{:e}", r.max_ratio),
        ])?;
    }
    w.flush()?;
    Ok(())
}
