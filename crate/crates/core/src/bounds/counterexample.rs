//! Why the neoclassical inequality has no tree analogue: a cut-weighted sum
//! over the bushy tree that grows geometrically.

use num::ToPrimitive;
use serde::Serialize;

use super::{log_sum_exp, BoundsError};
use crate::hopf::coproduct_tree;
use crate::trees::RootedTree;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CounterexampleParams {
    pub gamma: f64,
    pub beta: f64,
    pub a: f64,
    pub b: f64,
}

impl CounterexampleParams {
    pub fn validate(&self) -> Result<(), BoundsError> {
        let CounterexampleParams { gamma, beta, a, b } = *self;
        if !(0.0..1.0).contains(&gamma) || !(beta > 0.0 && a > 0.0 && b > 0.0) {
            return Err(BoundsError::Domain(format!(
                "need 0 ≤ γ < 1 and a, b, β > 0, got γ={gamma} β={beta} a={a} b={b}"
            )));
        }
        Ok(())
    }

    /// `(a^γ/β + b^γ) / (a+b)^γ`, the growth rate of the lower bound.
    pub fn ratio(&self) -> f64 {
        let g = self.gamma;
        (self.a.powf(g) / self.beta + self.b.powf(g)) / (self.a + self.b).powf(g)
    }

    pub fn diverges(&self) -> bool {
        self.ratio() > 1.0
    }
}

/// Logarithm of
/// `(a+b)^{-γ|τ|} Σ_cuts mult (τ!/(p! t!))^γ β^{-c(p)-c(t)} a^{γ|p|} b^{γ|t|}`.
pub fn ln_cut_sum(tree: &RootedTree, params: &CounterexampleParams) -> Result<f64, BoundsError> {
    params.validate()?;
    let CounterexampleParams { gamma, beta, a, b } = *params;
    let ln_tree = tree.factorial_f64().ln();
    let terms: Vec<f64> = coproduct_tree(tree)
        .iter()
        .map(|t| {
            let ln_mult = t.multiplicity.to_f64().unwrap_or(f64::INFINITY).ln();
            let ln_ratio = ln_tree - t.pruned.factorial_f64().ln() - t.trunk.factorial_f64().ln();
            let components = (t.pruned.component_count() + t.trunk.component_count()) as f64;
            ln_mult + gamma * ln_ratio - components * beta.ln()
                + gamma * t.pruned.vertex_count() as f64 * a.ln()
                + gamma * t.trunk.vertex_count() as f64 * b.ln()
        })
        .collect();
    Ok(log_sum_exp(&terms) - gamma * tree.vertex_count() as f64 * (a + b).ln())
}

/// `ln[(a+b)^{-γ(n+1)} b^γ β^{-1} (a^γ/β + b^γ)^n]`.
pub fn ln_lower_bound(n: usize, params: &CounterexampleParams) -> f64 {
    let CounterexampleParams { gamma, beta, a, b } = *params;
    let n = n as f64;
    -gamma * (n + 1.0) * (a + b).ln() + gamma * b.ln() - beta.ln() + n * (a.powf(gamma) / beta + b.powf(gamma)).ln()
}

/// One row of the counterexample series, for the bushy tree with `n` leaves.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CounterexampleRow {
    pub n: usize,
    pub exact_sum: f64,
    pub lower_bound: f64,
    pub ln_exact_sum: f64,
    pub ln_lower_bound: f64,
}

/// `(exact_sum, lower_bound)` for the root with `n` leaf children.
pub fn counterexample_sum(n: usize, params: &CounterexampleParams) -> Result<(f64, f64), BoundsError> {
    let row = counterexample_row(n, params)?;
    Ok((row.exact_sum, row.lower_bound))
}

pub fn counterexample_row(n: usize, params: &CounterexampleParams) -> Result<CounterexampleRow, BoundsError> {
    if n == 0 {
        return Err(BoundsError::Domain("need n ≥ 1".into()));
    }
    let ln_exact_sum = ln_cut_sum(&RootedTree::bushy(n), params)?;
    let ln_lower_bound = ln_lower_bound(n, params);
    Ok(CounterexampleRow {
        n,
        exact_sum: ln_exact_sum.exp(),
        lower_bound: ln_lower_bound.exp(),
        ln_exact_sum,
        ln_lower_bound,
    })
}

pub fn counterexample_series(n_max: usize, params: &CounterexampleParams) -> Result<Vec<CounterexampleRow>, BoundsError> {
    (1..=n_max).map(|n| counterexample_row(n, params)).collect()
}
