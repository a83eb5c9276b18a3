//! Remainder estimate of the degree-extension argument, checked on a
//! normalised path.
//!
//! With `‖X‖ = max_{1≤|τ|≤N} ‖X‖_{γ,τ}^{1/(γ|τ|)}` and `λ = (N!‖X‖)^γ Ĉ_N`,
//! the rescaled path `Y = X/λ^{|·|}` is checked against
//! `‖Σ_{k≥N+1} Y^{n-k}_{u,s} ⋆ Y^k_{s,t}‖_{T,γ,β} ≤ [S^(N+1)(ρ_u^{n/(N+1)})_{s,t}/(n-N-1)!]^γ`
//! at `β = Ĉ_N`.

use serde::Serialize;

use super::constants::Constants;
use super::decay::HolderNorms;
use super::kernel::kernel_value;
use super::{BoundsError, CheckReport};
use crate::character::{factorial_f64, Character};
use crate::hopf::coproduct_tree;
use crate::trees::Catalog;

/// Slack used for the remainder comparison.
pub const MAIN_LEMMA_EPS: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Normalisation {
    pub gamma: f64,
    pub truncation: usize,
    /// `‖X‖`.
    pub path_norm: f64,
    /// `ln λ`.
    pub ln_lambda: f64,
    /// `ln β`, with `β = Ĉ_N`.
    pub ln_beta: f64,
}

impl Normalisation {
    pub fn new(gamma: f64, norms: &HolderNorms) -> Result<Self, BoundsError> {
        let constants = Constants::new(gamma)?;
        let n = constants.truncation;
        let mut path_norm: f64 = 0.0;
        for k in 1..=n {
            let v = *norms.by_degree.get(&k).ok_or(BoundsError::MissingNorm(k))?;
            path_norm = path_norm.max(v.powf(1.0 / (gamma * k as f64)));
        }
        let ln_lambda = gamma * (factorial_f64(n) * path_norm).ln() + constants.ln_beta_threshold;
        Ok(Normalisation { gamma, truncation: n, path_norm, ln_lambda, ln_beta: constants.ln_beta_threshold })
    }
}

/// `X_{s,t}` for any `s ≤ t`.
pub trait TwoParameter {
    fn at(&self, s: f64, t: f64) -> Result<Character<f64>, BoundsError>;
}

impl<F> TwoParameter for F
where
    F: Fn(f64, f64) -> Result<Character<f64>, BoundsError>,
{
    fn at(&self, s: f64, t: f64) -> Result<Character<f64>, BoundsError> {
        self(s, t)
    }
}

/// The remainder estimate at degree `n` over `u ≤ s ≤ t` triples.
pub fn check_main_lemma_remainder(
    path: &impl TwoParameter,
    norm: &Normalisation,
    n: usize,
    triples: &[(f64, f64, f64)],
    catalog: &Catalog,
) -> Result<CheckReport, BoundsError> {
    let big_n = norm.truncation;
    let gamma = norm.gamma;
    let mut r = CheckReport::with_eps("main-lemma", format!("N={big_n} n={n}, {} triples", triples.len()), MAIN_LEMMA_EPS);
    let cuts: Vec<_> = catalog.trees(n).iter().map(|tree| (tree, coproduct_tree(tree))).collect();
    for &(u, s, t) in triples {
        if n <= big_n {
            // Empty sum on the left, indicator zero on the right.
            r.record(|| format!("n={n} u={u} s={s} t={t}"), 0.0, 0.0);
            continue;
        }
        let left = path.at(u, s)?;
        let right = path.at(s, t)?;
        let mut ln_lhs = f64::NEG_INFINITY;
        for (tree, terms) in &cuts {
            let mut sum = 0.0;
            for term in terms.iter().filter(|c| c.trunk.vertex_count() > big_n) {
                let mult = num::ToPrimitive::to_f64(&term.multiplicity).unwrap_or(f64::INFINITY);
                sum += mult * left.value(&term.pruned)? * right.value(&term.trunk)?;
            }
            let ln_norm = sum.abs().ln() - n as f64 * norm.ln_lambda
                + norm.ln_beta
                + gamma * (tree.factorial_f64().ln() - factorial_f64(n).ln());
            ln_lhs = ln_lhs.max(ln_norm);
        }
        let kernel = kernel_value(big_n + 1, n, u, s, t)? / factorial_f64(n - big_n - 1);
        r.record_log(|| format!("n={n} u={u} s={s} t={t}"), ln_lhs, gamma * kernel.ln());
    }
    Ok(r)
}

/// The induction hypothesis `‖Y^m_{s,t}‖_T ≤ (t-s)^{mγ}/m!^γ` for `1 ≤ m ≤ N`.
pub fn check_main_lemma_hypothesis(
    path: &impl TwoParameter,
    norm: &Normalisation,
    pairs: &[(f64, f64)],
    catalog: &Catalog,
) -> Result<CheckReport, BoundsError> {
    let gamma = norm.gamma;
    let mut r = CheckReport::with_eps("main-lemma-hypothesis", format!("N={}", norm.truncation), MAIN_LEMMA_EPS);
    for &(s, t) in pairs {
        let x = path.at(s, t)?;
        for m in 1..=norm.truncation {
            let mut ln_lhs = f64::NEG_INFINITY;
            for tree in catalog.trees(m) {
                let v = x.tree_value(tree)?.abs().ln() - m as f64 * norm.ln_lambda
                    + norm.ln_beta
                    + gamma * (tree.factorial_f64().ln() - factorial_f64(m).ln());
                ln_lhs = ln_lhs.max(v);
            }
            let ln_rhs = gamma * (m as f64 * (t - s).ln() - factorial_f64(m).ln());
            r.record_log(|| format!("m={m} s={s} t={t}"), ln_lhs, ln_rhs);
        }
    }
    Ok(r)
}

/// `u ≤ s ≤ t` on the dyadic grid `{i/2^level}` with `u < t`.
pub fn dyadic_triples(level: u32) -> Vec<(f64, f64, f64)> {
    let m = 1usize << level;
    let p = |i: usize| i as f64 / m as f64;
    let mut out = Vec::new();
    for a in 0..=m {
        for b in a..=m {
            for c in b..=m {
                if a < c {
                    out.push((p(a), p(b), p(c)));
                }
            }
        }
    }
    out
}
