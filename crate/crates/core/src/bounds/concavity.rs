//! The concavity estimate for cut sums over a fixed trunk, and the counting
//! bound on admissible permutation classes.

use std::collections::BTreeSet;

use super::constants::ln_c_k;
use super::{log_sum_exp, BoundsError, CheckReport};
use crate::hopf::{coproduct_tree, permutation_classes};
use crate::trees::{Alphabet, Catalog, Forest, RootedTree};

fn ln_forest_factorial(f: &Forest) -> f64 {
    f.factorial_f64().ln()
}

/// Both sides of
/// `Σ_{trunk=σ} β^{-c(p)}/p!^γ ≤ c_{|σ|} β^{-1} (Σ_{trunk=σ} 1/p!)^γ`
/// as logarithms. `None` when `σ` is never a trunk of `τ`.
pub fn concavity_sides(
    tree: &RootedTree,
    trunk: &Forest,
    gamma: f64,
    ln_beta: f64,
) -> Result<Option<(f64, f64)>, BoundsError> {
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(BoundsError::Domain(format!("gamma {gamma} outside (0, 1]")));
    }
    let mut weighted = Vec::new();
    let mut plain = Vec::new();
    for term in coproduct_tree(tree).into_iter().filter(|t| &t.trunk == trunk) {
        let ln_mult = num::ToPrimitive::to_f64(&term.multiplicity).unwrap_or(f64::INFINITY).ln();
        let ln_fact = ln_forest_factorial(&term.pruned);
        weighted.push(ln_mult - term.pruned.component_count() as f64 * ln_beta - gamma * ln_fact);
        plain.push(ln_mult - ln_fact);
    }
    if weighted.is_empty() {
        return Ok(None);
    }
    let lhs = log_sum_exp(&weighted);
    let rhs = ln_c_k(trunk.vertex_count(), gamma) - ln_beta + gamma * log_sum_exp(&plain);
    Ok(Some((lhs, rhs)))
}

/// The estimate for one pair at `ln β`; the estimate needs `β ≥ c_{|σ|}`.
pub fn check_concavity(
    tree: &RootedTree,
    trunk: &Forest,
    gamma: f64,
    ln_beta: f64,
) -> Result<CheckReport, BoundsError> {
    let mut r = CheckReport::new("concavity", format!("τ={tree} σ={trunk} γ={gamma}"));
    match concavity_sides(tree, trunk, gamma, ln_beta)? {
        Some((lhs, rhs)) => {
            r.record_log(|| format!("τ={tree} σ={trunk} γ={gamma} lnβ={ln_beta}"), lhs, rhs);
        }
        None => r.record_vacuous(),
    }
    Ok(r)
}

/// Distinct trunks of `tree` other than the tree itself (the empty trunk included).
pub fn proper_trunks(tree: &RootedTree) -> Vec<Forest> {
    let whole = tree.clone().into_forest();
    coproduct_tree(tree)
        .into_iter()
        .map(|t| t.trunk)
        .filter(|t| t != &whole)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

/// Every unlabelled tree with `1 ≤ |τ| ≤ max_size`, every proper trunk, each
/// `γ`, at `β = c_{|σ|}`.
pub fn concavity_sweep(max_size: usize, gammas: &[f64]) -> Result<CheckReport, BoundsError> {
    let catalog = Catalog::new(max_size, Alphabet::Unlabelled);
    let mut total = CheckReport::new("concavity", format!("|τ| ≤ {max_size}, γ ∈ {gammas:?}, β = c_|σ|"));
    for &gamma in gammas {
        for tree in catalog.trees_up_to(max_size) {
            for trunk in proper_trunks(tree) {
                let ln_beta = ln_c_k(trunk.vertex_count(), gamma);
                total.merge(check_concavity(tree, &trunk, gamma, ln_beta)?);
            }
        }
    }
    Ok(total)
}

/// `ln |P′_{τ,σ}| ≤ |σ|² k_{τ,σ}` for every proper non-empty trunk tree `σ`
/// of every unlabelled `τ` with `|τ| ≤ max_size`.
pub fn counting_sweep(max_size: usize) -> Result<CheckReport, BoundsError> {
    let catalog = Catalog::new(max_size, Alphabet::Unlabelled);
    let mut r = CheckReport::new("counting", format!("|τ| ≤ {max_size}"));
    for tree in catalog.trees_up_to(max_size) {
        for trunk in proper_trunks(tree) {
            let Some(sigma) = trunk.as_tree() else { continue };
            let classes = permutation_classes(tree, sigma)?;
            match classes.min_proper {
                Some(k) if classes.admissible > 0 => {
                    let s = sigma.vertex_count() as f64;
                    r.record_log(
                        || format!("τ={tree} σ={sigma} |P′|={} k={k}", classes.admissible),
                        (classes.admissible as f64).ln(),
                        s * s * k as f64,
                    );
                }
                _ => r.record_vacuous(),
            }
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> RootedTree {
        s.parse().unwrap()
    }

    #[test]
    fn empty_trunk_is_an_equality() {
        let tree = t("[*.*]");
        let (lhs, rhs) = concavity_sides(&tree, &Forest::empty(), 0.5, 0.0).unwrap().unwrap();
        assert!((lhs - rhs).abs() < 1e-14);
        assert!((lhs + 0.5 * 3f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn cherry_over_vertex_by_hand() {
        // Δ[**] restricted to trunk *: pruned ** with multiplicity 1.
        let tree = t("[*.*]");
        let sigma = Forest::single(RootedTree::leaf());
        let gamma = 0.5;
        let ln_beta = ln_c_k(1, gamma);
        let (lhs, rhs) = concavity_sides(&tree, &sigma, gamma, ln_beta).unwrap().unwrap();
        let beta = ln_beta.exp();
        assert!((lhs.exp() - beta.powi(-2)).abs() < 1e-15);
        assert!((rhs.exp() - 1.0).abs() < 1e-12);
        assert!(check_concavity(&tree, &sigma, gamma, ln_beta).unwrap().passed());
    }

    #[test]
    fn non_trunk_is_vacuous() {
        let r = check_concavity(&t("[*]"), &Forest::single(t("[*.*]")), 0.5, 1.0).unwrap();
        assert_eq!(r.vacuous, 1);
    }

    #[test]
    fn proper_trunks_of_ladder() {
        let trunks: Vec<String> = proper_trunks(&t("[[*]]")).iter().map(ToString::to_string).collect();
        assert_eq!(trunks.len(), 3);
        assert!(trunks.contains(&"1".to_string()));
    }

    #[test]
    fn small_sweeps_pass() {
        assert!(concavity_sweep(5, &[0.3, 0.5, 0.9]).unwrap().passed());
        let c = counting_sweep(5).unwrap();
        assert!(c.passed());
        assert!(c.checked > 0);
    }
}
