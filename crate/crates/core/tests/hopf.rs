use std::collections::BTreeMap;

use branched::hopf::{
    admissible_cuts, binomial, coproduct_forest, coproduct_tree, cut_sum_over_trunk, cut_sum_over_trunk_exact,
    factored_cut_sum, is_coassociative_on, pruned_weight, satisfies_counit_on, tree_binomial,
};
use branched::scalar::rational;
use branched::{Alphabet, Catalog, Forest, RootedTree};
use num::{BigRational, BigUint, One, ToPrimitive};
use proptest::prelude::*;

/// Admissible edge sets of `τ`: `Π_children (1 + K(child))`, where `1` is
/// cutting the edge to that child.
fn admissible_edge_sets(tree: &RootedTree) -> u128 {
    tree.children().iter().map(|c| 1 + admissible_edge_sets(c)).product()
}

#[test]
fn cut_multiplicities_count_edge_sets() {
    let catalog = Catalog::new(8, Alphabet::Unlabelled);
    for tree in catalog.trees_up_to(8) {
        let total: BigUint = coproduct_tree(tree).iter().map(|t| t.multiplicity.clone()).sum();
        // Every edge set plus the cut above the root.
        assert_eq!(total, BigUint::from(admissible_edge_sets(tree) + 1), "{tree}");
        assert_eq!(admissible_cuts(tree).len() as u128, admissible_edge_sets(tree) + 1, "{tree}");
    }
}

#[test]
fn grading_and_counit_terms() {
    let catalog = Catalog::new(6, Alphabet::Unlabelled);
    for f in catalog.forests_up_to(6) {
        let terms = coproduct_forest(f);
        let mut seen: BTreeMap<(Forest, Forest), usize> = BTreeMap::new();
        for t in &terms {
            assert_eq!(t.pruned.vertex_count() + t.trunk.vertex_count(), f.vertex_count());
            assert!(t.multiplicity >= BigUint::one());
            *seen.entry((t.pruned.clone(), t.trunk.clone())).or_default() += 1;
        }
        assert!(seen.values().all(|&c| c == 1), "terms not aggregated for {f}");
        let one = |p: &Forest, q: &Forest| {
            terms.iter().find(|t| &t.pruned == p && &t.trunk == q).map(|t| t.multiplicity.clone())
        };
        assert_eq!(one(&Forest::empty(), f), Some(BigUint::one()));
        assert_eq!(one(f, &Forest::empty()), Some(BigUint::one()));
    }
}

#[test]
fn coassociative_and_counital_on_small_forests() {
    let catalog = Catalog::new(6, Alphabet::Unlabelled);
    for f in catalog.forests_up_to(6) {
        assert!(is_coassociative_on(f), "{f}");
        assert!(satisfies_counit_on(f), "{f}");
    }
}

#[test]
fn labelled_forests_are_coassociative() {
    let catalog = Catalog::new(4, Alphabet::Labels(2));
    for f in catalog.forests_up_to(4) {
        assert!(is_coassociative_on(f), "{f}");
    }
}

#[test]
fn tree_binomial_up_to_seven() {
    let catalog = Catalog::new(7, Alphabet::Unlabelled);
    for tree in catalog.trees_up_to(7) {
        let n = tree.vertex_count();
        for l in 0..=n {
            assert_eq!(tree_binomial(tree, l).unwrap(), BigRational::from_integer(binomial(n, l).into()), "{tree} {l}");
        }
    }
    let cherry: RootedTree = "[*.*]".parse().unwrap();
    assert_eq!(tree_binomial(&cherry, 1).unwrap(), rational(3, 1));
}

#[test]
fn induction_identity_exact_and_float() {
    let catalog = Catalog::new(6, Alphabet::Unlabelled);
    let beta = BigRational::one();
    for tree in catalog.trees_up_to(6) {
        for trunk in catalog.trees_up_to(tree.vertex_count()) {
            let sigma = trunk.clone().into_forest();
            let brute = cut_sum_over_trunk_exact(tree, &sigma, &beta);
            let weight = |p: &Forest| -> BigRational {
                BigRational::new(1.into(), num::BigInt::from(p.factorial()))
            };
            let Ok(factored) = factored_cut_sum(tree, trunk, weight) else {
                // σ has more children than τ, so it is never a trunk.
                assert_eq!(brute, BigRational::from_integer(0.into()), "τ={tree} σ={trunk}");
                continue;
            };
            assert_eq!(brute, factored, "τ={tree} σ={trunk}");
            let half = factored_cut_sum(tree, trunk, |p: &Forest| pruned_weight(p, 0.5, 1.7)).unwrap();
            let direct = cut_sum_over_trunk(tree, &sigma, 0.5, 1.7);
            assert!((half - direct).abs() <= 1e-12 * direct.abs().max(1.0), "τ={tree} σ={trunk}");
        }
    }
}

fn small_forest() -> impl Strategy<Value = Forest> {
    let catalog = Catalog::new(4, Alphabet::Unlabelled);
    let trees: Vec<RootedTree> = catalog.trees_up_to(4).cloned().collect();
    prop::collection::vec(prop::sample::select(trees), 0..3).prop_map(Forest::from_trees)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn coproduct_is_multiplicative(a in small_forest(), b in small_forest()) {
        // Δ(ab) = Δ(a)Δ(b), compared as aggregated term maps.
        let collect = |terms: Vec<branched::hopf::CutTerm>| {
            let mut m: BTreeMap<(Forest, Forest), BigUint> = BTreeMap::new();
            for t in terms {
                *m.entry((t.pruned, t.trunk)).or_default() += t.multiplicity;
            }
            m
        };
        let lhs = collect(coproduct_forest(&a.multiply(&b)));
        let mut rhs: BTreeMap<(Forest, Forest), BigUint> = BTreeMap::new();
        for x in coproduct_forest(&a) {
            for y in coproduct_forest(&b) {
                let key = (x.pruned.multiply(&y.pruned), x.trunk.multiply(&y.trunk));
                *rhs.entry(key).or_default() += &x.multiplicity * &y.multiplicity;
            }
        }
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn products_stay_coassociative(a in small_forest(), b in small_forest()) {
        prop_assert!(is_coassociative_on(&a.multiply(&b)));
    }

    #[test]
    fn trunk_sums_add_up(t in prop::sample::select(Catalog::new(6, Alphabet::Unlabelled).trees_up_to(6).cloned().collect::<Vec<_>>())) {
        // Summing over every trunk recovers the full weighted cut sum.
        let all: f64 = coproduct_tree(&t)
            .iter()
            .map(|c| c.multiplicity.to_f64().unwrap() * pruned_weight(&c.pruned, 0.7, 2.0))
            .sum();
        let trunks: std::collections::BTreeSet<Forest> = coproduct_tree(&t).into_iter().map(|c| c.trunk).collect();
        let by_trunk: f64 = trunks.iter().map(|s| cut_sum_over_trunk(&t, s, 0.7, 2.0)).sum();
        prop_assert!((all - by_trunk).abs() < 1e-12 * all);
    }
}
