mod common;

use branched::trees::enumerate_forests;
use branched::{Alphabet, Catalog, Forest, RootedTree};
use proptest::prelude::*;

#[test]
fn unlabelled_counts_match_recurrence_up_to_eight() {
    let oracle = common::coloured_tree_counts(8, 1);
    let catalog = Catalog::new(8, Alphabet::Unlabelled);
    for n in 1..=8 {
        assert_eq!(catalog.trees(n).len() as u128, oracle[n], "n = {n}");
    }
    assert_eq!(&oracle[1..=8], &[1, 1, 2, 4, 9, 20, 48, 115]);
}

#[test]
fn coloured_counts_match_recurrence() {
    for d in 2..=3u16 {
        let oracle = common::coloured_tree_counts(5, d as u128);
        let catalog = Catalog::new(5, Alphabet::Labels(d));
        for n in 1..=5 {
            assert_eq!(catalog.trees(n).len() as u128, oracle[n], "d = {d}, n = {n}");
        }
    }
}

#[test]
fn forests_on_n_vertices_are_trees_on_n_plus_one() {
    // Grafting onto a new root is a bijection.
    let trees = common::coloured_tree_counts(8, 1);
    for n in 0..=7 {
        assert_eq!(enumerate_forests(n, Alphabet::Unlabelled).len() as u128, trees[n + 1]);
    }
}

#[test]
fn factorial_bounds_and_extremes() {
    let catalog = Catalog::new(8, Alphabet::Unlabelled);
    for n in 1..=8 {
        let n_fact = common::int_factorial(n) as u128;
        for tree in catalog.trees(n) {
            let f = common::factorial_oracle(tree);
            assert_eq!(tree.factorial(), f.into());
            assert!(1 <= f && f <= n_fact);
        }
        assert_eq!(common::factorial_oracle(&RootedTree::ladder(n)), n_fact);
    }
    for k in 1..=7 {
        assert_eq!(common::factorial_oracle(&RootedTree::bushy(k)), k as u128 + 1);
    }
}

fn tree_strategy() -> impl Strategy<Value = RootedTree> {
    let leaf = Just(RootedTree::leaf());
    leaf.prop_recursive(4, 12, 4, |inner| {
        prop::collection::vec(inner, 1..4).prop_map(|kids| RootedTree::join(Forest::from_trees(kids), RootedTree::leaf().label()))
    })
}

proptest! {
    #[test]
    fn text_form_round_trips(t in tree_strategy()) {
        let text = t.to_string();
        let back: RootedTree = text.parse().unwrap();
        prop_assert_eq!(&back, &t);
        prop_assert_eq!(back.to_string(), text);
    }

    #[test]
    fn child_order_does_not_matter(kids in prop::collection::vec(tree_strategy(), 1..4)) {
        let mut reversed = kids.clone();
        reversed.reverse();
        let label = RootedTree::leaf().label();
        prop_assert_eq!(
            RootedTree::join(Forest::from_trees(kids), label),
            RootedTree::join(Forest::from_trees(reversed), label)
        );
    }

    #[test]
    fn forest_factorial_is_multiplicative(a in prop::collection::vec(tree_strategy(), 0..3), b in prop::collection::vec(tree_strategy(), 0..3)) {
        let (fa, fb) = (Forest::from_trees(a), Forest::from_trees(b));
        prop_assert_eq!(fa.multiply(&fb).factorial(), fa.factorial() * fb.factorial());
        prop_assert_eq!(fa.multiply(&fb).vertex_count(), fa.vertex_count() + fb.vertex_count());
    }
}
