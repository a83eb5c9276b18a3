//! The Connes-Kreimer coproduct and the cut sums built on it.
//!
//! Every coproduct term is written `pruned ⊗ trunk`: the pruned forest is the
//! part cut away from the root, the trunk is what keeps the root.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul};

use num::{BigInt, BigRational, BigUint, One, Zero};
use thiserror::Error;

use crate::scalar::Scalar;
use crate::trees::{Forest, RootedTree};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HopfError {
    #[error("trunk has {trunk} children but the tree only has {tree}")]
    ArityMismatch { tree: usize, trunk: usize },
    #[error("degree {l} outside 0..={size}")]
    DegreeOutOfRange { l: usize, size: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutTerm {
    pub pruned: Forest,
    pub trunk: Forest,
    pub multiplicity: BigUint,
}

impl fmt::Display for CutTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ⊗ {} ×{}", self.pruned, self.trunk, self.multiplicity)
    }
}

type CutMap = BTreeMap<(Forest, Forest), BigUint>;

fn unit_map() -> CutMap {
    let mut m = CutMap::new();
    m.insert((Forest::empty(), Forest::empty()), BigUint::one());
    m
}

fn multiply_into(acc: &CutMap, terms: &[CutTerm]) -> CutMap {
    let mut out = CutMap::new();
    for ((p, t), m) in acc {
        for term in terms {
            let key = (p.multiply(&term.pruned), t.multiply(&term.trunk));
            *out.entry(key).or_default() += m * &term.multiplicity;
        }
    }
    out
}

fn into_terms(map: CutMap) -> Vec<CutTerm> {
    map.into_iter()
        .map(|((pruned, trunk), multiplicity)| CutTerm { pruned, trunk, multiplicity })
        .collect()
}

/// `Δτ`, aggregated by `(pruned, trunk)`, sorted.
pub fn coproduct_tree(tree: &RootedTree) -> Vec<CutTerm> {
    let mut acc = unit_map();
    let mut previous: Option<(&RootedTree, Vec<CutTerm>)> = None;
    for child in tree.children() {
        let terms = match previous.take() {
            Some((prev, terms)) if prev == child => terms,
            _ => coproduct_tree(child),
        };
        acc = multiply_into(&acc, &terms);
        previous = Some((child, terms));
    }
    let mut out = CutMap::new();
    for ((pruned, trunk_children), m) in acc {
        let trunk = Forest::single(RootedTree::join(trunk_children, tree.label()));
        *out.entry((pruned, trunk)).or_default() += m;
    }
    *out.entry((tree.clone().into_forest(), Forest::empty())).or_default() += 1u32;
    into_terms(out)
}

/// `Δf = Π Δτᵢ` over the components of `f`.
pub fn coproduct_forest(forest: &Forest) -> Vec<CutTerm> {
    let mut acc = unit_map();
    let mut previous: Option<(&RootedTree, Vec<CutTerm>)> = None;
    for tree in forest.trees() {
        let terms = match previous.take() {
            Some((prev, terms)) if prev == tree => terms,
            _ => coproduct_tree(tree),
        };
        acc = multiply_into(&acc, &terms);
        previous = Some((tree, terms));
    }
    into_terms(acc)
}

/// One admissible cut given by its edges. Edges are named by the preorder
/// index of their lower vertex (the root is vertex 0).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibleCut {
    pub edges: Vec<usize>,
    /// The cut that removes the whole tree, giving `τ ⊗ 1`.
    pub removes_root: bool,
    pub pruned: Forest,
    pub trunk: Forest,
}

/// Every admissible cut, one entry per edge set, built by choosing cut, keep
/// or descend for each edge so no root path is cut twice.
pub fn admissible_cuts(tree: &RootedTree) -> Vec<AdmissibleCut> {
    let mut out: Vec<AdmissibleCut> = rooted_cuts(tree, 0)
        .into_iter()
        .map(|(edges, pruned, trunk)| AdmissibleCut {
            edges,
            removes_root: false,
            pruned: Forest::from_trees(pruned),
            trunk: Forest::single(trunk),
        })
        .collect();
    out.push(AdmissibleCut {
        edges: Vec::new(),
        removes_root: true,
        pruned: tree.clone().into_forest(),
        trunk: Forest::empty(),
    });
    out
}

type RootedCut = (Vec<usize>, Vec<RootedTree>, RootedTree);

fn rooted_cuts(tree: &RootedTree, index: usize) -> Vec<RootedCut> {
    // Partial products: (edges, pruned trees, trunk children).
    let mut partial: Vec<(Vec<usize>, Vec<RootedTree>, Vec<RootedTree>)> =
        vec![(Vec::new(), Vec::new(), Vec::new())];
    let mut child_index = index + 1;
    for child in tree.children() {
        let mut options: Vec<(Vec<usize>, Vec<RootedTree>, Option<RootedTree>)> =
            vec![(vec![child_index], vec![child.clone()], None)];
        for (e, p, t) in rooted_cuts(child, child_index) {
            options.push((e, p, Some(t)));
        }
        let mut next = Vec::with_capacity(partial.len() * options.len());
        for (e0, p0, t0) in &partial {
            for (e1, p1, t1) in &options {
                let mut e = e0.clone();
                e.extend_from_slice(e1);
                let mut p = p0.clone();
                p.extend_from_slice(p1);
                let mut t = t0.clone();
                t.extend(t1.iter().cloned());
                next.push((e, p, t));
            }
        }
        partial = next;
        child_index += child.vertex_count();
    }
    partial
        .into_iter()
        .map(|(mut e, p, t)| {
            e.sort_unstable();
            (e, p, RootedTree::join(Forest::from_trees(t), tree.label()))
        })
        .collect()
}

/// Aggregate explicit cuts into coproduct terms.
pub fn aggregate_cuts(cuts: &[AdmissibleCut]) -> Vec<CutTerm> {
    let mut map = CutMap::new();
    for c in cuts {
        *map.entry((c.pruned.clone(), c.trunk.clone())).or_default() += 1u32;
    }
    into_terms(map)
}

/// Finite linear combination of forests with rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HopfElement {
    terms: BTreeMap<Forest, BigRational>,
}

impl HopfElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn forest(f: Forest) -> Self {
        let mut e = Self::zero();
        e.add_term(f, BigRational::one());
        e
    }

    pub fn add_term(&mut self, f: Forest, c: BigRational) {
        add_coefficient(&mut self.terms, f, c);
    }

    pub fn terms(&self) -> &BTreeMap<Forest, BigRational> {
        &self.terms
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = Self::zero();
        for (f, v) in &self.terms {
            out.add_term(f.clone(), v * c);
        }
        out
    }

    pub fn coproduct(&self) -> Tensor2 {
        let mut out = Tensor2::default();
        for (f, c) in &self.terms {
            for term in coproduct_forest(f) {
                let coeff = c * BigRational::from_integer(BigInt::from(term.multiplicity));
                add_coefficient(&mut out.terms, (term.pruned, term.trunk), coeff);
            }
        }
        out
    }
}

fn add_coefficient<K: Ord>(map: &mut BTreeMap<K, BigRational>, key: K, c: BigRational) {
    if c.is_zero() {
        return;
    }
    match map.entry(key) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

impl Add for &HopfElement {
    type Output = HopfElement;

    fn add(self, rhs: &HopfElement) -> HopfElement {
        let mut out = self.clone();
        for (f, c) in &rhs.terms {
            out.add_term(f.clone(), c.clone());
        }
        out
    }
}

impl Mul for &HopfElement {
    type Output = HopfElement;

    fn mul(self, rhs: &HopfElement) -> HopfElement {
        let mut out = HopfElement::zero();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                out.add_term(a.multiply(b), x * y);
            }
        }
        out
    }
}

/// Element of `H ⊗ H`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Tensor2 {
    terms: BTreeMap<(Forest, Forest), BigRational>,
}

/// Element of `H ⊗ H ⊗ H`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Tensor3 {
    terms: BTreeMap<(Forest, Forest, Forest), BigRational>,
}

impl Tensor2 {
    pub fn terms(&self) -> &BTreeMap<(Forest, Forest), BigRational> {
        &self.terms
    }

    /// `(Δ ⊗ id)`.
    pub fn coproduct_left(&self) -> Tensor3 {
        let mut out = Tensor3::default();
        for ((a, b), c) in &self.terms {
            for t in coproduct_forest(a) {
                let coeff = c * BigRational::from_integer(BigInt::from(t.multiplicity));
                add_coefficient(&mut out.terms, (t.pruned, t.trunk, b.clone()), coeff);
            }
        }
        out
    }

    /// `(id ⊗ Δ)`.
    pub fn coproduct_right(&self) -> Tensor3 {
        let mut out = Tensor3::default();
        for ((a, b), c) in &self.terms {
            for t in coproduct_forest(b) {
                let coeff = c * BigRational::from_integer(BigInt::from(t.multiplicity));
                add_coefficient(&mut out.terms, (a.clone(), t.pruned, t.trunk), coeff);
            }
        }
        out
    }
}

impl Tensor3 {
    pub fn terms(&self) -> &BTreeMap<(Forest, Forest, Forest), BigRational> {
        &self.terms
    }
}

/// `Σ_{trunk = σ} mult · weight(pruned)`.
pub fn cut_sum_over_trunk_with<S: Scalar>(
    tree: &RootedTree,
    trunk: &Forest,
    weight: impl Fn(&Forest) -> S,
) -> S {
    coproduct_tree(tree)
        .iter()
        .filter(|t| &t.trunk == trunk)
        .fold(S::zero(), |acc, t| acc + S::from_biguint(&t.multiplicity) * weight(&t.pruned))
}

/// `β^{-c(p)} / (p!)^γ`.
pub fn pruned_weight(pruned: &Forest, gamma: f64, beta: f64) -> f64 {
    beta.powi(-(pruned.component_count() as i32)) / pruned.factorial_f64().powf(gamma)
}

/// `Σ_{trunk = σ} β^{-c(pruned)} / pruned!^γ`; zero when `σ` is never a trunk.
pub fn cut_sum_over_trunk(tree: &RootedTree, trunk: &Forest, gamma: f64, beta: f64) -> f64 {
    cut_sum_over_trunk_with(tree, trunk, |p| pruned_weight(p, gamma, beta))
}

/// Exact `γ = 1` version of [`cut_sum_over_trunk`].
pub fn cut_sum_over_trunk_exact(tree: &RootedTree, trunk: &Forest, beta: &BigRational) -> BigRational {
    cut_sum_over_trunk_with(tree, trunk, |p| exact_weight(p, beta))
}

fn exact_weight(pruned: &Forest, beta: &BigRational) -> BigRational {
    let denom = num::pow(beta.clone(), pruned.component_count())
        * BigRational::from_integer(BigInt::from(pruned.factorial()));
    denom.recip()
}

/// Sizes of the permutation classes attached to a tree and a trunk candidate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermutationClasses {
    /// Distinct arrangements of the trunk's children (padded with empties).
    pub arrangements: usize,
    /// Arrangements where every slot is a trunk of the matching child.
    pub admissible: usize,
    /// Fewest slots holding a proper trunk, over admissible arrangements.
    pub min_proper: Option<usize>,
}

/// Distinct orderings of the trunk's children padded with empty trees to the
/// arity of `tree`. Each slot is the empty forest or a single tree.
pub fn padded_arrangements(tree: &RootedTree, trunk: &RootedTree) -> Result<Vec<Vec<Forest>>, HopfError> {
    let n = tree.children().len();
    let m = trunk.children().len();
    if m > n {
        return Err(HopfError::ArityMismatch { tree: n, trunk: m });
    }
    let mut items: BTreeMap<Forest, usize> = BTreeMap::new();
    for c in trunk.children() {
        *items.entry(c.clone().into_forest()).or_default() += 1;
    }
    if n > m {
        *items.entry(Forest::empty()).or_default() += n - m;
    }
    let mut counts: Vec<(Forest, usize)> = items.into_iter().collect();
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    fn go(counts: &mut [(Forest, usize)], n: usize, current: &mut Vec<Forest>, out: &mut Vec<Vec<Forest>>) {
        if current.len() == n {
            out.push(current.clone());
            return;
        }
        for i in 0..counts.len() {
            if counts[i].1 > 0 {
                counts[i].1 -= 1;
                current.push(counts[i].0.clone());
                go(counts, n, current, out);
                current.pop();
                counts[i].1 += 1;
            }
        }
    }
    go(&mut counts, n, &mut current, &mut out);
    Ok(out)
}

fn trunk_set(tree: &RootedTree) -> BTreeSet<Forest> {
    coproduct_tree(tree).into_iter().map(|t| t.trunk).collect()
}

pub fn permutation_classes(tree: &RootedTree, trunk: &RootedTree) -> Result<PermutationClasses, HopfError> {
    let arrangements = padded_arrangements(tree, trunk)?;
    let mut admissible = 0;
    let mut min_proper: Option<usize> = None;
    if tree.label() == trunk.label() {
        let trunks: Vec<BTreeSet<Forest>> = tree.children().iter().map(trunk_set).collect();
        for a in &arrangements {
            let fits = a.iter().zip(&trunks).all(|(slot, set)| set.contains(slot));
            if !fits {
                continue;
            }
            admissible += 1;
            let proper = a
                .iter()
                .zip(tree.children())
                .filter(|(slot, child)| slot.as_tree() != Some(*child))
                .count();
            min_proper = Some(min_proper.map_or(proper, |k| k.min(proper)));
        }
    }
    Ok(PermutationClasses { arrangements: arrangements.len(), admissible, min_proper })
}

/// `Σ_{π} Π_i Σ_{τᵢ^(2) = σ_{π(i)}} weight(τᵢ^(1))`, the factored form of a
/// cut sum over a fixed trunk. `weight` must be multiplicative over forests.
pub fn factored_cut_sum<S: Scalar>(
    tree: &RootedTree,
    trunk: &RootedTree,
    weight: impl Fn(&Forest) -> S + Copy,
) -> Result<S, HopfError> {
    if tree.label() != trunk.label() {
        padded_arrangements(tree, trunk)?;
        return Ok(S::zero());
    }
    let mut total = S::zero();
    for a in padded_arrangements(tree, trunk)? {
        let mut product = S::one();
        for (slot, child) in a.iter().zip(tree.children()) {
            product = product * cut_sum_over_trunk_with(child, slot, weight);
        }
        total = total + product;
    }
    Ok(total)
}

/// `Σ_{|trunk| = l} τ! / (pruned! trunk!)`, which equals `C(|τ|, l)`.
pub fn tree_binomial(tree: &RootedTree, l: usize) -> Result<BigRational, HopfError> {
    let size = tree.vertex_count();
    if l > size {
        return Err(HopfError::DegreeOutOfRange { l, size });
    }
    let top = BigRational::from_integer(BigInt::from(tree.factorial()));
    Ok(coproduct_tree(tree)
        .into_iter()
        .filter(|t| t.trunk.vertex_count() == l)
        .fold(BigRational::zero(), |acc, t| {
            let denom = BigInt::from(t.pruned.factorial() * t.trunk.factorial());
            acc + BigRational::from_integer(BigInt::from(t.multiplicity)) * &top / BigRational::from_integer(denom)
        }))
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigUint::one(), |acc, i| acc * BigUint::from(n - i) / BigUint::from(i + 1))
}

/// `(Δ ⊗ id)Δf = (id ⊗ Δ)Δf`, compared exactly.
pub fn is_coassociative_on(forest: &Forest) -> bool {
    let d = HopfElement::forest(forest.clone()).coproduct();
    d.coproduct_left() == d.coproduct_right()
}

/// `(ε ⊗ id)Δf = f = (id ⊗ ε)Δf`.
pub fn satisfies_counit_on(forest: &Forest) -> bool {
    let terms = coproduct_forest(forest);
    let side = |pick: fn(&CutTerm) -> (&Forest, &Forest)| {
        let kept: Vec<_> = terms.iter().filter(|t| pick(t).0.is_empty()).collect();
        kept.len() == 1 && pick(kept[0]).1 == forest && kept[0].multiplicity == BigUint::one()
    };
    side(|t| (&t.pruned, &t.trunk)) && side(|t| (&t.trunk, &t.pruned))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;
    use crate::trees::{Alphabet, Catalog, Label};

    fn t(s: &str) -> RootedTree {
        s.parse().unwrap()
    }

    fn f(s: &str) -> Forest {
        s.parse().unwrap()
    }

    fn show(terms: &[CutTerm]) -> Vec<String> {
        terms.iter().map(ToString::to_string).collect()
    }

    #[test]
    fn coproduct_of_vertex() {
        assert_eq!(show(&coproduct_tree(&t("*"))), vec!["1 ⊗ * ×1", "* ⊗ 1 ×1"]);
    }

    #[test]
    fn coproduct_of_ladder2() {
        let mut got = show(&coproduct_tree(&t("[*]")));
        got.sort();
        let mut want = vec!["[*] ⊗ 1 ×1", "1 ⊗ [*] ×1", "* ⊗ * ×1"];
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn coproduct_of_bushy_tree_is_binomial() {
        for n in [1usize, 3, 6, 20] {
            let terms = coproduct_tree(&RootedTree::bushy(n));
            assert_eq!(terms.len(), n + 2);
            for term in &terms {
                if term.trunk.is_empty() {
                    assert_eq!(term.pruned, RootedTree::bushy(n).into_forest());
                    assert!(term.multiplicity.is_one());
                    continue;
                }
                let l = term.pruned.component_count();
                assert_eq!(term.pruned, Forest::power(&RootedTree::leaf(), l));
                assert_eq!(term.trunk, RootedTree::bushy(n - l).into_forest());
                assert_eq!(term.multiplicity, binomial(n, l));
            }
        }
    }

    #[test]
    fn coproduct_of_forests() {
        let unit = coproduct_forest(&Forest::empty());
        assert_eq!(show(&unit), vec!["1 ⊗ 1 ×1"]);
        let mut got = show(&coproduct_forest(&f("*.*")));
        got.sort();
        let mut want = vec!["*.* ⊗ 1 ×1", "* ⊗ * ×2", "1 ⊗ *.* ×1"];
        want.sort();
        assert_eq!(got, want);
        let tree = t("[*.[*1]2]1");
        assert_eq!(coproduct_forest(&tree.clone().into_forest()), coproduct_tree(&tree));
    }

    #[test]
    fn edge_enumeration_agrees_with_recursion() {
        let cat = Catalog::new(6, Alphabet::Unlabelled);
        for tree in cat.trees_up_to(6) {
            let cuts = admissible_cuts(tree);
            assert_eq!(aggregate_cuts(&cuts), coproduct_tree(tree), "{tree}");
            let mut sets: Vec<_> = cuts.iter().map(|c| (c.removes_root, c.edges.clone())).collect();
            let before = sets.len();
            sets.sort();
            sets.dedup();
            assert_eq!(sets.len(), before);
        }
        let labelled = Catalog::new(4, Alphabet::Labels(2));
        for tree in labelled.trees_up_to(4) {
            assert_eq!(aggregate_cuts(&admissible_cuts(tree)), coproduct_tree(tree));
        }
    }

    #[test]
    fn edges_of_a_cut_hit_each_root_path_once() {
        // Ladder of 4: vertices 0-1-2-3 in a chain, so at most one edge is cut.
        for c in admissible_cuts(&RootedTree::ladder(4)) {
            assert!(c.edges.len() <= 1);
        }
    }

    #[test]
    fn hopf_element_arithmetic() {
        let a = HopfElement::forest(f("*"));
        let b = HopfElement::forest(f("[*]"));
        let sum = &a + &b;
        assert_eq!(sum.terms().len(), 2);
        let prod = &sum * &a;
        assert_eq!(prod.terms().get(&f("*.*")), Some(&rational(1, 1)));
        assert_eq!(prod.terms().get(&f("*.[*]")), Some(&rational(1, 1)));
        let cancel = &sum + &b.scale(&rational(-1, 1));
        assert_eq!(cancel, a);
    }

    #[test]
    fn coassociative_on_small_forests() {
        let cat = Catalog::new(4, Alphabet::Unlabelled);
        for forest in cat.forests_up_to(4) {
            let d = HopfElement::forest(forest.clone()).coproduct();
            assert_eq!(d.coproduct_left(), d.coproduct_right(), "{forest}");
            assert!(satisfies_counit_on(forest), "{forest}");
        }
        assert!(is_coassociative_on(&f("[*1.[*2]1]2")));
    }

    #[test]
    fn cut_sum_examples() {
        let beta = 3.0;
        let gamma = 0.5;
        let tree = t("[[*]]");
        let single = cut_sum_over_trunk(&tree, &f("*"), gamma, beta);
        assert!((single - 1.0 / beta / 2f64.powf(gamma)).abs() < 1e-15);
        assert_eq!(cut_sum_over_trunk(&tree, &tree.clone().into_forest(), gamma, beta), 1.0);
        assert_eq!(cut_sum_over_trunk(&tree, &f("[*.*]"), gamma, beta), 0.0);
        let n = 5;
        for l in 0..=n {
            let got = cut_sum_over_trunk(&RootedTree::bushy(n), &RootedTree::bushy(n - l).into_forest(), gamma, beta);
            let want = num::ToPrimitive::to_f64(&binomial(n, l)).unwrap() * beta.powi(-(l as i32));
            assert!((got - want).abs() < 1e-12 * want);
        }
        let exact = cut_sum_over_trunk_exact(&tree, &f("*"), &rational(3, 1));
        assert_eq!(exact, rational(1, 6));
    }

    #[test]
    fn permutation_class_examples() {
        let cherry = t("[*.*]");
        let pc = permutation_classes(&cherry, &cherry).unwrap();
        assert_eq!(pc.arrangements, 1);
        assert_eq!(pc.min_proper, Some(0));
        for n in 1..6 {
            for l in 0..n {
                let pc = permutation_classes(&RootedTree::bushy(n), &RootedTree::bushy(l)).unwrap();
                let c = num::ToPrimitive::to_usize(&binomial(n, l)).unwrap();
                assert_eq!(pc.arrangements, c);
                assert_eq!(pc.admissible, c);
                assert_eq!(pc.min_proper, Some(n - l));
            }
        }
        assert!(permutation_classes(&t("[*]"), &cherry).is_err());
        let other_root = RootedTree::join(Forest::empty(), Label::raw(2));
        assert_eq!(permutation_classes(&t("*1"), &other_root).unwrap().admissible, 0);
    }

    #[test]
    fn tree_binomial_examples() {
        let cherry = t("[*.*]");
        assert_eq!(tree_binomial(&cherry, 0).unwrap(), rational(1, 1));
        assert_eq!(tree_binomial(&cherry, 1).unwrap(), rational(3, 1));
        assert_eq!(tree_binomial(&cherry, 3).unwrap(), rational(1, 1));
        assert!(tree_binomial(&cherry, 4).is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(10, 3), BigUint::from(120u32));
        assert_eq!(binomial(3, 5), BigUint::zero());
        assert_eq!(binomial(0, 0), BigUint::one());
    }
}
