//! Rooted trees and forests in canonical form.
//!
//! A tree stores its children sorted, so derived equality is isomorphism of
//! rooted labelled trees. A forest is a sorted multiset of trees; the empty
//! forest is the unit.

use std::fmt;
use std::str::FromStr;

use num::{BigUint, One};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("label {label} outside alphabet {alphabet}")]
    LabelOutOfRange { label: u16, alphabet: Alphabet },
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// Set of labels a tree may carry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Alphabet {
    Unlabelled,
    /// Labels `1..=d`.
    Labels(u16),
}

impl Alphabet {
    pub fn labels(self) -> Vec<Label> {
        match self {
            Alphabet::Unlabelled => vec![Label::UNLABELLED],
            Alphabet::Labels(d) => (1..=d).map(Label).collect(),
        }
    }

    pub fn contains(self, label: Label) -> bool {
        match self {
            Alphabet::Unlabelled => label.is_unlabelled(),
            Alphabet::Labels(d) => (1..=d).contains(&label.0),
        }
    }

    pub fn size(self) -> usize {
        match self {
            Alphabet::Unlabelled => 1,
            Alphabet::Labels(d) => d as usize,
        }
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Alphabet::Unlabelled => write!(f, "unlabelled"),
            Alphabet::Labels(d) => write!(f, "{{1..{d}}}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(u16);

impl Label {
    pub const UNLABELLED: Label = Label(0);

    pub fn new(value: u16, alphabet: Alphabet) -> Result<Self, TreeError> {
        let label = Label(value);
        if alphabet.contains(label) {
            Ok(label)
        } else {
            Err(TreeError::LabelOutOfRange { label: value, alphabet })
        }
    }

    /// Label `value` without an alphabet check. `0` is the unlabelled sentinel.
    pub const fn raw(value: u16) -> Self {
        Label(value)
    }

    pub fn value(self) -> u16 {
        self.0
    }

    pub fn is_unlabelled(self) -> bool {
        self.0 == 0
    }

    /// Zero-based component index for labelled trees.
    pub fn component(self) -> Option<usize> {
        (self.0 > 0).then(|| self.0 as usize - 1)
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RootedTree {
    label: Label,
    children: Vec<RootedTree>,
    size: usize,
}

impl RootedTree {
    pub fn single_vertex(label: Label) -> Self {
        RootedTree { label, children: Vec::new(), size: 1 }
    }

    /// Attach the trees of `forest` below a new root.
    pub fn join(forest: Forest, label: Label) -> Self {
        let size = 1 + forest.vertex_count();
        RootedTree { label, children: forest.trees, size }
    }

    pub fn leaf() -> Self {
        Self::single_vertex(Label::UNLABELLED)
    }

    /// Chain of `n` unlabelled vertices.
    pub fn ladder(n: usize) -> Self {
        assert!(n >= 1, "a ladder needs at least one vertex");
        let mut t = Self::leaf();
        for _ in 1..n {
            t = Self::join(Forest::single(t), Label::UNLABELLED);
        }
        t
    }

    /// `[•ⁿ]`, a root with `n` leaves.
    pub fn bushy(n: usize) -> Self {
        Self::join(Forest::power(&Self::leaf(), n), Label::UNLABELLED)
    }

    pub fn label(&self) -> Label {
        self.label
    }

    pub fn children(&self) -> &[RootedTree] {
        &self.children
    }

    pub fn children_forest(&self) -> Forest {
        Forest { trees: self.children.clone() }
    }

    pub fn vertex_count(&self) -> usize {
        self.size
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    /// `τ! = |τ|·Π τᵢ!`.
    pub fn factorial(&self) -> BigUint {
        self.children
            .iter()
            .fold(BigUint::from(self.size), |acc, c| acc * c.factorial())
    }

    pub fn factorial_f64(&self) -> f64 {
        self.children
            .iter()
            .fold(self.size as f64, |acc, c| acc * c.factorial_f64())
    }

    pub fn without_labels(&self) -> RootedTree {
        let children: Vec<_> = self.children.iter().map(|c| c.without_labels()).collect();
        Self::join(Forest::from_trees(children), Label::UNLABELLED)
    }

    pub fn labels_within(&self, alphabet: Alphabet) -> bool {
        alphabet.contains(self.label) && self.children.iter().all(|c| c.labels_within(alphabet))
    }

    pub fn into_forest(self) -> Forest {
        Forest::single(self)
    }
}

impl fmt::Debug for RootedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RootedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.children.is_empty() {
            write!(f, "*")?;
        } else {
            write!(f, "[")?;
            write_trees(f, &self.children)?;
            write!(f, "]")?;
        }
        if !self.label.is_unlabelled() {
            write!(f, "{}", self.label.0)?;
        }
        Ok(())
    }
}

fn write_trees(f: &mut fmt::Formatter<'_>, trees: &[RootedTree]) -> fmt::Result {
    for (i, t) in trees.iter().enumerate() {
        if i > 0 {
            write!(f, ".")?;
        }
        write!(f, "{t}")?;
    }
    Ok(())
}

#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Forest {
    trees: Vec<RootedTree>,
}

impl Forest {
    pub fn empty() -> Self {
        Forest::default()
    }

    pub fn single(tree: RootedTree) -> Self {
        Forest { trees: vec![tree] }
    }

    pub fn from_trees(trees: impl IntoIterator<Item = RootedTree>) -> Self {
        let mut trees: Vec<_> = trees.into_iter().collect();
        trees.sort();
        Forest { trees }
    }

    pub fn power(tree: &RootedTree, n: usize) -> Self {
        Forest { trees: vec![tree.clone(); n] }
    }

    pub fn multiply(&self, other: &Forest) -> Forest {
        if self.trees.is_empty() {
            return other.clone();
        }
        if other.trees.is_empty() {
            return self.clone();
        }
        let mut trees = Vec::with_capacity(self.trees.len() + other.trees.len());
        let (mut i, mut j) = (0, 0);
        while i < self.trees.len() && j < other.trees.len() {
            if self.trees[i] <= other.trees[j] {
                trees.push(self.trees[i].clone());
                i += 1;
            } else {
                trees.push(other.trees[j].clone());
                j += 1;
            }
        }
        trees.extend_from_slice(&self.trees[i..]);
        trees.extend_from_slice(&other.trees[j..]);
        Forest { trees }
    }

    pub fn trees(&self) -> &[RootedTree] {
        &self.trees
    }

    pub fn into_trees(self) -> Vec<RootedTree> {
        self.trees
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    /// The tree, when the forest has exactly one component.
    pub fn as_tree(&self) -> Option<&RootedTree> {
        match self.trees.as_slice() {
            [t] => Some(t),
            _ => None,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.trees.iter().map(RootedTree::vertex_count).sum()
    }

    pub fn component_count(&self) -> usize {
        self.trees.len()
    }

    pub fn stats(&self) -> ForestStats {
        ForestStats { vertices: self.vertex_count(), components: self.component_count() }
    }

    pub fn factorial(&self) -> BigUint {
        self.trees.iter().fold(BigUint::one(), |acc, t| acc * t.factorial())
    }

    pub fn factorial_f64(&self) -> f64 {
        self.trees.iter().map(RootedTree::factorial_f64).product()
    }

    pub fn labels_within(&self, alphabet: Alphabet) -> bool {
        self.trees.iter().all(|t| t.labels_within(alphabet))
    }
}

impl From<RootedTree> for Forest {
    fn from(tree: RootedTree) -> Self {
        Forest::single(tree)
    }
}

impl fmt::Debug for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.trees.is_empty() {
            write!(f, "1")
        } else {
            write_trees(f, &self.trees)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ForestStats {
    pub vertices: usize,
    pub components: usize,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: impl Into<String>) -> TreeError {
        TreeError::Parse { pos: self.pos, msg: msg.into() }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn label(&mut self) -> Result<Label, TreeError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Ok(Label::UNLABELLED);
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        match text.parse::<u16>() {
            Ok(0) | Err(_) => {
                self.pos = start;
                Err(self.error(format!("invalid label `{text}`")))
            }
            Ok(v) => Ok(Label(v)),
        }
    }

    fn tree(&mut self) -> Result<RootedTree, TreeError> {
        match self.peek() {
            Some(b'*') => {
                self.pos += 1;
                Ok(RootedTree::single_vertex(self.label()?))
            }
            Some(b'[') => {
                self.pos += 1;
                if self.peek() == Some(b']') {
                    return Err(self.error("empty brackets; write `*` for a single vertex"));
                }
                let forest = self.trees()?;
                if self.peek() != Some(b']') {
                    return Err(self.error("expected `]`"));
                }
                self.pos += 1;
                Ok(RootedTree::join(forest, self.label()?))
            }
            _ => Err(self.error("expected `*` or `[`")),
        }
    }

    fn trees(&mut self) -> Result<Forest, TreeError> {
        let mut trees = vec![self.tree()?];
        while self.peek() == Some(b'.') {
            self.pos += 1;
            trees.push(self.tree()?);
        }
        Ok(Forest::from_trees(trees))
    }

    fn finish(&self) -> Result<(), TreeError> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.error("trailing input")),
        }
    }
}

impl FromStr for Forest {
    type Err = TreeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "1" {
            return Ok(Forest::empty());
        }
        let mut p = Parser { src: s.as_bytes(), pos: 0 };
        let f = p.trees()?;
        p.finish()?;
        Ok(f)
    }
}

impl FromStr for RootedTree {
    type Err = TreeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser { src: s.trim().as_bytes(), pos: 0 };
        let t = p.tree()?;
        p.finish()?;
        Ok(t)
    }
}

/// All trees and forests up to a size, for one alphabet, grouped by vertex count.
#[derive(Clone, Debug)]
pub struct Catalog {
    alphabet: Alphabet,
    trees: Vec<Vec<RootedTree>>,
    forests: Vec<Vec<Forest>>,
}

impl Catalog {
    pub fn new(max_size: usize, alphabet: Alphabet) -> Self {
        let labels = alphabet.labels();
        let mut trees: Vec<Vec<RootedTree>> = vec![Vec::new()];
        let mut forests: Vec<Vec<Forest>> = vec![vec![Forest::empty()]];
        for n in 1..=max_size {
            let mut level: Vec<RootedTree> = forests[n - 1]
                .iter()
                .flat_map(|f| labels.iter().map(move |&l| RootedTree::join(f.clone(), l)))
                .collect();
            level.sort();
            level.dedup();
            trees.push(level);
            forests.push(forests_of_size(n, &trees));
        }
        Catalog { alphabet, trees, forests }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn max_size(&self) -> usize {
        self.trees.len() - 1
    }

    /// Trees with exactly `n` vertices.
    pub fn trees(&self, n: usize) -> &[RootedTree] {
        self.trees.get(n).map_or(&[], Vec::as_slice)
    }

    /// Forests with exactly `n` vertices (`n = 0` gives the empty forest).
    pub fn forests(&self, n: usize) -> &[Forest] {
        self.forests.get(n).map_or(&[], Vec::as_slice)
    }

    pub fn trees_up_to(&self, n: usize) -> impl Iterator<Item = &RootedTree> {
        (1..=n.min(self.max_size())).flat_map(move |k| self.trees[k].iter())
    }

    pub fn forests_up_to(&self, n: usize) -> impl Iterator<Item = &Forest> {
        (0..=n.min(self.max_size())).flat_map(move |k| self.forests[k].iter())
    }
}

/// Multisets of trees with total size `n`, drawing from `trees_by_size[1..=n]`.
fn forests_of_size(n: usize, trees_by_size: &[Vec<RootedTree>]) -> Vec<Forest> {
    let pool: Vec<&RootedTree> = trees_by_size[1..=n].iter().flatten().collect();
    let mut out = Vec::new();
    let mut chosen: Vec<RootedTree> = Vec::new();
    fn go(
        pool: &[&RootedTree],
        start: usize,
        remaining: usize,
        chosen: &mut Vec<RootedTree>,
        out: &mut Vec<Forest>,
    ) {
        if remaining == 0 {
            out.push(Forest::from_trees(chosen.iter().cloned()));
            return;
        }
        for i in start..pool.len() {
            let size = pool[i].vertex_count();
            if size <= remaining {
                chosen.push(pool[i].clone());
                go(pool, i, remaining - size, chosen, out);
                chosen.pop();
            }
        }
    }
    go(&pool, 0, n, &mut chosen, &mut out);
    out.sort();
    out
}

/// Trees with exactly `n` vertices, in canonical order. `n = 0` gives none.
pub fn enumerate_trees(n: usize, alphabet: Alphabet) -> Vec<RootedTree> {
    if n == 0 {
        return Vec::new();
    }
    Catalog::new(n, alphabet).trees(n).to_vec()
}

/// Forests with exactly `n` vertices, in canonical order.
pub fn enumerate_forests(n: usize, alphabet: Alphabet) -> Vec<Forest> {
    Catalog::new(n, alphabet).forests(n).to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> RootedTree {
        s.parse().unwrap()
    }

    #[test]
    fn single_vertex_checks_alphabet() {
        let a = Alphabet::Labels(2);
        let v = RootedTree::single_vertex(Label::new(1, a).unwrap());
        assert_eq!(v.vertex_count(), 1);
        assert_eq!(v.to_string(), "*1");
        assert!(Label::new(3, a).is_err());
        assert!(Label::new(0, a).is_err());
        assert!(Label::new(0, Alphabet::Unlabelled).is_ok());
        assert_eq!(RootedTree::leaf().factorial(), BigUint::one());
    }

    #[test]
    fn join_builds_bushy_and_ladder() {
        assert_eq!(RootedTree::join(Forest::empty(), Label::UNLABELLED), RootedTree::leaf());
        let b3 = RootedTree::bushy(3);
        assert_eq!(b3.to_string(), "[*.*.*]");
        assert_eq!(b3.factorial(), BigUint::from(4u32));
        let l3 = RootedTree::join(
            Forest::single(RootedTree::join(Forest::single(RootedTree::leaf()), Label::UNLABELLED)),
            Label::UNLABELLED,
        );
        assert_eq!(l3.vertex_count(), 3);
        assert_eq!(l3, RootedTree::ladder(3));
    }

    #[test]
    fn forest_product_is_multiset_union() {
        let dot = Forest::single(RootedTree::leaf());
        assert_eq!(Forest::empty().multiply(&dot), dot);
        let two = dot.multiply(&dot);
        assert_eq!(two.component_count(), 2);
        assert_eq!(two.multiply(&dot), RootedTree::bushy(3).children_forest());
        let a: Forest = "[*].*2".parse().unwrap();
        let b: Forest = "[*.*]1".parse().unwrap();
        assert_eq!(a.multiply(&b), b.multiply(&a));
    }

    #[test]
    fn factorials() {
        assert_eq!(RootedTree::ladder(4).factorial(), BigUint::from(24u32));
        assert_eq!(RootedTree::bushy(6).factorial(), BigUint::from(7u32));
        let big = RootedTree::ladder(21).factorial();
        assert_eq!(big.to_string(), "51090942171709440000");
    }

    #[test]
    fn stats() {
        assert_eq!(Forest::empty().stats(), ForestStats { vertices: 0, components: 0 });
        assert_eq!(
            RootedTree::bushy(4).into_forest().stats(),
            ForestStats { vertices: 5, components: 1 }
        );
        assert_eq!(
            Forest::power(&RootedTree::leaf(), 3).stats(),
            ForestStats { vertices: 3, components: 3 }
        );
    }

    #[test]
    fn children_order_is_irrelevant() {
        assert_eq!(t("[*.[*]]2"), t("[[*].*]2"));
        assert_eq!(t("[[*.*1].*2]").to_string(), t("[*2.[*1.*]]").to_string());
    }

    #[test]
    fn notation_round_trips() {
        for s in ["*", "*3", "[*.*]2", "[*.[*1.*1]2]", "[[[*]]]"] {
            assert_eq!(t(s).to_string(), s);
        }
        let f: Forest = "1".parse().unwrap();
        assert!(f.is_empty());
        assert_eq!(f.to_string(), "1");
    }

    #[test]
    fn notation_rejects_garbage() {
        for s in ["", "[]", "[1]", "*0", "[*", "*]", "**", "*.", "x", "[*]0"] {
            assert!(s.parse::<Forest>().is_err(), "{s}");
        }
        assert!("*.*".parse::<RootedTree>().is_err());
    }

    #[test]
    fn small_enumerations() {
        assert!(enumerate_trees(0, Alphabet::Unlabelled).is_empty());
        assert_eq!(enumerate_trees(1, Alphabet::Unlabelled), vec![RootedTree::leaf()]);
        let three: Vec<String> = enumerate_trees(3, Alphabet::Unlabelled)
            .iter()
            .map(ToString::to_string)
            .collect();
        assert_eq!(three.len(), 2);
        assert!(three.contains(&"[[*]]".to_string()));
        assert!(three.contains(&"[*.*]".to_string()));
        assert_eq!(enumerate_trees(2, Alphabet::Labels(2)).len(), 4);
        assert_eq!(enumerate_forests(3, Alphabet::Unlabelled).len(), 4);
    }

    #[test]
    fn catalog_forest_counts() {
        // Forest counts equal tree counts shifted by one (join is a bijection).
        let c = Catalog::new(7, Alphabet::Unlabelled);
        for n in 0..7 {
            assert_eq!(c.forests(n).len(), c.trees(n + 1).len());
        }
    }
}
