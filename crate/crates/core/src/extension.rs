//! Extending a path known up to degree `N` to higher degrees as a limit of
//! partition sums
//! `X^{𝒫,n}_{s,t} = Σ_{tᵢ∈𝒫} Σ_{1≤k≤N} X^{n-k}_{s,tᵢ} ⋆ X^k_{tᵢ,tᵢ₊₁}`.

use std::collections::BTreeMap;

use num::BigRational;
use serde::Serialize;
use thiserror::Error;

use crate::character::{Character, CharacterError};
use crate::hopf::{coproduct_forest, coproduct_tree};
use crate::lift::PolynomialLift;
use crate::scalar::Scalar;
use crate::trees::{Alphabet, Catalog, Forest, RootedTree};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExtensionError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("degree {degree} requested but the source only has degrees ≤ {available}")]
    MissingDegree { degree: usize, available: usize },
    #[error("no convergence by level {level}: last change {achieved:.3e}, tolerance {tol:.3e}")]
    NotConverged { level: u32, achieved: f64, tol: f64 },
    #[error(transparent)]
    Character(#[from] CharacterError),
}

/// Values `⟨X_{s,t}, τ⟩` for trees up to `max_degree`.
pub trait PathSource<S: Scalar> {
    fn max_degree(&self) -> usize;
    fn alphabet(&self) -> Alphabet;
    /// Only called with `1 ≤ |τ| ≤ max_degree`.
    fn raw_value(&self, s: &S, t: &S, tree: &RootedTree) -> S;

    fn tree_value(&self, s: &S, t: &S, tree: &RootedTree) -> Result<S, ExtensionError> {
        let degree = tree.vertex_count();
        if degree > self.max_degree() {
            return Err(ExtensionError::MissingDegree { degree, available: self.max_degree() });
        }
        Ok(self.raw_value(s, t, tree))
    }

    fn value(&self, s: &S, t: &S, forest: &Forest) -> Result<S, ExtensionError> {
        forest.trees().iter().try_fold(S::one(), |acc, tree| Ok(acc * self.tree_value(s, t, tree)?))
    }
}

/// `⟨X_{s,t}, τ⟩ = (t-s)^{|τ|}/τ!` on unlabelled trees.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IdentityPath {
    pub max_degree: usize,
}

impl<S: Scalar> PathSource<S> for IdentityPath {
    fn max_degree(&self) -> usize {
        self.max_degree
    }

    fn alphabet(&self) -> Alphabet {
        Alphabet::Unlabelled
    }

    fn raw_value(&self, s: &S, t: &S, tree: &RootedTree) -> S {
        let h = t.clone() - s.clone();
        let power = (0..tree.vertex_count()).fold(S::one(), |acc, _| acc * h.clone());
        power / S::from_biguint(&tree.factorial())
    }
}

impl PathSource<BigRational> for PolynomialLift {
    fn max_degree(&self) -> usize {
        PolynomialLift::max_degree(self)
    }

    fn alphabet(&self) -> Alphabet {
        PolynomialLift::alphabet(self)
    }

    fn raw_value(&self, s: &BigRational, t: &BigRational, tree: &RootedTree) -> BigRational {
        self.value(tree, s, t).unwrap_or_default()
    }
}

/// A source cut down to degrees `≤ truncation`.
#[derive(Clone, Copy, Debug)]
pub struct Truncated<'a, P> {
    pub inner: &'a P,
    pub truncation: usize,
}

impl<'a, P> Truncated<'a, P> {
    pub fn new(inner: &'a P, truncation: usize) -> Self {
        Truncated { inner, truncation }
    }
}

impl<S: Scalar, P: PathSource<S>> PathSource<S> for Truncated<'_, P> {
    fn max_degree(&self) -> usize {
        self.truncation.min(self.inner.max_degree())
    }

    fn alphabet(&self) -> Alphabet {
        self.inner.alphabet()
    }

    fn raw_value(&self, s: &S, t: &S, tree: &RootedTree) -> S {
        self.inner.raw_value(s, t, tree)
    }
}

/// `s = t₀ < … < t_m = t` inside `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Partition<S> {
    points: Vec<S>,
}

impl<S: Scalar + PartialOrd> Partition<S> {
    pub fn new(points: Vec<S>) -> Result<Self, ExtensionError> {
        if points.len() < 2 {
            return Err(ExtensionError::Precondition("a partition needs at least two points".into()));
        }
        if points.windows(2).any(|w| w[1] <= w[0]) {
            return Err(ExtensionError::Precondition("partition points must be strictly increasing".into()));
        }
        if points[0] < S::zero() || points[points.len() - 1] > S::one() {
            return Err(ExtensionError::Precondition("partition points must lie in [0, 1]".into()));
        }
        Ok(Partition { points })
    }

    /// `2^level` equal pieces of `[s, t]`.
    pub fn dyadic(s: &S, t: &S, level: u32) -> Result<Self, ExtensionError> {
        let m = 1usize << level;
        let h = (t.clone() - s.clone()) / S::from_usize(m);
        Self::new((0..=m).map(|i| s.clone() + h.clone() * S::from_usize(i)).collect())
    }

    pub fn points(&self) -> &[S] {
        &self.points
    }

    pub fn mesh(&self) -> S {
        let mut best = S::zero();
        for w in self.points.windows(2) {
            let gap = w[1].clone() - w[0].clone();
            if gap > best {
                best = gap;
            }
        }
        best
    }

    /// The partition without point `j`, for `0 < j < m`.
    pub fn without(&self, j: usize) -> Result<Self, ExtensionError> {
        if j == 0 || j + 1 >= self.points.len() {
            return Err(ExtensionError::Precondition(format!(
                "can only drop interior points, got index {j} of {}",
                self.points.len()
            )));
        }
        let mut points = self.points.clone();
        points.remove(j);
        Ok(Partition { points })
    }
}

fn mult<S: Scalar>(m: &num::BigUint) -> S {
    S::from_biguint(m)
}

/// `⟨X^{𝒫,n}_{s,t}, f⟩` with `s, t` the ends of the partition. The source
/// must provide degrees up to `n - 1`; the sum uses trunk degrees `1..=N`.
pub fn partition_sum<S: Scalar + PartialOrd>(
    source: &impl PathSource<S>,
    truncation: usize,
    n: usize,
    partition: &Partition<S>,
    forest: &Forest,
) -> Result<S, ExtensionError> {
    if n <= truncation {
        return Err(ExtensionError::Precondition(format!(
            "partition sums start above the truncation: n = {n}, N = {truncation}"
        )));
    }
    if truncation > source.max_degree() || n - 1 > source.max_degree() {
        return Err(ExtensionError::MissingDegree { degree: n - 1, available: source.max_degree() });
    }
    if forest.vertex_count() != n {
        return Ok(S::zero());
    }
    let points = partition.points();
    let s = &points[0];
    let terms: Vec<_> = coproduct_forest(forest)
        .into_iter()
        .filter(|c| (1..=truncation).contains(&c.trunk.vertex_count()))
        .collect();
    let mut total = S::zero();
    for w in points.windows(2) {
        for term in &terms {
            let left = if &w[0] == s { counit(&term.pruned) } else { source.value(s, &w[0], &term.pruned)? };
            total = total + mult::<S>(&term.multiplicity) * left * source.value(&w[0], &w[1], &term.trunk)?;
        }
    }
    Ok(total)
}

/// `X_{s,s}`: one on the empty forest, zero elsewhere.
fn counit<S: Scalar>(f: &Forest) -> S {
    if f.is_empty() {
        S::one()
    } else {
        S::zero()
    }
}

/// Knobs for [`extend`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExtendConfig {
    pub tol: f64,
    /// First level at which the Cauchy test may stop.
    pub min_level: u32,
    pub max_level: u32,
    /// Columns of the Richardson tableau.
    pub extrapolation_order: usize,
}

impl Default for ExtendConfig {
    fn default() -> Self {
        ExtendConfig { tol: 1e-8, min_level: 3, max_level: 14, extrapolation_order: 8 }
    }
}

/// Values at one refinement level.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelRecord {
    pub level: u32,
    pub raw: Vec<f64>,
    pub extrapolated: Vec<f64>,
    /// Max change of the extrapolated values against the previous level.
    pub delta: f64,
}

/// The extended character on one interval.
#[derive(Clone, Debug)]
pub struct ExtendedPath<S: Scalar> {
    pub s: S,
    pub t: S,
    pub truncation: usize,
    pub max_degree: usize,
    /// Trees of degree `N+1..=M`, in the order of every value vector.
    pub trees: Vec<RootedTree>,
    pub values: Vec<S>,
    pub levels: Vec<LevelRecord>,
    pub converged_level: u32,
    /// Source values for degrees `≤ N`.
    low: BTreeMap<RootedTree, S>,
}

/// One row of the JSON dump.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtensionRecord {
    pub forest: String,
    pub s: f64,
    pub t: f64,
    pub degree: usize,
    pub level: u32,
    pub raw: f64,
    pub value: f64,
}

impl<S: Scalar> ExtendedPath<S> {
    pub fn value(&self, tree: &RootedTree) -> Option<&S> {
        if let Some(v) = self.low.get(tree) {
            return Some(v);
        }
        self.trees.iter().position(|t| t == tree).map(|i| &self.values[i])
    }

    /// Source values up to `N`, extended values above.
    pub fn to_character(&self) -> Character<S> {
        let high = self.trees.iter().cloned().zip(self.values.iter().cloned());
        let all = self.low.iter().map(|(t, v)| (t.clone(), v.clone())).chain(high);
        Character::from_tree_values(all, self.max_degree)
    }

    pub fn records(&self) -> Vec<ExtensionRecord> {
        let mut out = Vec::new();
        for lv in &self.levels {
            for (i, tree) in self.trees.iter().enumerate() {
                out.push(ExtensionRecord {
                    forest: tree.to_string(),
                    s: self.s.to_f64(),
                    t: self.t.to_f64(),
                    degree: tree.vertex_count(),
                    level: lv.level,
                    raw: lv.raw[i],
                    value: lv.extrapolated[i],
                });
            }
        }
        out
    }
}

/// Precomputed cut terms for the same-level sweep.
struct SweepPlan<S> {
    /// All trees up to `M`; the first `low` have degree `≤ N`.
    trees: Vec<RootedTree>,
    low: usize,
    /// For each high tree: `(multiplicity, pruned tree indices, trunk index)`.
    terms: Vec<Vec<(S, Vec<usize>, usize)>>,
}

impl<S: Scalar> SweepPlan<S> {
    fn new(catalog: &Catalog, truncation: usize, max_degree: usize) -> Self {
        let trees: Vec<RootedTree> = catalog.trees_up_to(max_degree).cloned().collect();
        let low = trees.iter().take_while(|t| t.vertex_count() <= truncation).count();
        let position: BTreeMap<&RootedTree, usize> = trees.iter().enumerate().map(|(i, t)| (t, i)).collect();
        let terms = trees[low..]
            .iter()
            .map(|tree| {
                coproduct_tree(tree)
                    .into_iter()
                    .filter(|c| (1..=truncation).contains(&c.trunk.vertex_count()))
                    .map(|c| {
                        let pruned = c.pruned.trees().iter().map(|p| position[p]).collect();
                        let trunk = position[c.trunk.as_tree().expect("non-empty trunk is a tree")];
                        (mult::<S>(&c.multiplicity), pruned, trunk)
                    })
                    .collect()
            })
            .collect();
        SweepPlan { trees, low, terms }
    }

    /// Partition sums on `2^level` equal pieces of `[s, t]`, where each
    /// extended degree reads lower extended degrees at the same level.
    fn sweep(&self, source: &impl PathSource<S>, s: &S, t: &S, level: u32) -> Vec<S> {
        let m = 1usize << level;
        let h = (t.clone() - s.clone()) / S::from_usize(m);
        let n_trees = self.trees.len();
        // values[k]: X_{s,tᵢ} on low trees (from the source), the running sums on high trees.
        let mut values = vec![S::zero(); n_trees];
        let mut increment = vec![S::zero(); self.low];
        for i in 0..m {
            let left = s.clone() + h.clone() * S::from_usize(i);
            let right = if i + 1 == m { t.clone() } else { s.clone() + h.clone() * S::from_usize(i + 1) };
            for (k, inc) in increment.iter_mut().enumerate() {
                *inc = source.raw_value(&left, &right, &self.trees[k]);
            }
            // Larger trees first so every read sees the left-end value.
            for k in (self.low..n_trees).rev() {
                let mut add = S::zero();
                for (c, pruned, trunk) in &self.terms[k - self.low] {
                    let lower = pruned.iter().fold(c.clone(), |acc, &p| acc * values[p].clone());
                    add = add + lower * increment[*trunk].clone();
                }
                values[k] = values[k].clone() + add;
            }
            for (k, v) in values.iter_mut().enumerate().take(self.low) {
                *v = source.raw_value(s, &right, &self.trees[k]);
            }
        }
        values.split_off(self.low)
    }
}

/// Extend `source` (used up to degree `N = truncation`) to degrees `N+1..=M`
/// on `[s, t]`. Raw dyadic sums converge like the mesh; Richardson
/// extrapolation across levels removes the polynomial error terms, and the
/// Cauchy test runs on the extrapolated values.
pub fn extend<S: Scalar + PartialOrd>(
    source: &impl PathSource<S>,
    truncation: usize,
    max_degree: usize,
    s: &S,
    t: &S,
    config: ExtendConfig,
) -> Result<ExtendedPath<S>, ExtensionError> {
    if config.tol.is_nan() || config.tol <= 0.0 {
        return Err(ExtensionError::Precondition(format!("tolerance must be positive, got {}", config.tol)));
    }
    if truncation == 0 || truncation > source.max_degree() {
        return Err(ExtensionError::MissingDegree { degree: truncation.max(1), available: source.max_degree() });
    }
    if max_degree <= truncation {
        return Err(ExtensionError::Precondition(format!("target degree {max_degree} must exceed N = {truncation}")));
    }
    if s >= t {
        return Err(ExtensionError::Precondition("need s < t".into()));
    }
    let catalog = Catalog::new(max_degree, source.alphabet());
    let plan = SweepPlan::<S>::new(&catalog, truncation, max_degree);
    let low: BTreeMap<RootedTree, S> =
        plan.trees[..plan.low].iter().map(|tree| (tree.clone(), source.raw_value(s, t, tree))).collect();
    let order = config.extrapolation_order.max(1);
    // tableau[r] holds the Richardson row at level r, up to `order` columns.
    let mut previous_row: Vec<Vec<S>> = Vec::new();
    let mut best_previous: Option<Vec<S>> = None;
    let mut levels = Vec::new();
    for level in 0..=config.max_level {
        let raw = plan.sweep(source, s, t, level);
        let mut row = vec![raw.clone()];
        for j in 1..=order.min(level as usize) {
            let factor = S::from_usize((1usize << j) - 1);
            let col: Vec<S> = row[j - 1]
                .iter()
                .zip(&previous_row[j - 1])
                .map(|(a, b)| a.clone() + (a.clone() - b.clone()) / factor.clone())
                .collect();
            row.push(col);
        }
        let best = row.last().cloned().expect("row has at least one column");
        let delta = match &best_previous {
            Some(prev) => best.iter().zip(prev).map(|(a, b)| (a.clone() - b.clone()).to_f64().abs()).fold(0.0, f64::max),
            None => f64::INFINITY,
        };
        levels.push(LevelRecord {
            level,
            raw: raw.iter().map(Scalar::to_f64).collect(),
            extrapolated: best.iter().map(Scalar::to_f64).collect(),
            delta,
        });
        if level >= config.min_level && delta < config.tol {
            return Ok(ExtendedPath {
                s: s.clone(),
                t: t.clone(),
                truncation,
                max_degree,
                trees: plan.trees[plan.low..].to_vec(),
                values: best,
                levels,
                converged_level: level,
                low,
            });
        }
        previous_row = row;
        best_previous = Some(best);
    }
    Err(ExtensionError::NotConverged {
        level: config.max_level,
        achieved: levels.last().map_or(f64::INFINITY, |l| l.delta),
        tol: config.tol,
    })
}

/// `Σ_{k≥N+1} X^{n-k}_{u,s} ⋆ (X^{𝒫,k}_{s,t} - X^{𝒫∖{t_j},k}_{s,t})` on `f`,
/// and the three-factor closed form
/// `Σ_{k₂+k₃≥N+1, 1≤k₃≤N} X^{n-k₂-k₃}_{u,t_{j-1}} ⋆ X^{k₂}_{t_{j-1},t_j} ⋆ X^{k₃}_{t_j,t_{j+1}}`.
pub fn drop_point_residual<S: Scalar + PartialOrd>(
    source: &impl PathSource<S>,
    truncation: usize,
    partition: &Partition<S>,
    j: usize,
    n: usize,
    u: &S,
    forest: &Forest,
) -> Result<(S, S), ExtensionError> {
    let dropped = partition.without(j)?;
    if n <= truncation {
        return Err(ExtensionError::Precondition(format!("need n > N, got n = {n}, N = {truncation}")));
    }
    if n - 1 > source.max_degree() {
        return Err(ExtensionError::MissingDegree { degree: n - 1, available: source.max_degree() });
    }
    if forest.vertex_count() != n {
        return Ok((S::zero(), S::zero()));
    }
    let pts = partition.points();
    let s = &pts[0];
    let x = |a: &S, b: &S, f: &Forest| -> Result<S, ExtensionError> {
        if a == b {
            Ok(counit(f))
        } else {
            source.value(a, b, f)
        }
    };

    let mut lhs = S::zero();
    for term in coproduct_forest(forest) {
        let k = term.trunk.vertex_count();
        if k <= truncation {
            continue;
        }
        let diff = partition_sum(source, truncation, k, partition, &term.trunk)?
            - partition_sum(source, truncation, k, &dropped, &term.trunk)?;
        lhs = lhs + mult::<S>(&term.multiplicity) * x(u, s, &term.pruned)? * diff;
    }

    let (a, b, c) = (&pts[j - 1], &pts[j], &pts[j + 1]);
    let mut rhs = S::zero();
    for outer in coproduct_forest(forest) {
        let k3 = outer.trunk.vertex_count();
        if !(1..=truncation).contains(&k3) {
            continue;
        }
        let right = x(b, c, &outer.trunk)?;
        for inner in coproduct_forest(&outer.pruned) {
            if inner.trunk.vertex_count() + k3 <= truncation {
                continue;
            }
            rhs = rhs
                + mult::<S>(&outer.multiplicity)
                    * mult::<S>(&inner.multiplicity)
                    * x(u, a, &inner.pruned)?
                    * x(a, b, &inner.trunk)?
                    * right.clone();
        }
    }
    Ok((lhs, rhs))
}

/// `max |v| / (t-s)^{γ|τ|}` over the samples `(s, t, v)` of one tree.
pub fn holder_scaling_fit(samples: &[(f64, f64, f64)], gamma: f64, degree: usize) -> f64 {
    samples
        .iter()
        .filter(|(s, t, _)| t > s)
        .map(|&(s, t, v)| v.abs() / (t - s).powf(gamma * degree as f64))
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lift::{lift_polynomial, PolynomialPath};
    use crate::poly::Poly;
    use crate::scalar::rational;

    fn t(s: &str) -> RootedTree {
        s.parse().unwrap()
    }

    fn q(p: i64, d: i64) -> BigRational {
        rational(p, d)
    }

    const FULL: IdentityPath = IdentityPath { max_degree: 8 };

    #[test]
    fn two_point_partition_sum_by_hand() {
        let p = Partition::new(vec![q(0, 1), q(1, 2), q(1, 1)]).unwrap();
        let ladder = t("[*]").into_forest();
        let got = partition_sum(&FULL, 1, 2, &p, &ladder).unwrap();
        assert_eq!(got, q(1, 4));
    }

    #[test]
    fn single_interval_partition_vanishes() {
        let p = Partition::new(vec![q(1, 4), q(3, 4)]).unwrap();
        for tree in Catalog::new(4, Alphabet::Unlabelled).trees_up_to(4).filter(|t| t.vertex_count() > 1) {
            let n = tree.vertex_count();
            assert_eq!(partition_sum(&FULL, 1, n, &p, &tree.clone().into_forest()).unwrap(), q(0, 1));
        }
    }

    #[test]
    fn partition_sum_guards() {
        let p = Partition::new(vec![q(0, 1), q(1, 1)]).unwrap();
        assert!(partition_sum(&FULL, 1, 1, &p, &RootedTree::leaf().into_forest()).is_err());
        let short = Truncated::new(&FULL, 1);
        assert!(matches!(
            partition_sum(&short, 1, 3, &p, &t("[[*]]").into_forest()),
            Err(ExtensionError::MissingDegree { .. })
        ));
        assert!(Partition::new(vec![q(0, 1), q(0, 1)]).is_err());
        assert!(Partition::new(vec![q(1, 2)]).is_err());
        assert!(Partition::new(vec![q(0, 1), q(3, 2)]).is_err());
    }

    #[test]
    fn dyadic_partition_and_mesh() {
        let p = Partition::dyadic(&q(1, 4), &q(3, 4), 2).unwrap();
        assert_eq!(p.points().len(), 5);
        assert_eq!(p.mesh(), q(1, 8));
        assert!(p.without(0).is_err());
        assert!(p.without(4).is_err());
        assert_eq!(p.without(2).unwrap().points().len(), 4);
    }

    #[test]
    fn extension_of_identity_is_exact() {
        let source = Truncated::new(&FULL, 1);
        let cfg = ExtendConfig { tol: 1e-12, ..ExtendConfig::default() };
        let ext = extend(&source, 1, 4, &q(1, 4), &q(3, 4), cfg).unwrap();
        for (tree, v) in ext.trees.iter().zip(&ext.values) {
            let want: BigRational = FULL.raw_value(&q(1, 4), &q(3, 4), tree);
            assert_eq!(v, &want, "{tree}");
        }
        assert_eq!(ext.levels.last().unwrap().delta, 0.0);
        assert!(!ext.records().is_empty());
    }

    #[test]
    fn extension_in_floating_point() {
        let source = Truncated::new(&FULL, 1);
        let ext = extend(&source, 1, 3, &0.0f64, &1.0, ExtendConfig::default()).unwrap();
        for (tree, v) in ext.trees.iter().zip(&ext.values) {
            let want = 1.0 / tree.factorial_f64();
            assert!((v - want).abs() < 1e-9, "{tree}: {v} vs {want}");
        }
        let chi = ext.to_character();
        assert!((chi.tree_value(&RootedTree::leaf()).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn extension_of_a_polynomial_lift_matches_the_lift() {
        let path = PolynomialPath::new(vec![Poly::from_integers(&[0, 1]), Poly::from_integers(&[0, 0, 1])]).unwrap();
        let lift = lift_polynomial(&path, 4, Alphabet::Labels(2)).unwrap();
        let source = Truncated::new(&lift, 1);
        let (s, e) = (q(0, 1), q(1, 2));
        let ext = extend(&source, 1, 4, &s, &e, ExtendConfig { tol: 1e-12, ..ExtendConfig::default() }).unwrap();
        for (tree, v) in ext.trees.iter().zip(&ext.values) {
            assert_eq!(v, &lift.value(tree, &s, &e).unwrap(), "{tree}");
        }
    }

    #[test]
    fn extension_guards() {
        let source = Truncated::new(&FULL, 1);
        let zero_tol = ExtendConfig { tol: 0.0, ..ExtendConfig::default() };
        assert!(extend(&source, 1, 3, &0.0f64, &1.0, zero_tol).is_err());
        assert!(extend(&source, 1, 1, &0.0f64, &1.0, ExtendConfig::default()).is_err());
        assert!(extend(&source, 2, 3, &0.0f64, &1.0, ExtendConfig::default()).is_err());
        let capped = ExtendConfig { tol: 1e-300, min_level: 0, max_level: 2, extrapolation_order: 1 };
        assert!(matches!(
            extend(&source, 1, 4, &0.0f64, &1.0, capped),
            Err(ExtensionError::NotConverged { level: 2, .. })
        ));
    }

    #[test]
    fn drop_point_identity_by_hand() {
        let p = Partition::new(vec![q(0, 1), q(1, 4), q(1, 2), q(1, 1)]).unwrap();
        let ladder = t("[*]").into_forest();
        let (lhs, rhs) = drop_point_residual(&FULL, 1, &p, 1, 2, &q(0, 1), &ladder).unwrap();
        assert_eq!(lhs, rhs);
        // Dropping ¼ removes X_{0,¼}X_{¼,½} from the ladder sum.
        assert_eq!(lhs, q(1, 16));
        assert!(drop_point_residual(&FULL, 1, &p, 0, 2, &q(0, 1), &ladder).is_err());
        assert!(drop_point_residual(&FULL, 1, &p, 3, 2, &q(0, 1), &ladder).is_err());
    }

    #[test]
    fn drop_point_identity_everywhere_small() {
        let p = Partition::new(vec![q(0, 1), q(1, 5), q(1, 3), q(2, 3), q(1, 1)]).unwrap();
        let catalog = Catalog::new(5, Alphabet::Unlabelled);
        for truncation in 1..=2 {
            for n in truncation + 1..=5 {
                for f in catalog.forests(n) {
                    for j in 1..4 {
                        let (lhs, rhs) = drop_point_residual(&FULL, truncation, &p, j, n, &q(0, 1), f).unwrap();
                        assert_eq!(lhs, rhs, "N={truncation} n={n} f={f} j={j}");
                    }
                }
            }
        }
    }

    #[test]
    fn scaling_fit() {
        let samples = [(0.0, 0.5, 0.125), (0.0, 1.0, 0.5), (0.3, 0.3, 9.0)];
        assert!((holder_scaling_fit(&samples, 1.0, 2) - 0.5).abs() < 1e-15);
    }
}
