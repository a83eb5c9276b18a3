//! Linear functionals on the forest algebra, their convolution, characters
//! and the weighted tree and forest norms.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::constants::{ln_c_k, unlabelled_tree_count};
use crate::bounds::{violates_log, SLACK_EPS};
use crate::hopf::{coproduct_forest, coproduct_tree};
use crate::scalar::{rational, Scalar, ScalarRepr};
use crate::trees::{Catalog, Forest, RootedTree};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CharacterError {
    #[error("degree {degree} exceeds truncation {max}")]
    DegreeOverflow { degree: usize, max: usize },
    #[error("not a character: ⟨X,{left}⟩⟨X,{right}⟩ ≠ ⟨X,{left}·{right}⟩")]
    NotCharacter { left: String, right: String },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("bad character data: {0}")]
    Format(String),
}

type TreeRule<S> = Arc<dyn Fn(&RootedTree) -> S + Send + Sync>;

#[derive(Clone)]
enum Backing<S> {
    /// Values on trees, extended multiplicatively; missing trees are zero.
    Trees(BTreeMap<RootedTree, S>),
    /// Values on trees given by a rule, extended multiplicatively.
    Rule(TreeRule<S>),
    /// Values on forests; nothing is extended and missing forests are zero.
    Forests(BTreeMap<Forest, S>),
}

/// A functional `⟨X, ·⟩` on forests up to `max_degree` vertices.
#[derive(Clone)]
pub struct Character<S> {
    backing: Backing<S>,
    max_degree: usize,
}

impl<S: Scalar> fmt::Debug for Character<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.backing {
            Backing::Trees(m) => format!("trees({})", m.len()),
            Backing::Rule(_) => "rule".to_string(),
            Backing::Forests(m) => format!("forests({})", m.len()),
        };
        write!(f, "Character {{ {kind}, max_degree: {} }}", self.max_degree)
    }
}

impl<S: Scalar> Character<S> {
    pub fn from_tree_values(values: impl IntoIterator<Item = (RootedTree, S)>, max_degree: usize) -> Self {
        Character { backing: Backing::Trees(values.into_iter().collect()), max_degree }
    }

    pub fn from_tree_rule(rule: impl Fn(&RootedTree) -> S + Send + Sync + 'static, max_degree: usize) -> Self {
        Character { backing: Backing::Rule(Arc::new(rule)), max_degree }
    }

    /// An arbitrary functional; the unit gets whatever `values` says.
    pub fn from_forest_values(values: impl IntoIterator<Item = (Forest, S)>, max_degree: usize) -> Self {
        Character { backing: Backing::Forests(values.into_iter().collect()), max_degree }
    }

    /// `ε`: one on the empty forest, zero elsewhere.
    pub fn counit(max_degree: usize) -> Self {
        Self::from_tree_values([], max_degree)
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn is_multiplicative_by_construction(&self) -> bool {
        !matches!(self.backing, Backing::Forests(_))
    }

    fn check_degree(&self, degree: usize) -> Result<(), CharacterError> {
        if degree > self.max_degree {
            Err(CharacterError::DegreeOverflow { degree, max: self.max_degree })
        } else {
            Ok(())
        }
    }

    pub fn tree_value(&self, tree: &RootedTree) -> Result<S, CharacterError> {
        self.check_degree(tree.vertex_count())?;
        Ok(match &self.backing {
            Backing::Trees(m) => m.get(tree).cloned().unwrap_or_else(S::zero),
            Backing::Rule(r) => r(tree),
            Backing::Forests(m) => m.get(&tree.clone().into_forest()).cloned().unwrap_or_else(S::zero),
        })
    }

    pub fn value(&self, forest: &Forest) -> Result<S, CharacterError> {
        self.check_degree(forest.vertex_count())?;
        match &self.backing {
            Backing::Forests(m) => Ok(m.get(forest).cloned().unwrap_or_else(S::zero)),
            _ => forest
                .trees()
                .iter()
                .try_fold(S::one(), |acc, t| Ok(acc * self.tree_value(t)?)),
        }
    }

    /// `⟨X^k, f⟩`: the value when `|f| = k`, zero otherwise.
    pub fn graded_value(&self, forest: &Forest, k: usize) -> Result<S, CharacterError> {
        if forest.vertex_count() == k {
            self.value(forest)
        } else {
            Ok(S::zero())
        }
    }

    /// `⟨X, τ⟩ ↦ λ^{|τ|} ⟨X, τ⟩`.
    pub fn scaled(&self, lambda: S) -> Self {
        let power = move |n: usize| (0..n).fold(S::one(), |acc, _| acc * lambda.clone());
        let backing = match &self.backing {
            Backing::Trees(m) => Backing::Trees(
                m.iter().map(|(t, v)| (t.clone(), v.clone() * power(t.vertex_count()))).collect(),
            ),
            Backing::Forests(m) => Backing::Forests(
                m.iter().map(|(f, v)| (f.clone(), v.clone() * power(f.vertex_count()))).collect(),
            ),
            Backing::Rule(r) => {
                let r = Arc::clone(r);
                Backing::Rule(Arc::new(move |t| r(t) * power(t.vertex_count())))
            }
        };
        Character { backing, max_degree: self.max_degree }
    }

    /// Explicit forest values for every forest of the catalog up to the truncation.
    pub fn materialize(&self, catalog: &Catalog) -> Result<Self, CharacterError> {
        let top = self.max_degree.min(catalog.max_size());
        let values = catalog
            .forests_up_to(top)
            .map(|f| Ok((f.clone(), self.value(f)?)))
            .collect::<Result<BTreeMap<_, _>, CharacterError>>()?;
        Ok(Character { backing: Backing::Forests(values), max_degree: top })
    }

    pub fn to_f64(&self, catalog: &Catalog) -> Result<Character<f64>, CharacterError> {
        let top = self.max_degree.min(catalog.max_size());
        Ok(match &self.backing {
            Backing::Forests(m) => Character::from_forest_values(
                m.iter().map(|(f, v)| (f.clone(), v.to_f64())),
                self.max_degree,
            ),
            _ => Character::from_tree_values(
                catalog
                    .trees_up_to(top)
                    .map(|t| Ok((t.clone(), self.tree_value(t)?.to_f64())))
                    .collect::<Result<Vec<_>, CharacterError>>()?,
                top,
            ),
        })
    }

    pub fn to_json(&self, catalog: &Catalog) -> Result<CharacterJson, CharacterError> {
        let top = self.max_degree.min(catalog.max_size());
        let (backing, entries): (&str, Vec<(Forest, S)>) = match &self.backing {
            Backing::Forests(m) => ("forests", m.iter().map(|(f, v)| (f.clone(), v.clone())).collect()),
            _ => (
                "trees",
                catalog
                    .trees_up_to(top)
                    .map(|t| Ok((t.clone().into_forest(), self.tree_value(t)?)))
                    .collect::<Result<_, CharacterError>>()?,
            ),
        };
        Ok(CharacterJson {
            schema: 1,
            mode: if S::EXACT { "exact" } else { "float" }.to_string(),
            backing: backing.to_string(),
            max_degree: self.max_degree,
            values: entries
                .into_iter()
                .map(|(f, v)| ValueJson { degree: f.vertex_count(), forest: f.to_string(), value: v.to_repr() })
                .collect(),
        })
    }

    pub fn from_json(json: &CharacterJson) -> Result<Self, CharacterError> {
        let mut pairs = Vec::with_capacity(json.values.len());
        for v in &json.values {
            let forest: Forest = v.forest.parse().map_err(|e| CharacterError::Format(format!("{e}")))?;
            let value = S::from_repr(&v.value)
                .ok_or_else(|| CharacterError::Format(format!("bad value for {}", v.forest)))?;
            pairs.push((forest, value));
        }
        match json.backing.as_str() {
            "forests" => Ok(Self::from_forest_values(pairs, json.max_degree)),
            "trees" => {
                let trees = pairs
                    .into_iter()
                    .map(|(f, v)| match f.as_tree() {
                        Some(t) => Ok((t.clone(), v)),
                        None => Err(CharacterError::Format(format!("{f} is not a tree"))),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Self::from_tree_values(trees, json.max_degree))
            }
            other => Err(CharacterError::Format(format!("unknown backing `{other}`"))),
        }
    }
}

/// `⟨X_{s,t}, τ⟩ = h^{|τ|} / τ!` with `h = t - s`.
pub fn identity_path<S: Scalar>(increment: S, max_degree: usize) -> Character<S> {
    Character::from_tree_rule(
        move |t| {
            let mut v = S::one();
            for _ in 0..t.vertex_count() {
                v = v * increment.clone();
            }
            v / S::from_biguint(&t.factorial())
        },
        max_degree,
    )
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharacterJson {
    pub schema: u32,
    pub mode: String,
    pub backing: String,
    pub max_degree: usize,
    pub values: Vec<ValueJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValueJson {
    pub forest: String,
    pub degree: usize,
    #[serde(flatten)]
    pub value: ScalarRepr,
}

fn check_both<S: Scalar>(x: &Character<S>, y: &Character<S>, degree: usize) -> Result<(), CharacterError> {
    x.check_degree(degree)?;
    y.check_degree(degree)
}

/// `⟨X ⋆ Y, f⟩ = Σ ⟨X, pruned⟩⟨Y, trunk⟩`.
pub fn star<S: Scalar>(x: &Character<S>, y: &Character<S>, f: &Forest) -> Result<S, CharacterError> {
    check_both(x, y, f.vertex_count())?;
    coproduct_forest(f).iter().try_fold(S::zero(), |acc, t| {
        Ok(acc + S::from_biguint(&t.multiplicity) * x.value(&t.pruned)? * y.value(&t.trunk)?)
    })
}

/// `⟨X^n ⋆ Y^k, f⟩`.
pub fn star_graded<S: Scalar>(
    x: &Character<S>,
    n: usize,
    y: &Character<S>,
    k: usize,
    f: &Forest,
) -> Result<S, CharacterError> {
    check_both(x, y, f.vertex_count())?;
    if f.vertex_count() != n + k {
        return Ok(S::zero());
    }
    coproduct_forest(f)
        .iter()
        .filter(|t| t.pruned.vertex_count() == n)
        .try_fold(S::zero(), |acc, t| {
            Ok(acc + S::from_biguint(&t.multiplicity) * x.value(&t.pruned)? * y.value(&t.trunk)?)
        })
}

/// `X ⋆ Y` as explicit forest values over the catalog.
pub fn convolve<S: Scalar>(
    x: &Character<S>,
    y: &Character<S>,
    catalog: &Catalog,
) -> Result<Character<S>, CharacterError> {
    let top = x.max_degree.min(y.max_degree).min(catalog.max_size());
    let values = catalog
        .forests_up_to(top)
        .map(|f| Ok((f.clone(), star(x, y, f)?)))
        .collect::<Result<Vec<_>, CharacterError>>()?;
    Ok(Character::from_forest_values(values, top))
}

/// Solve `total = left ⋆ Z` for a multiplicative `Z` on the catalog's trees.
pub fn chen_divide<S: Scalar>(
    left: &Character<S>,
    total: &Character<S>,
    catalog: &Catalog,
) -> Result<Character<S>, CharacterError> {
    let top = left.max_degree.min(total.max_degree).min(catalog.max_size());
    let mut z: BTreeMap<RootedTree, S> = BTreeMap::new();
    for tree in catalog.trees_up_to(top) {
        let mut v = total.tree_value(tree)?;
        for term in coproduct_tree(tree) {
            if term.pruned.is_empty() {
                continue;
            }
            let trunk = match term.trunk.as_tree() {
                Some(t) => z.get(t).cloned().unwrap_or_else(S::zero),
                None => S::one(),
            };
            v = v - S::from_biguint(&term.multiplicity) * left.value(&term.pruned)? * trunk;
        }
        z.insert(tree.clone(), v);
    }
    Ok(Character::from_tree_values(z, top))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterCheck {
    pub holds: bool,
    /// First failing pair `(a, b)` with `⟨X,a⟩⟨X,b⟩ ≠ ⟨X,ab⟩`; `(1, 1)` flags `⟨X,1⟩ ≠ 1`.
    pub counterexample: Option<(Forest, Forest)>,
    pub pairs_checked: usize,
}

/// Exact multiplicativity over every factorisation up to `up_to` vertices.
pub fn is_character<S: Scalar>(
    x: &Character<S>,
    up_to: usize,
    catalog: &Catalog,
) -> Result<CharacterCheck, CharacterError> {
    is_character_within(x, up_to, catalog, 0.0)
}

/// As [`is_character`], with absolute tolerance `tol` in float mode.
pub fn is_character_within<S: Scalar>(
    x: &Character<S>,
    up_to: usize,
    catalog: &Catalog,
    tol: f64,
) -> Result<CharacterCheck, CharacterError> {
    x.check_degree(up_to)?;
    if up_to > catalog.max_size() {
        return Err(CharacterError::Precondition(format!(
            "catalog holds {} vertices, check needs {up_to}",
            catalog.max_size()
        )));
    }
    let fail = |a: &Forest, b: &Forest, n| CharacterCheck {
        holds: false,
        counterexample: Some((a.clone(), b.clone())),
        pairs_checked: n,
    };
    let unit = Forest::empty();
    if !x.value(&unit)?.close_to(&S::one(), tol) {
        return Ok(fail(&unit, &unit, 1));
    }
    let mut checked = 1;
    for total in 1..=up_to {
        for da in 0..=total / 2 {
            for (i, a) in catalog.forests(da).iter().enumerate() {
                let xa = x.value(a)?;
                let bs = catalog.forests(total - da);
                let start = if 2 * da == total { i } else { 0 };
                for b in &bs[start..] {
                    checked += 1;
                    let lhs = xa.clone() * x.value(b)?;
                    if !lhs.close_to(&x.value(&a.multiply(b))?, tol) {
                        return Ok(fail(a, b, checked));
                    }
                }
            }
        }
    }
    Ok(CharacterCheck { holds: true, counterexample: None, pairs_checked: checked })
}

/// `γ` and `β` of the weighted norms; `β` is kept as a logarithm because the
/// thresholds it is compared with overflow `f64` quickly.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormParams {
    pub gamma: f64,
    pub ln_beta: f64,
}

impl NormParams {
    pub fn new(gamma: f64, beta: f64) -> Result<Self, CharacterError> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(CharacterError::Precondition(format!("beta {beta} must be positive and finite")));
        }
        Self::from_ln_beta(gamma, beta.ln())
    }

    pub fn from_ln_beta(gamma: f64, ln_beta: f64) -> Result<Self, CharacterError> {
        if !(gamma > 0.0 && gamma <= 1.0) {
            return Err(CharacterError::Precondition(format!("gamma {gamma} outside (0, 1]")));
        }
        if !ln_beta.is_finite() {
            return Err(CharacterError::Precondition(format!("ln beta {ln_beta} must be finite")));
        }
        Ok(NormParams { gamma, ln_beta })
    }

    pub fn beta(&self) -> f64 {
        self.ln_beta.exp()
    }

    /// `⌊1/γ⌋`.
    pub fn truncation(&self) -> usize {
        truncation_degree(self.gamma)
    }

    /// `ln[β^{c} · (f! / |f|!)^γ]`.
    fn ln_weight(&self, components: usize, factorial: f64, size: usize) -> f64 {
        components as f64 * self.ln_beta + self.gamma * (factorial.ln() - factorial_f64(size).ln())
    }
}

pub fn truncation_degree(gamma: f64) -> usize {
    (1.0 / gamma + 1e-9).floor() as usize
}

pub fn factorial_f64(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// Maximiser of a norm, with the tree or forest attaining it.
#[derive(Clone, Debug, PartialEq)]
pub struct NormValue {
    pub value: f64,
    pub ln_value: f64,
    pub argmax: Option<Forest>,
}

/// `max_{|τ| = k} |v(τ)| β (τ!/k!)^γ` over the catalog's trees. At `k = 0` this
/// is `|v(1)|`.
pub fn tree_norm_by(
    k: usize,
    params: &NormParams,
    catalog: &Catalog,
    value: impl Fn(&Forest) -> Result<f64, CharacterError>,
) -> Result<NormValue, CharacterError> {
    if k == 0 {
        let v = value(&Forest::empty())?.abs();
        return Ok(NormValue { value: v, ln_value: v.ln(), argmax: Some(Forest::empty()) });
    }
    let forests = catalog.trees(k).iter().map(|t| t.clone().into_forest());
    weighted_max(k, params, forests, value)
}

/// `max_{|f| = k} |v(f)| β^{c(f)} (f!/k!)^γ` over the catalog's forests.
pub fn forest_norm_by(
    k: usize,
    params: &NormParams,
    catalog: &Catalog,
    value: impl Fn(&Forest) -> Result<f64, CharacterError>,
) -> Result<NormValue, CharacterError> {
    weighted_max(k, params, catalog.forests(k).iter().cloned(), value)
}

fn weighted_max(
    k: usize,
    params: &NormParams,
    items: impl Iterator<Item = Forest>,
    value: impl Fn(&Forest) -> Result<f64, CharacterError>,
) -> Result<NormValue, CharacterError> {
    let mut best = NormValue { value: 0.0, ln_value: f64::NEG_INFINITY, argmax: None };
    for f in items {
        let ln_v = value(&f)?.abs().ln() + params.ln_weight(f.component_count(), f.factorial_f64(), k);
        if best.argmax.is_none() || ln_v > best.ln_value {
            best = NormValue { value: ln_v.exp(), ln_value: ln_v, argmax: Some(f) };
        }
    }
    Ok(best)
}

pub fn tree_norm<S: Scalar>(
    x: &Character<S>,
    k: usize,
    params: &NormParams,
    catalog: &Catalog,
) -> Result<f64, CharacterError> {
    Ok(tree_norm_by(k, params, catalog, |f| Ok(x.value(f)?.to_f64()))?.value)
}

pub fn forest_norm<S: Scalar>(
    x: &Character<S>,
    k: usize,
    params: &NormParams,
    catalog: &Catalog,
) -> Result<f64, CharacterError> {
    Ok(forest_norm_by(k, params, catalog, |f| Ok(x.value(f)?.to_f64()))?.value)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StarBoundReport {
    pub n: usize,
    pub k: usize,
    pub ln_lhs: f64,
    pub ln_rhs: f64,
    pub worst_tree: Option<String>,
    pub passed: bool,
}

/// `‖X^n ⋆ Y^k‖_T ≤ c_k |𝒯ᵏ|^{1-γ} β^{-1} ‖X^n‖_F ‖Y^k‖_T`, both sides as logarithms.
pub fn star_norm_bound_check<S: Scalar>(
    x: &Character<S>,
    y: &Character<S>,
    n: usize,
    k: usize,
    params: &NormParams,
    catalog: &Catalog,
) -> Result<StarBoundReport, CharacterError> {
    if n == 0 {
        return Err(CharacterError::Precondition("n must be at least 1".into()));
    }
    let ln_ck = ln_c_k(k, params.gamma);
    if params.ln_beta < ln_ck - SLACK_EPS * ln_ck.abs().max(1.0) {
        return Err(CharacterError::Precondition(format!("ln beta {} below ln c_k = {ln_ck}", params.ln_beta)));
    }
    let lhs = tree_norm_by(n + k, params, catalog, |f| Ok(star_graded(x, n, y, k, f)?.to_f64()))?;
    let count = unlabelled_tree_count(k).max(1) as f64;
    let ln_rhs = ln_ck + (1.0 - params.gamma) * count.ln() - params.ln_beta
        + forest_norm_by(n, params, catalog, |f| Ok(x.value(f)?.to_f64()))?.ln_value
        + tree_norm_by(k, params, catalog, |f| Ok(y.value(f)?.to_f64()))?.ln_value;
    Ok(StarBoundReport {
        n,
        k,
        ln_lhs: lhs.ln_value,
        ln_rhs,
        worst_tree: lhs.argmax.map(|f| f.to_string()),
        passed: !violates_log(lhs.ln_value, ln_rhs, SLACK_EPS),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct FactorisationOutcome<S> {
    pub lhs: S,
    pub rhs: S,
    pub equal: bool,
}

/// `⟨X^n⋆Y^k, ττ̃⟩ = Σ_{k₁+k₂=k} ⟨X^{|τ|-k₁}⋆Y^{k₁}, τ⟩⟨X^{|τ̃|-k₂}⋆Y^{k₂}, τ̃⟩`
/// with `n = |τ| + |τ̃| - k`. Both functionals must be characters.
pub fn forest_factorisation_check<S: Scalar>(
    x: &Character<S>,
    y: &Character<S>,
    a: &Forest,
    b: &Forest,
    k: usize,
    catalog: &Catalog,
) -> Result<FactorisationOutcome<S>, CharacterError> {
    let (na, nb) = (a.vertex_count(), b.vertex_count());
    let total = na + nb;
    if k > total {
        return Err(CharacterError::Precondition(format!("k = {k} exceeds |ττ̃| = {total}")));
    }
    for z in [x, y] {
        let check = is_character(z, total, catalog)?;
        if let Some((l, r)) = check.counterexample {
            return Err(CharacterError::NotCharacter { left: l.to_string(), right: r.to_string() });
        }
    }
    factorisation_sides(x, y, a, b, k)
}

/// Both sides of the factorisation identity without checking that `x` and
/// `y` are characters; callers sweeping many forests check once up front.
pub fn factorisation_sides<S: Scalar>(
    x: &Character<S>,
    y: &Character<S>,
    a: &Forest,
    b: &Forest,
    k: usize,
) -> Result<FactorisationOutcome<S>, CharacterError> {
    let (na, nb) = (a.vertex_count(), b.vertex_count());
    let total = na + nb;
    if k > total {
        return Err(CharacterError::Precondition(format!("k = {k} exceeds |ττ̃| = {total}")));
    }
    let lhs = star_graded(x, total - k, y, k, &a.multiply(b))?;
    let mut rhs = S::zero();
    for k1 in 0..=k.min(na) {
        let k2 = k - k1;
        if k2 > nb {
            continue;
        }
        rhs = rhs + star_graded(x, na - k1, y, k1, a)? * star_graded(x, nb - k2, y, k2, b)?;
    }
    let equal = lhs == rhs;
    Ok(FactorisationOutcome { lhs, rhs, equal })
}

/// Exact rational identity-path character on `[s, t]`.
pub fn identity_path_exact(s: &BigRational, t: &BigRational, max_degree: usize) -> Character<BigRational> {
    identity_path(t - s, max_degree)
}

/// Seeded character with tree values `p/q`, `|p| ≤ bound`, `1 ≤ q ≤ bound`,
/// over every tree of the catalog.
pub fn random_character(seed: u64, catalog: &Catalog, bound: i64) -> Character<BigRational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bound = bound.max(1);
    let values: Vec<_> = catalog
        .trees_up_to(catalog.max_size())
        .map(|t| (t.clone(), rational(rng.random_range(-bound..=bound), rng.random_range(1..=bound))))
        .collect();
    Character::from_tree_values(values, catalog.max_size())
}
