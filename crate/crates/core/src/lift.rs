//! Lifting a path in `ℝ^d` to a branched rough path through the recursion
//! `⟨X_{s,t}, [τ₁…τₙ]_i⟩ = ∫_s^t Π_j ⟨X_{s,u}, τ_j⟩ dx^i_u`.
//!
//! Polynomial paths are lifted exactly, as bivariate polynomials in `(s, t)`.
//! Sampled paths are lifted numerically with left-point sums.

use std::collections::BTreeMap;
use std::io;
use std::path::Path;

use num::BigRational;
use serde::Serialize;
use thiserror::Error;

use crate::character::{chen_divide, Character, CharacterError};
use crate::poly::{Poly, Poly2};
use crate::scalar::Scalar;
use crate::trees::{Alphabet, Catalog, Label, RootedTree};

#[derive(Debug, Error)]
pub enum LiftError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("bad path data: {0}")]
    Data(String),
    #[error("no convergence after {levels} refinements: last change {achieved:.3e}, tolerance {tol:.3e}")]
    NotConverged { levels: u32, achieved: f64, tol: f64 },
    #[error(transparent)]
    Character(#[from] CharacterError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Component of `x` that a vertex label integrates against. An unlabelled
/// vertex reads the first component, which is only allowed for scalar paths.
fn component(label: Label, dim: usize) -> Result<usize, LiftError> {
    match label.component() {
        Some(i) if i < dim => Ok(i),
        Some(i) => Err(LiftError::Precondition(format!("label {} on a path of dimension {dim}", i + 1))),
        None if dim == 1 => Ok(0),
        None => Err(LiftError::Precondition(format!("unlabelled tree on a path of dimension {dim}"))),
    }
}

/// Alphabet a path of dimension `dim` is lifted over by default.
pub fn default_alphabet(dim: usize) -> Alphabet {
    if dim == 1 {
        Alphabet::Unlabelled
    } else {
        Alphabet::Labels(dim as u16)
    }
}

/// `x(t) = (x¹(t), …, x^d(t))` with exact rational coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct PolynomialPath {
    components: Vec<Poly>,
}

impl PolynomialPath {
    pub fn new(components: Vec<Poly>) -> Result<Self, LiftError> {
        if components.is_empty() {
            return Err(LiftError::Data("a path needs at least one component".into()));
        }
        Ok(PolynomialPath { components })
    }

    /// `x(t) = t`.
    pub fn identity() -> Self {
        PolynomialPath { components: vec![Poly::from_integers(&[0, 1])] }
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Poly] {
        &self.components
    }

    pub fn eval_f64(&self, t: f64) -> Vec<f64> {
        self.components.iter().map(|p| p.eval_f64(t)).collect()
    }

    /// Sample on `m + 1` equally spaced points of `[0, 1]`.
    pub fn sample(&self, m: usize, gamma: f64) -> Result<SampledPath, LiftError> {
        SampledPath::from_fn(m, gamma, self.dim(), |t| self.eval_f64(t))
    }
}

/// Exact lift: one bivariate polynomial per tree.
#[derive(Clone, Debug)]
pub struct PolynomialLift {
    max_degree: usize,
    alphabet: Alphabet,
    values: BTreeMap<RootedTree, Poly2>,
}

pub fn lift_polynomial(path: &PolynomialPath, max_degree: usize, alphabet: Alphabet) -> Result<PolynomialLift, LiftError> {
    let catalog = Catalog::new(max_degree, alphabet);
    let derivatives: Vec<Poly> = path.components.iter().map(Poly::derivative).collect();
    let mut values: BTreeMap<RootedTree, Poly2> = BTreeMap::new();
    for tree in catalog.trees_up_to(max_degree) {
        let i = component(tree.label(), path.dim())?;
        let integrand = tree.children().iter().fold(Poly2::one(), |acc, c| acc.mul(&values[c]));
        values.insert(tree.clone(), integrand.integrate_against(&derivatives[i]));
    }
    Ok(PolynomialLift { max_degree, alphabet, values })
}

impl PolynomialLift {
    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn polynomial(&self, tree: &RootedTree) -> Option<&Poly2> {
        self.values.get(tree)
    }

    pub fn value(&self, tree: &RootedTree, s: &BigRational, t: &BigRational) -> Option<BigRational> {
        self.values.get(tree).map(|p| p.eval(s, t))
    }

    /// `X_{s,t}` as an exact character.
    pub fn character_at(&self, s: &BigRational, t: &BigRational) -> Character<BigRational> {
        let values = self.values.iter().map(|(tree, p)| (tree.clone(), p.eval(s, t)));
        Character::from_tree_values(values, self.max_degree)
    }

    /// `X_{s,t}` in floating point, evaluated exactly and rounded once.
    pub fn character_at_f64(&self, s: f64, t: f64) -> Character<f64> {
        match (BigRational::from_float(s), BigRational::from_float(t)) {
            (Some(a), Some(b)) => {
                let values = self.values.iter().map(|(tree, p)| (tree.clone(), p.eval(&a, &b).to_f64()));
                Character::from_tree_values(values, self.max_degree)
            }
            _ => Character::from_tree_values(
                self.values.iter().map(|(tree, p)| (tree.clone(), p.eval_f64(s, t))),
                self.max_degree,
            ),
        }
    }
}

/// Samples `x(t₀), …, x(t_m)` on a strictly increasing grid in `[0, 1]`,
/// with the Hölder exponent the data is claimed to have.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledPath {
    times: Vec<f64>,
    values: Vec<Vec<f64>>,
    gamma: f64,
}

impl SampledPath {
    pub fn new(times: Vec<f64>, values: Vec<Vec<f64>>, gamma: f64) -> Result<Self, LiftError> {
        if times.len() < 2 || times.len() != values.len() {
            return Err(LiftError::Data("need at least two samples, one value row per time".into()));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(LiftError::Data("times must be strictly increasing".into()));
        }
        if times[0] < 0.0 || times[times.len() - 1] > 1.0 {
            return Err(LiftError::Data("times must lie in [0, 1]".into()));
        }
        let dim = values[0].len();
        if dim == 0 || values.iter().any(|v| v.len() != dim) {
            return Err(LiftError::Data("every row needs the same positive number of components".into()));
        }
        if !(gamma > 0.0 && gamma <= 1.0) {
            return Err(LiftError::Data(format!("gamma {gamma} outside (0, 1]")));
        }
        Ok(SampledPath { times, values, gamma })
    }

    /// `f` on `m + 1` equally spaced points of `[0, 1]`.
    pub fn from_fn(m: usize, gamma: f64, dim: usize, f: impl Fn(f64) -> Vec<f64>) -> Result<Self, LiftError> {
        if m == 0 {
            return Err(LiftError::Data("need at least one interval".into()));
        }
        let times: Vec<f64> = (0..=m).map(|i| i as f64 / m as f64).collect();
        let values: Vec<Vec<f64>> = times.iter().map(|&t| f(t)).collect();
        if values.iter().any(|v| v.len() != dim) {
            return Err(LiftError::Data(format!("function must return {dim} components")));
        }
        Self::new(times, values, gamma)
    }

    /// `(Σ_k b^{-γk} cos(b^k π t), Σ_k b^{-γk} sin(b^k π t))` for `k = 0..=terms`,
    /// which is γ-Hölder when `b > 1`.
    pub fn weierstrass(m: usize, gamma: f64, base: f64, terms: u32) -> Result<Self, LiftError> {
        if base <= 1.0 {
            return Err(LiftError::Data(format!("base {base} must exceed 1")));
        }
        Self::from_fn(m, gamma, 2, |t| {
            let (mut c, mut s) = (0.0, 0.0);
            for k in 0..=terms {
                let amp = base.powf(-gamma * k as f64);
                let arg = base.powi(k as i32) * std::f64::consts::PI * t;
                c += amp * arg.cos();
                s += amp * arg.sin();
            }
            vec![c, s]
        })
    }

    /// Read `t,x1,...,xd` CSV.
    pub fn from_csv_reader(reader: impl io::Read, gamma: f64) -> Result<Self, LiftError> {
        let mut rdr = csv::Reader::from_reader(reader);
        let headers = rdr.headers()?.clone();
        let dim = headers.len().saturating_sub(1);
        let expected: Vec<String> =
            std::iter::once("t".to_string()).chain((1..=dim).map(|i| format!("x{i}"))).collect();
        if dim == 0 || headers.iter().map(str::trim).ne(expected.iter().map(String::as_str)) {
            return Err(LiftError::Data(format!("header must be {}", expected.join(","))));
        }
        let mut times = Vec::new();
        let mut values = Vec::new();
        for (line, record) in rdr.records().enumerate() {
            let record = record?;
            let parse = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| LiftError::Data(format!("row {}: `{s}` is not a number", line + 2)))
            };
            times.push(parse(&record[0])?);
            values.push(record.iter().skip(1).map(parse).collect::<Result<Vec<_>, _>>()?);
        }
        Self::new(times, values, gamma)
    }

    pub fn from_csv_path(path: impl AsRef<Path>, gamma: f64) -> Result<Self, LiftError> {
        Self::from_csv_reader(std::fs::File::open(path)?, gamma)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.values[0].len()
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

/// `sup |x_t - x_s| / |t - s|^γ` over sample pairs (Euclidean norm); a lower
/// bound on the true Hölder constant.
pub fn holder_norm_estimate(path: &SampledPath, gamma: f64) -> f64 {
    let mut best: f64 = 0.0;
    for i in 0..path.times.len() {
        for j in i + 1..path.times.len() {
            let dist = path.values[i]
                .iter()
                .zip(&path.values[j])
                .map(|(a, b)| (b - a) * (b - a))
                .sum::<f64>()
                .sqrt();
            best = best.max(dist / (path.times[j] - path.times[i]).powf(gamma));
        }
    }
    best
}

/// The same estimate for each component on its own.
pub fn component_holder_norms(path: &SampledPath, gamma: f64) -> Vec<f64> {
    (0..path.dim())
        .map(|c| {
            let column = SampledPath {
                times: path.times.clone(),
                values: path.values.iter().map(|v| vec![v[c]]).collect(),
                gamma: path.gamma,
            };
            holder_norm_estimate(&column, gamma)
        })
        .collect()
}

/// Trees in recursion order with their children as indices.
#[derive(Clone, Debug)]
struct TreeIndex {
    trees: Vec<RootedTree>,
    components: Vec<usize>,
    children: Vec<Vec<usize>>,
}

impl TreeIndex {
    fn new(catalog: &Catalog, max_degree: usize, dim: usize) -> Result<Self, LiftError> {
        let trees: Vec<RootedTree> = catalog.trees_up_to(max_degree).cloned().collect();
        let position: BTreeMap<&RootedTree, usize> = trees.iter().enumerate().map(|(i, t)| (t, i)).collect();
        let mut components = Vec::with_capacity(trees.len());
        let mut children = Vec::with_capacity(trees.len());
        for tree in &trees {
            components.push(component(tree.label(), dim)?);
            children.push(tree.children().iter().map(|c| position[c]).collect());
        }
        Ok(TreeIndex { trees, components, children })
    }

    /// One left-point step with path increment `dx`: larger trees first, so
    /// every child is still read at the left end.
    fn step(&self, v: &mut [f64], dx: &[f64]) {
        for k in (0..self.trees.len()).rev() {
            let product: f64 = self.children[k].iter().map(|&c| v[c]).product();
            v[k] += product * dx[self.components[k]];
        }
    }

    /// Run from sample `from` to sample `to` with `2^level` linear sub-steps
    /// per sample interval, recording the values at each sample.
    fn sweep(&self, path: &SampledPath, from: usize, to: usize, level: u32, mut record: impl FnMut(usize, &[f64])) {
        let sub = 1usize << level;
        let mut v = vec![0.0; self.trees.len()];
        let mut dx = vec![0.0; path.dim()];
        record(from, &v);
        for j in from..to {
            for (d, (a, b)) in dx.iter_mut().zip(path.values[j].iter().zip(&path.values[j + 1])) {
                *d = (b - a) / sub as f64;
            }
            for _ in 0..sub {
                self.step(&mut v, &dx);
            }
            record(j + 1, &v);
        }
    }
}

/// Numeric lift: `X_{t₀, t_j}` for every sample `j`, from which any
/// `X_{t_i, t_j}` follows by Chen's identity.
#[derive(Clone, Debug)]
pub struct NumericLift {
    path: SampledPath,
    index: TreeIndex,
    catalog: Catalog,
    max_degree: usize,
    /// `table[j][k]`: value of tree `k` on `[t₀, t_j]`.
    table: Vec<Vec<f64>>,
    /// Sub-step level `r` (`2^r` linear steps per sample interval) reached.
    pub level: u32,
    /// Max change between successive levels, one entry per refinement.
    pub deltas: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct YoungConfig {
    pub tol: f64,
    pub max_level: u32,
}

impl Default for YoungConfig {
    fn default() -> Self {
        YoungConfig { tol: 1e-8, max_level: 12 }
    }
}

/// Left-point lift with dyadic sub-stepping, stopped once two successive
/// levels differ by less than `tol` in max norm over all trees and samples.
pub fn lift_young(path: &SampledPath, max_degree: usize, config: YoungConfig) -> Result<NumericLift, LiftError> {
    if path.gamma <= 0.5 {
        return Err(LiftError::Precondition(format!(
            "Young lift needs γ > 1/2, path claims γ = {}",
            path.gamma
        )));
    }
    if config.tol.is_nan() || config.tol <= 0.0 {
        return Err(LiftError::Precondition(format!("tolerance must be positive, got {}", config.tol)));
    }
    let alphabet = default_alphabet(path.dim());
    let catalog = Catalog::new(max_degree, alphabet);
    let index = TreeIndex::new(&catalog, max_degree, path.dim())?;
    let last = path.times.len() - 1;
    let run = |level: u32| {
        let mut table = vec![Vec::new(); last + 1];
        index.sweep(path, 0, last, level, |j, v| table[j] = v.to_vec());
        table
    };
    let mut table = run(0);
    let mut deltas = Vec::new();
    for level in 1..=config.max_level {
        let next = run(level);
        let delta = table
            .iter()
            .zip(&next)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max);
        deltas.push(delta);
        table = next;
        if delta < config.tol {
            return Ok(NumericLift { path: path.clone(), index, catalog, max_degree, table, level, deltas });
        }
    }
    Err(LiftError::NotConverged {
        levels: config.max_level,
        achieved: deltas.last().copied().unwrap_or(f64::INFINITY),
        tol: config.tol,
    })
}

impl NumericLift {
    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn catalog(&self) -> &Catalog {
        &self.catalog
    }

    pub fn times(&self) -> &[f64] {
        &self.path.times
    }

    pub fn trees(&self) -> &[RootedTree] {
        &self.index.trees
    }

    fn character_from(&self, row: &[f64]) -> Character<f64> {
        Character::from_tree_values(self.index.trees.iter().cloned().zip(row.iter().copied()), self.max_degree)
    }

    /// `X_{t₀, t_j}`.
    pub fn from_start(&self, j: usize) -> Character<f64> {
        self.character_from(&self.table[j])
    }

    /// `X_{t_i, t_j}` from the base table via `X_{t₀,t_j} = X_{t₀,t_i} ⋆ X_{t_i,t_j}`.
    pub fn between(&self, i: usize, j: usize) -> Result<Character<f64>, LiftError> {
        if i > j || j >= self.table.len() {
            return Err(LiftError::Precondition(format!("need i ≤ j < {}, got {i}, {j}", self.table.len())));
        }
        let z = chen_divide(&self.from_start(i), &self.from_start(j), &self.catalog)?;
        // Rebuild over all trees so unseen trees read as zero rather than missing.
        Ok(self.character_from(&self.index.trees.iter().map(|t| z.tree_value(t).unwrap_or(0.0)).collect::<Vec<_>>()))
    }

    /// `X_{t_i, t_j}` computed afresh from `t_i`, at the converged level.
    pub fn direct(&self, i: usize, j: usize) -> Result<Character<f64>, LiftError> {
        if i > j || j >= self.table.len() {
            return Err(LiftError::Precondition(format!("need i ≤ j < {}, got {i}, {j}", self.table.len())));
        }
        let mut out = Vec::new();
        self.index.sweep(&self.path, i, j, self.level, |k, v| {
            if k == j {
                out = v.to_vec();
            }
        });
        Ok(self.character_from(&out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;

    fn t(s: &str) -> RootedTree {
        s.parse().unwrap()
    }

    fn plane() -> PolynomialPath {
        PolynomialPath::new(vec![Poly::from_integers(&[0, 1]), Poly::from_integers(&[0, 0, 1])]).unwrap()
    }

    #[test]
    fn identity_lift_is_power_over_factorial() {
        let lift = lift_polynomial(&PolynomialPath::identity(), 5, Alphabet::Unlabelled).unwrap();
        let (s, e) = (rational(1, 3), rational(5, 4));
        let h = &e - &s;
        for tree in Catalog::new(5, Alphabet::Unlabelled).trees_up_to(5) {
            let want = num::pow(h.clone(), tree.vertex_count()) / <BigRational as Scalar>::from_biguint(&tree.factorial());
            assert_eq!(lift.value(tree, &s, &e).unwrap(), want, "{tree}");
        }
    }

    #[test]
    fn hand_integral_on_the_plane() {
        let lift = lift_polynomial(&plane(), 3, Alphabet::Labels(2)).unwrap();
        let v = lift.value(&t("[*1]2"), &rational(0, 1), &rational(1, 1)).unwrap();
        assert_eq!(v, rational(2, 3));
        let dot = lift.value(&t("*2"), &rational(1, 2), &rational(1, 1)).unwrap();
        assert_eq!(dot, rational(3, 4));
    }

    #[test]
    fn bushy_labelled_trees_on_the_diagonal() {
        let diag = PolynomialPath::new(vec![Poly::from_integers(&[0, 1]), Poly::from_integers(&[0, 1])]).unwrap();
        let lift = lift_polynomial(&diag, 6, Alphabet::Labels(2)).unwrap();
        for n in 1..=5 {
            let spelled = format!("[{}]2", vec!["*1"; n].join("."));
            let v = lift.value(&t(&spelled), &rational(0, 1), &rational(1, 1)).unwrap();
            assert_eq!(v, rational(1, n as i64 + 1));
        }
    }

    #[test]
    fn labels_must_fit_the_path() {
        assert!(lift_polynomial(&plane(), 2, Alphabet::Unlabelled).is_err());
        assert!(lift_polynomial(&plane(), 2, Alphabet::Labels(3)).is_err());
    }

    #[test]
    fn holder_estimates() {
        let line = SampledPath::from_fn(64, 1.0, 1, |t| vec![t]).unwrap();
        assert!((holder_norm_estimate(&line, 1.0) - 1.0).abs() < 1e-12);
        let square = SampledPath::from_fn(64, 1.0, 1, |t| vec![t * t]).unwrap();
        let est = holder_norm_estimate(&square, 1.0);
        assert!(est <= 2.0 && est > 1.96);
        let flat = SampledPath::from_fn(8, 1.0, 1, |_| vec![3.0]).unwrap();
        assert_eq!(holder_norm_estimate(&flat, 1.0), 0.0);
    }

    #[test]
    fn young_lift_of_a_line_is_exact_quickly() {
        let line = PolynomialPath::identity().sample(16, 1.0).unwrap();
        let lift = lift_young(&line, 3, YoungConfig { tol: 1e-5, max_level: 14 }).unwrap();
        let x = lift.from_start(16);
        assert!((x.tree_value(&RootedTree::leaf()).unwrap() - 1.0).abs() < 1e-15);
        assert!((x.tree_value(&t("[*]")).unwrap() - 0.5).abs() < 1e-5);
    }

    #[test]
    fn young_lift_rejects_rough_paths() {
        let rough = SampledPath::from_fn(8, 0.5, 1, |t| vec![t]).unwrap();
        assert!(matches!(
            lift_young(&rough, 2, YoungConfig::default()),
            Err(LiftError::Precondition(_))
        ));
        let smooth = SampledPath::from_fn(8, 0.9, 1, |t| vec![t]).unwrap();
        assert!(lift_young(&smooth, 2, YoungConfig { tol: 0.0, max_level: 3 }).is_err());
    }

    #[test]
    fn young_lift_reports_non_convergence() {
        let path = plane().sample(8, 1.0).unwrap();
        match lift_young(&path, 2, YoungConfig { tol: 1e-12, max_level: 2 }) {
            Err(LiftError::NotConverged { levels, achieved, .. }) => {
                assert_eq!(levels, 2);
                assert!(achieved > 1e-12);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn chen_division_agrees_with_direct_sweep() {
        let path = plane().sample(32, 1.0).unwrap();
        let lift = lift_young(&path, 3, YoungConfig { tol: 1e-5, max_level: 12 }).unwrap();
        let via_chen = lift.between(8, 24).unwrap();
        let direct = lift.direct(8, 24).unwrap();
        for tree in lift.trees() {
            let (a, b) = (via_chen.tree_value(tree).unwrap(), direct.tree_value(tree).unwrap());
            assert!((a - b).abs() < 1e-10, "{tree}: {a} vs {b}");
        }
        assert!(lift.between(5, 2).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let text = "t,x1,x2\n0,0,0\n0.5,0.5,0.25\n1,1,1\n";
        let p = SampledPath::from_csv_reader(text.as_bytes(), 0.9).unwrap();
        assert_eq!(p.dim(), 2);
        assert_eq!(p.values()[1], vec![0.5, 0.25]);
        assert!(SampledPath::from_csv_reader("s,x1\n0,0\n1,1\n".as_bytes(), 0.9).is_err());
        assert!(SampledPath::from_csv_reader("t,x1\n0,0\n0,1\n".as_bytes(), 0.9).is_err());
        assert!(SampledPath::from_csv_reader("t,x1\n0,0\n1,abc\n".as_bytes(), 0.9).is_err());
    }

    #[test]
    fn weierstrass_preset_shape() {
        let w = SampledPath::weierstrass(256, 0.7, 2.0, 12).unwrap();
        assert_eq!(w.dim(), 2);
        assert_eq!(w.times().len(), 257);
        let total: f64 = (0..=12).map(|k| 2f64.powf(-0.7 * k as f64)).sum();
        assert!((w.values()[0][0] - total).abs() < 1e-12);
    }
}
