//! Factorial decay bound, its verifier, and the comparison with the
//! geometric-method estimate on `∫ x^n dy`.

use std::collections::BTreeMap;

use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use super::constants::{zeta, Constants};
use super::{BoundsError, CheckReport};
use crate::character::Character;
use crate::scalar::Scalar;
use crate::trees::{Catalog, RootedTree};

/// `⟨X_{s,t}, ·⟩` for one interval.
#[derive(Clone, Debug)]
pub struct IntervalSample<S: Scalar> {
    pub s: f64,
    pub t: f64,
    pub x: Character<S>,
}

/// `max_{|σ| = k} ‖X‖_{γ,σ}` for each degree `k`, where
/// `‖X‖_{γ,σ} = sup |⟨X_{s,t},σ⟩| / |t-s|^{γ|σ|}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HolderNorms {
    pub gamma: f64,
    pub by_degree: BTreeMap<usize, f64>,
}

impl HolderNorms {
    pub fn new(gamma: f64, by_degree: BTreeMap<usize, f64>) -> Self {
        HolderNorms { gamma, by_degree }
    }

    /// Grid estimate (a lower bound on the true supremum) from interval samples.
    pub fn estimate<S: Scalar>(
        samples: &[IntervalSample<S>],
        gamma: f64,
        max_degree: usize,
        catalog: &Catalog,
    ) -> Result<Self, BoundsError> {
        let mut by_degree = BTreeMap::new();
        for k in 1..=max_degree {
            let mut best: f64 = 0.0;
            for sample in samples.iter().filter(|p| p.t > p.s) {
                let scale = (sample.t - sample.s).powf(gamma * k as f64);
                for tree in catalog.trees(k) {
                    best = best.max(sample.x.tree_value(tree)?.to_f64().abs() / scale);
                }
            }
            by_degree.insert(k, best);
        }
        Ok(HolderNorms { gamma, by_degree })
    }

    /// `max_{1≤k≤N} norm_k^{1/k}`.
    pub fn norm_scale(&self, truncation: usize) -> Result<f64, BoundsError> {
        let mut scale: f64 = 0.0;
        for k in 1..=truncation {
            let norm = *self.by_degree.get(&k).ok_or(BoundsError::MissingNorm(k))?;
            scale = scale.max(norm.powf(1.0 / k as f64));
        }
        Ok(scale)
    }

    /// Multiply the norm scale by `factor` (each `norm_k` by `factor^k`).
    pub fn inflated(&self, factor: f64) -> Self {
        let by_degree = self.by_degree.iter().map(|(&k, &v)| (k, v * factor.powi(k as i32))).collect();
        HolderNorms { gamma: self.gamma, by_degree }
    }
}

/// `ln[c̄_N^{|τ|} (t-s)^{γ|τ|} / τ!^γ]`.
pub fn ln_decay_bound(tree: &RootedTree, gamma: f64, s: f64, t: f64, norms: &HolderNorms) -> Result<f64, BoundsError> {
    if s > t {
        return Err(BoundsError::Domain(format!("need s ≤ t, got s={s} t={t}")));
    }
    let constants = Constants::new(gamma)?;
    let ln_c_bar = constants.ln_c_bar(norms.norm_scale(constants.truncation)?);
    let size = tree.vertex_count() as f64;
    Ok(size * ln_c_bar + gamma * size * (t - s).ln() - gamma * tree.factorial_f64().ln())
}

/// The bound itself; overflows to infinity for large `|τ|`.
pub fn decay_bound(tree: &RootedTree, gamma: f64, s: f64, t: f64, norms: &HolderNorms) -> Result<f64, BoundsError> {
    Ok(ln_decay_bound(tree, gamma, s, t, norms)?.exp())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecayReport {
    pub gamma: f64,
    pub max_degree: usize,
    pub norms: HolderNorms,
    pub norm_scale: f64,
    pub ln_c_bar: f64,
    /// Against the given norms.
    pub strict: CheckReport,
    /// Against norms with the scale doubled.
    pub inflated: CheckReport,
}

impl DecayReport {
    pub fn passed(&self) -> bool {
        self.strict.passed()
    }
}

/// Check `|⟨X_{s,t},τ⟩| ≤ c̄_N^{|τ|}(t-s)^{γ|τ|}/τ!^γ` for every tree in the
/// catalog up to `max_degree` and every sample with `s < t`.
pub fn verify_decay<S: Scalar>(
    samples: &[IntervalSample<S>],
    gamma: f64,
    max_degree: usize,
    catalog: &Catalog,
    norms: &HolderNorms,
) -> Result<DecayReport, BoundsError> {
    let constants = Constants::new(gamma)?;
    let norm_scale = norms.norm_scale(constants.truncation)?;
    let grid = format!("{} intervals, trees ≤ {max_degree}, alphabet {}", samples.len(), catalog.alphabet());
    let mut strict = CheckReport::new("decay", grid.clone());
    let mut inflated = CheckReport::new("decay-inflated", grid);
    let inflated_norms = norms.inflated(2.0);
    for sample in samples.iter().filter(|p| p.t > p.s) {
        for tree in catalog.trees_up_to(max_degree) {
            let value = sample.x.tree_value(tree)?.to_f64().abs();
            let params = || format!("τ={tree} s={} t={}", sample.s, sample.t);
            strict.record_log(params, value.ln(), ln_decay_bound(tree, gamma, sample.s, sample.t, norms)?);
            let rhs = ln_decay_bound(tree, gamma, sample.s, sample.t, &inflated_norms)?;
            inflated.record_log(params, value.ln(), rhs);
        }
    }
    Ok(DecayReport {
        gamma,
        max_degree,
        norms: norms.clone(),
        norm_scale,
        ln_c_bar: constants.ln_c_bar(norm_scale),
        strict,
        inflated,
    })
}

/// Where the branched bound `c̄^{n+1}/(n+1)^γ` on `∫ x^n dy` drops below the
/// geometric bound `n!(1+ζ(2γ))^{n-1}‖(x,y)‖^{n+1}/(n+1)!^γ` for good.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Crossover {
    pub gamma: f64,
    pub ln_c_bar: f64,
    pub geometric_norm: f64,
    /// `f(n+1) - f(n) = (1-γ) ln(n+1) + increment_constant`, with `f = ln G - ln B`.
    pub increment_constant: f64,
    /// Where `f` stops decreasing.
    pub turning_point: f64,
    /// Smallest integer `n` with `f(n) > 0`; `f` increases from there on.
    pub n0: f64,
    pub ln_n0: f64,
}

fn ln_geometric_minus_branched(x: f64, gamma: f64, ln_one_plus_zeta: f64, ln_norm: f64, ln_c_bar: f64) -> f64 {
    // n!/(n+1)!^γ · (n+1)^γ collapses to n!^{1-γ}.
    (1.0 - gamma) * ln_gamma(x + 1.0) + (x - 1.0) * ln_one_plus_zeta + (x + 1.0) * (ln_norm - ln_c_bar)
}

pub fn ln_geometric_bound(n: f64, gamma: f64, geometric_norm: f64) -> f64 {
    ln_gamma(n + 1.0) + (n - 1.0) * (1.0 + zeta(2.0 * gamma)).ln() + (n + 1.0) * geometric_norm.ln()
        - gamma * ln_gamma(n + 2.0)
}

pub fn ln_branched_bound(n: f64, gamma: f64, ln_c_bar: f64) -> f64 {
    (n + 1.0) * ln_c_bar - gamma * (n + 1.0).ln()
}

/// Locate the crossover for `1/2 < γ ≤ 1`, a Euclidean Hölder norm of `(x,y)`
/// and the norm scale that enters `c̄_N`.
pub fn branched_vs_geometric(gamma: f64, geometric_norm: f64, norm_scale: f64) -> Result<Crossover, BoundsError> {
    if !(gamma > 0.5 && gamma <= 1.0) {
        return Err(BoundsError::Domain(format!("gamma {gamma} outside (1/2, 1]")));
    }
    if !(geometric_norm > 0.0 && norm_scale > 0.0) {
        return Err(BoundsError::Domain("norms must be positive".into()));
    }
    let ln_c_bar = Constants::new(gamma)?.ln_c_bar(norm_scale);
    let l = (1.0 + zeta(2.0 * gamma)).ln();
    let ln_norm = geometric_norm.ln();
    let k = l + ln_norm - ln_c_bar;
    let f = |x: f64| ln_geometric_minus_branched(x, gamma, l, ln_norm, ln_c_bar);
    let done = |n0: f64, turning_point: f64| Crossover {
        gamma,
        ln_c_bar,
        geometric_norm,
        increment_constant: k,
        turning_point,
        n0,
        ln_n0: n0.ln(),
    };
    if gamma == 1.0 {
        if k <= 0.0 {
            return Err(BoundsError::Domain("no crossover: the geometric bound stays smaller".into()));
        }
        // f is affine with slope k; find the first positive integer.
        let n0 = (1..).map(f64::from).find(|&n| f(n) > 0.0).unwrap_or(f64::INFINITY);
        return Ok(done(n0, 1.0));
    }
    let turning_point = ((-k / (1.0 - gamma)).exp() - 1.0).max(1.0);
    if f(1.0) > 0.0 && turning_point == 1.0 {
        return Ok(done(1.0, 1.0));
    }
    // f < 0 on [1, turning_point]; grow an upper bracket in ln n, then bisect.
    let mut lo = turning_point.ln();
    let mut step = 1.0;
    let mut hi = lo + step;
    while f(hi.exp()) <= 0.0 {
        step *= 2.0;
        hi = lo + step;
        if hi > 700.0 {
            return Err(BoundsError::Domain("crossover beyond f64 range".into()));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid.exp()) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(done(hi.exp().ceil(), turning_point))
}
