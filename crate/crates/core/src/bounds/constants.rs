//! Named constants of the decay estimates, plus ζ.

use std::sync::{Mutex, OnceLock};

use serde::Serialize;

use super::BoundsError;
use crate::character::truncation_degree;
use crate::trees::{Alphabet, Catalog};

/// Number of unlabelled rooted trees with exactly `k` vertices (`0` for `k = 0`).
pub fn unlabelled_tree_count(k: usize) -> usize {
    static COUNTS: OnceLock<Mutex<Vec<usize>>> = OnceLock::new();
    let cache = COUNTS.get_or_init(|| Mutex::new(Vec::new()));
    let mut counts = cache.lock().expect("tree count cache poisoned");
    if k >= counts.len() {
        let size = k.max(8);
        let catalog = Catalog::new(size, Alphabet::Unlabelled);
        *counts = (0..=size).map(|n| catalog.trees(n).len()).collect();
    }
    counts[k]
}

/// Unlabelled rooted trees with between one and `n` vertices.
pub fn unlabelled_trees_at_most(n: usize) -> usize {
    (1..=n).map(unlabelled_tree_count).sum()
}

/// `ln c_k = (1-γ) Σ_{i=1}^k k^i`.
pub fn ln_c_k(k: usize, gamma: f64) -> f64 {
    let k = k as f64;
    let mut power = 1.0;
    let mut sum = 0.0;
    for _ in 0..k as usize {
        power *= k;
        sum += power;
    }
    (1.0 - gamma) * sum
}

pub fn c_k(k: usize, gamma: f64) -> f64 {
    ln_c_k(k, gamma).exp()
}

/// `c̃_k = c_k ((k+1)|𝒯_k|)^{1-γ}`, with `|𝒯_k|` the trees on exactly `k` vertices.
pub fn c_tilde(k: usize, gamma: f64) -> f64 {
    let count = unlabelled_tree_count(k).max(1) as f64;
    c_k(k, gamma) * (((k + 1) as f64) * count).powf(1.0 - gamma)
}

/// Riemann ζ(p) for `p > 1`: a direct sum plus an Euler–Maclaurin tail.
pub fn zeta(p: f64) -> f64 {
    assert!(p > 1.0, "zeta needs p > 1, got {p}");
    const CUT: usize = 64;
    // B_{2j} / (2j)!
    const BERNOULLI_OVER_FACTORIAL: [f64; 6] = [
        1.0 / 6.0 / 2.0,
        -1.0 / 30.0 / 24.0,
        1.0 / 42.0 / 720.0,
        -1.0 / 30.0 / 40320.0,
        5.0 / 66.0 / 3628800.0,
        -691.0 / 2730.0 / 479001600.0,
    ];
    let head: f64 = (1..CUT).rev().map(|k| (k as f64).powf(-p)).sum();
    let n = CUT as f64;
    let mut tail = n.powf(1.0 - p) / (p - 1.0) + 0.5 * n.powf(-p);
    // Rising factorial p (p+1) ... (p+2j-2) times n^{-p-2j+1}.
    let mut rising = p;
    let mut power = n.powf(-p - 1.0);
    for (j, b) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        tail += b * rising * power;
        let a = p + (2 * j + 1) as f64;
        rising *= a * (a + 1.0);
        power /= n * n;
    }
    head + tail
}

/// `Σ_{r≥2} (2/(r-1) ∧ 1)^p = 1 + 2^p (ζ(p) - 1)`.
pub fn drop_point_series(p: f64) -> f64 {
    1.0 + 2f64.powf(p) * (zeta(p) - 1.0)
}

/// Every constant of the decay argument for one `γ`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Constants {
    pub gamma: f64,
    /// `N = ⌊1/γ⌋`.
    pub truncation: usize,
    /// `c_k` for `k = 0..=N`.
    pub c: Vec<f64>,
    /// `c̃_k` for `k = 0..=N`.
    pub c_tilde: Vec<f64>,
    pub c_hat: f64,
    /// `C_N = e^{N+1}`.
    pub big_c: f64,
    pub c5: f64,
    pub c6: f64,
    /// `ζ((N+1)γ)`.
    pub zeta: f64,
    /// Logarithm of the lower bound on β in the main lemma.
    pub ln_beta_threshold: f64,
    /// `ln c̄_N` without the Hölder-norm factor.
    pub ln_c_bar_base: f64,
}

impl Constants {
    pub fn new(gamma: f64) -> Result<Self, BoundsError> {
        if !(gamma > 0.0 && gamma <= 1.0) {
            return Err(BoundsError::Domain(format!("gamma {gamma} outside (0, 1]")));
        }
        let n = truncation_degree(gamma);
        let n1 = (n + 1) as f64;
        let p = n1 * gamma;
        let zeta = zeta(p);
        let trees_exact = unlabelled_tree_count(n).max(1) as f64;
        let trees_at_most = unlabelled_trees_at_most(n).max(1) as f64;
        let c_hat = 3.0 * trees_exact.powf(1.0 - gamma) * n1.powf(3.0 * (1.0 - gamma)) * (2.0 * n1).exp();
        let big_c = n1.exp();
        let c5 = 2.0 * big_c;
        let c6 = c5 * n1.powf(1.0 - gamma);

        let powers = |from: u32, to: u32| (from..=to).map(|i| n1.powi(i as i32)).sum::<f64>();
        let ln_beta_threshold = 6f64.ln()
            + 7.0 * powers(1, n as u32 + 1)
            + drop_point_series(p).ln()
            + (1.0 - gamma) * trees_at_most.ln();
        let ln_n_factorial: f64 = (1..=n).map(|i| (i as f64).ln()).sum();
        let ln_c_bar_base = 6f64.ln()
            + 7.0 * powers(1, n as u32 + 2)
            + (2.0 - 2.0 * gamma) * trees_at_most.ln()
            + p * 2f64.ln()
            + zeta.ln()
            + gamma * ln_n_factorial;
        Ok(Constants {
            gamma,
            truncation: n,
            c: (0..=n).map(|k| c_k(k, gamma)).collect(),
            c_tilde: (0..=n).map(|k| c_tilde(k, gamma)).collect(),
            c_hat,
            big_c,
            c5,
            c6,
            zeta,
            ln_beta_threshold,
            ln_c_bar_base,
        })
    }

    /// `ln c̄_N` for a given `max_{1≤|σ|≤N} ‖X‖_{γ,σ}^{1/|σ|}`.
    pub fn ln_c_bar(&self, norm_scale: f64) -> f64 {
        self.ln_c_bar_base + norm_scale.ln()
    }
}
