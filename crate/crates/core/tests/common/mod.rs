//! Oracles shared by the integration tests. Nothing here calls the code
//! under test for the quantity it is checking.

#![allow(dead_code)]

use branched::{Character, RootedTree};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Rooted trees with `n` vertices and `d` vertex colours, from
/// `A(x) = d·x·exp(Σ_k A(x^k)/k)`:
/// `a(n+1) = (1/n) Σ_{k=1}^n (Σ_{m|k} m·a(m)) a(n-k+1)` with `a(1) = d`.
pub fn coloured_tree_counts(max: usize, d: u128) -> Vec<u128> {
    let mut a = vec![0u128; max + 1];
    if max >= 1 {
        a[1] = d;
    }
    for n in 1..max {
        let mut sum = 0u128;
        for k in 1..=n {
            let s: u128 = (1..=k).filter(|m| k % m == 0).map(|m| m as u128 * a[m]).sum();
            sum += s * a[n - k + 1];
        }
        assert_eq!(sum % n as u128, 0);
        a[n + 1] = sum / n as u128;
    }
    a
}

/// Gauss-Legendre nodes and weights on `[-1, 1]` by Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// `∫_{s<r₁<…<r_m<t} dρ(r₁)…dρ(r_m)` with `ρ(r) = (r-u)^b/b`, by nested
/// quadrature in `w = (r-u)^{1/6}`, where `dρ = 6 w^{6b-1} dw` is a polynomial
/// whenever `6b` is an integer.
pub fn simplex_kernel(m: usize, b: f64, u: f64, s: f64, t: f64, rule: &[(f64, f64)]) -> f64 {
    let lo = (s - u).powf(1.0 / 6.0);
    fn nested(j: usize, hi: f64, lo: f64, b: f64, rule: &[(f64, f64)]) -> f64 {
        if j == 0 {
            return 1.0;
        }
        let (mid, half) = ((hi + lo) / 2.0, (hi - lo) / 2.0);
        rule.iter()
            .map(|&(x, w)| {
                let y = mid + half * x;
                w * half * 6.0 * y.powf(6.0 * b - 1.0) * nested(j - 1, y, lo, b, rule)
            })
            .sum()
    }
    nested(m, (t - u).powf(1.0 / 6.0), lo, b, rule)
}

/// Cut sum of the counterexample over the root with `n` leaves, written out
/// by hand: cutting `j` leaves has multiplicity `C(n, j)`, plus the full cut.
pub fn bushy_cut_sum(n: usize, gamma: f64, beta: f64, a: f64, b: f64) -> f64 {
    let size = (n + 1) as f64;
    let mut binom = 1.0;
    let mut total = 0.0;
    for j in 0..=n {
        if j > 0 {
            binom *= (n - j + 1) as f64 / j as f64;
        }
        let ratio = size / (n - j + 1) as f64;
        total += binom * ratio.powf(gamma) * beta.powi(-(j as i32) - 1) * a.powf(gamma * j as f64)
            * b.powf(gamma * (n + 1 - j) as f64);
    }
    total += a.powf(gamma * size) / beta;
    total / (a + b).powf(gamma * size)
}

/// `τ!` from its definition on the text form: `|τ| · Π children!`.
pub fn factorial_oracle(tree: &RootedTree) -> u128 {
    tree.vertex_count() as u128 * tree.children().iter().map(factorial_oracle).product::<u128>()
}

pub fn int_factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// Character with `⟨X,τ⟩ = r_τ a^{γ|τ|} / (β τ!^γ)`, `|r_τ| ≤ 1`, so that
/// `‖X^j‖_{T,γ,β} ≤ a^{γj}/j!^γ` at every degree.
pub fn decaying_character(
    seed: u64,
    trees: &[RootedTree],
    max_degree: usize,
    gamma: f64,
    ln_beta: f64,
    a: f64,
) -> Character<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values: Vec<(RootedTree, f64)> = trees
        .iter()
        .map(|t| {
            let r: f64 = rng.random_range(-1.0..=1.0);
            let k = t.vertex_count() as f64;
            let ln = gamma * k * a.ln() - ln_beta - gamma * (factorial_oracle(t) as f64).ln();
            (t.clone(), r * ln.exp())
        })
        .collect();
    Character::from_tree_values(values, max_degree)
}
