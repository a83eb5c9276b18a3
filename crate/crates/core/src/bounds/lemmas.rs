//! Grid checks of the four binomial-type inequalities behind the decay bound.

use super::kernel::{kernel_value, EstimateKernel};
use super::quadrature::GaussLegendre;
use super::{BoundsError, CheckReport};

/// Time points and degree ranges a check sweeps.
#[derive(Clone, Debug, PartialEq)]
pub struct LemmaGrid {
    pub points: Vec<f64>,
    pub max_n: usize,
    pub max_truncation: usize,
    /// Largest extra exponent `m` in the overlapping-intervals check.
    pub max_extra: usize,
}

impl Default for LemmaGrid {
    fn default() -> Self {
        LemmaGrid {
            points: (0..=10).map(|i| i as f64 / 10.0).collect(),
            max_n: 20,
            max_truncation: 3,
            max_extra: 10,
        }
    }
}

impl LemmaGrid {
    pub fn describe(&self) -> String {
        format!(
            "{} time points in [{}, {}], n ≤ {}, N ≤ {}",
            self.points.len(),
            self.points.first().copied().unwrap_or(0.0),
            self.points.last().copied().unwrap_or(0.0),
            self.max_n,
            self.max_truncation
        )
    }

    /// All `u ≤ s ≤ t` drawn from the grid points.
    pub fn triples(&self) -> Vec<(f64, f64, f64)> {
        let p = &self.points;
        let mut out = Vec::new();
        for a in 0..p.len() {
            for b in a..p.len() {
                for c in b..p.len() {
                    out.push((p[a], p[b], p[c]));
                }
            }
        }
        out
    }

    /// All `u ≤ s ≤ t ≤ v` drawn from the grid points.
    pub fn quadruples(&self) -> Vec<(f64, f64, f64, f64)> {
        let p = &self.points;
        let mut out = Vec::new();
        for a in 0..p.len() {
            for b in a..p.len() {
                for c in b..p.len() {
                    for d in c..p.len() {
                        out.push((p[a], p[b], p[c], p[d]));
                    }
                }
            }
        }
        out
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// `n! / (n-k)!`.
fn falling(n: usize, k: usize) -> f64 {
    (n - k + 1..=n).map(|i| i as f64).product()
}

/// `Σ_{j=N+1}^n (s-u)^{n-j} (t-s)^j / ((n-j)! j!)`.
pub fn binomial_tail(truncation: usize, n: usize, u: f64, s: f64, t: f64) -> f64 {
    (truncation + 1..=n)
        .map(|j| (s - u).powi((n - j) as i32) * (t - s).powi(j as i32) / (factorial(n - j) * factorial(j)))
        .sum()
}

/// `1/(n-N-1)! ∫_s^t (r-u)^{n-N-1} (t-r)^N / N! dr`, the simplex integral
/// the binomial tail equals.
pub fn binomial_tail_integral(truncation: usize, n: usize, u: f64, s: f64, t: f64) -> f64 {
    let rule = GaussLegendre::new(n.div_ceil(2) + 2);
    let inner = rule.integrate(s, t, |r| {
        (r - u).powi((n - truncation - 1) as i32) * (t - r).powi(truncation as i32)
    });
    inner / (factorial(n - truncation - 1) * factorial(truncation))
}

fn domain_n(truncation: usize, n: usize) -> Result<(), BoundsError> {
    if n < truncation + 1 {
        return Err(BoundsError::Domain(format!("need n ≥ N+1, got n = {n}, N = {truncation}")));
    }
    Ok(())
}

/// Binomial tail `≤ S^(N+1)(ρ_u^{n/(N+1)})_{s,t} / (n-N-1)!` on the triples.
pub fn check_taylor_binomial(
    truncation: usize,
    n: usize,
    triples: &[(f64, f64, f64)],
) -> Result<CheckReport, BoundsError> {
    domain_n(truncation, n)?;
    let mut r = CheckReport::new("taylor-binomial", format!("N={truncation} n={n}, {} triples", triples.len()));
    for &(u, s, t) in triples {
        let lhs = binomial_tail(truncation, n, u, s, t);
        let rhs = kernel_value(truncation + 1, n, u, s, t)? / factorial(n - truncation - 1);
        r.record(|| format!("N={truncation} n={n} u={u} s={s} t={t}"), lhs, rhs);
    }
    Ok(r)
}

/// Sample triples for the quadrature check of the tail identity.
pub const IDENTITY_TRIPLES: [(f64, f64, f64); 3] = [(0.0, 0.3, 0.7), (0.1, 0.5, 1.0), (0.2, 0.2, 0.9)];

/// The tail equals its simplex integral: `|tail - integral| ≤ 1e-10 · max(tail, 1e-300)`.
pub fn check_taylor_identity(truncation: usize, n: usize) -> Result<CheckReport, BoundsError> {
    domain_n(truncation, n)?;
    let mut r = CheckReport::with_eps("taylor-binomial-identity", format!("N={truncation} n={n}"), 0.0);
    for &(u, s, t) in &IDENTITY_TRIPLES {
        let tail = binomial_tail(truncation, n, u, s, t);
        let integral = binomial_tail_integral(truncation, n, u, s, t);
        r.record(
            || format!("N={truncation} n={n} u={u} s={s} t={t}"),
            (tail - integral).abs(),
            1e-10 * tail.abs().max(1e-300),
        );
    }
    Ok(r)
}

/// `n!/(n-N-1)! S^(N+1)(ρ_u^{n/(N+1)}) (t-u)^m ≤ (n+m)!/(n+m-N-1)! S^(N+1)(ρ_u^{(n+m)/(N+1)})`.
pub fn check_overlap_lemma(
    truncation: usize,
    n: usize,
    m: usize,
    triples: &[(f64, f64, f64)],
) -> Result<CheckReport, BoundsError> {
    domain_n(truncation, n)?;
    let order = truncation + 1;
    let mut r = CheckReport::new("overlapping-intervals", format!("N={truncation} n={n} m={m}"));
    for &(u, s, t) in triples {
        let lhs = falling(n, order) * kernel_value(order, n, u, s, t)? * (t - u).powi(m as i32);
        let rhs = falling(n + m, order) * kernel_value(order, n + m, u, s, t)?;
        r.record(|| format!("N={truncation} n={n} m={m} u={u} s={s} t={t}"), lhs, rhs);
    }
    Ok(r)
}

/// `S^(m)(ρ_u^{n/m}) / (n-m)! ≤ e^m S^(m-k)(ρ_u^{n/(m-k)}) / (n-m+k)!`.
pub fn check_decreasing_lemma(
    k: usize,
    m: usize,
    n: usize,
    triples: &[(f64, f64, f64)],
) -> Result<CheckReport, BoundsError> {
    if !(k < m && m <= n) {
        return Err(BoundsError::Domain(format!("need 0 ≤ k < m ≤ n, got k={k} m={m} n={n}")));
    }
    let mut r = CheckReport::new("decreasing", format!("k={k} m={m} n={n}"));
    for &(u, s, t) in triples {
        let lhs = kernel_value(m, n, u, s, t)? / factorial(n - m);
        let rhs = (m as f64).exp() / factorial(n - m + k) * kernel_value(m - k, n, u, s, t)?;
        r.record(|| format!("k={k} m={m} n={n} u={u} s={s} t={t}"), lhs, rhs);
    }
    Ok(r)
}

/// `S^(m-k)(ρ_u^{n/(m-k)})_{s,t} (v-t)^k/k! ≤ S^(m-k)(ρ_u^{(n+k)/m})_{s,t} S^(k)(ρ_u^{(n+k)/m})_{t,v}`.
pub fn check_adjacent_lemma(
    k: usize,
    m: usize,
    n: usize,
    quadruples: &[(f64, f64, f64, f64)],
) -> Result<CheckReport, BoundsError> {
    if !(k < m && m <= n) {
        return Err(BoundsError::Domain(format!("need 0 ≤ k < m ≤ n, got k={k} m={m} n={n}")));
    }
    let shared = (n + k) as f64 / m as f64;
    let mut r = CheckReport::new("adjacent-intervals", format!("k={k} m={m} n={n}"));
    for &(u, s, t, v) in quadruples {
        let lhs = kernel_value(m - k, n, u, s, t)? * (v - t).powi(k as i32) / factorial(k);
        let rhs = EstimateKernel::with_exponent(m - k, shared, u)?.value(s, t)?
            * EstimateKernel::with_exponent(k, shared, u)?.value(t, v)?;
        r.record(|| format!("k={k} m={m} n={n} u={u} s={s} t={t} v={v}"), lhs, rhs);
    }
    Ok(r)
}

fn collect(lemma: &str, grid: &LemmaGrid, parts: Vec<CheckReport>) -> CheckReport {
    let mut total = CheckReport::new(lemma, grid.describe());
    for p in parts {
        total.merge(p);
    }
    total
}

/// Every check over the full grid, one report per inequality.
pub fn check_appendix_lemmas(grid: &LemmaGrid) -> Result<Vec<CheckReport>, BoundsError> {
    let triples = grid.triples();
    let quadruples = grid.quadruples();
    let mut taylor = Vec::new();
    let mut identity = Vec::new();
    let mut overlap = Vec::new();
    for truncation in 0..=grid.max_truncation {
        for n in truncation + 1..=grid.max_n {
            taylor.push(check_taylor_binomial(truncation, n, &triples)?);
            identity.push(check_taylor_identity(truncation, n)?);
            for m in 0..=grid.max_extra {
                overlap.push(check_overlap_lemma(truncation, n, m, &triples)?);
            }
        }
    }
    let mut decreasing = Vec::new();
    let mut adjacent = Vec::new();
    for n in 1..=grid.max_n {
        for m in 1..=n {
            for k in 0..m {
                decreasing.push(check_decreasing_lemma(k, m, n, &triples)?);
                adjacent.push(check_adjacent_lemma(k, m, n, &quadruples)?);
            }
        }
    }
    let mut identity_report = collect("taylor-binomial-identity", grid, identity);
    identity_report.eps = 0.0;
    Ok(vec![
        collect("taylor-binomial", grid, taylor),
        identity_report,
        collect("overlapping-intervals", grid, overlap),
        collect("decreasing", grid, decreasing),
        collect("adjacent-intervals", grid, adjacent),
    ])
}
