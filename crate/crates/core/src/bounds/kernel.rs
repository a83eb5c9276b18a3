//! The comparison kernel `S^(m)(ρ_u^b)_{s,t}` with `ρ_u^b(r) = (r-u)^b / b`.

use serde::Serialize;

use super::BoundsError;

/// `S^(m)` of `ρ_u^b`, the `m`-fold iterated integral over the simplex.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EstimateKernel {
    pub order: usize,
    pub exponent: f64,
    pub base: f64,
}

impl EstimateKernel {
    /// `S^(m)(ρ_u^{n/m})`. Needs `1 ≤ m ≤ n`; `m = 0` gives the constant 1.
    pub fn new(m: usize, n: usize, u: f64) -> Result<Self, BoundsError> {
        if m > n {
            return Err(BoundsError::Domain(format!("kernel order {m} exceeds n = {n}")));
        }
        let exponent = if m == 0 { 1.0 } else { n as f64 / m as f64 };
        Ok(EstimateKernel { order: m, exponent, base: u })
    }

    /// `S^(m)(ρ_u^b)` for an arbitrary positive exponent `b`.
    pub fn with_exponent(m: usize, b: f64, u: f64) -> Result<Self, BoundsError> {
        if b.is_nan() || b <= 0.0 {
            return Err(BoundsError::Domain(format!("kernel exponent {b} must be positive")));
        }
        Ok(EstimateKernel { order: m, exponent: b, base: u })
    }

    /// `[(ρ(t) - ρ(s))]^m / m!`.
    pub fn value(&self, s: f64, t: f64) -> Result<f64, BoundsError> {
        if !(self.base <= s && s <= t) {
            return Err(BoundsError::Domain(format!("need u ≤ s ≤ t, got {} {s} {t}", self.base)));
        }
        if self.order == 0 {
            return Ok(1.0);
        }
        let b = self.exponent;
        let gap = ((t - self.base).powf(b) - (s - self.base).powf(b)) / b;
        let m = self.order as i32;
        let factorial: f64 = (1..=self.order).map(|i| i as f64).product();
        Ok(gap.powi(m) / factorial)
    }
}

/// `S^(m)(ρ_u^{n/m})_{s,t}`.
pub fn kernel_value(m: usize, n: usize, u: f64, s: f64, t: f64) -> Result<f64, BoundsError> {
    EstimateKernel::new(m, n, u)?.value(s, t)
}
