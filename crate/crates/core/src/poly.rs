//! Exact polynomials in one variable `t` and two variables `(s, t)`.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, BigRational, One, Zero};

/// `Σ cᵢ tⁱ`, coefficients lowest degree first.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<BigRational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect())
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, t: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * t + c)
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * t + num::ToPrimitive::to_f64(c).unwrap_or(f64::NAN))
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// `Σ c_{a,b} sᵃ tᵇ`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly2 {
    terms: BTreeMap<(u32, u32), BigRational>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        let mut p = Self::zero();
        p.add_term(0, 0, BigRational::one());
        p
    }

    /// `x(t) - x(s)`.
    pub fn increment(x: &Poly) -> Self {
        let mut p = Self::zero();
        for (i, c) in x.coeffs().iter().enumerate() {
            p.add_term(0, i as u32, c.clone());
            p.add_term(i as u32, 0, -c.clone());
        }
        p
    }

    pub fn add_term(&mut self, a: u32, b: u32, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry((a, b)).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&(a, b));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<(u32, u32), BigRational> {
        &self.terms
    }

    pub fn mul(&self, other: &Poly2) -> Poly2 {
        let mut out = Poly2::zero();
        for (&(a1, b1), c1) in &self.terms {
            for (&(a2, b2), c2) in &other.terms {
                out.add_term(a1 + a2, b1 + b2, c1 * c2);
            }
        }
        out
    }

    /// `∫_s^t f(s, u) x'(u) du` for `f = self` (second variable read as `u`).
    pub fn integrate_against(&self, dx: &Poly) -> Poly2 {
        let mut out = Poly2::zero();
        for (&(a, b), c) in &self.terms {
            for (i, d) in dx.coeffs().iter().enumerate() {
                let power = b + i as u32 + 1;
                let coeff = c * d / BigRational::from_integer(BigInt::from(power));
                out.add_term(a, power, coeff.clone());
                out.add_term(a + power, 0, -coeff);
            }
        }
        out
    }

    pub fn eval(&self, s: &BigRational, t: &BigRational) -> BigRational {
        let mut total = BigRational::zero();
        for (&(a, b), c) in &self.terms {
            total += c * num::pow(s.clone(), a as usize) * num::pow(t.clone(), b as usize);
        }
        total
    }

    pub fn eval_f64(&self, s: f64, t: f64) -> f64 {
        self.terms
            .iter()
            .map(|(&(a, b), c)| {
                num::ToPrimitive::to_f64(c).unwrap_or(f64::NAN) * s.powi(a as i32) * t.powi(b as i32)
            })
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;

    #[test]
    fn univariate() {
        let p = Poly::from_integers(&[1, 0, 3, 0]);
        assert_eq!(p.degree(), Some(2));
        assert_eq!(p.eval(&rational(1, 2)), rational(7, 4));
        assert_eq!(p.derivative(), Poly::from_integers(&[0, 6]));
        assert_eq!(p.eval_f64(2.0), 13.0);
    }

    #[test]
    fn increment_and_integral() {
        let x = Poly::from_integers(&[0, 0, 1]);
        let inc = Poly2::increment(&x);
        assert_eq!(inc.eval(&rational(1, 2), &rational(1, 1)), rational(3, 4));
        // ∫_s^t (u - s) du = (t - s)^2 / 2
        let lin = Poly2::increment(&Poly::from_integers(&[0, 1]));
        let sq = lin.integrate_against(&Poly::from_integers(&[1]));
        assert_eq!(sq.eval(&rational(1, 3), &rational(1, 1)), rational(2, 9));
        assert_eq!(sq, lin.mul(&lin).mul(&{
            let mut h = Poly2::zero();
            h.add_term(0, 0, rational(1, 2));
            h
        }));
    }
}
