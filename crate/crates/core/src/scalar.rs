//! Scalars the algebra is generic over: exact rationals and `f64`.

use std::fmt::Debug;

use num::{BigInt, BigRational, BigUint, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

/// Serialized form of a scalar: exact numerator/denominator or a float.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarRepr {
    Exact { num: String, den: String },
    Float { value: f64 },
}

pub trait Scalar: Clone + Debug + PartialEq + Signed + Send + Sync + 'static {
    const EXACT: bool;

    fn from_biguint(n: &BigUint) -> Self;
    fn from_rational(r: &BigRational) -> Self;
    fn to_f64(&self) -> f64;

    fn to_repr(&self) -> ScalarRepr;
    fn from_repr(repr: &ScalarRepr) -> Option<Self>;

    fn from_usize(n: usize) -> Self {
        Self::from_biguint(&BigUint::from(n))
    }

    /// Equality up to `tol` in float mode; exact otherwise.
    fn close_to(&self, other: &Self, tol: f64) -> bool {
        if Self::EXACT {
            self == other
        } else {
            (self.to_f64() - other.to_f64()).abs() <= tol
        }
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_biguint(n: &BigUint) -> Self {
        BigRational::from_integer(BigInt::from(n.clone()))
    }

    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn to_repr(&self) -> ScalarRepr {
        ScalarRepr::Exact { num: self.numer().to_string(), den: self.denom().to_string() }
    }

    fn from_repr(repr: &ScalarRepr) -> Option<Self> {
        match repr {
            ScalarRepr::Exact { num, den } => {
                let den: BigInt = den.parse().ok()?;
                (den != BigInt::from(0)).then_some(())?;
                Some(BigRational::new(num.parse().ok()?, den))
            }
            ScalarRepr::Float { .. } => None,
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_biguint(n: &BigUint) -> Self {
        ToPrimitive::to_f64(n).unwrap_or(f64::INFINITY)
    }

    fn from_rational(r: &BigRational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn to_repr(&self) -> ScalarRepr {
        ScalarRepr::Float { value: *self }
    }

    fn from_repr(repr: &ScalarRepr) -> Option<Self> {
        match repr {
            ScalarRepr::Float { value } => Some(*value),
            ScalarRepr::Exact { num, den } => {
                let den: BigInt = den.parse().ok()?;
                (den != BigInt::from(0)).then_some(())?;
                ToPrimitive::to_f64(&BigRational::new(num.parse().ok()?, den))
            }
        }
    }
}

/// `p/q` as an exact rational.
pub fn rational(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Parse `p`, `p/q` or a finite decimal like `0.25` into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q == BigInt::from(0) {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = int.starts_with('-');
        let int_part: BigInt = match int.trim_start_matches(['-', '+']) {
            "" => BigInt::from(0),
            digits => digits.parse().ok()?,
        };
        let scale = num::pow(BigInt::from(10), frac.len());
        let frac_part: BigInt = frac.parse().ok()?;
        let magnitude = BigRational::new(int_part * &scale + frac_part, scale);
        return Some(if negative { -magnitude } else { magnitude });
    }
    s.parse::<BigInt>().ok().map(BigRational::from_integer)
}
