//! Scalars that are exactly rational or explicitly irrational.
//!
//! Model data declares every entry either as an exact fraction (decimals are
//! fractions over a power of ten) or with an irrational tag such as `sqrt:2`.
//! Exactness propagates through arithmetic: an operation touching an
//! irrational value produces an irrational value, and the exact zero-set path
//! refuses triplets that are not fully rational.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{Signed, ToPrimitive, Zero};

use crate::rational::Rat;

#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Exact(Rat),
    Approx(f64),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact(Rat::zero())
    }

    pub fn from_int(v: i64) -> Self {
        Scalar::Exact(Rat::from_integer(v.into()))
    }

    pub fn from_rat(q: Rat) -> Self {
        Scalar::Exact(q)
    }

    pub fn approx(v: f64) -> Self {
        Scalar::Approx(v)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&Rat> {
        match self {
            Scalar::Exact(q) => Some(q),
            Scalar::Approx(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(q) => q.to_f64().unwrap_or(f64::NAN),
            Scalar::Approx(v) => *v,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(q) => q.is_zero(),
            Scalar::Approx(v) => *v == 0.0,
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Scalar::Exact(q) => q.is_positive(),
            Scalar::Approx(v) => *v > 0.0,
        }
    }

    /// Strict comparison with a rational threshold; falls back to floating
    /// point as soon as the value is tagged irrational.
    pub fn lt_rat(&self, bound: &Rat) -> bool {
        match self {
            Scalar::Exact(q) => q < bound,
            Scalar::Approx(v) => *v < bound.to_f64().unwrap_or(f64::NAN),
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a + b),
            _ => Scalar::Approx(self.to_f64() + rhs.to_f64()),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a - b),
            _ => Scalar::Approx(self.to_f64() - rhs.to_f64()),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a * b),
            _ => Scalar::Approx(self.to_f64() * rhs.to_f64()),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(a) => Scalar::Exact(-a),
            Scalar::Approx(v) => Scalar::Approx(-v),
        }
    }
}

/// Σ xᵢ² of a vector of scalars, exact when all entries are.
pub fn norm_sq(v: &[Scalar]) -> Scalar {
    v.iter()
        .map(|x| x * x)
        .fold(Scalar::zero(), |acc, t| &acc + &t)
}

pub fn all_exact(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_exact)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn exactness_propagates() {
        let a = Scalar::from_rat(rat(1, 2));
        let b = Scalar::from_rat(rat(1, 3));
        assert_eq!(&a + &b, Scalar::from_rat(rat(5, 6)));
        let c = Scalar::approx(2.0_f64.sqrt());
        assert!(!(&a + &c).is_exact());
    }

    #[test]
    fn norm_sq_of_rational_vector_is_exact() {
        let v = vec![Scalar::from_rat(rat(1, 2)), Scalar::from_int(1)];
        assert_eq!(norm_sq(&v), Scalar::from_rat(rat(5, 4)));
    }
}
