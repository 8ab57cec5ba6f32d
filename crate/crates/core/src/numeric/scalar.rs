//! The [`Scalar`] abstraction shared by all evaluation code.

use std::fmt::Debug;

use num_traits::{One, Zero};

use super::rational::{to_f64, Rational};
use super::surd::QuadraticSurd;

/// Ordered field operations used by the clearing map and the propagation solvers.
///
/// Implemented for exact rationals, quadratic surds and `f64`. Surd operations panic when
/// two operands carry different nontrivial radicands; vectors are validated for a common
/// radicand at construction time so this never happens through the public API.
pub trait Scalar: Clone + Debug + PartialOrd + Send + Sync {
    /// Additive identity.
    fn zero_value() -> Self;
    /// Multiplicative identity.
    fn one_value() -> Self;
    /// Embeds an exact rational.
    fn from_rational(q: &Rational) -> Self;
    /// Sum.
    fn add(&self, other: &Self) -> Self;
    /// Difference.
    fn sub(&self, other: &Self) -> Self;
    /// Product.
    fn mul(&self, other: &Self) -> Self;
    /// Quotient; callers guarantee a nonzero divisor.
    fn div(&self, other: &Self) -> Self;
    /// Exact (or floating) zero test.
    fn is_zero_value(&self) -> bool;
    /// Floating approximation.
    fn to_f64(&self) -> f64;

    /// Larger of two values.
    fn max_of(&self, other: &Self) -> Self {
        if other > self {
            other.clone()
        } else {
            self.clone()
        }
    }

    /// Smaller of two values.
    fn min_of(&self, other: &Self) -> Self {
        if other < self {
            other.clone()
        } else {
            self.clone()
        }
    }

    /// Absolute value.
    fn abs_val(&self) -> Self {
        if *self < Self::zero_value() {
            Self::zero_value().sub(self)
        } else {
            self.clone()
        }
    }
}

impl Scalar for Rational {
    fn zero_value() -> Self {
        Zero::zero()
    }
    fn one_value() -> Self {
        One::one()
    }
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn is_zero_value(&self) -> bool {
        Zero::is_zero(self)
    }
    fn to_f64(&self) -> f64 {
        to_f64(self)
    }
}

impl Scalar for QuadraticSurd {
    fn zero_value() -> Self {
        QuadraticSurd::from_rational(Zero::zero())
    }
    fn one_value() -> Self {
        QuadraticSurd::from_rational(One::one())
    }
    fn from_rational(q: &Rational) -> Self {
        QuadraticSurd::from_rational(q.clone())
    }
    fn add(&self, other: &Self) -> Self {
        self.checked_add(other).expect("surd radicand mismatch")
    }
    fn sub(&self, other: &Self) -> Self {
        self.checked_sub(other).expect("surd radicand mismatch")
    }
    fn mul(&self, other: &Self) -> Self {
        self.checked_mul(other).expect("surd radicand mismatch")
    }
    fn div(&self, other: &Self) -> Self {
        self.checked_div(other).expect("surd division failed")
    }
    fn is_zero_value(&self) -> bool {
        QuadraticSurd::is_zero(self)
    }
    fn to_f64(&self) -> f64 {
        QuadraticSurd::to_f64(self)
    }
}

impl Scalar for f64 {
    fn zero_value() -> Self {
        0.0
    }
    fn one_value() -> Self {
        1.0
    }
    fn from_rational(q: &Rational) -> Self {
        to_f64(q)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn is_zero_value(&self) -> bool {
        *self == 0.0
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}
