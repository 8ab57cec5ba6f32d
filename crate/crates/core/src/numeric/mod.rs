//! Numeric layer: exact rationals, quadratic surds and the [`Scalar`] trait.

pub mod rational;
pub mod scalar;
pub mod surd;

pub use rational::{bit_size, decimal_string, format_rational, int, parse_rational, rat, Rational};
pub use scalar::Scalar;
pub use surd::QuadraticSurd;
