//! Quadratic surds `a + b·√d` with rational `a`, `b` and a square-free radicand `d`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::{decimal_string, format_rational, to_f64, Rational};
use crate::error::{Error, Result};

/// Exact element of the quadratic field `Q(√d)`.
///
/// Values are kept canonical: `d` is square-free and greater than one whenever `b ≠ 0`,
/// and `b = 0, d = 0` for rational values. Two surds can be combined when at least one of
/// them is rational or both share the same radicand.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticSurd {
    a: Rational,
    b: Rational,
    d: BigInt,
}

/// Splits `n > 0` into `(s, m)` with `n = s²·m` and `m` square-free.
///
/// Trial division runs while `p³ ≤ rest` (with primes bounded by 2^21); the cofactor left
/// over then has at most two prime factors, so a perfect-square test completes the split.
/// Only for inputs with two huge repeated prime factors beyond the bound can `m` retain a
/// square factor, which never affects correctness of arithmetic, only canonicity.
fn square_free_split(n: &BigInt) -> (BigInt, BigInt) {
    let mut rest = n.clone();
    let mut s = BigInt::one();
    let mut m = BigInt::one();
    let mut p: u64 = 2;
    let limit: u64 = 1 << 21;
    while p <= limit {
        let pb = BigInt::from(p);
        if &pb * &pb * &pb > rest {
            break;
        }
        let mut e = 0u32;
        while (&rest % &pb).is_zero() {
            rest /= &pb;
            e += 1;
        }
        for _ in 0..e / 2 {
            s *= &pb;
        }
        if e % 2 == 1 {
            m *= &pb;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let r = rest.sqrt();
    if &r * &r == rest {
        s *= r;
    } else {
        m *= rest;
    }
    (s, m)
}

impl QuadraticSurd {
    /// Builds `a + b·√d`, normalizing the radicand to its square-free part.
    pub fn new(a: Rational, b: Rational, d: BigInt) -> Result<Self> {
        if d.is_negative() {
            return Err(Error::InvalidParam(format!("negative radicand {d}")));
        }
        if b.is_zero() || d.is_zero() {
            return Ok(Self::from_rational(a));
        }
        let (s, m) = square_free_split(&d);
        let b = b * Rational::from_integer(s);
        if m.is_one() {
            return Ok(Self::from_rational(a + b));
        }
        Ok(Self { a, b, d: m })
    }

    /// Embeds a rational.
    pub fn from_rational(a: Rational) -> Self {
        Self {
            a,
            b: Rational::zero(),
            d: BigInt::zero(),
        }
    }

    /// Rational part `a`.
    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    /// Coefficient `b` of the square root.
    pub fn surd_part(&self) -> &Rational {
        &self.b
    }

    /// Square-free radicand `d` (zero for rational values).
    pub fn radicand(&self) -> &BigInt {
        &self.d
    }

    /// Whether the value is rational (`b = 0`).
    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Returns the rational value when `b = 0`.
    pub fn to_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.a.clone())
    }

    /// Whether `self` and `other` live in a common quadratic field.
    pub fn compatible(&self, other: &Self) -> bool {
        self.is_rational() || other.is_rational() || self.d == other.d
    }

    fn common_radicand(&self, other: &Self) -> Result<BigInt> {
        if !self.compatible(other) {
            return Err(Error::RadicandMismatch(format!(
                "cannot combine sqrt({}) with sqrt({})",
                self.d, other.d
            )));
        }
        Ok(if self.is_rational() {
            other.d.clone()
        } else {
            self.d.clone()
        })
    }

    fn build(a: Rational, b: Rational, d: BigInt) -> Self {
        if b.is_zero() || d.is_zero() {
            Self::from_rational(a)
        } else {
            Self { a, b, d }
        }
    }

    /// Exact sum.
    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let d = self.common_radicand(other)?;
        Ok(Self::build(&self.a + &other.a, &self.b + &other.b, d))
    }

    /// Exact difference.
    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        let d = self.common_radicand(other)?;
        Ok(Self::build(&self.a - &other.a, &self.b - &other.b, d))
    }

    /// Exact product.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let d = self.common_radicand(other)?;
        let dr = Rational::from_integer(d.clone());
        let a = &self.a * &other.a + &self.b * &other.b * dr;
        let b = &self.a * &other.b + &self.b * &other.a;
        Ok(Self::build(a, b, d))
    }

    /// Conjugate `a − b·√d`.
    pub fn conjugate(&self) -> Self {
        Self::build(self.a.clone(), -self.b.clone(), self.d.clone())
    }

    /// Field norm `a² − b²·d`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * Rational::from_integer(self.d.clone())
    }

    /// Exact quotient; fails on division by zero.
    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.common_radicand(other)?;
        if other.is_zero() {
            return Err(Error::InvalidParam("division by zero surd".into()));
        }
        let n = other.norm();
        let num = self.checked_mul(&other.conjugate())?;
        Ok(Self::build(&num.a / &n, &num.b / &n, num.d))
    }

    /// Whether the value is exactly zero.
    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Exact sign of the value.
    pub fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&Rational::zero());
        let sb = self.b.cmp(&Rational::zero());
        if sb == Ordering::Equal {
            return sa;
        }
        if sa == Ordering::Equal || sa == sb {
            return sb;
        }
        // Opposite signs: compare a² with b²·d.
        let lhs = &self.a * &self.a;
        let rhs = &self.b * &self.b * Rational::from_integer(self.d.clone());
        match lhs.cmp(&rhs) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Ordering::Equal,
        }
    }

    /// Nearest-`f64` approximation (computed from a 40-digit decimal expansion).
    pub fn to_f64(&self) -> f64 {
        if self.is_rational() {
            return to_f64(&self.a);
        }
        self.decimal_expansion(40).parse().unwrap_or(f64::NAN)
    }

    /// Common-denominator form `(A, B, D)` with `value = (A + B·√d) / D`, `D > 0`.
    pub fn common_form(&self) -> (BigInt, BigInt, BigInt) {
        let den = self.a.denom().lcm(self.b.denom());
        let a = self.a.numer() * (&den / self.a.denom());
        let b = self.b.numer() * (&den / self.b.denom());
        (a, b, den)
    }

    /// Truncated decimal expansion with `digits` fractional digits.
    pub fn decimal_expansion(&self, digits: usize) -> String {
        if self.is_rational() {
            return decimal_string(&self.a, digits);
        }
        let negative = self.signum() == Ordering::Less;
        let v = if negative {
            Self::build(-self.a.clone(), -self.b.clone(), self.d.clone())
        } else {
            self.clone()
        };
        let (a, b, den) = v.common_form();
        let scale = num_traits::pow(BigInt::from(10), digits);
        // floor(B·√d·10^k), exact via integer square roots.
        let radicand = &b * &b * &v.d * &scale * &scale;
        let root = radicand.sqrt();
        let floor_s = if b.is_negative() {
            if &root * &root == radicand {
                -root
            } else {
                -root - 1
            }
        } else {
            root
        };
        let n = (a * &scale + floor_s).div_floor(&den);
        let q = Rational::new(n, scale);
        let body = decimal_string(&q, digits);
        if negative {
            format!("-{body}")
        } else {
            body
        }
    }
}

impl PartialOrd for QuadraticSurd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.checked_sub(other).ok().map(|diff| diff.signum())
    }
}

impl From<Rational> for QuadraticSurd {
    fn from(a: Rational) -> Self {
        Self::from_rational(a)
    }
}

impl fmt::Display for QuadraticSurd {
    /// Writes `(A + B*sqrt(d))/D` (denominator omitted when 1) or the plain rational.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", format_rational(&self.a));
        }
        let (a, b, den) = self.common_form();
        let surd = format!("{}*sqrt({})", b.abs(), self.d);
        let body = if a.is_zero() {
            if b.is_negative() {
                format!("-{surd}")
            } else {
                surd
            }
        } else {
            let op = if b.is_negative() { "-" } else { "+" };
            format!("{a} {op} {surd}")
        };
        if den.is_one() {
            write!(f, "{body}")
        } else {
            write!(f, "({body})/{den}")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational::{int, rat};

    fn s(a: Rational, b: Rational, d: i64) -> QuadraticSurd {
        QuadraticSurd::new(a, b, BigInt::from(d)).unwrap()
    }

    #[test]
    fn normalizes_radicand() {
        let x = s(int(0), int(1), 12);
        assert_eq!(x.radicand(), &BigInt::from(3));
        assert_eq!(x.surd_part(), &int(2));
        let y = s(int(1), int(1), 9);
        assert!(y.is_rational());
        assert_eq!(y.to_rational(), Some(int(4)));
    }

    #[test]
    fn golden_ratio_conjugate_solves_quadratic() {
        let r = s(rat(3, 2), rat(-1, 2), 5);
        let r2 = r.checked_mul(&r).unwrap();
        let lhs = r2
            .checked_sub(&r.checked_mul(&int(3).into()).unwrap())
            .unwrap()
            .checked_add(&int(1).into())
            .unwrap();
        assert!(lhs.is_zero());
        assert_eq!(r.to_string(), "(3 - 1*sqrt(5))/2");
        assert_eq!(r.decimal_expansion(30), "0.381966011250105151795413165634");
    }

    #[test]
    fn exact_sign_and_division() {
        let r = s(int(1), rat(-1, 2), 2);
        assert_eq!(r.signum(), Ordering::Greater);
        let neg = s(int(1), int(-1), 2);
        assert_eq!(neg.signum(), Ordering::Less);
        let q = r.checked_div(&r).unwrap();
        assert_eq!(q, QuadraticSurd::from_rational(int(1)));
        assert!((r.to_f64() - (1.0 - std::f64::consts::SQRT_2 / 2.0)).abs() < 1e-15);
    }

    #[test]
    fn mismatched_radicands_are_rejected() {
        let a = s(int(0), int(1), 2);
        let b = s(int(0), int(1), 3);
        assert!(a.checked_add(&b).is_err());
        assert!(a.partial_cmp(&b).is_none());
    }
}
