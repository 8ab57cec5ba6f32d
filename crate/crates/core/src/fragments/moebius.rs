//! Möbius transfer maps between the start and end node of arithmetic fragments.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::kinds::{Family, Fragment, FragmentString, Variant};
use crate::error::{Error, Result};
use crate::numeric::{format_rational, int, QuadraticSurd, Rational};

/// The map `r ↦ (p·r + q)/(s·r + t)` with `p·t − q·s ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoebiusTransform {
    /// Coefficient of `r` in the numerator.
    pub p: Rational,
    /// Constant of the numerator.
    pub q: Rational,
    /// Coefficient of `r` in the denominator.
    pub s: Rational,
    /// Constant of the denominator.
    pub t: Rational,
}

impl MoebiusTransform {
    /// Builds the transform, rejecting a zero determinant.
    pub fn new(p: Rational, q: Rational, s: Rational, t: Rational) -> Result<Self> {
        let m = Self { p, q, s, t };
        if m.determinant().is_zero() {
            return Err(Error::InvalidParam(format!(
                "Möbius transform {m} has zero determinant"
            )));
        }
        Ok(m)
    }

    /// The identity `r ↦ r`.
    pub fn identity() -> Self {
        Self {
            p: int(1),
            q: int(0),
            s: int(0),
            t: int(1),
        }
    }

    /// `r ↦ (1 − r)/(2 − r)`.
    pub fn one_minus_over_two_minus() -> Self {
        Self {
            p: int(-1),
            q: int(1),
            s: int(-1),
            t: int(2),
        }
    }

    /// `r ↦ 1/(3 − r)`.
    pub fn one_over_three_minus() -> Self {
        Self {
            p: int(0),
            q: int(1),
            s: int(-1),
            t: int(3),
        }
    }

    /// `p·t − q·s`.
    pub fn determinant(&self) -> Rational {
        &self.p * &self.t - &self.q * &self.s
    }

    /// The map that applies `self` first and `next` afterwards (`next ∘ self`), i.e. the
    /// coefficient matrix product `M_next · M_self`.
    pub fn then(&self, next: &MoebiusTransform) -> MoebiusTransform {
        MoebiusTransform {
            p: &next.p * &self.p + &next.q * &self.s,
            q: &next.p * &self.q + &next.q * &self.t,
            s: &next.s * &self.p + &next.t * &self.s,
            t: &next.s * &self.q + &next.t * &self.t,
        }
    }

    /// Evaluates at a rational point; `None` at the pole.
    pub fn apply(&self, r: &Rational) -> Option<Rational> {
        let den = &self.s * r + &self.t;
        (!den.is_zero()).then(|| (&self.p * r + &self.q) / den)
    }

    /// Evaluates at a surd point; `None` at the pole.
    pub fn apply_surd(&self, r: &QuadraticSurd) -> Result<Option<QuadraticSurd>> {
        let lift = |q: &Rational| QuadraticSurd::from_rational(q.clone());
        let num = lift(&self.p).checked_mul(r)?.checked_add(&lift(&self.q))?;
        let den = lift(&self.s).checked_mul(r)?.checked_add(&lift(&self.t))?;
        if den.is_zero() {
            return Ok(None);
        }
        Ok(Some(num.checked_div(&den)?))
    }

    /// Whether both coefficient matrices are proportional (the maps coincide).
    pub fn equivalent(&self, other: &MoebiusTransform) -> bool {
        let a = [&self.p, &self.q, &self.s, &self.t];
        let b = [&other.p, &other.q, &other.s, &other.t];
        (0..4).all(|i| (0..4).all(|j| a[i] * b[j] == a[j] * b[i]))
    }

    /// The fixed points `r = (p·r + q)/(s·r + t)` inside `[0, 1]`, i.e. the roots there of
    /// `s·r² + (t − p)·r − q = 0`, in increasing order.
    pub fn fixed_points_in_unit_interval(&self) -> Result<Vec<QuadraticSurd>> {
        let a = self.s.clone();
        let b = &self.t - &self.p;
        let c = -self.q.clone();
        let mut roots = Vec::new();
        if a.is_zero() {
            if b.is_zero() {
                return Err(Error::InvalidParam(format!(
                    "{self} is the identity up to scaling"
                )));
            }
            roots.push(QuadraticSurd::from_rational(-c / b));
        } else {
            let disc = &b * &b - int(4) * &a * &c;
            if disc.is_negative() {
                return Ok(vec![]);
            }
            // √(n/d) = √(n·d)/d
            let two_a = int(2) * &a;
            let root_coeff = Rational::new(BigInt::one(), disc.denom().clone()) / &two_a;
            let radicand = disc.numer() * disc.denom();
            for sign in [-1, 1] {
                roots.push(QuadraticSurd::new(
                    -b.clone() / &two_a,
                    int(sign) * &root_coeff,
                    radicand.clone(),
                )?);
            }
        }
        let zero = QuadraticSurd::from_rational(int(0));
        let one = QuadraticSurd::from_rational(int(1));
        let mut inside: Vec<QuadraticSurd> = roots
            .into_iter()
            .filter(|r| *r >= zero && *r <= one)
            .collect();
        inside.sort_by(|x, y| x.partial_cmp(y).expect("common radicand"));
        inside.dedup();
        Ok(inside)
    }
}

impl fmt::Display for MoebiusTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "r ↦ ({}·r + {})/({}·r + {})",
            format_rational(&self.p),
            format_rational(&self.q),
            format_rational(&self.s),
            format_rational(&self.t)
        )
    }
}

/// Composes maps in sequence order (the first map is applied first).
pub fn compose(maps: &[MoebiusTransform]) -> MoebiusTransform {
    maps.iter()
        .fold(MoebiusTransform::identity(), |acc, m| acc.then(m))
}

/// Transfer map from the start-node rate of `fragment` to its end-node rate, given the
/// fragment that follows it. Supported contexts:
///
/// - a `g₁`/`g₂` fragment (either variant) followed by a primed fragment or a primed `d`:
///   `(1 − r)/(2 − r)` resp. `1/(3 − r)`;
/// - a `g₃` fragment followed by a double-primed `g` fragment: `1/(3 − r)`;
/// - a primed `d` fragment followed by a primed fragment: the identity.
///
/// Every other combination fails with [`Error::ContextMismatch`].
pub fn transfer_map(fragment: &Fragment, follower: &Fragment) -> Result<MoebiusTransform> {
    let mismatch = || Error::ContextMismatch(format!("{fragment} followed by {follower}"));
    if !fragment.is_arithmetic() || !follower.is_arithmetic() {
        return Err(mismatch());
    }
    let follower_prime = follower.variant == Variant::Prime;
    match fragment.kind.family() {
        Family::G1 if follower_prime => Ok(MoebiusTransform::one_minus_over_two_minus()),
        Family::G2 if follower_prime => Ok(MoebiusTransform::one_over_three_minus()),
        Family::G3 if follower.variant == Variant::DoublePrime => {
            Ok(MoebiusTransform::one_over_three_minus())
        }
        Family::D1 | Family::D2 if follower_prime => Ok(MoebiusTransform::identity()),
        _ => Err(mismatch()),
    }
}

/// Transfer maps of every fragment of a cycle, each in the context of its cyclic follower.
pub fn cycle_transfer_maps(c: &FragmentString) -> Result<Vec<MoebiusTransform>> {
    if !c.is_closed() {
        return Err(Error::ContextMismatch(
            "an open string has no follower for its last fragment".into(),
        ));
    }
    let f = c.fragments();
    (0..f.len())
        .map(|i| transfer_map(&f[i], &f[c.follower_index(i).expect("closed")]))
        .collect()
}

/// Composition of [`cycle_transfer_maps`]: the start-node rate after one trip round the cycle.
pub fn compose_cycle(c: &FragmentString) -> Result<MoebiusTransform> {
    Ok(compose(&cycle_transfer_maps(c)?))
}

/// Fibonacci numbers extended to negative indices by `f_{i−2} = f_i − f_{i−1}`
/// (`f_{−1} = 1`, `f_{−2} = −1`).
pub fn fibonacci(i: i64) -> BigInt {
    let (mut a, mut b) = (BigInt::zero(), BigInt::one()); // f_0, f_1
    if i >= 0 {
        for _ in 0..i {
            let next = &a + &b;
            a = std::mem::replace(&mut b, next);
        }
        a
    } else {
        for _ in 0..(-i) {
            let prev = &b - &a;
            b = std::mem::replace(&mut a, prev);
        }
        a
    }
}

/// The map `r ↦ (f_i − r·f_{i−2})/(f_{i+2} − r·f_i)`, which equals `i` chained
/// `(1 − r)/(2 − r)` transfers.
pub fn fibonacci_map(i: i64) -> MoebiusTransform {
    let f = |k: i64| Rational::from_integer(fibonacci(k));
    MoebiusTransform {
        p: -f(i - 2),
        q: f(i),
        s: -f(i),
        t: f(i + 2),
    }
}

/// `(f_i − r·f_{i−2})/(f_{i+2} − r·f_i)` at a rational `r`.
pub fn fibonacci_rate(i: i64, r: &Rational) -> Option<Rational> {
    fibonacci_map(i).apply(r)
}
