//! Exact rational helpers: parsing, formatting and size accounting.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number in canonical (reduced) form.
pub type Rational = BigRational;

/// Builds the rational `n / d` from machine integers.
///
/// # Panics
/// Panics when `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Builds the integer rational `n`.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, an integer, or a decimal string (with optional exponent)
/// into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::Parse(format!("invalid rational literal `{text}`"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in `{text}`")));
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp: i64 = s[pos + 1..].parse().map_err(|_| bad())?;
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let numer: BigInt = if all_digits.is_empty() {
        BigInt::zero()
    } else {
        all_digits.parse().map_err(|_| bad())?
    };
    let scale = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10);
    let magnitude = if scale >= 0 {
        Rational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(if negative { -magnitude } else { magnitude })
}

/// Formats a rational as `"p/q"`, or `"p"` when it is an integer.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Bit size of a rational: the larger of the numerator and denominator bit lengths.
pub fn bit_size(q: &Rational) -> u64 {
    q.numer().bits().max(q.denom().bits())
}

/// Nearest `f64` to a rational (saturating for huge magnitudes).
pub fn to_f64(q: &Rational) -> f64 {
    match q.to_f64() {
        Some(v) => v,
        None => {
            if q.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            }
        }
    }
}

/// Exact rational value of a finite `f64`.
pub fn from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

/// Truncated decimal expansion of `|q|` with `digits` fractional digits, prefixed by `-`
/// when negative.
pub fn decimal_string(q: &Rational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = (q.numer().abs() * &scale).div_floor(q.denom());
    let mut body = scaled.to_string();
    if body.len() <= digits {
        body = format!("{}{}", "0".repeat(digits + 1 - body.len()), body);
    }
    let split = body.len() - digits;
    let sign = if q.numer().sign() == Sign::Minus {
        "-"
    } else {
        ""
    };
    if digits == 0 {
        format!("{sign}{body}")
    } else {
        format!("{sign}{}.{}", &body[..split], &body[split..])
    }
}

/// Square-root helper: returns `Some(s)` with `s * s == q` when `q ≥ 0` is the square of a
/// rational.
pub fn exact_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// Rational approximation of `√q` accurate to `2^-bits` (rounded down).
pub fn approx_sqrt(q: &Rational, bits: u64) -> Rational {
    if let Some(s) = exact_sqrt(q) {
        return s;
    }
    let shift = BigInt::one() << (2 * bits as usize);
    let scaled = (q.numer() * shift).div_floor(q.denom());
    Rational::new(scaled.sqrt(), BigInt::one() << bits as usize)
}

/// Rounds `q` down to the dyadic grid `2^-bits`.
pub fn round_dyadic(q: &Rational, bits: u64) -> Rational {
    let scale = BigInt::one() << bits as usize;
    let scaled = (q.numer() * &scale).div_floor(q.denom());
    Rational::new(scaled, scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("2/4").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-3").unwrap(), int(-3));
        assert_eq!(parse_rational("0.125").unwrap(), rat(1, 8));
        assert_eq!(parse_rational("1e-3").unwrap(), rat(1, 1000));
        assert_eq!(parse_rational("-1.5E2").unwrap(), int(-150));
        assert_eq!(parse_rational(".5").unwrap(), rat(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn formats_canonically() {
        assert_eq!(format_rational(&rat(6, 4)), "3/2");
        assert_eq!(format_rational(&int(7)), "7");
        assert_eq!(decimal_string(&rat(1, 3), 5), "0.33333");
        assert_eq!(decimal_string(&rat(-5, 4), 2), "-1.25");
    }

    #[test]
    fn square_roots() {
        assert_eq!(exact_sqrt(&rat(9, 16)), Some(rat(3, 4)));
        assert_eq!(exact_sqrt(&rat(1, 2)), None);
        let s = approx_sqrt(&int(2), 60);
        assert!((to_f64(&s) - std::f64::consts::SQRT_2).abs() < 1e-15);
    }
}
