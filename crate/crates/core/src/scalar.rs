//! Scalar abstractions shared by the series, continued-fraction and
//! evaluation code.
//!
//! Two layers:
//!
//! * [`Coeff`] is the coefficient domain of a [`QSeries`](crate::QSeries):
//!   any `num_traits::Num` field element (exact rationals, `f32`, `f64`).
//! * [`Scalar`] is what continued-fraction terms and convergents are built
//!   from. Besides plain numbers this includes truncated series, whose
//!   zero and one depend on a truncation order, so identities are produced
//!   from an existing value (`zero_like` / `one_like`).

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact coefficient type used by every formal computation.
pub type Rational = BigRational;

/// Coefficient domain of truncated power series.
pub trait Coeff: num_traits::Num + Neg<Output = Self> + Clone + Debug + Send + Sync {}

impl<T> Coeff for T where T: num_traits::Num + Neg<Output = T> + Clone + Debug + Send + Sync {}

/// Ring-like values with a fallible division.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_value(&self) -> bool;
    /// `None` when `rhs` is not invertible.
    fn checked_div(&self, rhs: &Self) -> Option<Self>;
}

/// Scalars with an absolute value and ordering, for numeric convergence tests.
pub trait RealScalar: Scalar + PartialOrd {
    fn abs_value(&self) -> Self;
    /// Lossy conversion used for diagnostics.
    fn to_f64_lossy(&self) -> f64;
}

macro_rules! impl_scalar_num {
    ($($t:ty),*) => {$(
        impl Scalar for $t {
            fn zero_like(&self) -> Self {
                <$t as Zero>::zero()
            }
            fn one_like(&self) -> Self {
                <$t as One>::one()
            }
            fn is_zero_value(&self) -> bool {
                Zero::is_zero(self)
            }
            fn checked_div(&self, rhs: &Self) -> Option<Self> {
                if Zero::is_zero(rhs) {
                    None
                } else {
                    Some(self.clone() / rhs.clone())
                }
            }
        }

        impl RealScalar for $t {
            fn abs_value(&self) -> Self {
                Signed::abs(self)
            }
            fn to_f64_lossy(&self) -> f64 {
                ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
            }
        }
    )*};
}

impl_scalar_num!(f32, f64, BigRational);

/// `n/1` as a rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n/d` as a reduced rational. Panics on `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Canonical `"num/den"` rendering (denominator always present).
pub fn rational_to_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse {input:?} as a rational: {reason}")]
pub struct ParseRationalError {
    pub input: String,
    pub reason: &'static str,
}

/// Parses `"p/q"`, `"p"` or a plain decimal such as `"-0.125"` or `"1e-3"`
/// into an exact rational. Decimals are converted exactly (`0.1` is `1/10`).
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let t = s.trim();
    let err = |reason| ParseRationalError {
        input: s.to_string(),
        reason,
    };
    if t.is_empty() {
        return Err(err("empty"));
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| err("bad numerator"))?;
        let d: BigInt = d.trim().parse().map_err(|_| err("bad denominator"))?;
        if d.is_zero() {
            return Err(err("zero denominator"));
        }
        return Ok(Rational::new(n, d));
    }
    parse_decimal(t).ok_or_else(|| err("not an integer, fraction or decimal"))
}

/// Whether `s` is written as a decimal (with a point or exponent) rather
/// than an integer or fraction.
pub fn is_decimal_literal(s: &str) -> bool {
    let t = s.trim();
    !t.contains('/') && (t.contains('.') || t.contains(['e', 'E']))
}

fn parse_decimal(t: &str) -> Option<Rational> {
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().ok()?),
        None => (t, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int_part}{frac_part}0").parse().ok()?;
    let digits = digits / BigInt::from(10);
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut r = Rational::from_integer(digits);
    if scale >= 0 {
        r *= Rational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        r /= Rational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Some(if neg { -r } else { r })
}

/// Integer value of `r` if it is an integer that fits in `i64`.
pub fn rational_to_i64(r: &Rational) -> Option<i64> {
    if r.is_integer() {
        r.numer().to_i64()
    } else {
        None
    }
}

/// Exact square root of a rational, when both parts are perfect squares.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// `base^e` for a rational base.
pub fn rational_pow(base: &Rational, e: usize) -> Rational {
    num_traits::pow(base.clone(), e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("3/6").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("-2").unwrap(), rat(-2));
        assert_eq!(parse_rational("0.25").unwrap(), ratio(1, 4));
        assert_eq!(parse_rational("-1.5e-1").unwrap(), ratio(-3, 20));
        assert_eq!(parse_rational("2E2").unwrap(), rat(200));
        assert_eq!(parse_rational(".5").unwrap(), ratio(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational(".").is_err());
    }

    #[test]
    fn decimal_detection() {
        assert!(is_decimal_literal("0.5"));
        assert!(is_decimal_literal("1e-3"));
        assert!(!is_decimal_literal("1/2"));
        assert!(!is_decimal_literal("7"));
    }

    #[test]
    fn rationals_are_stored_reduced() {
        let r = ratio(6, -4);
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(2));
        assert_eq!(rational_to_string(&r), "-3/2");
        assert_eq!(rational_to_string(&rat(5)), "5/1");
    }

    #[test]
    fn schoolbook_arithmetic() {
        assert_eq!(ratio(1, 2) + ratio(1, 3), ratio(5, 6));
        assert_eq!(ratio(2, 3) * ratio(9, 4), ratio(3, 2));
        assert_eq!(ratio(1, 2).checked_div(&rat(0)), None);
    }

    #[test]
    fn exact_square_roots() {
        assert_eq!(rational_sqrt(&ratio(9, 4)), Some(ratio(3, 2)));
        assert_eq!(rational_sqrt(&rat(25)), Some(rat(5)));
        assert_eq!(rational_sqrt(&rat(2)), None);
        assert_eq!(rational_sqrt(&rat(-4)), None);
    }
}
