//! Binary floating-point reals at a configurable precision.
//!
//! `HpReal` wraps an `astro_float::BigFloat` together with the precision it
//! should be computed at. Binary operations run at the larger of the two
//! operand precisions, so constants created at a low precision (the zero and
//! one produced by `zero_like` / `one_like`) never degrade a computation.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigInt;

use crate::scalar::{RealScalar, Rational, Scalar};

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constants cache"));
}

fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

#[derive(Clone)]
pub struct HpReal {
    value: BigFloat,
    prec: usize,
}

impl HpReal {
    pub fn zero(prec: usize) -> Self {
        Self::from_i64(0, prec)
    }

    pub fn one(prec: usize) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn from_i64(v: i64, prec: usize) -> Self {
        Self {
            value: BigFloat::from_i64(v, prec.max(64)),
            prec,
        }
    }

    pub fn from_bigint(v: &BigInt, prec: usize) -> Self {
        let (sign, words) = v.to_u64_digits();
        // Enough bits to hold the integer exactly before any rounding.
        let work = prec.max(64 * (words.len() + 1));
        let shift = BigFloat::from_u128(1u128 << 64, work);
        let mut acc = BigFloat::from_u64(0, work);
        for w in words.iter().rev() {
            acc = acc
                .mul(&shift, work, RM)
                .add(&BigFloat::from_u64(*w, work), work, RM);
        }
        if sign == num_bigint::Sign::Minus {
            acc = acc.neg();
        }
        Self { value: acc, prec }
    }

    pub fn from_rational(r: &Rational, prec: usize) -> Self {
        let n = Self::from_bigint(r.numer(), prec);
        let d = Self::from_bigint(r.denom(), prec);
        Self {
            value: n.value.div(&d.value, prec, RM),
            prec,
        }
    }

    /// Parses a decimal literal such as `"1e-40"` or `"0.0018674"`.
    pub fn parse(s: &str, prec: usize) -> Option<Self> {
        let value = with_consts(|cc| BigFloat::parse(s.trim(), Radix::Dec, prec, RM, cc));
        if value.is_nan() || value.is_inf() {
            None
        } else {
            Some(Self { value, prec })
        }
    }

    pub fn pi(prec: usize) -> Self {
        Self {
            value: with_consts(|cc| cc.pi(prec, RM)),
            prec,
        }
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    /// Same value, carried at a different working precision.
    pub fn with_precision(&self, prec: usize) -> Self {
        let mut value = self.value.clone();
        let _ = value.set_precision(prec.max(64), RM);
        Self { value, prec }
    }

    /// Quotient at the larger precision; a zero divisor yields a non-finite value.
    pub fn div_by(&self, rhs: &Self) -> Self {
        self.binop(rhs, |a, b, p| a.div(b, p, RM))
    }

    pub fn sqrt(&self) -> Self {
        Self {
            value: self.value.sqrt(self.prec, RM),
            prec: self.prec,
        }
    }

    pub fn exp(&self) -> Self {
        let value = with_consts(|cc| self.value.exp(self.prec, RM, cc));
        Self {
            value,
            prec: self.prec,
        }
    }

    pub fn abs(&self) -> Self {
        Self {
            value: self.value.abs(),
            prec: self.prec,
        }
    }

    pub fn powi(&self, n: usize) -> Self {
        Self {
            value: self.value.powi(n, self.prec, RM),
            prec: self.prec,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        !(self.value.is_nan() || self.value.is_inf())
    }

    pub fn is_negative(&self) -> bool {
        self.value.is_negative() && !self.value.is_zero()
    }

    /// `2^-bits` at this value's precision.
    pub fn epsilon_bits(bits: usize, prec: usize) -> Self {
        let mut v = BigFloat::from_u64(1, prec.max(64));
        v.set_exponent(1 - bits as i32);
        Self { value: v, prec }
    }

    /// Binary exponent `e` with `2^(e-1) <= |x| < 2^e`, `None` for zero.
    pub fn exponent(&self) -> Option<i32> {
        if self.value.is_zero() {
            None
        } else {
            self.value.exponent()
        }
    }

    /// Decimal rendering with `digits` significant digits, e.g. `1.23456e-41`.
    pub fn to_sci_string(&self, digits: usize) -> String {
        if self.value.is_zero() {
            return "0".to_string();
        }
        let full = with_consts(|cc| self.value.format(Radix::Dec, RM, cc))
            .unwrap_or_else(|_| "NaN".to_string());
        shorten_decimal(&full, digits)
    }

    /// Lossy conversion for display and coarse checks.
    pub fn to_f64(&self) -> f64 {
        self.to_sci_string(20).parse().unwrap_or(f64::NAN)
    }

    fn binop(&self, rhs: &Self, f: impl Fn(&BigFloat, &BigFloat, usize) -> BigFloat) -> Self {
        let prec = self.prec.max(rhs.prec);
        Self {
            value: f(&self.value, &rhs.value, prec),
            prec,
        }
    }
}

/// Rewrites astro-float's decimal output (`"1.2345e-5"`, `"12.5"`, ...) to
/// a normalised mantissa with `digits` significant digits.
fn shorten_decimal(full: &str, digits: usize) -> String {
    let (neg, body) = match full.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, full),
    };
    let (mant, exp) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], body[i + 1..].parse::<i64>().unwrap_or(0)),
        None => (body, 0),
    };
    let (ip, fp) = mant.split_once('.').unwrap_or((mant, ""));
    let all: String = ip.chars().chain(fp.chars()).collect();
    let lead = all.chars().take_while(|c| *c == '0').count();
    if lead == all.len() {
        return "0".to_string();
    }
    let sig: Vec<u8> = all[lead..].bytes().map(|b| b - b'0').collect();
    // value = 0.<all> * 10^(ip.len() + exp); first significant digit is at
    // position lead.
    let mut e10 = ip.len() as i64 + exp - lead as i64 - 1;
    let n = digits.max(1).min(sig.len());
    let mut kept = sig[..n].to_vec();
    if sig.get(n).is_some_and(|&d| d >= 5) {
        let mut i = n;
        loop {
            if i == 0 {
                kept.insert(0, 1);
                kept.pop();
                e10 += 1;
                break;
            }
            i -= 1;
            if kept[i] == 9 {
                kept[i] = 0;
            } else {
                kept[i] += 1;
                break;
            }
        }
    }
    while kept.len() > 1 && kept.last() == Some(&0) {
        kept.pop();
    }
    let keep: String = kept.iter().map(|d| char::from(b'0' + d)).collect();
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(&keep[..1]);
    if keep.len() > 1 {
        out.push('.');
        out.push_str(&keep[1..]);
    }
    if e10 != 0 {
        out.push_str(&format!("e{e10}"));
    }
    out
}

impl fmt::Debug for HpReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HpReal({}, {} bits)", self.to_sci_string(24), self.prec)
    }
}

impl fmt::Display for HpReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(self.prec * 3 / 10);
        f.write_str(&self.to_sci_string(digits))
    }
}

impl PartialEq for HpReal {
    fn eq(&self, other: &Self) -> bool {
        self.value.cmp(&other.value) == Some(0)
    }
}

impl PartialOrd for HpReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.value.cmp(&other.value).map(|c| c.cmp(&0))
    }
}

impl Add for HpReal {
    type Output = HpReal;
    fn add(self, rhs: Self) -> Self {
        self.binop(&rhs, |a, b, p| a.add(b, p, RM))
    }
}

impl Sub for HpReal {
    type Output = HpReal;
    fn sub(self, rhs: Self) -> Self {
        self.binop(&rhs, |a, b, p| a.sub(b, p, RM))
    }
}

impl Mul for HpReal {
    type Output = HpReal;
    fn mul(self, rhs: Self) -> Self {
        self.binop(&rhs, |a, b, p| a.mul(b, p, RM))
    }
}

impl Neg for HpReal {
    type Output = HpReal;
    fn neg(self) -> Self {
        Self {
            value: self.value.neg(),
            prec: self.prec,
        }
    }
}

impl Scalar for HpReal {
    fn zero_like(&self) -> Self {
        HpReal::zero(self.prec)
    }
    fn one_like(&self) -> Self {
        HpReal::one(self.prec)
    }
    fn is_zero_value(&self) -> bool {
        self.is_zero()
    }
    fn checked_div(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            return None;
        }
        let out = self.div_by(rhs);
        out.is_finite().then_some(out)
    }
}

impl RealScalar for HpReal {
    fn abs_value(&self) -> Self {
        self.abs()
    }
    fn to_f64_lossy(&self) -> f64 {
        self.to_f64()
    }
}

impl From<HpReal> for f64 {
    fn from(v: HpReal) -> f64 {
        v.to_f64()
    }
}
