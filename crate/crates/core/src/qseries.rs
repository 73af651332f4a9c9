//! Truncated formal power series in `q` and the q-Pochhammer, q-binomial and
//! q-binomial-theorem building blocks.
//!
//! A `QSeries` of order `N` stores the coefficients of `q^0 ..= q^N`; nothing
//! is known beyond `q^N`. Binary operations produce a result whose order is the
//! minimum of the operand orders, so agreement is never claimed past the
//! coefficients that are actually determined.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::scalar::{Coeff, Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeriesError {
    #[error("series has a zero constant term and cannot be inverted")]
    ZeroConstantTerm,
    #[error("sum does not converge: {0}")]
    NonConvergent(String),
}

/// q-adic valuation; the zero series has valuation `Infinite`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(usize),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<usize> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    /// True when the valuation is strictly beyond `order`.
    pub fn exceeds(self, order: usize) -> bool {
        match self {
            Valuation::Finite(v) => v > order,
            Valuation::Infinite => true,
        }
    }
}

impl Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Self) -> Self {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a.saturating_add(b)),
            _ => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QSeries<C> {
    coeffs: Vec<C>,
}

impl<C: Coeff> QSeries<C> {
    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![C::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(C::one(), order)
    }

    pub fn constant(c: C, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// `c * q^power`, which is zero when `power > order`.
    pub fn monomial(c: C, power: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if power <= order {
            s.coeffs[power] = c;
        }
        s
    }

    /// The series variable `q` itself.
    pub fn q(order: usize) -> Self {
        Self::monomial(C::one(), 1, order)
    }

    /// Builds a series from `coeffs[j]` = coefficient of `q^j`; the order is
    /// `coeffs.len() - 1`.
    pub fn from_coeffs(coeffs: Vec<C>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least one coefficient");
        Self { coeffs }
    }

    /// A polynomial given by its coefficients, zero-padded (or truncated) to `order`.
    pub fn from_poly(coeffs: &[C], order: usize) -> Self {
        let mut s = Self::zero(order);
        for (j, c) in coeffs.iter().enumerate().take(order + 1) {
            s.coeffs[j] = c.clone();
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    /// Coefficient of `q^j`, `None` past the truncation order.
    pub fn coeff(&self, j: usize) -> Option<&C> {
        self.coeffs.get(j)
    }

    pub fn constant_term(&self) -> &C {
        &self.coeffs[0]
    }

    pub fn valuation(&self) -> Valuation {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .map_or(Valuation::Infinite, Valuation::Finite)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Drops coefficients above `order` (no-op when `order >= self.order()`).
    pub fn truncate(&self, order: usize) -> Self {
        let keep = order.min(self.order());
        Self {
            coeffs: self.coeffs[..=keep].to_vec(),
        }
    }

    /// Treats `self` as an exact polynomial and re-expresses it at `order`,
    /// padding with zeros. Only meaningful when every coefficient past the
    /// current order is genuinely zero.
    pub fn extend_polynomial(&self, order: usize) -> Self {
        Self::from_poly(&self.coeffs, order)
    }

    pub fn scale(&self, c: &C) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|x| x.clone() * c.clone()).collect(),
        }
    }

    /// Multiplies by `q^k`, keeping the order.
    pub fn shift_up(&self, k: usize) -> Self {
        let mut s = Self::zero(self.order());
        for j in k..=self.order() {
            s.coeffs[j] = self.coeffs[j - k].clone();
        }
        s
    }

    /// Divides by `q^k`; the top `k` coefficients become unknown, so the
    /// order drops by `k`. Requires `k <= valuation` and `k <= order`.
    pub fn shift_down(&self, k: usize) -> Self {
        assert!(k <= self.order(), "shift past the truncation order");
        debug_assert!(self.coeffs[..k].iter().all(Zero::is_zero));
        Self {
            coeffs: self.coeffs[k..].to_vec(),
        }
    }

    /// In-place multiplication by `(1 - c q^s)`.
    pub fn mul_linear_factor(&mut self, c: &C, s: usize) {
        if c.is_zero() {
            return;
        }
        if s == 0 {
            let f = C::one() - c.clone();
            for x in &mut self.coeffs {
                *x = x.clone() * f.clone();
            }
            return;
        }
        for j in (s..self.coeffs.len()).rev() {
            let t = self.coeffs[j - s].clone() * c.clone();
            self.coeffs[j] = self.coeffs[j].clone() - t;
        }
    }

    /// In-place division by `(1 - c q^s)` with `s >= 1`.
    pub fn div_linear_factor(&mut self, c: &C, s: usize) {
        assert!(s >= 1);
        if c.is_zero() {
            return;
        }
        for j in s..self.coeffs.len() {
            let t = self.coeffs[j - s].clone() * c.clone();
            self.coeffs[j] = self.coeffs[j].clone() + t;
        }
    }

    pub fn inv(&self) -> Result<Self, SeriesError> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(SeriesError::ZeroConstantTerm);
        }
        let inv0 = C::one() / a0.clone();
        let n = self.order();
        let mut out: Vec<C> = Vec::with_capacity(n + 1);
        out.push(inv0.clone());
        for k in 1..=n {
            let mut acc = C::zero();
            for i in 1..=k {
                let ai = &self.coeffs[i];
                if !ai.is_zero() {
                    acc = acc + ai.clone() * out[k - i].clone();
                }
            }
            out.push(-(acc * inv0.clone()));
        }
        Ok(Self { coeffs: out })
    }

    pub fn try_div(&self, rhs: &Self) -> Result<Self, SeriesError> {
        Ok(self * &rhs.inv()?)
    }

    /// The substitution `q -> q^m`. The order is kept, so coefficients of
    /// `self` beyond `order / m` fall off the end.
    pub fn subst_qpow(&self, m: usize) -> Self {
        assert!(m >= 1, "substitution q -> q^m needs m >= 1");
        let n = self.order();
        let mut s = Self::zero(n);
        for (j, c) in self.coeffs.iter().enumerate() {
            match j.checked_mul(m) {
                Some(p) if p <= n => s.coeffs[p] = c.clone(),
                _ => break,
            }
        }
        s
    }

    /// Evaluates the stored coefficients as a polynomial at `x`.
    pub fn eval_polynomial(&self, x: &C) -> C {
        self.coeffs
            .iter()
            .rev()
            .fold(C::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    /// Index of the first coefficient where `self` and `other` differ,
    /// compared through the smaller order.
    pub fn first_difference(&self, other: &Self) -> Option<usize> {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .position(|(a, b)| a != b)
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(&C, &C) -> C) -> Self {
        let n = self.order().min(rhs.order());
        Self {
            coeffs: (0..=n).map(|j| f(&self.coeffs[j], &rhs.coeffs[j])).collect(),
        }
    }

    fn cauchy(&self, rhs: &Self) -> Self {
        let n = self.order().min(rhs.order());
        let mut out = vec![C::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(n + 1 - i) {
                if !b.is_zero() {
                    out[i + j] = out[i + j].clone() + a.clone() * b.clone();
                }
            }
        }
        Self { coeffs: out }
    }
}

impl<C: Coeff> Add for QSeries<C> {
    type Output = QSeries<C>;
    fn add(self, rhs: Self) -> Self {
        self.zip_with(&rhs, |a, b| a.clone() + b.clone())
    }
}

impl<C: Coeff> Add for &QSeries<C> {
    type Output = QSeries<C>;
    fn add(self, rhs: Self) -> QSeries<C> {
        self.zip_with(rhs, |a, b| a.clone() + b.clone())
    }
}

impl<C: Coeff> Sub for QSeries<C> {
    type Output = QSeries<C>;
    fn sub(self, rhs: Self) -> Self {
        self.zip_with(&rhs, |a, b| a.clone() - b.clone())
    }
}

impl<C: Coeff> Sub for &QSeries<C> {
    type Output = QSeries<C>;
    fn sub(self, rhs: Self) -> QSeries<C> {
        self.zip_with(rhs, |a, b| a.clone() - b.clone())
    }
}

impl<C: Coeff> Mul for QSeries<C> {
    type Output = QSeries<C>;
    fn mul(self, rhs: Self) -> Self {
        self.cauchy(&rhs)
    }
}

impl<C: Coeff> Mul for &QSeries<C> {
    type Output = QSeries<C>;
    fn mul(self, rhs: Self) -> QSeries<C> {
        self.cauchy(rhs)
    }
}

impl<C: Coeff> Neg for QSeries<C> {
    type Output = QSeries<C>;
    fn neg(self) -> Self {
        Self {
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl<C: Coeff> Scalar for QSeries<C> {
    fn zero_like(&self) -> Self {
        Self::zero(self.order())
    }
    fn one_like(&self) -> Self {
        Self::one(self.order())
    }
    fn is_zero_value(&self) -> bool {
        self.is_zero()
    }
    fn checked_div(&self, rhs: &Self) -> Option<Self> {
        self.try_div(rhs).ok()
    }
}

impl fmt::Display for QSeries<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if wrote {
                f.write_str(if neg { " - " } else { " + " })?;
            } else if neg {
                f.write_str("-")?;
            }
            let unit = mag.is_one();
            match (j, unit) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => {}
                (_, false) => write!(f, "{mag}*")?,
            }
            match j {
                0 => {}
                1 => f.write_str("q")?,
                _ => write!(f, "q^{j}")?,
            }
            wrote = true;
        }
        if !wrote {
            f.write_str("0")?;
        }
        write!(f, " + O(q^{})", self.order() + 1)
    }
}

/// Length of a q-Pochhammer product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PochLength {
    Finite(usize),
    Infinite,
}

/// `(a; q^m)_n` as a series in `q` truncated at `order`.
///
/// For `n = Infinite` the factors `(1 - a q^{mk})` are multiplied while
/// `m k <= order`; later factors do not touch the retained coefficients.
pub fn qpochhammer<C: Coeff>(a: &C, m: usize, n: PochLength, order: usize) -> QSeries<C> {
    assert!(m >= 1, "q-Pochhammer base q^m needs m >= 1");
    let mut s = QSeries::one(order);
    let count = match n {
        PochLength::Finite(n) => n,
        PochLength::Infinite => order / m + 1,
    };
    for k in 0..count {
        let shift = m * k;
        if shift > order {
            break;
        }
        s.mul_linear_factor(a, shift);
    }
    s
}

/// `(c q^r; q^m)_inf` truncated at `order`, for a scalar `c` and offset `r`.
pub fn qproduct_shifted<C: Coeff>(c: &C, r: usize, m: usize, order: usize) -> QSeries<C> {
    assert!(m >= 1);
    let mut s = QSeries::one(order);
    let mut shift = r;
    while shift <= order {
        s.mul_linear_factor(c, shift);
        shift += m;
    }
    s
}

/// Gaussian binomial `[n choose k]_q` as an exact polynomial; its order is
/// its degree `k (n - k)`. Zero (at order 0) when `n < k`.
pub fn qbinomial_coeff<C: Coeff>(n: i64, k: i64) -> QSeries<C> {
    assert!(k >= 0, "q-binomial needs k >= 0");
    if n < k {
        return QSeries::zero(0);
    }
    let (n, k) = (n as usize, k as usize);
    let deg = k * (n - k);
    let one = C::one();
    let mut s = QSeries::one(deg);
    for i in 1..=k {
        s.mul_linear_factor(&one, n - k + i);
    }
    for i in 1..=k {
        s.div_linear_factor(&one, i);
    }
    s
}

/// Which terms of a q-binomial-theorem sum to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    All,
    Even,
    Odd,
}

impl Parity {
    fn keeps(self, k: usize) -> bool {
        match self {
            Parity::All => true,
            Parity::Even => k % 2 == 0,
            Parity::Odd => k % 2 == 1,
        }
    }
}

/// `F(a, b) = sum_k (b/a; q)_k / (q; q)_k a^k` through `q^order`.
///
/// The powers `a^k` carry no q-valuation, so the sum is infinite in every
/// coefficient. It is closed exactly: for `k > order` the normalised term
/// `(b/a;q)_k/(q;q)_k` agrees with `(b/a;q)_inf/(q;q)_inf` through `q^order`,
/// so the tail is that series times a geometric sum in `a`.
pub fn qbt_sum<C>(a: &C, b: &C, order: usize) -> Result<QSeries<C>, SeriesError>
where
    C: Coeff + Signed + PartialOrd,
{
    qbt_sum_parity(a, b, order, Parity::All)
}

/// [`qbt_sum`] restricted to the even or odd indexed terms.
pub fn qbt_sum_parity<C>(a: &C, b: &C, order: usize, parity: Parity) -> Result<QSeries<C>, SeriesError>
where
    C: Coeff + Signed + PartialOrd,
{
    if a.is_zero() {
        return Err(SeriesError::NonConvergent("q-binomial sum needs a != 0".into()));
    }
    if a.abs() >= C::one() {
        return Err(SeriesError::NonConvergent(
            "geometric tail in a diverges for |a| >= 1".into(),
        ));
    }
    let c = b.clone() / a.clone();
    let mut normalised = QSeries::one(order);
    let mut a_pow = C::one();
    let mut sum = QSeries::zero(order);
    let last = order + 1;
    for k in 0..=last {
        if k > 0 {
            normalised.mul_linear_factor(&c, k - 1);
            normalised.div_linear_factor(&C::one(), k);
            a_pow = a_pow * a.clone();
        }
        if k < last && parity.keeps(k) {
            sum = &sum + &normalised.scale(&a_pow);
        }
    }
    // normalised now equals the k = order + 1 term, which every later term
    // matches through q^order.
    let (first, ratio) = match parity {
        Parity::All => (last, a.clone()),
        Parity::Even | Parity::Odd => {
            let first = if parity.keeps(last) { last } else { last + 1 };
            (first, a.clone() * a.clone())
        }
    };
    let mut a_first = C::one();
    for _ in 0..first {
        a_first = a_first * a.clone();
    }
    let tail_weight = a_first / (C::one() - ratio);
    Ok(&sum + &normalised.scale(&tail_weight))
}
