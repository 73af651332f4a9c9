//! Evaluation backends for entry forms.
//!
//! Each entry writes its sums, products and continued fractions once against
//! [`Backend`]; the backend decides what `q` is (the series variable, an exact
//! rational or a high-precision real) and when an infinite sum or product can
//! stop.

use num_traits::{One, Signed, Zero};

use super::CorpusError;
use crate::cfrac::{CFrac, CfError, NumericOptions};
use crate::hpreal::HpReal;
use crate::qseries::{qbt_sum_parity, qproduct_shifted, Parity, QSeries};
use crate::scalar::{rational_sqrt, Rational, RealScalar, Scalar};

/// Exact series coefficients used by the formal backend.
pub type Series = QSeries<Rational>;

/// Upper bound on summands or factors before an infinite sum is declared divergent.
const MAX_TERMS: usize = 100_000;

/// Which verification strategy an entry uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BackendKind {
    /// Coefficient-exact comparison of truncated power series.
    Formal,
    /// Exact rational comparison of finite identities.
    ExactFinite,
    /// High-precision real comparison at a numeric `q`.
    Numeric,
}

impl BackendKind {
    /// Lower-case tag used in reports.
    pub fn tag(self) -> &'static str {
        match self {
            BackendKind::Formal => "formal",
            BackendKind::ExactFinite => "exact",
            BackendKind::Numeric => "numeric",
        }
    }
}

/// Value of a continued fraction plus the depth used, when meaningful.
#[derive(Debug, Clone)]
pub struct CfValue<E> {
    pub value: E,
    pub depth: Option<usize>,
}

pub trait Backend: Clone + Send + Sync + 'static {
    type Elem: Scalar + 'static;

    fn kind(&self) -> BackendKind;

    /// The base `q`.
    fn q(&self) -> Self::Elem;

    fn constant(&self, c: &Rational) -> Self::Elem;

    /// `sqrt(c)`, or `None` if the backend cannot represent it.
    fn sqrt_constant(&self, c: &Rational) -> Option<Self::Elem>;

    /// Whether `term`, whose q-valuation is at least `min_val`, no longer
    /// affects a sum or product.
    fn negligible(&self, term: &Self::Elem, min_val: usize) -> bool;

    fn eval_cf(&self, cf: &CFrac<Self::Elem>) -> Result<CfValue<Self::Elem>, CfError>;

    /// `sum_k (c; q)_k / (q; q)_k a^k` over the indices selected by `parity`.
    fn binomial_sum(&self, c: &Rational, a: &Rational, parity: Parity)
        -> Result<Self::Elem, CorpusError>;

    fn zero(&self) -> Self::Elem {
        self.constant(&Rational::zero())
    }

    fn one(&self) -> Self::Elem {
        self.constant(&Rational::one())
    }

    fn int(&self, n: i64) -> Self::Elem {
        self.constant(&Rational::from_integer(n.into()))
    }

    fn qpow(&self, n: usize) -> Self::Elem {
        pow(&self.q(), n)
    }

    /// `c q^n`.
    fn mono(&self, c: &Rational, n: usize) -> Self::Elem {
        self.constant(c) * self.qpow(n)
    }

    /// `prod_{k >= 0} (1 - c q^{r + m k})`.
    fn shifted_product(&self, c: &Rational, r: usize, m: usize) -> Result<Self::Elem, CorpusError> {
        let mut acc = self.one();
        let mut small = 0;
        for k in 0..MAX_TERMS {
            let t = self.mono(c, r + m * k);
            if self.negligible(&t, r + m * k) {
                small += 1;
                if small == 2 {
                    return Ok(acc);
                }
            } else {
                small = 0;
            }
            acc = acc * (self.one() - t);
        }
        Err(CorpusError::SumDiverged("infinite product".into()))
    }
}

/// `x^n` by repeated squaring.
pub fn pow<E: Scalar>(x: &E, mut n: usize) -> E {
    let mut base = x.clone();
    let mut acc = x.one_like();
    while n > 0 {
        if n & 1 == 1 {
            acc = acc * base.clone();
        }
        n >>= 1;
        if n > 0 {
            base = base.clone() * base;
        }
    }
    acc
}

/// `x / y`, naming the quantity in the error.
pub fn div<E: Scalar>(x: &E, y: &E, what: &str) -> Result<E, CorpusError> {
    x.checked_div(y)
        .ok_or_else(|| CorpusError::DivisionByZero(what.to_string()))
}

/// Sums `term(k)` for `k = 0, 1, ...`. Each call returns the summand and a
/// lower bound for its q-valuation; the sum stops after two consecutive
/// negligible summands.
pub fn sum_series<B: Backend>(
    b: &B,
    mut term: impl FnMut(usize) -> Result<(B::Elem, usize), CorpusError>,
) -> Result<B::Elem, CorpusError> {
    let mut acc = b.zero();
    let mut small = 0;
    for k in 0..MAX_TERMS {
        let (t, min_val) = term(k)?;
        if b.negligible(&t, min_val) {
            small += 1;
            if small == 2 {
                return Ok(acc);
            }
        } else {
            small = 0;
        }
        acc = acc + t;
    }
    Err(CorpusError::SumDiverged("series".into()))
}

/// Formal power series through a fixed order.
#[derive(Debug, Clone)]
pub struct FormalBackend {
    pub order: usize,
}

impl FormalBackend {
    pub fn new(order: usize) -> Self {
        Self { order }
    }
}

impl Backend for FormalBackend {
    type Elem = Series;

    fn kind(&self) -> BackendKind {
        BackendKind::Formal
    }

    fn q(&self) -> Series {
        Series::q(self.order)
    }

    fn constant(&self, c: &Rational) -> Series {
        Series::constant(c.clone(), self.order)
    }

    fn sqrt_constant(&self, c: &Rational) -> Option<Series> {
        rational_sqrt(c).map(|r| self.constant(&r))
    }

    fn negligible(&self, _term: &Series, min_val: usize) -> bool {
        min_val > self.order
    }

    fn eval_cf(&self, cf: &CFrac<Series>) -> Result<CfValue<Series>, CfError> {
        Ok(CfValue {
            value: cf.limit_series(self.order)?,
            depth: None,
        })
    }

    fn binomial_sum(&self, c: &Rational, a: &Rational, parity: Parity) -> Result<Series, CorpusError> {
        // qbt_sum takes (a, b) with c = b / a
        qbt_sum_parity(a, &(c * a), self.order, parity).map_err(CorpusError::Series)
    }

    fn qpow(&self, n: usize) -> Series {
        Series::monomial(Rational::one(), n, self.order)
    }

    fn mono(&self, c: &Rational, n: usize) -> Series {
        Series::monomial(c.clone(), n, self.order)
    }

    fn shifted_product(&self, c: &Rational, r: usize, m: usize) -> Result<Series, CorpusError> {
        Ok(qproduct_shifted(c, r, m, self.order))
    }
}

/// Exact rational arithmetic at a rational `q`; finite identities only.
#[derive(Debug, Clone)]
pub struct ExactBackend {
    pub q: Rational,
}

impl Backend for ExactBackend {
    type Elem = Rational;

    fn kind(&self) -> BackendKind {
        BackendKind::ExactFinite
    }

    fn q(&self) -> Rational {
        self.q.clone()
    }

    fn constant(&self, c: &Rational) -> Rational {
        c.clone()
    }

    fn sqrt_constant(&self, c: &Rational) -> Option<Rational> {
        rational_sqrt(c)
    }

    fn negligible(&self, term: &Rational, _min_val: usize) -> bool {
        term.is_zero()
    }

    fn eval_cf(&self, cf: &CFrac<Rational>) -> Result<CfValue<Rational>, CfError> {
        let n = cf.len().ok_or(CfError::Term {
            index: 0,
            message: "exact evaluation needs a finite continued fraction".into(),
        })?;
        Ok(CfValue {
            value: cf.eval_at_depth(n)?,
            depth: Some(n),
        })
    }

    fn binomial_sum(&self, _c: &Rational, _a: &Rational, _p: Parity) -> Result<Rational, CorpusError> {
        Err(CorpusError::Unsupported(
            "infinite q-binomial sums have no exact rational value".into(),
        ))
    }
}

/// High-precision reals at a numeric `q`.
#[derive(Debug, Clone)]
pub struct NumericBackend {
    q: HpReal,
    prec: usize,
    eps: HpReal,
    cf_options: NumericOptions<HpReal>,
}

impl NumericBackend {
    /// Depth schedule starts at this depth and doubles.
    pub const INITIAL_DEPTH: usize = 16;
    pub const MAX_DEPTH: usize = 1 << 16;

    /// `cf_tol` is the successive-depth tolerance for continued fractions.
    pub fn new(q: HpReal, prec: usize, cf_tol: HpReal) -> Self {
        Self {
            q: q.with_precision(prec),
            prec,
            eps: HpReal::epsilon_bits(prec + 10, prec),
            cf_options: NumericOptions {
                initial_depth: Self::INITIAL_DEPTH,
                max_depth: Self::MAX_DEPTH,
                tol: cf_tol,
            },
        }
    }

    pub fn from_rational(q: &Rational, prec: usize, cf_tol: HpReal) -> Self {
        Self::new(HpReal::from_rational(q, prec), prec, cf_tol)
    }

    pub fn precision(&self) -> usize {
        self.prec
    }
}

impl Backend for NumericBackend {
    type Elem = HpReal;

    fn kind(&self) -> BackendKind {
        BackendKind::Numeric
    }

    fn q(&self) -> HpReal {
        self.q.clone()
    }

    fn constant(&self, c: &Rational) -> HpReal {
        HpReal::from_rational(c, self.prec)
    }

    fn sqrt_constant(&self, c: &Rational) -> Option<HpReal> {
        (!c.is_negative()).then(|| self.constant(c).sqrt())
    }

    fn negligible(&self, term: &HpReal, _min_val: usize) -> bool {
        term.abs_value() < self.eps
    }

    fn eval_cf(&self, cf: &CFrac<HpReal>) -> Result<CfValue<HpReal>, CfError> {
        let r = cf.eval_numeric(&self.cf_options)?;
        Ok(CfValue {
            value: r.value,
            depth: Some(r.depth),
        })
    }

    fn binomial_sum(&self, c: &Rational, a: &Rational, parity: Parity) -> Result<HpReal, CorpusError> {
        let q = self.q();
        let c = self.constant(c);
        let a = self.constant(a);
        // term_k = (c;q)_k/(q;q)_k a^k, built incrementally
        let mut term = self.one();
        let mut qk = self.one();
        sum_series(self, |k| {
            if k > 0 {
                let num = (self.one() - c.clone() * qk.clone()) * a.clone();
                qk = qk.clone() * q.clone();
                term = div(&(term.clone() * num), &(self.one() - qk.clone()), "(q;q)_k")?;
            }
            let keep = match parity {
                Parity::All => true,
                Parity::Even => k % 2 == 0,
                Parity::Odd => k % 2 == 1,
            };
            Ok((if keep { term.clone() } else { self.zero() }, 0))
        })
    }
}
