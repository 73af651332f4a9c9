//! Generalized continued fractions `b0 + a1/(b1 + a2/(b2 + ...))`.
//!
//! Terms come from a deterministic rule `k -> (a_k, b_k)` for `k >= 1`, so
//! infinite fractions are represented lazily. Term values can be truncated
//! series (formal limits), exact rationals or high-precision reals.

use std::fmt;
use std::sync::Arc;

use crate::qseries::{QSeries, Valuation};
use crate::scalar::{Coeff, RealScalar, Scalar};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CfError {
    #[error("continued fraction has {available} terms, {requested} requested")]
    FiniteCFExhausted { requested: usize, available: usize },
    #[error("partial numerator product did not pass q^{order} within {budget} terms")]
    NotFormallyConvergent { order: usize, budget: usize },
    #[error("denominator Q_{index} has a zero constant term")]
    ZeroConstantTerm { index: usize },
    #[error("no numeric convergence up to depth {depth} (last delta {last_delta:e})")]
    NoNumericConvergence { depth: usize, last_delta: f64 },
    #[error("division by zero during backward evaluation at term {depth}")]
    DivisionByZero { depth: usize },
    #[error("scale factor r_{index} is zero")]
    ZeroScale { index: usize },
    #[error("partial denominator b_{index} is zero")]
    ZeroDenominatorTerm { index: usize },
    #[error("odd part needs at least 3 terms, got {available}")]
    InsufficientTerms { available: usize },
    #[error("term generator failed at k = {index}: {message}")]
    Term { index: usize, message: String },
}

type TermRule<T> = Arc<dyn Fn(usize) -> Result<(T, T), CfError> + Send + Sync>;

/// A continued fraction with leading term `b0` and terms `(a_k, b_k)`.
#[derive(Clone)]
pub struct CFrac<T> {
    b0: T,
    rule: TermRule<T>,
    len: Option<usize>,
}

impl<T: fmt::Debug> fmt::Debug for CFrac<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CFrac")
            .field("b0", &self.b0)
            .field("len", &self.len)
            .finish_non_exhaustive()
    }
}

/// Numerator and denominator of the `index`-th convergent, excluding `b0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergentPair<T> {
    pub index: usize,
    pub p: T,
    pub q: T,
}

impl<T: Scalar> ConvergentPair<T> {
    /// `b0 + p/q`, or `None` when `q` is not invertible.
    pub fn value(&self, b0: &T) -> Option<T> {
        Some(b0.clone() + self.p.checked_div(&self.q)?)
    }
}

/// Result of a converged numeric evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericEval<T> {
    pub value: T,
    /// Depth of the final backward evaluation.
    pub depth: usize,
    /// Difference between the last two depths (zero for exact finite evaluation).
    pub last_delta: T,
}

/// Depth schedule and stopping tolerance for [`CFrac::eval_numeric`].
#[derive(Debug, Clone)]
pub struct NumericOptions<T> {
    pub initial_depth: usize,
    pub max_depth: usize,
    pub tol: T,
}

impl<T: Scalar> CFrac<T> {
    /// Builds a fraction from an infallible term rule; `len = None` means infinite.
    pub fn new(
        b0: T,
        len: Option<usize>,
        rule: impl Fn(usize) -> (T, T) + Send + Sync + 'static,
    ) -> Self {
        Self {
            b0,
            rule: Arc::new(move |k| Ok(rule(k))),
            len,
        }
    }

    pub fn try_new(
        b0: T,
        len: Option<usize>,
        rule: impl Fn(usize) -> Result<(T, T), CfError> + Send + Sync + 'static,
    ) -> Self {
        Self {
            b0,
            rule: Arc::new(rule),
            len,
        }
    }

    /// A finite fraction from an explicit term list `[(a_1, b_1), ...]`.
    pub fn from_terms(b0: T, terms: Vec<(T, T)>) -> Self
    where
        T: 'static,
    {
        let len = terms.len();
        let terms = Arc::new(terms);
        Self::new(b0, Some(len), move |k| terms[k - 1].clone())
    }

    pub fn b0(&self) -> &T {
        &self.b0
    }

    pub fn len(&self) -> Option<usize> {
        self.len
    }

    pub fn is_finite(&self) -> bool {
        self.len.is_some()
    }

    /// `(a_k, b_k)` for `k >= 1`.
    pub fn term(&self, k: usize) -> Result<(T, T), CfError> {
        assert!(k >= 1, "terms are indexed from 1");
        if let Some(n) = self.len {
            if k > n {
                return Err(CfError::FiniteCFExhausted {
                    requested: k,
                    available: n,
                });
            }
        }
        (self.rule)(k)
    }

    /// Same fraction with term `k` replaced by `(a, b)`.
    pub fn with_term(&self, k: usize, a: T, b: T) -> Self
    where
        T: 'static,
    {
        let rule = self.rule.clone();
        Self {
            b0: self.b0.clone(),
            rule: Arc::new(move |j| if j == k { Ok((a.clone(), b.clone())) } else { rule(j) }),
            len: self.len,
        }
    }

    /// Same terms with a different leading term.
    pub fn with_b0(&self, b0: T) -> Self {
        Self {
            b0,
            rule: self.rule.clone(),
            len: self.len,
        }
    }

    /// Convergent numerators and denominators for `j = 1 ..= upto` from
    /// `P_j = b_j P_{j-1} + a_j P_{j-2}`, `Q_j = b_j Q_{j-1} + a_j Q_{j-2}`
    /// with `P_{-1} = 1, P_0 = 0, Q_{-1} = 0, Q_0 = 1`.
    pub fn convergents(&self, upto: usize) -> Result<Vec<ConvergentPair<T>>, CfError> {
        let mut out = Vec::with_capacity(upto);
        let mut rec = Recurrence::new(&self.b0);
        for k in 1..=upto {
            let (a, b) = self.term(k)?;
            let (p, q) = rec.push(&a, &b);
            out.push(ConvergentPair { index: k, p, q });
        }
        Ok(out)
    }

    /// Value `b0 + P_k/Q_k` of the `k`-th convergent (`k = 0` gives `b0`).
    pub fn convergent_value(&self, k: usize) -> Result<Option<T>, CfError> {
        if k == 0 {
            return Ok(Some(self.b0.clone()));
        }
        let last = self.convergents(k)?.pop().expect("k >= 1");
        Ok(last.value(&self.b0))
    }

    /// Backward evaluation at a fixed depth with tail 0.
    pub fn eval_at_depth(&self, depth: usize) -> Result<T, CfError> {
        let depth = self.len.map_or(depth, |n| depth.min(n));
        let terms = (1..=depth).map(|k| self.term(k)).collect::<Result<Vec<_>, _>>()?;
        backward(&self.b0, &terms)
    }

    /// Equivalence transformation `a_k -> r_k r_{k-1} a_k`, `b_k -> r_k b_k`
    /// with `r_0 = 1`. A zero `r_k` surfaces as `ZeroScale` when term `k`
    /// is requested.
    pub fn equivalence_scale(&self, r: impl Fn(usize) -> T + Send + Sync + 'static) -> Self
    where
        T: 'static,
    {
        let rule = self.rule.clone();
        let one = self.b0.one_like();
        Self {
            b0: self.b0.clone(),
            rule: Arc::new(move |k| {
                let rk = r(k);
                if rk.is_zero_value() {
                    return Err(CfError::ZeroScale { index: k });
                }
                let rprev = if k == 1 { one.clone() } else { r(k - 1) };
                if rprev.is_zero_value() {
                    return Err(CfError::ZeroScale { index: k - 1 });
                }
                let (a, b) = rule(k)?;
                Ok((rk.clone() * rprev * a, rk * b))
            }),
            len: self.len,
        }
    }

    /// The fraction whose `k`-th convergent is the `(2k+1)`-th convergent of
    /// `self` (its leading term is the first convergent `b0 + a_1/b_1`).
    ///
    /// Terms: `A_1 = -a_1 a_2 b_3 / b_1^2` and, for `k >= 2`,
    /// `A_k = -a_{2k-1} a_{2k} b_{2k+1} / b_{2k-1}`; for every `k`,
    /// `B_k = a_{2k+1} + b_{2k} b_{2k+1} + a_{2k} b_{2k+1} / b_{2k-1}`.
    pub fn odd_part(&self) -> Result<Self, CfError>
    where
        T: 'static,
    {
        if let Some(n) = self.len {
            if n < 3 {
                return Err(CfError::InsufficientTerms { available: n });
            }
        }
        let (a1, b1) = self.term(1)?;
        let b0 = self.b0.clone()
            + a1
                .checked_div(&b1)
                .ok_or(CfError::ZeroDenominatorTerm { index: 1 })?;
        let rule = self.rule.clone();
        let odd_rule = move |k: usize| {
            let (a_prev, b_prev) = rule(2 * k - 1)?;
            let (a_mid, b_mid) = rule(2 * k)?;
            let (a_next, b_next) = rule(2 * k + 1)?;
            let ratio = b_next
                .checked_div(&b_prev)
                .ok_or(CfError::ZeroDenominatorTerm { index: 2 * k - 1 })?;
            let mut big_a = -(a_prev * a_mid.clone() * ratio.clone());
            if k == 1 {
                big_a = big_a
                    .checked_div(&b_prev)
                    .ok_or(CfError::ZeroDenominatorTerm { index: 1 })?;
            }
            let big_b = a_next + b_mid * b_next + a_mid * ratio;
            Ok((big_a, big_b))
        };
        Ok(Self {
            b0,
            rule: Arc::new(odd_rule),
            len: self.len.map(|n| (n - 1) / 2),
        })
    }
}

impl<T: RealScalar> CFrac<T> {
    /// Backward evaluation at depths `D0, 2 D0, 4 D0, ...` until two
    /// successive values differ by less than `tol`. Finite fractions are
    /// evaluated exactly once their full length is reached.
    pub fn eval_numeric(&self, opts: &NumericOptions<T>) -> Result<NumericEval<T>, CfError> {
        let mut cache: Vec<(T, T)> = Vec::new();
        let mut depth = opts.initial_depth.max(1);
        let mut prev: Option<T> = None;
        let mut last_delta: Option<T> = None;
        loop {
            let target = self.len.map_or(depth, |n| depth.min(n));
            while cache.len() < target {
                cache.push(self.term(cache.len() + 1)?);
            }
            let value = backward(&self.b0, &cache[..target])?;
            if self.len.is_some_and(|n| target == n) {
                let zero = value.zero_like();
                return Ok(NumericEval {
                    value,
                    depth: target,
                    last_delta: zero,
                });
            }
            if let Some(p) = prev {
                let delta = (value.clone() - p).abs_value();
                if delta < opts.tol {
                    return Ok(NumericEval {
                        value,
                        depth: target,
                        last_delta: delta,
                    });
                }
                last_delta = Some(delta);
            }
            if depth >= opts.max_depth {
                return Err(CfError::NoNumericConvergence {
                    depth,
                    last_delta: last_delta.map_or(f64::NAN, |d| d.to_f64_lossy()),
                });
            }
            prev = Some(value);
            depth = (depth * 2).min(opts.max_depth);
        }
    }
}

impl<C: Coeff> CFrac<QSeries<C>> {
    /// Default term budget for [`limit_series`](Self::limit_series).
    pub fn default_budget(order: usize) -> usize {
        4 * order + 64
    }

    /// Formal limit through `q^order`.
    ///
    /// Convergents are generated until `val(a_1 ... a_k) > order`; the
    /// determinant identity then shows every later convergent agrees with
    /// convergent `k - 1` through `q^order`.
    pub fn limit_series(&self, order: usize) -> Result<QSeries<C>, CfError> {
        self.limit_series_with_budget(order, Self::default_budget(order))
    }

    pub fn limit_series_with_budget(
        &self,
        order: usize,
        budget: usize,
    ) -> Result<QSeries<C>, CfError> {
        let b0 = self.b0.truncate(order);
        let mut rec = Recurrence::new(&b0);
        let mut val = Valuation::Finite(0);
        let mut k = 0;
        loop {
            if self.len == Some(k) {
                break;
            }
            if k == budget {
                return Err(CfError::NotFormallyConvergent { order, budget });
            }
            let (a, b) = self.term(k + 1)?;
            let a = a.truncate(order);
            val = val + a.valuation();
            if val.exceeds(order) {
                break;
            }
            let (_, q) = rec.push(&a, &b.truncate(order));
            k += 1;
            if q.constant_term().is_zero() {
                return Err(CfError::ZeroConstantTerm { index: k });
            }
        }
        let ratio = rec
            .p
            .try_div(&rec.q)
            .map_err(|_| CfError::ZeroConstantTerm { index: k })?;
        Ok(&b0 + &ratio)
    }
}

/// Running state of the three-term recurrence.
struct Recurrence<T> {
    p: T,
    p_prev: T,
    q: T,
    q_prev: T,
}

impl<T: Scalar> Recurrence<T> {
    fn new(like: &T) -> Self {
        Self {
            p: like.zero_like(),
            p_prev: like.one_like(),
            q: like.one_like(),
            q_prev: like.zero_like(),
        }
    }

    fn push(&mut self, a: &T, b: &T) -> (T, T) {
        let p = b.clone() * self.p.clone() + a.clone() * self.p_prev.clone();
        let q = b.clone() * self.q.clone() + a.clone() * self.q_prev.clone();
        self.p_prev = std::mem::replace(&mut self.p, p.clone());
        self.q_prev = std::mem::replace(&mut self.q, q.clone());
        (p, q)
    }
}

fn backward<T: Scalar>(b0: &T, terms: &[(T, T)]) -> Result<T, CfError> {
    let mut tail = b0.zero_like();
    for (k, (a, b)) in terms.iter().enumerate().rev() {
        let den = b.clone() + tail;
        tail = a
            .checked_div(&den)
            .ok_or(CfError::DivisionByZero { depth: k + 1 })?;
    }
    Ok(b0.clone() + tail)
}
