//! Series-to-continued-fraction expansion by repeated division.
//!
//! A series `f` with constant term 1 is written as `1 + c q^α / f'` where
//! `c q^α` is the leading monomial of `f - 1`; repeating on `f'` gives a
//! C-fraction `1 + c_1 q^{α_1}/(1 + c_2 q^{α_2}/(1 + ...))`.

use num_traits::Zero;

use crate::cfrac::CFrac;
use crate::qseries::{QSeries, Valuation};
use crate::scalar::Coeff;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExpandError<C: Coeff> {
    #[error("series must have constant term 1")]
    ConstantTermNotOne,
    #[error("term budget exhausted after {} terms", .0.terms.len())]
    TermBudgetExceeded(CExpansion<C>),
    #[error("working order exhausted after {} terms", .0.terms.len())]
    OrderExhausted(CExpansion<C>),
}

impl<C: Coeff> ExpandError<C> {
    /// Terms extracted before the expansion stopped, if any.
    pub fn partial(&self) -> Option<&CExpansion<C>> {
        match self {
            ExpandError::ConstantTermNotOne => None,
            ExpandError::TermBudgetExceeded(e) | ExpandError::OrderExhausted(e) => Some(e),
        }
    }
}

/// One partial numerator `coeff * q^power`.
#[derive(Debug, Clone, PartialEq)]
pub struct CTerm<C> {
    pub coeff: C,
    pub power: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CExpansion<C> {
    pub terms: Vec<CTerm<C>>,
    /// True when the remaining tail vanished through the working order.
    pub terminated: bool,
    /// Working order left after the last extraction.
    pub remaining_order: usize,
}

impl<C: Coeff + 'static> CExpansion<C> {
    /// The finite fraction `1 + c_1 q^{α_1}/(1 + ...)` at `order`.
    pub fn to_cfrac(&self, order: usize) -> CFrac<QSeries<C>> {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                (
                    QSeries::monomial(t.coeff.clone(), t.power, order),
                    QSeries::one(order),
                )
            })
            .collect();
        CFrac::from_terms(QSeries::one(order), terms)
    }
}

/// One division step `N/D = 1 + (N - D)/D`; returns `(N - D, D)`.
pub fn division_step<C: Coeff>(
    n: &QSeries<C>,
    d: &QSeries<C>,
) -> Result<(QSeries<C>, QSeries<C>), ExpandError<C>> {
    if !n.constant_term().is_one() || !d.constant_term().is_one() {
        return Err(ExpandError::ConstantTermNotOne);
    }
    Ok((n - d, d.clone()))
}

/// Greedy C-fraction expansion of `f` using at most `max_terms` terms.
///
/// Each extracted term `c q^α` lowers the working order by `α`. The
/// expansion terminates when `f_j - 1` vanishes through a positive working
/// order, and stops with `OrderExhausted` once the order reaches zero.
pub fn c_fraction_expand<C: Coeff>(
    f: &QSeries<C>,
    max_terms: usize,
) -> Result<CExpansion<C>, ExpandError<C>> {
    if !f.constant_term().is_one() {
        return Err(ExpandError::ConstantTermNotOne);
    }
    let mut cur = f.clone();
    let mut terms = Vec::new();
    loop {
        let order = cur.order();
        let g = &cur - &QSeries::one(order);
        let alpha = match g.valuation() {
            Valuation::Infinite if order >= 1 => {
                return Ok(CExpansion {
                    terms,
                    terminated: true,
                    remaining_order: order,
                })
            }
            Valuation::Infinite => {
                return Err(ExpandError::OrderExhausted(CExpansion {
                    terms,
                    terminated: false,
                    remaining_order: 0,
                }))
            }
            Valuation::Finite(a) => a,
        };
        if terms.len() == max_terms {
            return Err(ExpandError::TermBudgetExceeded(CExpansion {
                terms,
                terminated: false,
                remaining_order: order,
            }));
        }
        let coeff = g.coeffs()[alpha].clone();
        let h = g.shift_down(alpha).scale(&(C::one() / coeff.clone()));
        terms.push(CTerm { coeff, power: alpha });
        cur = h.inv().expect("normalised tail has constant term 1");
    }
}

/// Outcome of [`verify_ratio_recursion`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RecursionCheck {
    pub first_failure: Option<usize>,
}

impl RecursionCheck {
    pub fn holds(&self) -> bool {
        self.first_failure.is_none()
    }
}

/// Checks `S_s = β_s S_{s+1} + a_{s+1} S_{s+2}` for `s = 0 .. upto`,
/// compared through the common truncation order. `numerator(s)` supplies
/// `a_{s+1}`; `beta = None` means `β_s = 1`.
pub fn verify_ratio_recursion<C: Coeff>(
    family: &dyn Fn(usize) -> QSeries<C>,
    beta: Option<&dyn Fn(usize) -> QSeries<C>>,
    numerator: &dyn Fn(usize) -> QSeries<C>,
    upto: usize,
) -> RecursionCheck {
    for s in 0..upto {
        let s0 = family(s);
        let s1 = family(s + 1);
        let s2 = family(s + 2);
        let lead = match beta {
            Some(b) => &b(s) * &s1,
            None => s1,
        };
        let rhs = &lead + &(&numerator(s) * &s2);
        let diff = &s0 - &rhs;
        if !diff.coeffs().iter().all(Zero::is_zero) {
            return RecursionCheck {
                first_failure: Some(s),
            };
        }
    }
    RecursionCheck { first_failure: None }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::qbinomial_coeff;
    use crate::scalar::{rat, Rational};

    type S = QSeries<Rational>;

    fn poly(c: &[i64], order: usize) -> S {
        S::from_poly(&c.iter().map(|&x| rat(x)).collect::<Vec<_>>(), order)
    }

    /// sum_k q^{k^2 + s k} λ^k [n - k - s + 1 choose k], computed directly.
    fn mu(n: i64, s: i64, lambda: &Rational, order: usize) -> S {
        let mut out = S::zero(order);
        for k in 0..=n {
            let binom = qbinomial_coeff::<Rational>(n - k - s + 1, k).extend_polynomial(order);
            let p = k * k + s * k;
            if p < 0 || p as usize > order {
                continue;
            }
            let lk = num_traits::pow(lambda.clone(), k as usize);
            out = &out + &(&S::monomial(lk, p as usize, order) * &binom);
        }
        out
    }

    #[test]
    fn division_step_examples() {
        let (r, d) = division_step(&mu(2, 0, &rat(1), 6), &mu(2, 1, &rat(1), 6)).unwrap();
        assert_eq!(r, poly(&[0, 1], 6));
        assert_eq!(d, poly(&[1, 0, 1], 6));
        let x = poly(&[1, 3, 1], 4);
        assert!(division_step(&x, &x).unwrap().0.is_zero());
        let (r, _) = division_step(&poly(&[1, 1], 3), &S::one(3)).unwrap();
        assert_eq!(r, poly(&[0, 1], 3));
        assert_eq!(
            division_step(&poly(&[2], 3), &S::one(3)),
            Err(ExpandError::ConstantTermNotOne)
        );
    }

    #[test]
    fn expand_one_and_geometric() {
        let e = c_fraction_expand(&S::one(5), 10).unwrap();
        assert!(e.terms.is_empty() && e.terminated);
        let e = c_fraction_expand(&poly(&[1, -1], 6).inv().unwrap(), 10).unwrap();
        assert!(e.terminated);
        assert_eq!(
            e.terms,
            vec![CTerm { coeff: rat(1), power: 1 }, CTerm { coeff: rat(-1), power: 1 }]
        );
        assert_eq!(e.to_cfrac(6).limit_series(6).unwrap(), poly(&[1, -1], 6).inv().unwrap());
    }

    #[test]
    fn expand_reports_order_and_budget_exhaustion() {
        let f = poly(&[1, -1], 2).inv().unwrap();
        match c_fraction_expand(&f, 10) {
            Err(ExpandError::OrderExhausted(e)) => assert_eq!(e.terms.len(), 2),
            other => panic!("unexpected {other:?}"),
        }
        let f = poly(&[1, 1, 1, 1, 1, 2, 3], 6);
        match c_fraction_expand(&f, 1) {
            Err(ExpandError::TermBudgetExceeded(e)) => {
                assert_eq!(e.terms.len(), 1);
                assert_eq!(e.remaining_order, 5);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(c_fraction_expand(&poly(&[0, 1], 3), 4), Err(ExpandError::ConstantTermNotOne));
    }

    #[test]
    fn mu_recursion_holds() {
        let lambda = rat(2);
        let order = 40;
        let family = |s: usize| mu(3, s as i64, &lambda, order);
        let numer = |s: usize| S::monomial(lambda.clone(), s + 1, order);
        assert!(verify_ratio_recursion(&family, None, &numer, 3).holds());
        // wrong numerator is caught at s = 0
        let bad = |s: usize| S::monomial(rat(1), s + 1, order);
        assert_eq!(verify_ratio_recursion(&family, None, &bad, 3).first_failure, Some(0));
    }

    #[test]
    fn constant_family_recursion() {
        let one = |_: usize| S::one(5);
        let zero = |_: usize| S::zero(5);
        assert!(verify_ratio_recursion(&one, None, &zero, 4).holds());
    }
}
