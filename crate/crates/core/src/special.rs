//! Closed-form values of the Rogers-Ramanujan continued fraction at
//! `q = e^{-2π}` and of its alternating form at `q = e^{-π}`.

use crate::cfrac::{CFrac, CfError, NumericEval, NumericOptions};
use crate::hpreal::HpReal;
use crate::scalar::RealScalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// `1/(1 + q/(1 + q^2/(1 + ...)))` at `q = e^{-2π}`.
    Plus,
    /// `1/(1 - q/(1 + q^2/(1 - ...)))` at `q = e^{-π}`.
    Minus,
}

/// `e^{-2π}` for `Plus`, `e^{-π}` for `Minus`.
pub fn special_q(variant: Variant, prec: usize) -> HpReal {
    let pi = HpReal::pi(prec);
    let x = match variant {
        Variant::Plus => pi.clone() + pi,
        Variant::Minus => pi,
    };
    (-x).exp()
}

/// `(sqrt((5 ± sqrt5)/2) - (sqrt5 ± 1)/2) e^{2π/5}` (Plus) or `... e^{π/5}` (Minus).
pub fn rr_closed_form(variant: Variant, prec: usize) -> HpReal {
    assert!(prec >= 64, "precision must be at least 64 bits");
    let int = |n| HpReal::from_i64(n, prec);
    let half = |x: HpReal| x.div_by(&int(2));
    let sqrt5 = int(5).sqrt();
    let pi = HpReal::pi(prec);
    let (inner, golden, scale) = match variant {
        Variant::Plus => (
            half(int(5) + sqrt5.clone()),
            half(sqrt5 + int(1)),
            (pi.clone() + pi).div_by(&int(5)),
        ),
        Variant::Minus => (
            half(int(5) - sqrt5.clone()),
            half(sqrt5 - int(1)),
            pi.div_by(&int(5)),
        ),
    };
    (inner.sqrt() - golden) * scale.exp()
}

/// The continued fraction of `variant` with terms evaluated at `q`.
pub fn rr_cfrac(variant: Variant, q: HpReal) -> CFrac<HpReal> {
    let one = HpReal::one(q.precision());
    CFrac::new(HpReal::zero(q.precision()), None, move |k| {
        if k == 1 {
            return (one.clone(), one.clone());
        }
        let t = q.powi(k - 1);
        let a = match variant {
            Variant::Minus if k % 2 == 0 => -t,
            _ => t,
        };
        (a, one.clone())
    })
}

/// Backward-recurrence value of the fraction at its special `q`.
pub fn rr_cf_numeric(variant: Variant, prec: usize, tol: &HpReal) -> Result<NumericEval<HpReal>, CfError> {
    assert!(prec >= 64, "precision must be at least 64 bits");
    rr_cfrac(variant, special_q(variant, prec)).eval_numeric(&NumericOptions {
        initial_depth: 4,
        max_depth: 1 << 12,
        tol: tol.clone(),
    })
}

/// `(q, q^4; q^5)_inf / (q^2, q^3; q^5)_inf` for `0 < q < 1`.
pub fn rr_product(q: &HpReal) -> HpReal {
    let prec = q.precision();
    let one = HpReal::one(prec);
    let eps = HpReal::epsilon_bits(prec + 10, prec);
    let mut acc = one.clone();
    let mut n = 0usize;
    loop {
        let base = q.powi(5 * n + 1);
        if base.abs_value() < eps {
            return acc;
        }
        let q2 = base.clone() * q.clone();
        let q3 = q2.clone() * q.clone();
        let q4 = q3.clone() * q.clone();
        let num = (one.clone() - base) * (one.clone() - q4);
        let den = (one.clone() - q2) * (one.clone() - q3);
        acc = acc * num.div_by(&den);
        n += 1;
    }
}
