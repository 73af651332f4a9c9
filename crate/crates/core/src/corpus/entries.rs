//! Left-hand sides and continued fractions of every catalog entry.

use num_traits::{One, ToPrimitive, Zero};

use super::backend::{div, pow, sum_series, Backend, BackendKind};
use super::{CorpusError, EntryDescriptor, EntryKind, ParamPoint};
use crate::cfrac::{CFrac, CfError};
use crate::qseries::{qbinomial_coeff, Parity};
use crate::scalar::{rat, Rational, Scalar};

/// One side of an identity.
#[derive(Debug, Clone)]
pub enum Form<E> {
    Value(E),
    Cf(CFrac<E>),
}

#[derive(Debug, Clone)]
pub struct NamedForm<E> {
    pub name: &'static str,
    pub form: Form<E>,
}

fn value<E>(name: &'static str, v: E) -> NamedForm<E> {
    NamedForm {
        name,
        form: Form::Value(v),
    }
}

fn cf_form<E>(name: &'static str, cf: CFrac<E>) -> NamedForm<E> {
    NamedForm {
        name,
        form: Form::Cf(cf),
    }
}

const CF: &str = "continued fraction";

fn par(e: &EntryDescriptor, p: &ParamPoint, name: &str) -> Result<Rational, CorpusError> {
    p.get(name)
        .cloned()
        .ok_or_else(|| CorpusError::MissingParameter {
            entry: e.id.to_string(),
            name: name.to_string(),
        })
}

/// The finite length parameter `n` of the exact entries.
fn par_n(e: &EntryDescriptor, p: &ParamPoint) -> Result<usize, CorpusError> {
    let n = par(e, p, "n")?;
    n.is_integer()
        .then(|| n.to_integer().to_usize())
        .flatten()
        .filter(|&n| n >= 1)
        .ok_or_else(|| CorpusError::DomainViolation {
            entry: e.id.to_string(),
            constraint: "n is a positive integer".into(),
        })
}

/// An infinite fraction with leading term `b0` and term rule `rule(backend, k)`.
fn cfrac<B: Backend>(
    b: &B,
    b0: B::Elem,
    len: Option<usize>,
    rule: impl Fn(&B, usize) -> (B::Elem, B::Elem) + Send + Sync + 'static,
) -> CFrac<B::Elem> {
    let bk = b.clone();
    CFrac::new(b0, len, move |k| rule(&bk, k))
}

/// Fraction `1/(1 + a_2/(1 + a_3/(1 + ...)))` with unit denominators.
fn unit_cf<B: Backend>(
    b: &B,
    numer: impl Fn(&B, usize) -> B::Elem + Send + Sync + 'static,
) -> CFrac<B::Elem> {
    cfrac(b, b.zero(), None, move |bk, k| {
        let a = if k == 1 { bk.one() } else { numer(bk, k) };
        (a, bk.one())
    })
}

/// `sum_k l^k q^{k^2 + s k} / ((q; q)_k (-bq; q)_k)`, i.e. `g(b, l q^s)`.
pub(crate) fn g_series<B: Backend>(
    b: &B,
    bb: &Rational,
    lam: &Rational,
    s: usize,
) -> Result<B::Elem, CorpusError> {
    let mut t = b.one();
    let bq = b.constant(bb);
    sum_series(b, |k| {
        if k > 0 {
            let qk = b.qpow(k);
            let den = (b.one() - qk.clone()) * (b.one() + bq.clone() * qk);
            t = div(&(t.clone() * b.mono(lam, 2 * k - 1 + s)), &den, "(q, -bq; q)_k")?;
        }
        Ok((t.clone(), k * k + s * k))
    })
}

/// `G(a q^sa, b, l q^sl) = sum_k prod_{j<k}(a q^sa + l q^{sl + j}) q^{(k^2+k)/2} / ((q; q)_k (-bq; q)_k)`.
fn big_g_series<B: Backend>(
    b: &B,
    a: &Rational,
    sa: usize,
    bb: &Rational,
    lam: &Rational,
    sl: usize,
) -> Result<B::Elem, CorpusError> {
    let mut t = b.one();
    let bq = b.constant(bb);
    let a_term = b.mono(a, sa);
    sum_series(b, |k| {
        if k > 0 {
            let qk = b.qpow(k);
            let num = (a_term.clone() + b.mono(lam, sl + k - 1)) * qk.clone();
            let den = (b.one() - qk.clone()) * (b.one() + bq.clone() * qk);
            t = div(&(t.clone() * num), &den, "(q, -bq; q)_k")?;
        }
        Ok((t.clone(), k * (k + 1) / 2))
    })
}

/// `sum_k q^{k^2 + s k} l^k [n - k - s + 1 choose k]_q`.
fn mu<B: Backend>(b: &B, n: usize, s: usize, lam: &Rational) -> B::Elem {
    let mut acc = b.zero();
    for k in 0..=n {
        let top = n as i64 - k as i64 - s as i64 + 1;
        let binom = qbinomial_coeff::<Rational>(top, k as i64);
        if binom.is_zero() {
            continue;
        }
        let poly = binom
            .coeffs()
            .iter()
            .enumerate()
            .fold(b.zero(), |acc, (j, c)| acc + b.mono(c, j));
        let lk = num_traits::pow(lam.clone(), k);
        acc = acc + b.mono(&lk, k * k + s * k) * poly;
    }
    acc
}

/// Eisenstein fraction for `sum_k (-a)^k q^{k(k+1)/2}`.
pub(crate) fn eisenstein_cf<B: Backend>(b: &B, a: &Rational) -> CFrac<B::Elem> {
    let a = a.clone();
    unit_cf(b, move |bk, k| {
        let j = k / 2;
        if k % 2 == 0 {
            bk.mono(&a, 2 * j - 1)
        } else {
            bk.mono(&a, 2 * j) - bk.mono(&a, j)
        }
    })
}

/// `D_{2n} = sum_k a^k q^{nk} [n choose k]` and
/// `D_{2n+1} = sum_k a^k q^{(n+1)k} [n choose k]`.
pub(crate) fn eisenstein_denominator<B: Backend>(b: &B, a: &Rational, n: usize, odd: bool) -> B::Elem {
    let step = if odd { n + 1 } else { n };
    let mut acc = b.zero();
    for k in 0..=n {
        let binom = qbinomial_coeff::<Rational>(n as i64, k as i64);
        let poly = binom
            .coeffs()
            .iter()
            .enumerate()
            .fold(b.zero(), |acc, (j, c)| acc + b.mono(c, j));
        acc = acc + b.mono(&num_traits::pow(a.clone(), k), step * k) * poly;
    }
    acc
}

/// `g(b, l) - (1 - b) g(b, lq) - (b + lq) g(b, lq^2)`.
pub(crate) fn g_recurrence_residual<B: Backend>(
    b: &B,
    bb: &Rational,
    lam: &Rational,
) -> Result<B::Elem, CorpusError> {
    let g0 = g_series(b, bb, lam, 0)?;
    let g1 = g_series(b, bb, lam, 1)?;
    let g2 = g_series(b, bb, lam, 2)?;
    let c1 = b.constant(&(Rational::one() - bb));
    let c2 = b.constant(bb) + b.mono(lam, 1);
    Ok(g0 - c1 * g1 - c2 * g2)
}

fn product<B: Backend>(b: &B, c: i64, r: usize, m: usize) -> Result<B::Elem, CorpusError> {
    b.shifted_product(&rat(c), r, m)
}

/// Rogers-Ramanujan type sum `sum_k q^{k^2 + s k} / (q; q)_k`.
fn rr_series<B: Backend>(b: &B, s: usize) -> Result<B::Elem, CorpusError> {
    g_series(b, &Rational::zero(), &Rational::one(), s)
}

/// Builds every form of an identity entry at parameter point `p`.
///
/// The first form is the left-hand side; the others must agree with it.
pub fn forms<B: Backend>(
    e: &EntryDescriptor,
    p: &ParamPoint,
    b: &B,
) -> Result<Vec<NamedForm<B::Elem>>, CorpusError> {
    e.check_domain(p)?;
    if e.kind != EntryKind::Identity {
        return Err(CorpusError::Unsupported(format!(
            "{} is not an identity between values",
            e.id
        )));
    }
    let numeric = b.kind() == BackendKind::Numeric;
    let f = match e.id {
        "III.16.38.RR" => {
            let ratio = div(&rr_series(b, 1)?, &rr_series(b, 0)?, "Rogers-Ramanujan sum")?;
            let prod = div(
                &(product(b, 1, 1, 5)? * product(b, 1, 4, 5)?),
                &(product(b, 1, 2, 5)? * product(b, 1, 3, 5)?),
                "(q^2, q^3; q^5)",
            )?;
            let cf = unit_cf(b, |bk, k| bk.qpow(k - 1));
            vec![value("series ratio", ratio), value("product ratio", prod), cf_form(CF, cf)]
        }
        "L.I.6.3.1.i" | "L.I.6.3.1.ii" | "L.I.6.3.1.iii" => {
            let bb = par(e, p, "b")?;
            let lam = par(e, p, "lambda")?;
            let lhs = div(&g_series(b, &bb, &lam, 1)?, &g_series(b, &bb, &lam, 0)?, "g(b, l)")?;
            let cf = match e.id {
                "L.I.6.3.1.i" => unit_cf(b, move |bk, k| {
                    let j = k / 2;
                    if k % 2 == 0 {
                        bk.mono(&lam, 2 * j - 1)
                    } else {
                        bk.mono(&bb, j) + bk.mono(&lam, 2 * j)
                    }
                }),
                "L.I.6.3.1.ii" => cfrac(b, b.zero(), None, move |bk, k| {
                    if k == 1 {
                        (bk.one(), bk.one())
                    } else {
                        (bk.mono(&lam, k - 1), bk.one() + bk.mono(&bb, k - 1))
                    }
                }),
                _ => cfrac(b, b.zero(), None, move |bk, k| {
                    let den = bk.constant(&(Rational::one() - &bb));
                    if k == 1 {
                        (bk.one(), den)
                    } else {
                        (bk.constant(&bb) + bk.mono(&lam, k - 1), den)
                    }
                }),
            };
            vec![value("series ratio", lhs), cf_form(CF, cf)]
        }
        "III.16.15.cor" => {
            let lam = par(e, p, "lambda")?;
            let zero = Rational::zero();
            let lhs = div(&g_series(b, &zero, &lam, 1)?, &g_series(b, &zero, &lam, 0)?, "sum")?;
            let cf = unit_cf(b, move |bk, k| bk.mono(&lam, k - 1));
            vec![value("series ratio", lhs), cf_form(CF, cf)]
        }
        "III.16.16" => {
            let lam = par(e, p, "lambda")?;
            let n = par_n(e, p)?;
            let lhs = div(&mu(b, n, 0, &lam), &mu(b, n, 1, &lam), "mu_n(1)")?;
            let cf = cfrac(b, b.one(), Some(n), move |bk, k| (bk.mono(&lam, k), bk.one()));
            vec![value("ratio of q-binomial sums", lhs), cf_form(CF, cf)]
        }
        "III.16.13" => {
            let a = par(e, p, "a")?;
            let neg_a = -a.clone();
            let mut t = b.one();
            let lhs = sum_series(b, |k| {
                if k > 0 {
                    t = t.clone() * b.mono(&neg_a, k);
                }
                Ok((t.clone(), k * (k + 1) / 2))
            })?;
            vec![value("series", lhs), cf_form(CF, eisenstein_cf(b, &a))]
        }
        "L.I.6.2.1" | "L.I.6.4.1" | "T.6.4.1" => {
            let a = par(e, p, "a")?;
            let bb = par(e, p, "b")?;
            let lam = par(e, p, "lambda")?;
            let lhs = div(
                &big_g_series(b, &a, 1, &bb, &lam, 1)?,
                &big_g_series(b, &a, 0, &bb, &lam, 0)?,
                "G(a, b, l)",
            )?;
            let cf = match e.id {
                "L.I.6.2.1" => unit_cf(b, move |bk, k| {
                    let j = k / 2;
                    if k % 2 == 0 {
                        bk.mono(&a, j) + bk.mono(&lam, 2 * j - 1)
                    } else {
                        bk.mono(&bb, j) + bk.mono(&lam, 2 * j)
                    }
                }),
                "L.I.6.4.1" => cfrac(b, b.zero(), None, move |bk, k| {
                    if k == 1 {
                        (bk.one(), bk.one() + bk.mono(&a, 1))
                    } else {
                        let ab = &a * &bb;
                        (
                            bk.mono(&lam, k - 1) - bk.mono(&ab, 2 * k - 2),
                            bk.one() + bk.mono(&a, k) + bk.mono(&bb, k - 1),
                        )
                    }
                }),
                _ => cfrac(b, b.zero(), None, move |bk, k| {
                    if k == 1 {
                        (bk.one(), bk.one())
                    } else {
                        (
                            bk.mono(&a, 1) + bk.mono(&lam, k - 1),
                            bk.one() - bk.mono(&a, 1) + bk.mono(&bb, k - 1),
                        )
                    }
                }),
            };
            vec![value("series ratio", lhs), cf_form(CF, cf)]
        }
        "L.I.6.2.3" => {
            let a = par(e, p, "a")?;
            let bb = par(e, p, "b")?;
            let zero = Rational::zero();
            let lhs = div(
                &big_g_series(b, &a, 0, &bb, &zero, 0)?,
                &big_g_series(b, &a, 1, &bb, &zero, 0)?,
                "G(aq, b, 0)",
            )?;
            let cf = cfrac(b, b.one(), None, move |bk, k| {
                let j = k.div_ceil(2);
                let c = if k % 2 == 1 { &a } else { &bb };
                (bk.mono(c, j), bk.one())
            });
            vec![value("series ratio", lhs), cf_form(CF, cf)]
        }
        "L.I.6.2.1.cor9" => {
            let lhs = sum_series(b, |k| {
                let sign = if k % 2 == 0 { rat(1) } else { rat(-1) };
                let p0 = 3 * k * k + 2 * k;
                Ok((b.mono(&sign, p0) + b.mono(&sign, p0 + 2 * k + 1), p0))
            })?;
            let cf = unit_cf(b, |bk, k| bk.qpow(2 * k - 2) - bk.qpow(k - 1));
            vec![value("series", lhs), cf_form(CF, cf)]
        }
        "L.I.6.2.1.cor11" => {
            let lhs = sum_series(b, |k| {
                if k == 0 {
                    return Ok((b.one(), 0));
                }
                let p0 = k * (3 * k - 1) / 2;
                Ok((b.qpow(p0 + k) - b.qpow(p0), p0))
            })?;
            let cf = cfrac(b, b.zero(), None, |bk, k| {
                if k == 1 {
                    (bk.int(2), bk.int(2))
                } else {
                    (bk.qpow(k - 1) + bk.qpow(2 * k - 3), bk.one())
                }
            });
            vec![value("series", lhs), cf_form(CF, cf)]
        }
        "L.I.6.5.1" | "L.I.6.5.2" => {
            let k = if e.id == "L.I.6.5.2" { rat(2) } else { par(e, p, "k")? };
            let root = b
                .sqrt_constant(&(rat(1) + rat(4) * &k))
                .ok_or_else(|| CorpusError::Unsupported("sqrt(1 + 4k) is not representable".into()))?;
            let half = b.constant(&Rational::new(1.into(), 2.into()));
            let alpha = (b.one() + root.clone()) * half.clone();
            let beta = (root - b.one()) * half;
            let left = cfrac(b, b.zero(), None, move |bk, j| {
                if j == 1 {
                    (bk.one(), bk.one())
                } else {
                    (bk.constant(&k) + bk.qpow(j - 1), bk.one())
                }
            });
            let right = cfrac(b, b.zero(), None, move |bk, j| {
                if j == 1 {
                    (bk.one(), alpha.clone())
                } else {
                    (bk.qpow(j - 1), alpha.clone() + beta.clone() * bk.qpow(j - 1))
                }
            });
            vec![cf_form("left continued fraction", left), cf_form("right continued fraction", right)]
        }
        "L.I.6.4.2" => {
            let a = par(e, p, "a")?;
            let bb = par(e, p, "b")?;
            let c = par(e, p, "c")?;
            let (a1, b1, c1) = (a.clone(), bb.clone(), c.clone());
            let left = cfrac(b, b.zero(), None, move |bk, k| {
                if k == 1 {
                    (bk.one(), bk.constant(&(&a1 + &c1)))
                } else {
                    (bk.constant(&-(&a1 * &b1)), bk.constant(&(&a1 + &b1)) + bk.mono(&c1, k - 1))
                }
            });
            let bkc = b.clone();
            let right = CFrac::try_new(b.zero(), None, move |k| {
                let head = bkc.constant(&(&c - &bb));
                if k == 1 {
                    return Ok((bkc.one(), head + bkc.constant(&a)));
                }
                let tail = bkc
                    .constant(&a)
                    .checked_div(&bkc.qpow(k - 1))
                    .ok_or_else(|| CfError::Term {
                        index: k,
                        message: "a/q^k needs an invertible q".into(),
                    })?;
                Ok((bkc.constant(&(&bb * &c)), head + tail))
            });
            vec![cf_form("left continued fraction", left), cf_form("right continued fraction", right)]
        }
        "L.I.6.4.3" => {
            let a = par(e, p, "a")?;
            let bb = par(e, p, "b")?;
            let n = par_n(e, p)?;
            let (a1, b1) = (a.clone(), bb.clone());
            let left = cfrac(b, b.one(), Some(2 * n + 1), move |bk, k| {
                if k % 2 == 1 {
                    (bk.constant(&a1), bk.one())
                } else {
                    (bk.constant(&b1), bk.qpow(k / 2))
                }
            });
            let right = cfrac(b, b.constant(&(rat(1) + &a)), Some(n), move |bk, j| {
                (bk.constant(&-(&a * &bb)), bk.constant(&(&a + &bb)) + bk.qpow(j))
            });
            vec![cf_form("left continued fraction", left), cf_form("right continued fraction", right)]
        }
        "L.I.6.2.1.cor2" | "V.32.21" => {
            let a = if e.id == "V.32.21" { rat(1) } else { par(e, p, "a")? };
            let neg_a = -a.clone();
            let lhs = div(
                &b.shifted_product(&neg_a, 2, 2)?,
                &b.shifted_product(&neg_a, 1, 2)?,
                "(-aq; q^2)",
            )?;
            let mut out = vec![value("product ratio", lhs)];
            if e.id == "V.32.21" {
                let p2 = product(b, 1, 2, 4)?;
                let alt = div(&product(b, 1, 1, 2)?, &(p2.clone() * p2), "(q^2; q^4)^2")?;
                out.push(value("second product ratio", alt));
            }
            out.push(cf_form(
                CF,
                unit_cf(b, move |bk, k| {
                    let j = k / 2;
                    if k % 2 == 0 {
                        bk.mono(&a, 2 * j - 1)
                    } else {
                        bk.qpow(j) + bk.mono(&a, 2 * j)
                    }
                }),
            ));
            out
        }
        "L.I.6.2.1.cor10" => {
            let lhs = div(&product(b, -1, 3, 4)?, &product(b, -1, 1, 4)?, "(-q; q^4)")?;
            let cf = unit_cf(b, |bk, k| {
                let j = k / 2;
                if k % 2 == 0 {
                    bk.qpow(4 * j - 3)
                } else {
                    bk.qpow(2 * j) + bk.qpow(4 * j - 1)
                }
            });
            vec![value("product ratio", lhs), cf_form(CF, cf)]
        }
        "V.32.20" => {
            let lhs = div(&product(b, 1, 3, 4)?, &product(b, 1, 1, 4)?, "(q; q^4)")?;
            let cf = cfrac(b, b.zero(), None, |bk, k| {
                if k == 1 {
                    (bk.one(), bk.one())
                } else {
                    (-bk.qpow(2 * k - 3), bk.one() + bk.qpow(2 * k - 2))
                }
            });
            vec![value("product ratio", lhs), cf_form(CF, cf)]
        }
        "V.32.18" => {
            let p3 = product(b, 1, 3, 6)?;
            let lhs = div(
                &(product(b, 1, 1, 6)? * product(b, 1, 5, 6)?),
                &(p3.clone() * p3.clone()),
                "(q^3; q^6)^2",
            )?;
            let alt = div(&product(b, 1, 1, 2)?, &pow(&p3, 3), "(q^3; q^6)^3")?;
            let cf = unit_cf(b, |bk, k| bk.qpow(k - 1) + bk.qpow(2 * k - 2));
            vec![value("product ratio", lhs), value("second product ratio", alt), cf_form(CF, cf)]
        }
        "V.32.22" => {
            let lhs = div(
                &(product(b, 1, 1, 8)? * product(b, 1, 7, 8)?),
                &(product(b, 1, 3, 8)? * product(b, 1, 5, 8)?),
                "(q^3, q^5; q^8)",
            )?;
            let cf = unit_cf(b, |bk, k| {
                let j = k / 2;
                if k % 2 == 0 {
                    bk.qpow(2 * j - 1) + bk.qpow(4 * j - 2)
                } else {
                    bk.qpow(4 * j)
                }
            });
            vec![value("product ratio", lhs), cf_form(CF, cf)]
        }
        "V.32.19" => {
            let lhs = div(&product(b, 1, 2, 3)?, &product(b, 1, 1, 3)?, "(q; q^3)")?;
            let cf = cfrac(b, b.zero(), None, |bk, k| {
                if k == 1 {
                    (bk.one(), bk.one())
                } else {
                    (-bk.qpow(2 * k - 3), bk.one() + bk.qpow(k - 1))
                }
            });
            vec![value("product ratio", lhs), cf_form(CF, cf)]
        }
        "III.16.2" => {
            let a = par(e, p, "a")?;
            let bb = par(e, p, "b")?;
            let sum = b.binomial_sum(&(&bb / &a), &a, Parity::All)?;
            let prod = div(&b.shifted_product(&bb, 0, 1)?, &b.shifted_product(&a, 0, 1)?, "(a; q)")?;
            vec![value("q-binomial sum", sum), value("product ratio", prod)]
        }
        "III.16.11" => {
            let a = par(e, p, "a")?;
            let bb = par(e, p, "b")?;
            let plus = b.shifted_product(&-a.clone(), 0, 1)? * b.shifted_product(&bb, 0, 1)?;
            let minus = b.shifted_product(&a, 0, 1)? * b.shifted_product(&-bb.clone(), 0, 1)?;
            let lhs = div(&(plus.clone() - minus.clone()), &(plus + minus), "product sum")?;
            let mut out = vec![value("product ratio", lhs)];
            if !a.is_zero() {
                let c = &bb / &a;
                let odd = b.binomial_sum(&c, &a, Parity::Odd)?;
                let even = b.binomial_sum(&c, &a, Parity::Even)?;
                out.push(value("odd/even q-binomial ratio", div(&odd, &even, "even terms")?));
            }
            let cf = cfrac(b, b.zero(), None, move |bk, k| {
                if k == 1 {
                    (bk.constant(&(&a - &bb)), bk.one() - bk.q())
                } else {
                    let t1 = bk.constant(&a) - bk.mono(&bb, k - 1);
                    let t2 = bk.mono(&a, k - 1) - bk.constant(&bb);
                    (bk.qpow(k - 2) * t1 * t2, bk.one() - bk.qpow(2 * k - 1))
                }
            });
            out.push(cf_form(CF, cf));
            out
        }
        "III.16.12" => {
            let a = par(e, p, "a")?;
            let bb = par(e, p, "b")?;
            let a2 = &a * &a;
            let b2 = &bb * &bb;
            let lhs = div(
                &(b.shifted_product(&a2, 3, 4)? * b.shifted_product(&b2, 3, 4)?),
                &(b.shifted_product(&a2, 1, 4)? * b.shifted_product(&b2, 1, 4)?),
                "(a^2 q, b^2 q; q^4)",
            )?;
            let mut out = vec![value("product ratio", lhs)];
            if numeric && !a.is_zero() {
                // the denominator sum involves (b/(aq))^2, a Laurent term in q
                let r2 = &b2 / &a2;
                let x1 = b.mono(&r2, 2);
                let x2 = div(&b.constant(&r2), &b.qpow(2), "q^2")?;
                let num = quartic_binomial_sum(b, &x1, &b.mono(&a2, 1))?;
                let den = quartic_binomial_sum(b, &x2, &b.mono(&a2, 3))?;
                out.push(value("ratio of q^4-binomial sums", div(&num, &den, "sum")?));
            }
            let ab = &a * &bb;
            let cf = cfrac(b, b.zero(), None, move |bk, k| {
                let head = bk.constant(&(Rational::one() - &ab));
                if k == 1 {
                    (bk.one(), head)
                } else {
                    let t1 = bk.constant(&a) - bk.mono(&bb, 2 * k - 3);
                    let t2 = bk.constant(&bb) - bk.mono(&a, 2 * k - 3);
                    (t1 * t2, head * (bk.one() + bk.qpow(2 * k - 2)))
                }
            });
            out.push(cf_form(CF, cf));
            out
        }
        other => {
            return Err(CorpusError::Unsupported(format!("no forms defined for {other}")));
        }
    };
    Ok(f)
}

/// `sum_k (x; q^4)_k / (q^4; q^4)_k z^k` for element-valued `x` and `z`.
fn quartic_binomial_sum<B: Backend>(b: &B, x: &B::Elem, z: &B::Elem) -> Result<B::Elem, CorpusError> {
    let mut t = b.one();
    sum_series(b, |k| {
        if k > 0 {
            let num = (b.one() - x.clone() * b.qpow(4 * (k - 1))) * z.clone();
            t = div(&(t.clone() * num), &(b.one() - b.qpow(4 * k)), "(q^4; q^4)_k")?;
        }
        Ok((t.clone(), k))
    })
}
