//! Catalog of continued-fraction identities.
//!
//! Every entry has a stable id, a parameter schema with sampling ranges and
//! domain constraints, the kinds of left-hand side it offers, and the backend
//! it is verified with. The forms themselves (sums, products, continued
//! fractions) are built in [`entries`] against a generic [`Backend`].

pub mod backend;
mod entries;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::LazyLock;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use backend::{
    Backend, BackendKind, CfValue, ExactBackend, FormalBackend, NumericBackend, Series,
};
pub use entries::{forms, Form, NamedForm};
pub(crate) use entries::{eisenstein_cf, eisenstein_denominator, g_recurrence_residual};

use crate::cfrac::CfError;
use crate::qseries::SeriesError;
use crate::scalar::{rational_to_string, ratio, Rational};
use crate::special::Variant;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CorpusError {
    #[error("unknown entry {0:?}")]
    UnknownEntry(String),
    #[error("{entry}: parameters violate constraint {constraint:?}")]
    DomainViolation { entry: String, constraint: String },
    #[error("{entry}: missing parameter {name:?}")]
    MissingParameter { entry: String, name: String },
    #[error("division by zero in {0}")]
    DivisionByZero(String),
    #[error("{0} did not converge within the term budget")]
    SumDiverged(String),
    #[error("{0}")]
    Unsupported(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Cf(#[from] CfError),
}

/// How the left-hand side of an entry is expressed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LhsKind {
    SeriesRatio,
    SingleSeries,
    ProductRatio,
    ClosedForm,
    CfEqualsCf,
    /// A functional recurrence or a convergent formula rather than a value.
    Recurrence,
}

impl fmt::Display for LhsKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LhsKind::SeriesRatio => "SERIES_RATIO",
            LhsKind::SingleSeries => "SINGLE_SERIES",
            LhsKind::ProductRatio => "PRODUCT_RATIO",
            LhsKind::ClosedForm => "CLOSED_FORM",
            LhsKind::CfEqualsCf => "CF_EQUALS_CF",
            LhsKind::Recurrence => "RECURRENCE",
        })
    }
}

impl fmt::Display for BackendKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BackendKind::Formal => "FORMAL",
            BackendKind::ExactFinite => "EXACT_FINITE",
            BackendKind::Numeric => "NUMERIC",
        })
    }
}

/// Verification route for an entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntryKind {
    /// All forms evaluate to the same value.
    Identity,
    /// A three-term functional recurrence for `g`.
    GRecurrence,
    /// Closed-form denominators of the Eisenstein fraction's convergents.
    EisensteinDenominators,
    /// A closed-form special value of the Rogers-Ramanujan fraction.
    Special(Variant),
}

/// A free parameter and the rational range it is sampled from.
#[derive(Debug, Clone)]
pub struct ParamSpec {
    pub name: &'static str,
    pub lo: Rational,
    pub hi: Rational,
    pub nonzero: bool,
}

fn param(name: &'static str, lo: (i64, i64), hi: (i64, i64)) -> ParamSpec {
    ParamSpec {
        name,
        lo: ratio(lo.0, lo.1),
        hi: ratio(hi.0, hi.1),
        nonzero: false,
    }
}

fn nonzero(mut p: ParamSpec) -> ParamSpec {
    p.nonzero = true;
    p
}

/// Numeric base `0 < q <= 1/2`.
fn q_numeric() -> ParamSpec {
    nonzero(param("q", (0, 1), (1, 2)))
}

/// A named predicate on parameter points.
#[derive(Clone, Copy)]
pub struct Constraint {
    pub description: &'static str,
    pub check: fn(&ParamPoint) -> bool,
}

impl fmt::Debug for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.description)
    }
}

#[derive(Debug, Clone)]
pub struct EntryDescriptor {
    pub id: &'static str,
    pub title: &'static str,
    pub params: Vec<ParamSpec>,
    /// Hard domain constraints, checked whenever forms are built.
    pub constraints: Vec<Constraint>,
    /// Extra restriction applied only when sampling.
    pub sample_region: Option<Constraint>,
    pub lhs_kinds: Vec<LhsKind>,
    pub backend: BackendKind,
    pub kind: EntryKind,
    /// Formal truncation order used by default.
    pub default_order: usize,
}

impl EntryDescriptor {
    pub fn has_params(&self) -> bool {
        !self.params.is_empty()
    }

    /// Checks the hard constraints and that every parameter is bound.
    pub fn check_domain(&self, p: &ParamPoint) -> Result<(), CorpusError> {
        for spec in &self.params {
            let Some(v) = p.get(spec.name) else {
                return Err(CorpusError::MissingParameter {
                    entry: self.id.to_string(),
                    name: spec.name.to_string(),
                });
            };
            if spec.nonzero && v.is_zero() {
                return Err(CorpusError::DomainViolation {
                    entry: self.id.to_string(),
                    constraint: format!("{} != 0", spec.name),
                });
            }
        }
        for c in &self.constraints {
            if !(c.check)(p) {
                return Err(CorpusError::DomainViolation {
                    entry: self.id.to_string(),
                    constraint: c.description.to_string(),
                });
            }
        }
        Ok(())
    }
}

/// Parameter values bound to names; a numeric `q` is stored as `"q"`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParamPoint {
    values: BTreeMap<String, Rational>,
}

impl ParamPoint {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, value: Rational) -> Self {
        self.values.insert(name.to_string(), value);
        self
    }

    pub fn set(&mut self, name: &str, value: Rational) {
        self.values.insert(name.to_string(), value);
    }

    pub fn get(&self, name: &str) -> Option<&Rational> {
        self.values.get(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Rational)> {
        self.values.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `name -> "num/den"` pairs in name order.
    pub fn to_strings(&self) -> BTreeMap<String, String> {
        self.iter()
            .map(|(k, v)| (k.to_string(), rational_to_string(v)))
            .collect()
    }
}

impl fmt::Display for ParamPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|(k, v)| format!("{k}={v}")).collect();
        f.write_str(&parts.join(", "))
    }
}

fn get(p: &ParamPoint, name: &str) -> Rational {
    p.get(name).cloned().unwrap_or_default()
}

fn abs_lt_one(p: &ParamPoint, name: &str) -> bool {
    get(p, name).abs() < ratio(1, 1)
}

fn q_in_unit_interval(p: &ParamPoint) -> bool {
    let q = get(p, "q");
    q.is_positive() && q < ratio(1, 1)
}

const Q_UNIT: Constraint = Constraint {
    description: "0 < q < 1",
    check: q_in_unit_interval,
};

const Q_NONZERO: Constraint = Constraint {
    description: "q != 0",
    check: |p| !get(p, "q").is_zero(),
};

struct Builder {
    id: &'static str,
    title: &'static str,
    params: Vec<ParamSpec>,
    constraints: Vec<Constraint>,
    sample_region: Option<Constraint>,
    lhs: Vec<LhsKind>,
    backend: BackendKind,
    kind: EntryKind,
    order: usize,
}

impl Builder {
    fn new(id: &'static str, title: &'static str, backend: BackendKind) -> Self {
        Self {
            id,
            title,
            params: Vec::new(),
            constraints: Vec::new(),
            sample_region: None,
            lhs: Vec::new(),
            backend,
            kind: EntryKind::Identity,
            order: 30,
        }
    }
    fn params(mut self, p: Vec<ParamSpec>) -> Self {
        self.params = p;
        self
    }
    fn constraint(mut self, c: Constraint) -> Self {
        self.constraints.push(c);
        self
    }
    fn region(mut self, c: Constraint) -> Self {
        self.sample_region = Some(c);
        self
    }
    fn lhs(mut self, l: &[LhsKind]) -> Self {
        self.lhs = l.to_vec();
        self
    }
    fn kind(mut self, k: EntryKind) -> Self {
        self.kind = k;
        self
    }
    fn order(mut self, n: usize) -> Self {
        self.order = n;
        self
    }
    fn build(self) -> EntryDescriptor {
        EntryDescriptor {
            id: self.id,
            title: self.title,
            params: self.params,
            constraints: self.constraints,
            sample_region: self.sample_region,
            lhs_kinds: self.lhs,
            backend: self.backend,
            kind: self.kind,
            default_order: self.order,
        }
    }
}

fn catalog() -> Vec<EntryDescriptor> {
    use BackendKind::*;
    use LhsKind::*;
    let wide = |n| param(n, (-2, 1), (2, 1));
    vec![
        Builder::new("III.16.38.RR", "Rogers-Ramanujan continued fraction", Formal)
            .lhs(&[SeriesRatio, ProductRatio])
            .order(40)
            .build(),
        Builder::new("III.16.39.cor.ii", "Rogers-Ramanujan fraction at q = exp(-2 pi)", Numeric)
            .lhs(&[ClosedForm])
            .kind(EntryKind::Special(Variant::Plus))
            .build(),
        Builder::new(
            "III.16.39.cor.i",
            "Alternating Rogers-Ramanujan fraction at q = exp(-pi)",
            Numeric,
        )
        .lhs(&[ClosedForm])
        .kind(EntryKind::Special(Variant::Minus))
        .build(),
        Builder::new("L.I.6.3.1.i", "g(b, lq)/g(b, l), alternating numerators", Formal)
            .params(vec![wide("b"), wide("lambda")])
            .lhs(&[SeriesRatio])
            .build(),
        Builder::new("L.I.6.3.1.ii", "g(b, lq)/g(b, l), denominators 1 + b q^k", Formal)
            .params(vec![wide("b"), wide("lambda")])
            .lhs(&[SeriesRatio])
            .build(),
        Builder::new("L.I.6.3.1.iii", "g(b, lq)/g(b, l), constant denominators 1 - b", Numeric)
            .params(vec![param("b", (-3, 4), (3, 4)), wide("lambda"), q_numeric()])
            .constraint(Constraint {
                description: "|b| < 1",
                check: |p| abs_lt_one(p, "b"),
            })
            .constraint(Q_UNIT)
            .lhs(&[SeriesRatio])
            .build(),
        Builder::new("L.I.6.3.1.iv", "Three-term recurrence for g(b, l)", Formal)
            .params(vec![wide("b"), wide("lambda")])
            .lhs(&[Recurrence])
            .kind(EntryKind::GRecurrence)
            .order(25)
            .build(),
        Builder::new("III.16.15.cor", "Ratio of the l-deformed Rogers-Ramanujan series", Formal)
            .params(vec![wide("lambda")])
            .lhs(&[SeriesRatio])
            .build(),
        Builder::new("III.16.16", "Finite convergents as a ratio of q-binomial sums", ExactFinite)
            .params(vec![
                nonzero(param("lambda", (0, 1), (2, 1))),
                nonzero(param("q", (0, 1), (3, 2))),
            ])
            .constraint(Q_NONZERO)
            .lhs(&[SeriesRatio])
            .build(),
        Builder::new("III.16.13", "Eisenstein continued fraction", Formal)
            .params(vec![wide("a")])
            .lhs(&[SingleSeries])
            .build(),
        Builder::new(
            "III.16.13.D",
            "Convergent denominators of the Eisenstein fraction",
            Formal,
        )
        .params(vec![wide("a")])
        .lhs(&[Recurrence])
        .kind(EntryKind::EisensteinDenominators)
        .build(),
        Builder::new("L.I.6.2.1", "G(aq, b, lq)/G(a, b, l), alternating numerators", Formal)
            .params(vec![wide("a"), wide("b"), wide("lambda")])
            .lhs(&[SeriesRatio])
            .build(),
        Builder::new("L.I.6.4.1", "G(aq, b, lq)/G(a, b, l), quadratic numerators", Formal)
            .params(vec![wide("a"), wide("b"), wide("lambda")])
            .lhs(&[SeriesRatio])
            .build(),
        Builder::new("T.6.4.1", "G(aq, b, lq)/G(a, b, l), numerators aq + l q^k", Numeric)
            .params(vec![
                param("a", (-1, 1), (1, 1)),
                param("b", (-1, 2), (1, 2)),
                wide("lambda"),
                q_numeric(),
            ])
            .constraint(Constraint {
                description: "|a q| < 1",
                check: |p| (get(p, "a") * get(p, "q")).abs() < ratio(1, 1),
            })
            .constraint(Q_UNIT)
            .lhs(&[SeriesRatio])
            .build(),
        Builder::new("L.I.6.2.3", "G(a, b, 0)/G(aq, b, 0)", Formal)
            .params(vec![wide("a"), wide("b")])
            .lhs(&[SeriesRatio])
            .build(),
        Builder::new("L.I.6.2.1.cor9", "Theta-type series with numerators q^{2k} - q^k", Formal)
            .lhs(&[SingleSeries])
            .build(),
        Builder::new("L.I.6.2.1.cor11", "Pentagonal-type series with numerators q^k + q^{2k-1}", Formal)
            .lhs(&[SingleSeries])
            .build(),
        Builder::new("L.I.6.5.1", "Transformation with alpha beta = k, alpha - beta = 1", Numeric)
            .params(vec![param("k", (0, 1), (8, 1)), q_numeric()])
            .constraint(Constraint {
                description: "k >= 0",
                check: |p| !get(p, "k").is_negative(),
            })
            .constraint(Q_UNIT)
            .lhs(&[CfEqualsCf])
            .build(),
        Builder::new("L.I.6.5.2", "Transformation, case k = 2", Numeric)
            .params(vec![q_numeric()])
            .constraint(Q_UNIT)
            .lhs(&[CfEqualsCf])
            .build(),
        Builder::new("L.I.6.4.2", "Transformation with constant numerators -ab and bc", Numeric)
            .params(vec![
                nonzero(param("a", (0, 1), (2, 1))),
                nonzero(param("b", (0, 1), (2, 1))),
                nonzero(param("c", (0, 1), (2, 1))),
                q_numeric(),
            ])
            .constraint(Q_UNIT)
            .region(Constraint {
                description: "0 < b < a",
                check: |p| get(p, "b") < get(p, "a"),
            })
            .lhs(&[CfEqualsCf])
            .build(),
        Builder::new("L.I.6.4.3", "Finite odd-part transformation", ExactFinite)
            .params(vec![
                nonzero(param("a", (0, 1), (2, 1))),
                nonzero(param("b", (0, 1), (2, 1))),
                nonzero(param("q", (0, 1), (2, 1))),
            ])
            .constraint(Q_NONZERO)
            .lhs(&[CfEqualsCf])
            .build(),
        Builder::new("L.I.6.2.1.cor2", "(-aq^2; q^2)/(-aq; q^2)", Formal)
            .params(vec![wide("a")])
            .lhs(&[ProductRatio])
            .order(40)
            .build(),
        Builder::new("V.32.21", "(-q^2; q^2)/(-q; q^2)", Formal)
            .lhs(&[ProductRatio])
            .order(40)
            .build(),
        Builder::new("L.I.6.2.1.cor10", "(-q^3; q^4)/(-q; q^4)", Formal)
            .lhs(&[ProductRatio])
            .order(40)
            .build(),
        Builder::new("V.32.20", "(q^3; q^4)/(q; q^4)", Formal)
            .lhs(&[ProductRatio])
            .order(40)
            .build(),
        Builder::new("V.32.18", "Cubic continued fraction", Formal)
            .lhs(&[ProductRatio])
            .order(40)
            .build(),
        Builder::new("V.32.22", "Ramanujan-Gollnitz-Gordon continued fraction", Formal)
            .lhs(&[ProductRatio])
            .order(40)
            .build(),
        Builder::new("V.32.19", "(q^2; q^3)/(q; q^3)", Formal)
            .lhs(&[ProductRatio])
            .order(40)
            .build(),
        Builder::new("III.16.2", "q-binomial theorem", Formal)
            .params(vec![
                nonzero(param("a", (-1, 2), (1, 2))),
                param("b", (-1, 2), (1, 2)),
            ])
            .constraint(Constraint {
                description: "|a| < 1",
                check: |p| abs_lt_one(p, "a"),
            })
            .lhs(&[SeriesRatio, ProductRatio])
            .order(20)
            .build(),
        Builder::new("III.16.11", "Odd over even q-binomial terms", Numeric)
            .params(vec![
                param("a", (-1, 2), (1, 2)),
                param("b", (-1, 2), (1, 2)),
                q_numeric(),
            ])
            .constraint(Constraint {
                description: "|a| < 1",
                check: |p| abs_lt_one(p, "a"),
            })
            .constraint(Q_UNIT)
            .lhs(&[ProductRatio, SeriesRatio])
            .order(25)
            .build(),
        Builder::new("III.16.12", "Products to base q^4 with (1 - ab) denominators", Numeric)
            .params(vec![
                nonzero(param("a", (-3, 4), (3, 4))),
                param("b", (-3, 4), (3, 4)),
                q_numeric(),
            ])
            .constraint(Constraint {
                description: "|ab| < 1",
                check: |p| (get(p, "a") * get(p, "b")).abs() < ratio(1, 1),
            })
            .constraint(Q_UNIT)
            .lhs(&[ProductRatio, SeriesRatio])
            .build(),
    ]
}

static CATALOG: LazyLock<Vec<EntryDescriptor>> = LazyLock::new(catalog);

/// Every entry, in catalog order.
pub fn entries() -> &'static [EntryDescriptor] {
    &CATALOG
}

pub fn get_entry(id: &str) -> Result<&'static EntryDescriptor, CorpusError> {
    CATALOG
        .iter()
        .find(|e| e.id == id)
        .ok_or_else(|| CorpusError::UnknownEntry(id.to_string()))
}

/// Largest denominator used when sampling rationals.
pub const MAX_DENOMINATOR: i64 = 16;

/// `count` seeded parameter points satisfying every constraint. Entries
/// without parameters yield a single empty point.
pub fn sample_params(e: &EntryDescriptor, count: usize, seed: u64) -> Vec<ParamPoint> {
    if e.params.is_empty() {
        return vec![ParamPoint::new()];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ fxhash(e.id));
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0usize;
    while out.len() < count {
        attempts += 1;
        assert!(attempts < 100_000, "{}: sampling region is empty", e.id);
        let mut p = ParamPoint::new();
        for spec in &e.params {
            p.set(spec.name, sample_rational(&mut rng, spec));
        }
        let region_ok = e.sample_region.is_none_or(|c| (c.check)(&p));
        if region_ok && e.check_domain(&p).is_ok() && !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

fn sample_rational(rng: &mut ChaCha8Rng, spec: &ParamSpec) -> Rational {
    loop {
        let d = rng.gen_range(1..=MAX_DENOMINATOR);
        let dd = Rational::from_integer(BigInt::from(d));
        let lo = (&spec.lo * &dd).ceil().to_integer();
        let hi = (&spec.hi * &dd).floor().to_integer();
        let (Ok(lo), Ok(hi)) = (i64::try_from(lo), i64::try_from(hi)) else {
            continue;
        };
        if lo > hi {
            continue;
        }
        let n = rng.gen_range(lo..=hi);
        let r = ratio(n, d);
        // zero is a degenerate specialisation, so it is never drawn
        if r.is_zero() {
            continue;
        }
        // open lower bound for strictly positive ranges
        if spec.nonzero && spec.lo.is_zero() && !r.is_positive() {
            continue;
        }
        return r;
    }
}

/// Stable string hash so each entry draws an independent stream.
fn fxhash(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3)
    })
}
