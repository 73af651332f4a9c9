//! Verification engine: checks catalog entries under their backends and
//! produces structured reports.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use num_traits::Zero;
use rayon::prelude::*;
use regex::Regex;
use serde::Serialize;

use crate::cfrac::{CFrac, CfError};
use crate::corpus::{
    forms, sample_params, Backend, BackendKind, CorpusError, EntryDescriptor, EntryKind,
    ExactBackend, Form, FormalBackend, NamedForm, NumericBackend, ParamPoint, Series,
};
use crate::hpreal::HpReal;
use crate::scalar::{rat, rational_to_string, Rational};
use crate::special::{rr_cf_numeric, rr_closed_form};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Inconclusive => "INCONCLUSIVE",
        })
    }
}

/// Outcome of checking one entry at one parameter point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub entry: String,
    pub backend: &'static str,
    pub params: BTreeMap<String, String>,
    pub order: Option<usize>,
    pub precision_bits: Option<usize>,
    pub tol: Option<String>,
    pub status: Status,
    pub first_diff_power: Option<usize>,
    pub delta: Option<String>,
    pub ms: u64,
    /// Deepest continued-fraction evaluation used by a numeric check.
    #[serde(skip)]
    pub depth: Option<usize>,
    /// Human-readable diagnostics.
    #[serde(skip)]
    pub note: Option<String>,
    /// Set when an exact check hit a zero denominator at this sample.
    #[serde(skip)]
    pub degenerate: bool,
}

impl VerificationReport {
    fn new(e: &EntryDescriptor, backend: BackendKind, p: &ParamPoint) -> Self {
        Self {
            entry: e.id.to_string(),
            backend: backend.tag(),
            params: p.to_strings(),
            order: None,
            precision_bits: None,
            tol: None,
            status: Status::Pass,
            first_diff_power: None,
            delta: None,
            ms: 0,
            depth: None,
            note: None,
            degenerate: false,
        }
    }

    fn fail(mut self, note: impl Into<String>) -> Self {
        self.status = Status::Fail;
        self.note = Some(note.into());
        self
    }

    fn timed(mut self, start: Instant) -> Self {
        self.ms = start.elapsed().as_millis() as u64;
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// One line for terminal output.
    pub fn human_line(&self) -> String {
        let params: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let mut line = format!("{:<12} {:<18} {}", self.status.to_string(), self.entry, self.backend);
        if let Some(n) = self.order {
            line.push_str(&format!(" order={n}"));
        }
        if let Some(b) = self.precision_bits {
            line.push_str(&format!(" prec={b}"));
        }
        if let Some(d) = self.depth {
            line.push_str(&format!(" depth={d}"));
        }
        if !params.is_empty() {
            line.push_str(&format!(" [{}]", params.join(", ")));
        }
        if let Some(p) = self.first_diff_power {
            line.push_str(&format!(" first difference at q^{p}"));
        }
        if let Some(d) = &self.delta {
            line.push_str(&format!(" delta={d}"));
        }
        if let Some(n) = &self.note {
            line.push_str(&format!(" ({n})"));
        }
        line.push_str(&format!(" {}ms", self.ms));
        line
    }
}

fn value_forms<E>(fs: &[NamedForm<E>]) -> Vec<&NamedForm<E>> {
    fs.iter().filter(|f| matches!(f.form, Form::Value(_))).collect()
}

/// Evaluates every form, turning fractions into values through the backend.
fn evaluate<B: Backend>(
    b: &B,
    fs: Vec<NamedForm<B::Elem>>,
) -> Result<(Vec<(&'static str, B::Elem)>, Option<usize>), CfError> {
    let mut depth = None;
    let mut out = Vec::with_capacity(fs.len());
    for f in fs {
        let v = match f.form {
            Form::Value(v) => v,
            Form::Cf(cf) => {
                let r = b.eval_cf(&cf)?;
                depth = depth.max(r.depth);
                r.value
            }
        };
        out.push((f.name, v));
    }
    Ok((out, depth))
}

/// Coefficient-exact comparison of every form of `e` through `q^order`.
pub fn verify_formal(e: &EntryDescriptor, p: &ParamPoint, order: usize) -> VerificationReport {
    verify_formal_with(e, p, order, &|cf| cf)
}

/// [`verify_formal`] with `edit` applied to each continued fraction first;
/// used to plant deliberate errors.
pub fn verify_formal_with(
    e: &EntryDescriptor,
    p: &ParamPoint,
    order: usize,
    edit: &dyn Fn(CFrac<Series>) -> CFrac<Series>,
) -> VerificationReport {
    let start = Instant::now();
    let mut r = VerificationReport::new(e, BackendKind::Formal, p);
    r.order = Some(order);
    let b = FormalBackend::new(order);
    let fs = match forms(e, p, &b) {
        Ok(fs) => fs,
        Err(err) => return r.fail(err.to_string()).timed(start),
    };
    let fs = fs
        .into_iter()
        .map(|f| NamedForm {
            name: f.name,
            form: match f.form {
                Form::Cf(cf) => Form::Cf(edit(cf)),
                v => v,
            },
        })
        .collect();
    match evaluate(&b, fs) {
        Ok((vals, _)) => compare_series(r, &vals).timed(start),
        Err(err) => r.fail(err.to_string()).timed(start),
    }
}

/// Agreement of the value forms only (continued fractions skipped), as
/// truncated series; used for alternative left-hand sides of numeric entries.
pub fn verify_alternative_forms(e: &EntryDescriptor, p: &ParamPoint, order: usize) -> VerificationReport {
    let start = Instant::now();
    let mut point = p.clone();
    let mut stripped = ParamPoint::new();
    for (k, v) in point.iter() {
        if k != "q" {
            stripped.set(k, v.clone());
        }
    }
    let mut r = VerificationReport::new(e, BackendKind::Formal, &stripped);
    r.order = Some(order);
    point.set("q", Rational::new(1.into(), 2.into()));
    let b = FormalBackend::new(order);
    let fs = match forms(e, &point, &b) {
        Ok(fs) => fs,
        Err(err) => return r.fail(err.to_string()).timed(start),
    };
    let vals: Vec<(&'static str, Series)> = value_forms(&fs)
        .into_iter()
        .map(|f| match &f.form {
            Form::Value(v) => (f.name, v.clone()),
            Form::Cf(_) => unreachable!(),
        })
        .collect();
    if vals.len() < 2 {
        r.note = Some("single value form at this point".into());
    }
    compare_series(r, &vals).timed(start)
}

fn compare_series(mut r: VerificationReport, vals: &[(&'static str, Series)]) -> VerificationReport {
    let Some((lhs_name, lhs)) = vals.first() else {
        return r.fail("no forms");
    };
    let mut worst: Option<(usize, &str)> = None;
    for (name, v) in &vals[1..] {
        if let Some(j) = lhs.first_difference(v) {
            if worst.is_none_or(|(w, _)| j < w) {
                worst = Some((j, name));
                let d = lhs.coeffs()[j].clone() - v.coeffs()[j].clone();
                r.delta = Some(rational_to_string(&d));
            }
        }
    }
    if let Some((j, name)) = worst {
        r.first_diff_power = Some(j);
        r = r.fail(format!("{lhs_name} and {name} differ"));
    }
    r
}

/// Exact rational comparison of a finite identity; `p` must bind `n` and `q`.
pub fn verify_exact_finite(e: &EntryDescriptor, p: &ParamPoint) -> VerificationReport {
    let start = Instant::now();
    let mut r = VerificationReport::new(e, BackendKind::ExactFinite, p);
    r.order = p.get("n").and_then(|n| n.to_integer().try_into().ok());
    let Some(q) = p.get("q").cloned() else {
        return r.fail("missing parameter q").timed(start);
    };
    let b = ExactBackend { q };
    let degenerate = |mut r: VerificationReport, msg: String| {
        r.degenerate = true;
        r.fail(format!("degenerate sample: {msg}"))
    };
    let fs = match forms(e, p, &b) {
        Ok(fs) => fs,
        Err(err @ CorpusError::DivisionByZero(_)) => return degenerate(r, err.to_string()).timed(start),
        Err(err) => return r.fail(err.to_string()).timed(start),
    };
    let vals = match evaluate(&b, fs) {
        Ok((vals, _)) => vals,
        Err(err @ CfError::DivisionByZero { .. }) => return degenerate(r, err.to_string()).timed(start),
        Err(err) => return r.fail(err.to_string()).timed(start),
    };
    let (lhs_name, lhs) = &vals[0];
    for (name, v) in &vals[1..] {
        let d = lhs - v;
        if !d.is_zero() {
            r.delta = Some(rational_to_string(&d));
            r = r.fail(format!("{lhs_name} and {name} differ"));
            break;
        }
    }
    r.timed(start)
}

/// Tolerance used for continued-fraction convergence inside a numeric check.
fn internal_tol(tol: &HpReal) -> HpReal {
    tol.clone() * HpReal::epsilon_bits(40, tol.precision())
}

fn parse_tol(tol: &str, prec: usize) -> Option<HpReal> {
    HpReal::parse(tol, prec).filter(|t| !t.is_negative() && !t.is_zero())
}

/// High-precision comparison at the numeric `q` bound in `p`.
pub fn verify_numeric(e: &EntryDescriptor, p: &ParamPoint, prec: usize, tol: &str) -> VerificationReport {
    let start = Instant::now();
    let mut r = VerificationReport::new(e, BackendKind::Numeric, p);
    r.precision_bits = Some(prec);
    r.tol = Some(tol.to_string());
    let Some(tol_v) = parse_tol(tol, prec) else {
        return r.fail(format!("invalid tolerance {tol:?}")).timed(start);
    };
    let vals = match numeric_values(e, p, prec, &tol_v) {
        Ok((vals, depth)) => {
            r.depth = depth;
            vals
        }
        Err(NumericError::NoConvergence(err)) => {
            r.status = Status::Inconclusive;
            r.note = Some(err.to_string());
            return r.timed(start);
        }
        Err(NumericError::Other(msg)) => return r.fail(msg).timed(start),
    };
    let (lhs_name, lhs) = &vals[0];
    let mut worst = HpReal::zero(prec);
    let mut worst_name = "";
    for (name, v) in &vals[1..] {
        let d = (lhs.clone() - v.clone()).abs();
        if d > worst || worst_name.is_empty() {
            worst = d;
            worst_name = name;
        }
    }
    r.delta = Some(worst.to_sci_string(6));
    if !(worst < tol_v) {
        r = r.fail(format!("{lhs_name} and {worst_name} differ"));
    }
    r.timed(start)
}

/// Failure modes of a numeric evaluation.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NumericError {
    #[error(transparent)]
    NoConvergence(CfError),
    #[error("{0}")]
    Other(String),
}

impl From<CorpusError> for NumericError {
    fn from(e: CorpusError) -> Self {
        match e {
            CorpusError::Cf(c @ CfError::NoNumericConvergence { .. }) => NumericError::NoConvergence(c),
            other => NumericError::Other(other.to_string()),
        }
    }
}

impl From<CfError> for NumericError {
    fn from(e: CfError) -> Self {
        CorpusError::Cf(e).into()
    }
}

/// Named high-precision values of every form of a numeric entry, plus the
/// deepest continued-fraction depth used.
pub fn numeric_values(
    e: &EntryDescriptor,
    p: &ParamPoint,
    prec: usize,
    tol: &HpReal,
) -> Result<(Vec<(&'static str, HpReal)>, Option<usize>), NumericError> {
    let cf_tol = internal_tol(tol);
    if let EntryKind::Special(variant) = e.kind {
        let cf = rr_cf_numeric(variant, prec, &cf_tol)?;
        return Ok((
            vec![("closed form", rr_closed_form(variant, prec)), ("continued fraction", cf.value)],
            Some(cf.depth),
        ));
    }
    let q = p
        .get("q")
        .ok_or_else(|| NumericError::Other(format!("{}: missing parameter \"q\"", e.id)))?;
    let b = NumericBackend::from_rational(q, prec, cf_tol);
    let fs = forms(e, p, &b)?;
    Ok(evaluate(&b, fs)?)
}

/// Checks the recurrence-type entries through `q^order`.
pub fn verify_recurrence(e: &EntryDescriptor, p: &ParamPoint, order: usize) -> VerificationReport {
    let start = Instant::now();
    let mut r = VerificationReport::new(e, BackendKind::Formal, p);
    r.order = Some(order);
    let res = match e.kind {
        EntryKind::GRecurrence => g_recurrence(e, p, order),
        EntryKind::EisensteinDenominators => eisenstein_denominators(e, p, order),
        _ => Err(format!("{} is not a recurrence entry", e.id)),
    };
    match res {
        Ok(None) => r,
        Ok(Some((j, delta, what))) => {
            r.first_diff_power = Some(j);
            r.delta = Some(rational_to_string(&delta));
            r.fail(what)
        }
        Err(msg) => r.fail(msg),
    }
    .timed(start)
}

type Mismatch = Option<(usize, Rational, String)>;

fn g_recurrence(e: &EntryDescriptor, p: &ParamPoint, order: usize) -> Result<Mismatch, String> {
    e.check_domain(p).map_err(|err| err.to_string())?;
    let b = FormalBackend::new(order);
    let get = |n: &str| p.get(n).cloned().ok_or_else(|| format!("missing parameter {n:?}"));
    let res = crate::corpus::g_recurrence_residual(&b, &get("b")?, &get("lambda")?)
        .map_err(|err| err.to_string())?;
    Ok(res
        .valuation()
        .finite()
        .map(|j| (j, res.coeffs()[j].clone(), "recurrence residual is nonzero".to_string())))
}

/// Largest `n` for which the closed-form denominators are compared.
pub const EISENSTEIN_MAX_N: usize = 8;

fn eisenstein_denominators(e: &EntryDescriptor, p: &ParamPoint, order: usize) -> Result<Mismatch, String> {
    e.check_domain(p).map_err(|err| err.to_string())?;
    let a = p.get("a").cloned().ok_or("missing parameter \"a\"")?;
    // exact polynomials: degrees stay below (n + 1)^2
    let order = order.max((EISENSTEIN_MAX_N + 2) * (EISENSTEIN_MAX_N + 2));
    let b = FormalBackend::new(order);
    let cf = crate::corpus::eisenstein_cf(&b, &a);
    let conv = cf
        .convergents(2 * EISENSTEIN_MAX_N + 1)
        .map_err(|err| err.to_string())?;
    for k in 1..=2 * EISENSTEIN_MAX_N + 1 {
        let n = k / 2;
        let odd = k % 2 == 1;
        let d = crate::corpus::eisenstein_denominator(&b, &a, n, odd);
        let qk = &conv[k - 1].q;
        if let Some(j) = qk.first_difference(&d) {
            let delta = qk.coeffs()[j].clone() - d.coeffs()[j].clone();
            return Ok(Some((j, delta, format!("Q_{k} differs from the closed form"))));
        }
    }
    Ok(None)
}

/// Suite settings; `order = None` uses each entry's default order.
#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub order: Option<usize>,
    pub samples: usize,
    pub prec: usize,
    pub tol: String,
    /// Exact entries are checked for `n = 1 ..= n_max`.
    pub n_max: usize,
    /// Worker threads; 0 lets rayon decide.
    pub threads: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            order: None,
            samples: 5,
            prec: 256,
            tol: "1e-40".into(),
            n_max: 10,
            threads: 0,
        }
    }
}

/// Order at which the odd/even split of a numeric entry is compared formally.
pub const ALT_FORM_ORDER: usize = 25;

/// Compiles a glob (`*`, `?`) into an anchored regex.
pub fn glob_regex(pattern: &str) -> Regex {
    let mut re = String::from("^");
    for ch in pattern.chars() {
        match ch {
            '*' => re.push_str(".*"),
            '?' => re.push('.'),
            c => re.push_str(&regex::escape(&c.to_string())),
        }
    }
    re.push('$');
    Regex::new(&re).expect("escaped glob is a valid regex")
}

/// Catalog entries whose id matches `filter`, sorted by id.
pub fn select_entries(filter: Option<&str>) -> Vec<&'static EntryDescriptor> {
    let re = filter.map(glob_regex);
    let mut out: Vec<_> = crate::corpus::entries()
        .iter()
        .filter(|e| re.as_ref().is_none_or(|r| r.is_match(e.id)))
        .collect();
    out.sort_by_key(|e| e.id);
    out
}

/// All reports for one entry under `cfg`, in parameter order.
pub fn verify_entry(e: &EntryDescriptor, seed: u64, cfg: &SuiteConfig) -> Vec<VerificationReport> {
    let order = cfg.order.unwrap_or(e.default_order);
    match (e.kind, e.backend) {
        (EntryKind::GRecurrence | EntryKind::EisensteinDenominators, _) => sample_params(e, cfg.samples, seed)
            .iter()
            .map(|p| verify_recurrence(e, p, order))
            .collect(),
        (EntryKind::Special(_), _) => vec![verify_numeric(e, &ParamPoint::new(), cfg.prec, &cfg.tol)],
        (_, BackendKind::Formal) => sample_params(e, cfg.samples, seed)
            .iter()
            .map(|p| verify_formal(e, p, order))
            .collect(),
        (_, BackendKind::Numeric) => {
            let mut out = Vec::new();
            for p in sample_params(e, cfg.samples, seed) {
                out.push(verify_numeric(e, &p, cfg.prec, &cfg.tol));
                if e.id == "III.16.11" {
                    out.push(verify_alternative_forms(e, &p, ALT_FORM_ORDER));
                }
            }
            out
        }
        (_, BackendKind::ExactFinite) => verify_exact_sampled(e, seed, cfg),
    }
}

/// Exact checks for `n = 1 ..= n_max` at `cfg.samples` points; points with a
/// zero denominator are replaced by fresh samples.
fn verify_exact_sampled(e: &EntryDescriptor, seed: u64, cfg: &SuiteConfig) -> Vec<VerificationReport> {
    let mut out = Vec::new();
    let mut kept = 0;
    for p in sample_params(e, cfg.samples * 4, seed) {
        if kept == cfg.samples {
            break;
        }
        let reports: Vec<_> = (1..=cfg.n_max)
            .map(|n| verify_exact_finite(e, &p.clone().with("n", rat(n as i64))))
            .collect();
        if reports.iter().any(|r| r.degenerate) {
            continue;
        }
        kept += 1;
        out.extend(reports);
    }
    out
}

/// Runs every entry matching `filter` (a glob over ids, `None` for all).
/// Reports are ordered by entry id, then by parameter index.
pub fn run_suite(filter: Option<&str>, seed: u64, cfg: &SuiteConfig) -> Vec<VerificationReport> {
    let selected = select_entries(filter);
    let run = || {
        selected
            .par_iter()
            .map(|e| verify_entry(e, seed, cfg))
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect()
    };
    match rayon::ThreadPoolBuilder::new().num_threads(cfg.threads).build() {
        Ok(pool) => pool.install(run),
        Err(_) => run(),
    }
}

/// Counts by status.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub inconclusive: usize,
}

impl Summary {
    pub fn of(reports: &[VerificationReport]) -> Self {
        let mut s = Self::default();
        for r in reports {
            match r.status {
                Status::Pass => s.pass += 1,
                Status::Fail => s.fail += 1,
                Status::Inconclusive => s.inconclusive += 1,
            }
        }
        s
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} passed, {} failed, {} inconclusive", self.pass, self.fail, self.inconclusive)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::get_entry;
    use crate::scalar::ratio;

    #[test]
    fn glob_semantics() {
        let ids: Vec<_> = select_entries(Some("L.I.6.5.*")).iter().map(|e| e.id).collect();
        assert_eq!(ids, ["L.I.6.5.1", "L.I.6.5.2"]);
        assert!(select_entries(Some("nothing*here")).is_empty());
        assert!(glob_regex("III.16.1?").is_match("III.16.13"));
        assert!(!glob_regex("III.16.1?").is_match("III.16.13.D"));
    }

    #[test]
    fn formal_g_ii() {
        let e = get_entry("L.I.6.3.1.ii").unwrap();
        let p = ParamPoint::new().with("b", ratio(1, 2)).with("lambda", ratio(1, 3));
        let r = verify_formal(e, &p, 30);
        assert!(r.passed(), "{}", r.human_line());
    }

    #[test]
    fn exact_instances() {
        let e = get_entry("III.16.16").unwrap();
        let p = ParamPoint::new()
            .with("lambda", rat(1))
            .with("q", ratio(1, 3))
            .with("n", rat(2));
        assert!(verify_exact_finite(e, &p).passed());
        let e = get_entry("L.I.6.4.3").unwrap();
        let p = ParamPoint::new()
            .with("a", rat(1))
            .with("b", rat(1))
            .with("q", rat(1))
            .with("n", rat(1));
        assert!(verify_exact_finite(e, &p).passed());
    }

    #[test]
    fn report_json_shape() {
        let e = get_entry("V.32.19").unwrap();
        let r = verify_formal(e, &ParamPoint::new(), 10);
        let v = serde_json::to_value(&r).unwrap();
        let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        let mut expected = vec![
            "backend", "delta", "entry", "first_diff_power", "ms", "order", "params",
            "precision_bits", "status", "tol",
        ];
        expected.sort();
        assert_eq!(keys, expected);
        assert_eq!(v["status"], "pass");
        assert_eq!(v["backend"], "formal");
    }
}
