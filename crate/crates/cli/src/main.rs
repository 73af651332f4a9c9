//! `qcf`: list, verify, expand and evaluate the identity catalog.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qcf_core::corpus::{
    self, forms, get_entry, BackendKind, CorpusError, EntryDescriptor, EntryKind, Form,
    FormalBackend, ParamPoint,
};
use qcf_core::expand::{c_fraction_expand, CExpansion, ExpandError};
use qcf_core::scalar::{is_decimal_literal, parse_rational, rat, Rational};
use qcf_core::verify::{self, numeric_values, Status, Summary, SuiteConfig, VerificationReport};
use qcf_core::{HpReal, Series};

const EXIT_OK: u8 = 0;
const EXIT_FAIL: u8 = 1;
const EXIT_INCONCLUSIVE: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_UNKNOWN_ENTRY: u8 = 66;

#[derive(Parser, Debug)]
#[command(name = "qcf", version, about = "Verify q-continued-fraction identities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print every entry id with its title and backend.
    List,
    /// Verify one entry, a glob of entries, or the whole catalog.
    Verify(VerifyArgs),
    /// Expand an entry's left-hand side into a C-fraction.
    Expand(ExpandArgs),
    /// Evaluate every form of an entry numerically.
    Eval(EvalArgs),
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Entry id or glob such as "L.I.6.5.*".
    id: Option<String>,
    #[arg(long, conflicts_with = "id")]
    entry: Option<String>,
    #[arg(long, conflicts_with_all = ["id", "entry"])]
    all: bool,
    /// Formal truncation order (defaults to each entry's own order).
    #[arg(long)]
    order: Option<usize>,
    #[arg(long, default_value_t = 5)]
    samples: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, env = "QCF_DEFAULT_PREC", default_value_t = 256)]
    prec: usize,
    #[arg(long, default_value = "1e-40")]
    tol: String,
    /// Emit JSON instead of one line per report.
    #[arg(long)]
    json: bool,
    /// Write the reports to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ExpandArgs {
    #[arg(long)]
    entry: String,
    /// Number of C-fraction terms to extract.
    #[arg(long, default_value_t = 10)]
    depth: usize,
    #[arg(long)]
    order: Option<usize>,
    /// Parameter binding `name=p/q`; repeatable.
    #[arg(long = "param", value_name = "NAME=VALUE")]
    params: Vec<String>,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[arg(long)]
    entry: String,
    /// Numeric base, as `p/q` or a decimal.
    #[arg(long)]
    q: Option<String>,
    #[arg(long = "param", value_name = "NAME=VALUE")]
    params: Vec<String>,
    #[arg(long, env = "QCF_DEFAULT_PREC", default_value_t = 256)]
    prec: usize,
    #[arg(long, default_value = "1e-40")]
    tol: String,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn runtime(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_FAIL,
            message: message.into(),
        }
    }
}

impl From<CorpusError> for Failure {
    fn from(e: CorpusError) -> Self {
        let code = match e {
            CorpusError::UnknownEntry(_) => EXIT_UNKNOWN_ENTRY,
            CorpusError::MissingParameter { .. } => EXIT_USAGE,
            _ => EXIT_FAIL,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::List => cmd_list(),
        Command::Verify(a) => cmd_verify(a),
        Command::Expand(a) => cmd_expand(a),
        Command::Eval(a) => cmd_eval(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("qcf: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn cmd_list() -> Result<u8, Failure> {
    let mut out = io::stdout().lock();
    for e in corpus::entries() {
        let _ = writeln!(out, "{:<18} {:<13} {}", e.id, e.backend.to_string(), e.title);
    }
    Ok(EXIT_OK)
}

fn threads_from_env() -> Result<usize, Failure> {
    match std::env::var("QCF_THREADS") {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse()
            .map_err(|_| Failure::usage(format!("QCF_THREADS must be a non-negative integer, got {v:?}"))),
        _ => Ok(0),
    }
}

fn cmd_verify(a: VerifyArgs) -> Result<u8, Failure> {
    let pattern = a.id.or(a.entry);
    if pattern.is_none() && !a.all {
        return Err(Failure::usage("give an entry id or --all"));
    }
    if HpReal::parse(&a.tol, 64).is_none_or(|t| t.is_negative() || t.is_zero()) {
        return Err(Failure::usage(format!("--tol must be a positive decimal, got {:?}", a.tol)));
    }
    if a.prec < 64 {
        return Err(Failure::usage("--prec must be at least 64 bits"));
    }
    let cfg = SuiteConfig {
        order: a.order,
        samples: a.samples,
        prec: a.prec,
        tol: a.tol,
        threads: threads_from_env()?,
        ..SuiteConfig::default()
    };
    if let Some(p) = &pattern {
        if verify::select_entries(Some(p)).is_empty() {
            return Err(CorpusError::UnknownEntry(p.clone()).into());
        }
    }
    let reports = verify::run_suite(pattern.as_deref(), a.seed, &cfg);
    let text = if a.json {
        serde_json::to_string_pretty(&reports).expect("reports serialize") + "\n"
    } else {
        human_report(&reports)
    };
    match &a.out {
        Some(path) => {
            fs::write(path, &text)
                .map_err(|e| Failure::runtime(format!("cannot write {}: {e}", path.display())))?;
            eprintln!("{}", Summary::of(&reports));
        }
        None => {
            let _ = io::stdout().lock().write_all(text.as_bytes());
        }
    }
    Ok(exit_code(&reports))
}

fn human_report(reports: &[VerificationReport]) -> String {
    let mut s: String = reports.iter().map(|r| r.human_line() + "\n").collect();
    s.push_str(&format!("{}\n", Summary::of(reports)));
    s
}

fn exit_code(reports: &[VerificationReport]) -> u8 {
    let s = Summary::of(reports);
    if s.fail > 0 {
        EXIT_FAIL
    } else if s.inconclusive > 0 {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_OK
    }
}

/// Parses repeated `name=value` flags; values must be exact (`p/q` or integers).
fn parse_params(raw: &[String]) -> Result<ParamPoint, Failure> {
    let mut p = ParamPoint::new();
    for item in raw {
        let (name, value) = item
            .split_once('=')
            .ok_or_else(|| Failure::usage(format!("--param expects name=value, got {item:?}")))?;
        if is_decimal_literal(value) {
            return Err(Failure::usage(format!(
                "--param {name}: use an exact fraction such as 1/3, not a decimal"
            )));
        }
        let v = parse_rational(value).map_err(|e| Failure::usage(e.to_string()))?;
        p.set(name.trim(), v);
    }
    Ok(p)
}

fn monomial(c: &Rational, power: usize) -> String {
    let q = match power {
        0 => String::new(),
        1 => "q".to_string(),
        n => format!("q^{n}"),
    };
    if power == 0 {
        return c.to_string();
    }
    if *c == rat(1) {
        q
    } else if *c == rat(-1) {
        format!("-{q}")
    } else {
        format!("{c}*{q}")
    }
}

fn cmd_expand(a: ExpandArgs) -> Result<u8, Failure> {
    let e = get_entry(&a.entry)?;
    if e.kind != EntryKind::Identity || e.backend == BackendKind::ExactFinite {
        return Err(Failure::runtime(format!("{} has no power-series left-hand side", e.id)));
    }
    let mut p = parse_params(&a.params)?;
    if e.params.iter().any(|s| s.name == "q") && p.get("q").is_none() {
        // q is the series variable here; bind a placeholder for domain checks
        p.set("q", Rational::new(1.into(), 2.into()));
    }
    let order = a.order.unwrap_or(e.default_order);
    let fs = forms(e, &p, &FormalBackend::new(order))?;
    let Form::Value(lhs) = &fs[0].form else {
        return Err(Failure::runtime(format!("{} has no series left-hand side", e.id)));
    };
    let cf_b0_zero = fs.iter().any(|f| matches!(&f.form, Form::Cf(cf) if cf.b0().is_zero()));
    let mut out = io::stdout().lock();
    let mut target: Series = lhs.clone();
    if cf_b0_zero {
        target = target
            .inv()
            .map_err(|err| Failure::runtime(format!("cannot invert the left-hand side: {err}")))?;
        let _ = writeln!(out, "expanding the reciprocal of the {}", fs[0].name);
    } else {
        let _ = writeln!(out, "expanding the {}", fs[0].name);
    }
    let c0 = target.constant_term().clone();
    if c0 == rat(0) {
        return Err(Failure::runtime("series has zero constant term"));
    }
    if c0 != rat(1) {
        target = target.scale(&(rat(1) / &c0));
        let _ = writeln!(out, "normalised by the constant term {c0}");
    }
    let (exp, note): (CExpansion<Rational>, Option<&str>) = match c_fraction_expand(&target, a.depth) {
        Ok(x) => (x, None),
        Err(ExpandError::TermBudgetExceeded(x)) => (x, None),
        Err(ExpandError::OrderExhausted(x)) => (x, Some("working order exhausted; raise --order for more terms")),
        Err(ExpandError::ConstantTermNotOne) => unreachable!("normalised above"),
    };
    for (i, t) in exp.terms.iter().enumerate() {
        let _ = writeln!(out, "a_{} = {}", i + 1, monomial(&t.coeff, t.power));
    }
    if exp.terminated {
        let _ = writeln!(out, "expansion terminates through q^{}", exp.remaining_order);
    }
    if let Some(n) = note {
        let _ = writeln!(out, "{n}");
    }
    Ok(EXIT_OK)
}

fn cmd_eval(a: EvalArgs) -> Result<u8, Failure> {
    let e: &EntryDescriptor = get_entry(&a.entry)?;
    let mut p = parse_params(&a.params)?;
    if let Some(q) = &a.q {
        let v = parse_rational(q).map_err(|err| Failure::usage(err.to_string()))?;
        p.set("q", v);
    } else if !matches!(e.kind, EntryKind::Special(_)) {
        return Err(Failure::usage(format!("{} needs --q", e.id)));
    }
    if a.prec < 64 {
        return Err(Failure::usage("--prec must be at least 64 bits"));
    }
    let tol = HpReal::parse(&a.tol, a.prec)
        .filter(|t| !t.is_negative() && !t.is_zero())
        .ok_or_else(|| Failure::usage(format!("--tol must be a positive decimal, got {:?}", a.tol)))?;
    if !matches!(e.kind, EntryKind::Special(_)) {
        e.check_domain(&p)?;
    }
    let (vals, depth) = numeric_values(e, &p, a.prec, &tol).map_err(|err| Failure::runtime(err.to_string()))?;
    let digits = (a.prec as f64 * std::f64::consts::LOG10_2).floor() as usize;
    let mut out = io::stdout().lock();
    let _ = writeln!(out, "{} at {}", e.id, if p.is_empty() { "its special point".into() } else { p.to_string() });
    for (name, v) in &vals {
        let _ = writeln!(out, "{name:>28}: {}", v.to_sci_string(digits));
    }
    let worst = vals[1..]
        .iter()
        .map(|(_, v)| (vals[0].1.clone() - v.clone()).abs())
        .fold(HpReal::zero(a.prec), |m, d| if d > m { d } else { m });
    let _ = writeln!(out, "{:>28}: {}", "max difference", worst.to_sci_string(6));
    if let Some(d) = depth {
        let _ = writeln!(out, "{:>28}: {d}", "continued fraction depth");
    }
    let status = if worst < tol { Status::Pass } else { Status::Fail };
    let _ = writeln!(out, "{status}");
    Ok(if status == Status::Pass { EXIT_OK } else { EXIT_FAIL })
}
