//! End-to-end acceptance run: one PASS/FAIL line per criterion.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use num_traits::{One, Signed, Zero};
use qcf_core::corpus::{
    forms, get_entry, sample_params, Backend, Form, FormalBackend, ParamPoint,
};
use qcf_core::expand::{c_fraction_expand, CExpansion, CTerm};
use qcf_core::qseries::qproduct_shifted;
use qcf_core::scalar::{rat, ratio};
use qcf_core::special::{rr_cf_numeric, rr_closed_form, Variant};
use qcf_core::verify::{
    verify_alternative_forms, verify_exact_finite, verify_formal, verify_formal_with,
    verify_numeric, verify_recurrence, Status, VerificationReport,
};
use qcf_core::{CFrac, HpReal, Rational, Series};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 42;
const TOL: &str = "1e-40";
const PREC: usize = 256;

type Outcome = Result<String, String>;

fn point(pairs: &[(&str, Rational)]) -> ParamPoint {
    pairs.iter().fold(ParamPoint::new(), |p, (k, v)| p.with(k, v.clone()))
}

fn expect_pass(r: &VerificationReport) -> Result<(), String> {
    if r.passed() {
        Ok(())
    } else {
        Err(r.human_line())
    }
}

fn all_pass(reports: &[VerificationReport]) -> Result<usize, String> {
    reports.iter().try_for_each(expect_pass)?;
    Ok(reports.len())
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let t = start.elapsed();
    if t < limit {
        Ok(())
    } else {
        Err(format!("{what} took {t:?}, limit {limit:?}"))
    }
}

fn qcf(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_qcf"))
        .args(args)
        .env_remove("QCF_DEFAULT_PREC")
        .output()
        .expect("qcf binary runs")
}

fn formal_at_samples(id: &str, count: usize, order: usize) -> Result<usize, String> {
    let e = get_entry(id).map_err(|e| e.to_string())?;
    let reports: Vec<_> = sample_params(e, count, SEED)
        .iter()
        .map(|p| verify_formal(e, p, order))
        .collect();
    if e.has_params() && reports.len() != count {
        return Err(format!("{id}: {} points", reports.len()));
    }
    all_pass(&reports)
}

fn exact_up_to_ten(id: &str, points: &[ParamPoint]) -> Result<usize, String> {
    let e = get_entry(id).map_err(|e| e.to_string())?;
    let mut n_checks = 0;
    for p in points {
        for n in 1..=10 {
            expect_pass(&verify_exact_finite(e, &p.clone().with("n", rat(n))))?;
            n_checks += 1;
        }
    }
    Ok(n_checks)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let e = get_entry("III.16.38.RR").unwrap();
    let b = FormalBackend::new(40);
    let mut values = Vec::new();
    for f in forms(e, &ParamPoint::new(), &b).map_err(|e| e.to_string())? {
        values.push(match f.form {
            Form::Value(v) => v,
            Form::Cf(cf) => b.eval_cf(&cf).map_err(|e| e.to_string())?.value,
        });
    }
    if values.len() != 3 || values.iter().any(|v| v != &values[0] || v.order() != 40) {
        return Err("series ratio, product ratio and fraction limit disagree through q^40".into());
    }
    let out = qcf(&["verify", "III.16.38.RR", "--order", "40"]);
    if out.status.code() != Some(0) {
        return Err(format!("qcf verify exited with {:?}", out.status.code()));
    }
    within(start, Duration::from_secs(5), "RR triple identity")?;
    Ok("three forms agree through q^40".into())
}

fn criterion_2() -> Outcome {
    let tol = HpReal::parse("1e-50", PREC).unwrap();
    let mut worst = String::new();
    for v in [Variant::Plus, Variant::Minus] {
        let start = Instant::now();
        let cf = rr_cf_numeric(v, PREC, &HpReal::epsilon_bits(250, PREC)).map_err(|e| e.to_string())?;
        let diff = (cf.value - rr_closed_form(v, PREC)).abs();
        within(start, Duration::from_secs(1), &format!("{v:?}"))?;
        if !(diff < tol) {
            return Err(format!("{v:?}: |CF - closed form| = {}", diff.to_sci_string(6)));
        }
        worst.push_str(&format!("{v:?} {} ", diff.to_sci_string(3)));
    }
    let out = qcf(&["eval", "--entry", "III.16.39.cor.ii", "--prec", "256"]);
    let text = String::from_utf8_lossy(&out.stdout);
    let digits: Vec<&str> = text
        .lines()
        .filter(|l| l.contains("closed form") || l.contains("continued fraction:"))
        .filter_map(|l| l.split(':').nth(1).map(str::trim))
        .collect();
    if out.status.code() != Some(0) || digits.len() != 2 || digits[0][..52] != digits[1][..52] {
        return Err(format!("qcf eval output did not agree to 50 digits:\n{text}"));
    }
    Ok(format!("differences {}", worst.trim()))
}

fn criterion_3() -> Outcome {
    let n1 = formal_at_samples("L.I.6.3.1.i", 5, 30)?;
    let n2 = formal_at_samples("L.I.6.3.1.ii", 5, 30)?;
    let iii = get_entry("L.I.6.3.1.iii").unwrap();
    let mut n3 = 0;
    for (q, b) in [(ratio(1, 4), ratio(1, 3)), (ratio(1, 3), ratio(1, 2)), (ratio(1, 2), ratio(1, 5))] {
        for lam in [ratio(1, 2), rat(2)] {
            let p = point(&[("q", q.clone()), ("b", b.clone()), ("lambda", lam)]);
            expect_pass(&verify_numeric(iii, &p, PREC, TOL))?;
            n3 += 1;
        }
    }
    let iv = get_entry("L.I.6.3.1.iv").unwrap();
    let reports: Vec<_> = sample_params(iv, 5, SEED)
        .iter()
        .map(|p| verify_recurrence(iv, p, 25))
        .collect();
    let n4 = all_pass(&reports)?;
    Ok(format!("(i) {n1}, (ii) {n2}, (iii) {n3}, (iv) {n4} points"))
}

fn criterion_4() -> Outcome {
    let pts = [
        point(&[("lambda", rat(1)), ("q", ratio(1, 3))]),
        point(&[("lambda", ratio(2, 5)), ("q", ratio(3, 7))]),
        point(&[("lambda", ratio(7, 3)), ("q", ratio(5, 4))]),
    ];
    let n = exact_up_to_ten("III.16.16", &pts)?;
    if n != 30 {
        return Err(format!("{n} equalities"));
    }
    Ok("30 exact equalities".into())
}

fn criterion_5() -> Outcome {
    let e = get_entry("III.16.13").unwrap();
    let d = get_entry("III.16.13.D").unwrap();
    for a in [rat(1), ratio(1, 2), ratio(-1, 3)] {
        let p = point(&[("a", a)]);
        expect_pass(&verify_formal(e, &p, 30))?;
        expect_pass(&verify_recurrence(d, &p, 30))?;
    }
    Ok("series and denominators D_2n, D_2n+1 (n <= 8) at three values of a".into())
}

fn criterion_6() -> Outcome {
    formal_at_samples("L.I.6.2.1", 5, 30)?;
    formal_at_samples("L.I.6.4.1", 5, 30)?;
    let t = get_entry("T.6.4.1").unwrap();
    let pts = sample_params(t, 3, SEED);
    for p in &pts {
        let aq = p.get("a").unwrap() * p.get("q").unwrap();
        if aq.abs() >= Rational::one() {
            return Err(format!("|aq| >= 1 at {p}"));
        }
        expect_pass(&verify_numeric(t, p, PREC, TOL))?;
    }
    formal_at_samples("L.I.6.2.3", 5, 30)?;
    formal_at_samples("L.I.6.2.1.cor9", 1, 30)?;
    formal_at_samples("L.I.6.2.1.cor11", 1, 30)?;
    Ok("G-family formal and numeric checks".into())
}

fn criterion_7() -> Outcome {
    let e = get_entry("L.I.6.5.1").unwrap();
    for k in [rat(2), rat(6)] {
        for q in [ratio(1, 2), ratio(1, 5)] {
            expect_pass(&verify_numeric(e, &point(&[("k", k.clone()), ("q", q)]), PREC, TOL))?;
        }
    }
    let e = get_entry("L.I.6.5.2").unwrap();
    for q in [ratio(1, 2), ratio(1, 3)] {
        expect_pass(&verify_numeric(e, &point(&[("q", q)]), PREC, TOL))?;
    }
    let e = get_entry("L.I.6.4.2").unwrap();
    let mut passed = 0;
    for p in sample_params(e, 3, SEED) {
        let r = verify_numeric(e, &p, PREC, TOL);
        match r.status {
            Status::Pass => passed += 1,
            Status::Inconclusive if r.note.is_some() => {}
            _ => return Err(r.human_line()),
        }
    }
    if passed < 2 {
        return Err(format!("L.I.6.4.2 passed at {passed} of 3 points"));
    }
    let pts = [
        point(&[("a", rat(1)), ("b", rat(1)), ("q", rat(1))]),
        point(&[("a", ratio(2, 3)), ("b", ratio(5, 4)), ("q", ratio(1, 2))]),
        point(&[("a", ratio(3, 7)), ("b", ratio(-1, 2)), ("q", ratio(4, 3))]),
    ];
    let n = exact_up_to_ten("L.I.6.4.3", &pts)?;
    Ok(format!("L.I.6.4.2 passed at {passed}/3 points; {n} exact odd-part equalities"))
}

fn criterion_8() -> Outcome {
    let e = get_entry("L.I.6.2.1.cor2").unwrap();
    for a in [rat(1), ratio(-1, 2), ratio(5, 3)] {
        expect_pass(&verify_formal(e, &point(&[("a", a)]), 40))?;
    }
    for id in ["V.32.21", "L.I.6.2.1.cor10", "V.32.20", "V.32.18", "V.32.22", "V.32.19"] {
        let e = get_entry(id).unwrap();
        expect_pass(&verify_formal(e, &ParamPoint::new(), 40))?;
    }
    let b = FormalBackend::new(40);
    let cubic = forms(get_entry("V.32.18").unwrap(), &ParamPoint::new(), &b).unwrap();
    let products = cubic.iter().filter(|f| matches!(f.form, Form::Value(_))).count();
    if products != 2 {
        return Err(format!("cubic fraction has {products} product forms"));
    }
    Ok("seven product entries through q^40".into())
}

fn criterion_9() -> Outcome {
    let n2 = formal_at_samples("III.16.2", 10, 20)?;
    let e11 = get_entry("III.16.11").unwrap();
    let mut pts = sample_params(e11, 4, SEED);
    pts.push(point(&[("a", ratio(1, 3)), ("b", ratio(1, 3)), ("q", ratio(1, 4))]));
    for p in &pts {
        for name in ["a", "b"] {
            if p.get(name).unwrap().abs() > ratio(1, 2) {
                return Err(format!("|{name}| > 1/2 at {p}"));
            }
        }
        expect_pass(&verify_numeric(e11, p, PREC, TOL))?;
        let alt = verify_alternative_forms(e11, p, 25);
        expect_pass(&alt)?;
        if alt.note.is_some() {
            return Err(format!("odd/even split missing at {p}"));
        }
    }
    let e12 = get_entry("III.16.12").unwrap();
    let mut pts = sample_params(e12, 4, SEED);
    pts.push(point(&[("a", ratio(1, 3)), ("b", ratio(1, 5)), ("q", ratio(1, 4))]));
    for p in &pts {
        if (p.get("a").unwrap() * p.get("b").unwrap()).abs() >= Rational::one() {
            return Err(format!("|ab| >= 1 at {p}"));
        }
        let r = verify_numeric(e12, p, PREC, TOL);
        expect_pass(&r)?;
        let b = qcf_core::corpus::NumericBackend::from_rational(
            p.get("q").unwrap(),
            PREC,
            HpReal::epsilon_bits(200, PREC),
        );
        let n_values = forms(e12, p, &b)
            .unwrap()
            .iter()
            .filter(|f| matches!(f.form, Form::Value(_)))
            .count();
        if n_values != 2 {
            return Err(format!("ratio of sums missing at {p}"));
        }
    }
    Ok(format!("q-binomial theorem at {n2} points; III.16.11 and III.16.12 at 5 points each"))
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    ratio(rng.gen_range(-9..=9), rng.gen_range(1..=7))
}

fn positive_rational(rng: &mut ChaCha8Rng) -> Rational {
    ratio(rng.gen_range(1..=9), rng.gen_range(1..=7))
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    // determinant identity on 100 random fractions, k <= 20
    for _ in 0..100 {
        let terms: Vec<_> = (0..20)
            .map(|_| (random_rational(&mut rng), random_rational(&mut rng)))
            .collect();
        let cf = CFrac::from_terms(random_rational(&mut rng), terms.clone());
        let conv = cf.convergents(20).map_err(|e| e.to_string())?;
        let (mut pp, mut qp) = (Rational::zero(), Rational::one());
        let mut prod = Rational::one();
        for (k, c) in conv.iter().enumerate() {
            prod *= &terms[k].0;
            let sign = if k % 2 == 0 { rat(1) } else { rat(-1) };
            if &c.p * &qp - &pp * &c.q != sign * &prod {
                return Err(format!("determinant identity fails at k = {}", k + 1));
            }
            pp = c.p.clone();
            qp = c.q.clone();
        }
    }
    // equivalence scaling and odd-part interleaving on positive fractions
    for _ in 0..50 {
        let n = rng.gen_range(3..=15);
        let terms: Vec<_> = (0..n)
            .map(|_| (positive_rational(&mut rng), positive_rational(&mut rng)))
            .collect();
        let cf = CFrac::from_terms(positive_rational(&mut rng), terms);
        let r: Vec<Rational> = (0..n).map(|_| positive_rational(&mut rng)).collect();
        let scaled = cf.equivalence_scale(move |k| r[k - 1].clone());
        let odd = cf.odd_part().map_err(|e| e.to_string())?;
        for k in 1..=n {
            if cf.convergent_value(k).unwrap() != scaled.convergent_value(k).unwrap() {
                return Err(format!("equivalence scaling changed convergent {k}"));
            }
        }
        for k in 0..=(n - 1) / 2 {
            if odd.convergent_value(k).unwrap() != cf.convergent_value(2 * k + 1).unwrap() {
                return Err(format!("odd part convergent {k} differs"));
            }
        }
    }
    // C-fraction round trip
    for _ in 0..50 {
        let terms: Vec<CTerm<Rational>> = (0..rng.gen_range(1..=6))
            .map(|_| CTerm {
                coeff: ratio(rng.gen_range(1..=5) * if rng.gen() { 1 } else { -1 }, rng.gen_range(1..=3)),
                power: rng.gen_range(1..=3),
            })
            .collect();
        let order = terms.iter().map(|t| t.power).sum::<usize>() + 4;
        let f = CExpansion { terms: terms.clone(), terminated: true, remaining_order: 0 }
            .to_cfrac(order)
            .limit_series(order)
            .map_err(|e| e.to_string())?;
        let back = c_fraction_expand(&f, terms.len() + 2).map_err(|e| e.to_string())?;
        if back.terms != terms || !back.terminated {
            return Err("C-fraction round trip changed the terms".into());
        }
    }
    // Euler's pentagonal number theorem through q^40
    let euler = qproduct_shifted(&rat(1), 1, 1, 40);
    for n in 0..=40i64 {
        let mut expected = rat(0);
        for j in 0..=10i64 {
            if n == j * (3 * j - 1) / 2 || n == j * (3 * j + 1) / 2 {
                expected = if j % 2 == 0 { rat(1) } else { rat(-1) };
            }
        }
        if euler.coeffs()[n as usize] != expected {
            return Err(format!("(q; q)_inf coefficient of q^{n}"));
        }
    }
    // planted error: a_3 -> a_3 + q in the RR fraction
    let rr = get_entry("III.16.38.RR").unwrap();
    let r = verify_formal_with(rr, &ParamPoint::new(), 40, &|cf| {
        let (a3, b3) = cf.term(3).unwrap();
        let q = Series::monomial(rat(1), 1, a3.order());
        cf.with_term(3, &a3 + &q, b3)
    });
    match (r.status, r.first_diff_power) {
        (Status::Fail, Some(j)) if j <= 6 => Ok(format!("planted error caught at q^{j}")),
        _ => Err(format!("planted error not caught early: {}", r.human_line())),
    }
}

fn check_schema(v: &serde_json::Value) -> Result<(), String> {
    let obj = v.as_object().ok_or("report is not an object")?;
    let mut keys: Vec<_> = obj.keys().map(String::as_str).collect();
    keys.sort();
    let expected = [
        "backend", "delta", "entry", "first_diff_power", "ms", "order", "params", "precision_bits",
        "status", "tol",
    ];
    if keys != expected {
        return Err(format!("unexpected keys {keys:?}"));
    }
    let ok = v["entry"].is_string()
        && ["formal", "exact", "numeric"].contains(&v["backend"].as_str().unwrap_or(""))
        && v["params"].as_object().is_some_and(|m| m.values().all(|x| x.as_str().is_some_and(|s| s.contains('/'))))
        && (v["order"].is_null() || v["order"].is_u64())
        && (v["precision_bits"].is_null() || v["precision_bits"].is_u64())
        && (v["tol"].is_null() || v["tol"].is_string())
        && ["pass", "fail", "inconclusive"].contains(&v["status"].as_str().unwrap_or(""))
        && (v["first_diff_power"].is_null() || v["first_diff_power"].is_u64())
        && (v["delta"].is_null() || v["delta"].is_string())
        && v["ms"].is_u64();
    if ok {
        Ok(())
    } else {
        Err(format!("report violates the schema: {v}"))
    }
}

fn criterion_11() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("report.json");
    let start = Instant::now();
    let out = qcf(&["verify", "--all", "--json", "--out", path.to_str().unwrap()]);
    within(start, Duration::from_secs(120), "qcf verify --all")?;
    let text = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
    let reports: Vec<serde_json::Value> = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    reports.iter().try_for_each(check_schema)?;
    let bad: Vec<_> = reports
        .iter()
        .filter(|r| r["status"] != "pass")
        .map(|r| r["entry"].as_str().unwrap_or("?").to_string())
        .collect();
    let code = out.status.code();
    let allowed = code == Some(0)
        || (code == Some(2) && bad.iter().all(|id| id == "L.I.6.4.2"));
    if !allowed {
        return Err(format!("exit {code:?}, non-passing entries {bad:?}"));
    }
    let nosuch = qcf(&["verify", "nosuch"]).status.code();
    let usage = qcf(&["verify", "--no-such-flag"]).status.code();
    if nosuch != Some(66) || usage != Some(64) {
        return Err(format!("exit codes: unknown entry {nosuch:?}, bad flag {usage:?}"));
    }
    Ok(format!("{} reports in {:?}, exit {}", reports.len(), start.elapsed(), code.unwrap()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("Rogers-Ramanujan triple identity through q^40", criterion_1),
        ("special values to 1e-50", criterion_2),
        ("g-family", criterion_3),
        ("finite convergents as exact rationals", criterion_4),
        ("Eisenstein fraction and denominators", criterion_5),
        ("G-family", criterion_6),
        ("transformations", criterion_7),
        ("product entries through q^40", criterion_8),
        ("q-binomial entries", criterion_9),
        ("property suites and planted error", criterion_10),
        ("full suite from the command line", criterion_11),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run))
            .unwrap_or_else(|e| Err(format!("panicked: {:?}", e.downcast_ref::<String>())));
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("criterion {:>2}: PASS  {name}: {detail} ({ms} ms)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {name}: {why} ({ms} ms)", i + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
