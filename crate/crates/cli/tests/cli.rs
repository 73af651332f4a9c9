use std::process::{Command, Output};

fn qcf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcf"))
        .args(args)
        .env_remove("QCF_DEFAULT_PREC")
        .env_remove("QCF_THREADS")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn list_prints_every_entry() {
    let o = qcf(&["list"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().count() >= 27);
    assert!(text.lines().any(|l| l.starts_with("III.16.38.RR") && l.contains("FORMAL")));
}

#[test]
fn expand_rogers_ramanujan() {
    let o = qcf(&["expand", "--entry", "III.16.38.RR", "--depth", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let terms: Vec<String> = stdout(&o)
        .lines()
        .filter_map(|l| l.split_once(" = ").map(|(_, t)| t.to_string()))
        .collect();
    assert_eq!(terms, ["q", "q^2", "q^3", "q^4", "q^5", "q^6"]);
}

#[test]
fn eval_accepts_decimal_q_only() {
    let o = qcf(&["eval", "--entry", "L.I.6.5.2", "--q", "0.25"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("q=1/4"));
    let o = qcf(&["eval", "--entry", "L.I.6.5.1", "--q", "1/4", "--param", "k=0.5"]);
    assert_eq!(o.status.code(), Some(64));
}

#[test]
fn eval_names_violated_constraint() {
    let o = qcf(&["eval", "--entry", "L.I.6.3.1.iii", "--q", "1/4", "--param", "b=3/2", "--param", "lambda=1"]);
    assert_ne!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("|b| < 1"));
}

#[test]
fn exit_codes() {
    assert_eq!(qcf(&["verify", "nosuch"]).status.code(), Some(66));
    assert_eq!(qcf(&["verify", "--order", "x", "V.32.19"]).status.code(), Some(64));
    assert_eq!(qcf(&["verify"]).status.code(), Some(64));
    assert_eq!(qcf(&["verify", "V.32.19"]).status.code(), Some(0));
}

#[test]
fn json_reports_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let o = Command::new(env!("CARGO_BIN_EXE_qcf"))
            .args(["verify", "L.I.6.5.*", "--samples", "2", "--json", "--out"])
            .arg(&path)
            .env("QCF_DEFAULT_PREC", "192")
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(0));
        let mut v: Vec<serde_json::Value> =
            serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
        for r in &mut v {
            r["ms"] = serde_json::Value::Null;
        }
        v
    };
    let a = run("a.json");
    assert_eq!(a, run("b.json"));
    assert_eq!(a.len(), 4);
    assert!(a.iter().all(|r| r["precision_bits"] == 192 && r["tol"] == "1e-40"));
}
