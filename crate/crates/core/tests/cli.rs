use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_frobtangent"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let o = bin().args(args).output().unwrap();
    (o.status.code().unwrap(), String::from_utf8(o.stdout).unwrap(), String::from_utf8(o.stderr).unwrap())
}

#[test]
fn bound_arithmetic() {
    let (code, out, _) = run(&["bound", "--delta", "6", "--d", "2", "--q", "5"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "18");
    let (_, out, _) = run(&["bound", "--delta", "11", "--d", "5", "--q", "9", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["exact"], "143/2");
    assert_eq!(v["floor"], 71);
}

#[test]
fn replays_exit_zero() {
    for id in ["2.2", "4.6", "4.8", "4.9"] {
        let (code, out, err) = run(&["replay-example", id]);
        assert_eq!(code, 0, "{id}: {out}{err}");
        assert!(!out.contains("FAIL"));
    }
    let (code, out, _) = run(&["replay-example", "4.6", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v[0]["example"], "4.6");
}

#[test]
fn job_file_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.job");
    std::fs::write(&p, "field p=5 e=1\nsurface f = X0^2 +\n").unwrap();
    let (code, _, err) = run(&["check-fcs", p.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("line 2"), "{err}");
    assert!(err.contains("grammar"), "{err}");
    std::fs::write(&p, "field p=5 e=1\nsurface f = X0^2 + X1*X2\nshape round\n").unwrap();
    let (code, _, err) = run(&["phi", p.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("line 3, column 1"), "{err}");
    let (code, _, _) = run(&["phi", dir.path().join("missing.job").to_str().unwrap()]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["scan", "--field", "6"]);
    assert_eq!(code, 2);
}

/// A reducible curve asserted irreducible breaks the bound; the tool says so.
#[test]
fn false_assertion_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("liar.job");
    std::fs::write(
        &p,
        "field p=3 e=1\n\
         surface f = 2*X0^2 + X0*X1 + 2*X0*X2 + 2*X0*X3 + 2*X2^2\n\
         curve C = f ; X0^2 + X0*X1 + 2*X0*X2 + X0*X3 + X1*X2 + X2^2 + X2*X3\n\
         assert irreducible f\nassert irreducible C\nassert complete C\nassert degree C 4\n",
    )
    .unwrap();
    let (code, out, _) = run(&["bound", p.to_str().unwrap(), "--curve", "C"]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("ALARM"));
}

#[test]
fn job_file_commands() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("cubic.job");
    std::fs::write(
        &p,
        "field p=5 e=1\nsurface f = X0^2 - X1^2 + X2^2 - X3^2 # smooth quadric\nassert irreducible f\n\
         curve T = X0*X2 - X1^2 ; X1*X3 - X2^2 ; X0*X3 - X1*X2\nassert degree T 3\nassert irreducible T\nassert complete T\n",
    )
    .unwrap();
    let job = p.to_str().unwrap();
    let (code, out, _) = run(&["points", job, "--max-ext", "2", "--format", "csv"]);
    assert_eq!(code, 0);
    assert_eq!(out, "k,count\n1,36\n2,676\n");
    let (code, out, _) = run(&["points", job, "--curve", "T", "--max-ext", "1"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "F_5: 6");
    let (code, out, _) = run(&["orders", job, "--curve", "T", "--seed", "3"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("orders: [0, 1, 2, 3]"), "{out}");
    assert!(out.contains("seed: 3"));
    let (code, out, _) = run(&["phi", job]);
    assert_eq!(code, 0);
    assert!(out.contains("phi degree: 12"), "{out}");
}

#[test]
fn scan_writes_jsonl_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.jsonl");
    let b = dir.path().join("b.jsonl");
    let (code, out, _) = run(&["scan", "--field", "2", "--out", a.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("CandidateCounterexample: 0"), "{out}");
    let (code, _, _) = run(&["scan", "--field", "2^1", "--jobs", "1", "--out", b.to_str().unwrap()]);
    assert_eq!(code, 0);
    let ta = std::fs::read_to_string(&a).unwrap();
    assert_eq!(ta, std::fs::read_to_string(&b).unwrap());
    assert_eq!(ta.lines().count(), 1023);
    let first: serde_json::Value = serde_json::from_str(ta.lines().next().unwrap()).unwrap();
    let keys: Vec<&str> = first.as_object().unwrap().keys().map(|k| k.as_str()).collect();
    let mut want = vec!["key", "q", "d", "fc", "phi_degree", "lines", "residual_degree", "points", "flag", "assertions"];
    want.sort();
    let mut got = keys.clone();
    got.sort();
    assert_eq!(got, want);
    assert!(ta.lines().next().unwrap().starts_with("{\"key\":"));
}

#[test]
fn compare_table() {
    let (code, out, _) = run(&["compare", "--q", "13", "--d", "4", "--format", "csv"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 14);
    let (code, out, _) = run(&["compare", "--q", "9", "--d", "5", "--delta", "11"]);
    assert_eq!(code, 0);
    assert!(out.contains("143/2"), "{out}");
}
