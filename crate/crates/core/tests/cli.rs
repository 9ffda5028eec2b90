use std::process::Command;

fn hilbfrob(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_hilbfrob")).args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn hilbert_dims_on_toy() {
    let (code, out, _) = hilbfrob(&["hilbert", "--model", "toy-sphere", "-n", "2", "--dims"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("dim H^[2] = 5"), "{}", out);
    assert_eq!(out.lines().count(), 6);
}

#[test]
fn fock_checks_pass() {
    let (code, out, _) =
        hilbfrob(&["fock", "--model", "toy-sphere", "--check", "heisenberg,virasoro,lehn", "--max-weight", "5"]);
    assert_eq!(code, 0, "{}", out);
    assert_eq!(out.lines().filter(|l| l.contains("pass")).count(), 3);
}

#[test]
fn k3_betti_numbers() {
    let (code, out, _) = hilbfrob(&["series", "--model", "k3", "-N", "2", "--eval", "p=1,q=1"]);
    assert_eq!(code, 0);
    let line = out.lines().find(|l| l.starts_with("n=2:")).unwrap();
    assert!(line.contains("b2=23"), "{}", line);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(hilbfrob(&["hilbert", "--model", "nope", "-n", "2"]).0, 2);
    assert_eq!(hilbfrob(&["frobnicate"]).0, 2);
    assert_eq!(hilbfrob(&["series", "--model", "k3"]).0, 2);
    assert_eq!(hilbfrob(&["hilbert", "--model", "k3", "-n", "3", "--budget", "10"]).0, 2);
}

#[test]
fn failing_validation_exits_one() {
    let dir = std::env::temp_dir().join(format!("hilbfrob-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.json");
    // a unit that does not act as a unit
    std::fs::write(
        &path,
        r#"{ "degree_d": 0,
             "weight_group": { "kind": "integers_mod_period", "moduli": [1] },
             "basis": [ { "id": "1", "degree": 0 }, { "id": "x", "degree": 0 } ],
             "unit": [ { "id": "1", "coeff": "1" } ],
             "mult": [ { "a": "1", "b": "1", "out": "1", "coeff": "1" } ] }"#,
    )
    .unwrap();
    let (code, out, _) = hilbfrob(&["validate", "--file", path.to_str().unwrap()]);
    assert_eq!(code, 1, "{}", out);
    assert!(out.contains("FAIL"), "{}", out);
}

#[test]
fn export_validate_round_trip() {
    let (code, text, _) = hilbfrob(&["models", "export", "abelian", "--torsion", "2"]);
    assert_eq!(code, 0);
    let path = std::env::temp_dir().join(format!("hilbfrob-abelian-{}.json", std::process::id()));
    std::fs::write(&path, text).unwrap();
    let (code, _, _) = hilbfrob(&["validate", "--file", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let (code, out, _) = hilbfrob(&["kummer", "--file", path.to_str().unwrap(), "-n", "2", "--leray", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["dim"], 24);
}

#[test]
fn kummer_export_validates() {
    let path = std::env::temp_dir().join(format!("hilbfrob-k2-{}.json", std::process::id()));
    let (code, _, err) = hilbfrob(&["kummer", "--model", "abelian", "-n", "2", "--export", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{}", err);
    let (code, out, _) = hilbfrob(&["validate", "--file", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{}", out);
}

#[test]
fn multiply_elements() {
    let x = r#"[{"sigma": "(1 2)", "labels": {"{1,2}": "1"}, "coeff": "1"}]"#;
    let (code, out, err) = hilbfrob(&["hilbert", "--model", "toy-sphere", "-n", "2", "--multiply", x, x]);
    assert_eq!(code, 0, "{}", err);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    let terms = v.as_array().unwrap();
    assert_eq!(terms.len(), 2);
    for t in terms {
        assert_eq!(t["sigma"], "()");
        assert_eq!(t["coeff"], "1");
    }
}

#[test]
fn output_is_deterministic() {
    let args = ["hilbert", "--model", "k3", "-n", "2", "--check-ring", "50", "--seed", "9", "--format", "json"];
    let a = hilbfrob(&args);
    let b = hilbfrob(&args);
    assert_eq!(a.0, 0);
    assert_eq!(a.1, b.1);
}

#[test]
fn selftest_subset() {
    let (code, out, _) = hilbfrob(&["selftest", "--only", "1,8,9"]);
    assert_eq!(code, 0, "{}", out);
    assert_eq!(out.lines().filter(|l| l.starts_with("[PASS]")).count(), 3);
}
