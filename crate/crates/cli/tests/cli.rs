use std::process::{Command, Output};

fn moufang(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_moufang"))
        .args(args)
        .env_remove("MOUFANG_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn emitted_table_validates() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d8.tbl");
    let p = path.to_str().unwrap();
    assert!(moufang(&["catalog", "emit", "d8", "-o", p]).status.success());
    let o = moufang(&["validate", p]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("order 8"));
}

#[test]
fn cyclic_enumeration_lists_tuples() {
    let o = moufang(&["construct", "cyclic", "d8", "--enumerate"]);
    assert!(o.status.success());
    let lines: Vec<String> = stdout(&o).lines().map(str::to_owned).collect();
    assert!(!lines.is_empty());
    assert!(lines.iter().all(|l| l.starts_with("cyclic ")));
}

#[test]
fn rotation_subgroup_turns_d8_into_q8() {
    let o = moufang(&["construct", "cyclic", "d8"]);
    let first = stdout(&o).lines().next().unwrap().to_owned();
    assert!(first.starts_with("cyclic S=0,1,2,3 "));
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.tbl");
    let o = moufang(&[
        "construct",
        "cyclic",
        "d8",
        "--params",
        &first,
        "-o",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let o = moufang(&["iso", out.to_str().unwrap(), "q8"]);
    assert!(stdout(&o).starts_with("isomorphic"));
}

#[test]
fn closure_of_mg2_d8() {
    let o = moufang(&["closure", "--seeds", "mg2:d8", "--order", "16"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("5 classes, 1 component\n"));
}

#[test]
fn closure_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let mut runs = Vec::new();
    for threads in ["1", "4"] {
        let dot = dir.path().join(format!("g{threads}.dot"));
        let json = dir.path().join(format!("g{threads}.json"));
        let o = moufang(&[
            "closure",
            "--seeds",
            "mg2:d8,mg2:q8",
            "--threads",
            threads,
            "--dot",
            dot.to_str().unwrap(),
            "--json",
            json.to_str().unwrap(),
        ]);
        assert!(o.status.success());
        runs.push((stdout(&o), std::fs::read(dot).unwrap(), std::fs::read(json).unwrap()));
    }
    assert_eq!(runs[0], runs[1]);
}

#[test]
fn domain_error_exits_one() {
    let o = moufang(&["invariants", "no-such-loop"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("UnknownName"));
    let o = moufang(&["mgth", "d8", "--h", "1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn usage_error_exits_two() {
    assert_eq!(moufang(&["closure"]).status.code(), Some(2));
    assert_eq!(moufang(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn order_mismatch_is_reported() {
    let o = moufang(&["closure", "--seeds", "mg2:d8", "--order", "32"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn codeloop_build_and_path() {
    let dir = tempfile::tempdir().unwrap();
    let zero = dir.path().join("zero.pm");
    let det = dir.path().join("det.pm");
    std::fs::write(&zero, "3\n00000000\n").unwrap();
    std::fs::write(&det, "3\n00000001\n").unwrap();
    let out = dir.path().join("oct.tbl");
    let o = moufang(&["codeloop", "build", det.to_str().unwrap(), "-o", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = moufang(&["codeloop", "analyze", out.to_str().unwrap()]);
    assert!(stdout(&o).contains("code_loop true"));
    assert!(stdout(&o).contains("cdeg 3"));
    let o = moufang(&["codeloop", "path", zero.to_str().unwrap(), det.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let o = moufang(&["codeloop", "path", zero.to_str().unwrap(), zero.to_str().unwrap()]);
    assert!(stdout(&o).contains("target reached: true"));
}

#[test]
fn extensions_verify_on_order_16() {
    let o = moufang(&["verify", "extensions", "mg2:d8"]);
    assert!(o.status.success());
    assert!(stdout(&o).trim_end().ends_with("0 failures"));
}
