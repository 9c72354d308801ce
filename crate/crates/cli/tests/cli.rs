use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn rkbench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rkbench")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write_temp(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("rkbench-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn chain_quotient_has_height_four() {
    let p = write_temp("chain4.po", "elements: 4\n0 <= 1\n1 <= 2\n2 <= 3\n");
    let o = rkbench(&["preorder", "--in", arg(&p), "--quotient", "--height"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("height: 4"), "{out}");
    assert!(out.contains("classes: 4"), "{out}");
}

#[test]
fn cycle_collapses_to_one_class() {
    let p = write_temp("cycle.po", "elements: 3\n0 <= 1\n1 <= 2\n2 <= 0\n");
    let out = stdout(&rkbench(&["--machine", "preorder", "--in", arg(&p)]));
    assert!(out.contains("classes=1\n"), "{out}");
    assert!(out.contains("directed=true\n"), "{out}");
}

#[test]
fn single_model_system_has_one_class() {
    let o = rkbench(&["limits", "--system", "lmt", "--n", "1", "--alphabet", "3", "--len", "4"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("classes: 1\n"));
}

#[test]
fn tc_triple_verdict() {
    let o = rkbench(&["classify", "--tc", "--triple", "0,0,c"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("verdict: AdmissibleTc family 2"));
    let o = rkbench(&["classify", "--small", "--triple", "1,1,1"]);
    assert!(stdout(&o).contains("Inadmissible"), "{}", stdout(&o));
}

#[test]
fn malformed_input_exits_two_with_line_and_expectation() {
    let p = write_temp("bad.po", "elements: 2\n0 <= x\n");
    let o = rkbench(&["preorder", "--in", arg(&p)]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 2"), "{err}");
    assert!(err.contains("expected"), "{err}");
}

#[test]
fn unknown_flag_is_rejected() {
    let o = rkbench(&["classify", "--tc", "--triple", "0,0,c", "--dot"]);
    assert!(!o.status.success());
}

#[test]
fn machine_output_is_stable() {
    let spec = write_temp("two.spec", "theory: tc\nmode: finite\nelements: 2\n0 <= 1\nf: 0 = 1\nf: 1 = w\n");
    let runs: Vec<String> = (0..2)
        .map(|_| stdout(&rkbench(&["--machine", "build", "--in", arg(&spec), "--check"])))
        .collect();
    assert_eq!(runs[0], runs[1]);
    assert!(runs[0].contains("violations=0"), "{}", runs[0]);
}

#[test]
fn built_blueprint_replays_through_apply() {
    let spec = write_temp("chain.spec", "theory: tc\nmode: finite\nelements: 2\n0 <= 1\nf: 0 = 2\n");
    let bp = write_temp("chain.bp", "");
    let o = rkbench(&["build", "--in", arg(&spec), "--out", arg(&bp)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&rkbench(&["--machine", "apply", "--in", arg(&bp), "--registry"]));
    assert!(out.contains("violations=0"), "{out}");
    assert!(out.contains("registry=type_p.A0_prime"), "{out}");
}

#[test]
fn invalid_spec_is_reported_not_built() {
    let spec = write_temp("zero.spec", "theory: tc\nmode: finite\nelements: 2\n0 <= 1\nf: 1 = w1\n");
    let o = rkbench(&["build", "--in", arg(&spec)]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("[FAIL]"), "{out}");
    assert!(out.contains("blueprint: not built"), "{out}");
}

#[test]
fn witnesses_build_and_check() {
    for (kind, params) in [("finite-prime", "2,w"), ("countable-prime", "c"), ("continual-prime", "w")] {
        let o = rkbench(&["--machine", "build", "--witness", kind, "--params", params, "--check"]);
        assert!(o.status.success(), "{kind}: {}", String::from_utf8_lossy(&o.stderr));
        let out = stdout(&o);
        assert!(!out.contains("status=fail"), "{kind}: {out}");
    }
}

#[test]
fn types_routes_agree() {
    let out = stdout(&rkbench(&["types", "--family", "sdup", "--depth", "2", "--prime"]));
    assert!(out.contains("prime_model: true"), "{out}");
    assert!(out.contains("routes_agree: true"), "{out}");
}

#[test]
fn decomposition_reaches_continuum() {
    let out = stdout(&rkbench(&["decompose", "--rk", "2", "--il", "w,c", "--tc"]));
    assert!(out.contains("total: c"), "{out}");
    assert!(out.contains("continuum: true"), "{out}");
}

#[test]
fn dot_output_is_a_digraph() {
    let p = write_temp("dot.po", "elements: 3\n0 <= 1\n0 <= 2\n");
    let out = stdout(&rkbench(&["preorder", "--in", arg(&p), "--dot"]));
    assert!(out.trim_start().starts_with("digraph"), "{out}");
}
