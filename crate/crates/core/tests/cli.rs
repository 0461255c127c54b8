use std::path::PathBuf;
use std::process::Command;

fn configs(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> (i32, String) {
    let mut argv = vec!["qtorus"];
    argv.extend_from_slice(args);
    let mut out = Vec::new();
    let code = qtorus::cli::run(argv, &mut out).unwrap();
    (code, String::from_utf8(out).unwrap())
}

#[test]
fn bracket_prints_central_term() {
    let (code, out) = run(&["bracket", "t0^1 t^(1,0)", "t0^1 t^(-1,0)"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "-1*c1");
}

#[test]
fn jacobi_report_passes() {
    let (code, out) = run(&[
        "verify", "jacobi", "--box", "1", "--random", "20", "--seed", "4",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["schemaVersion"], 1);
    assert_eq!(v["randomReport"]["triples"], 20);
}

#[test]
fn iso_checks_pass() {
    assert_eq!(run(&["verify", "iso-tau", "--box", "1"]).0, 0);
    assert_eq!(
        run(&["verify", "iso-aff", "--basis", "(0,1);(1,0)", "--box", "2"]).0,
        0
    );
    assert_eq!(
        run(&["verify", "iso-aff", "--basis", "(1,0);(0,1)", "--box", "2"]).0,
        0
    );
}

#[test]
fn build_hw_csv_and_json() {
    let json = std::env::temp_dir().join(format!("qtorus-cli-{}.json", std::process::id()));
    let json_s = json.to_string_lossy().into_owned();
    let (code, out) = run(&[
        "build-hw",
        "--config",
        &configs("remark52.cfg"),
        "--window",
        "2",
        "--json",
        &json_s,
    ]);
    assert_eq!(code, 0);
    assert_eq!(out, "s,dim\n0,1\n1,2\n2,5\n3,10\n");
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    std::fs::remove_file(&json).unwrap();
    assert_eq!(v["dims"], serde_json::json!([1, 2, 5, 10]));
    assert_eq!(v["auditFailures"], serde_json::json!([]));
}

#[test]
fn quasifinite_verdicts() {
    let (code, out) = run(&["quasifinite", "--config", &configs("odd_eval.cfg")]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["verdict"], "Quasifinite");
    assert_eq!(v["certificate"]["degree"], 5);
    let (code, out) = run(&["quasifinite", "--config", &configs("factorial.cfg")]);
    assert_eq!(code, 0);
    assert!(out.contains("UnknownWithinWindow"));
}

#[test]
fn config_errors_name_line_and_key() {
    let path = std::env::temp_dir().join(format!("qtorus-bad-{}.cfg", std::process::id()));
    std::fs::write(&path, "basis.m1 = 1, 0\nfoo = 3\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_qtorus"))
        .args(["build-hw", "--config", path.to_str().unwrap()])
        .output()
        .unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2") && err.contains("foo"), "{err}");
}

#[test]
fn binary_runs_bracket() {
    let out = Command::new(env!("CARGO_BIN_EXE_qtorus"))
        .args(["bracket", "c1", "t0^1 t^(1,2)"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "0");
}
