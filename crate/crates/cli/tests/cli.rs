use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn posilab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_posilab")).args(args).output().expect("spawn posilab")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).expect("stderr is JSON")
}

/// Compares against `tests/golden/<name>`; set `POSILAB_BLESS=1` to rewrite.
fn golden(name: &str, actual: &[u8]) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("POSILAB_BLESS").is_some() {
        fs::write(&path, actual).unwrap();
    }
    let expected = fs::read(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(String::from_utf8_lossy(actual), String::from_utf8_lossy(&expected), "golden {name} differs");
}

#[test]
fn parabolic_half_golden() {
    let out = posilab(&["analyze", "parabolic:t=1/2", "--canonical"]);
    assert!(out.status.success());
    golden("parabolic_half.json", &out.stdout);
}

#[test]
fn boundary_dilation_golden_text() {
    let out = posilab(&["analyze", "coeffs:a=1,b=0,c=-1,d=2", "--format", "text", "--canonical"]);
    assert!(out.status.success());
    golden("z_over_2_minus_z.txt", &out.stdout);
}

#[test]
fn canonical_output_is_byte_identical() {
    let args = ["analyze", "tau-alpha-tau:w=1/4,alpha=1/2", "--verify=16,32,64", "--canonical"];
    let first = posilab(&args);
    assert!(first.status.success());
    for _ in 0..2 {
        assert_eq!(posilab(&args).stdout, first.stdout);
    }
    let timed = stdout_json(&posilab(&args[..3]));
    assert!(timed["timing_ms"].as_f64().unwrap() >= 0.0);
    assert!(stdout_json(&first).get("timing_ms").is_none());
}

#[test]
fn parabolic_half_with_verify() {
    let v = stdout_json(&posilab(&["analyze", "parabolic:t=1/2", "--verify"]));
    let report = &v["report"];
    assert_eq!(report["posinormal"]["value"], true);
    assert_eq!(report["coposinormal"]["value"], true);
    assert_eq!(report["power_breakdown_at_n"], 2);
    let traces = v["numerics"].as_array().unwrap();
    assert!(!traces.is_empty());
    for t in traces {
        assert_eq!(t["verdict"], "Decaying", "{}", t["name"]);
        let ns: Vec<u64> = t["points"].as_array().unwrap().iter().map(|p| p["N"].as_u64().unwrap()).collect();
        assert_eq!(ns, [16, 32, 64, 128]);
    }
}

#[test]
fn boundary_dilation_verdicts() {
    let v = stdout_json(&posilab(&["analyze", "coeffs:a=1,b=0,c=-1,d=2"]));
    let report = &v["report"];
    assert_eq!(report["posinormal"]["value"], true);
    assert_eq!(report["coposinormal"]["value"], false);
    assert_eq!(report["hyponormal"]["value"], true);
    let form = &report["hyponormal"]["witness"];
    assert_eq!(form["kind"], "boundary");
    assert_eq!(form["s"], "1/2");
    assert_eq!(form["eta"], serde_json::json!(["1", "0"]));
}

#[test]
fn float_backend() {
    let v = stdout_json(&posilab(&["analyze", "coeffs:a=1,b=0,c=-1,d=2", "--float"]));
    assert_eq!(v["backend"], "float");
    assert_eq!(v["report"]["posinormal"]["value"], true);
    assert_eq!(v["report"]["coposinormal"]["value"], false);
}

#[test]
fn not_a_selfmap_exits_2() {
    let out = posilab(&["analyze", "coeffs:a=2,b=0,c=0,d=1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert_eq!(stderr_json(&out)["error"]["kind"], "NotASelfmap");
}

#[test]
fn parse_and_usage_errors_exit_1() {
    let out = posilab(&["analyze", "parabolic:t=1+"]);
    assert_eq!(out.status.code(), Some(1));
    let e = stderr_json(&out);
    assert_eq!(e["error"]["kind"], "ParseError");
    assert!(e["error"]["pos"].is_u64());

    let out = posilab(&["analyze", "parabolic:t=-1"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["error"]["kind"], "ValidationError");

    let out = posilab(&["analyze", "parabolic:t=1", "--exact", "--float"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["error"]["kind"], "UsageError");

    let out = posilab(&["analyze", "parabolic:t=1", "--verify=0,x"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bad_tolerance_is_a_usage_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_posilab"))
        .args(["analyze", "parabolic:t=1"])
        .env("POSILAB_EPS", "tiny")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["error"]["kind"], "UsageError");
}

#[test]
fn batch_reports_errors_inline() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("maps.jsonl");
    fs::write(
        &path,
        "coeffs:a=1,b=0,c=0,d=1\n{\"spec\":\"parabolic:t=1\"}\n{\"a\":\"2\",\"b\":\"0\",\"c\":\"0\",\"d\":\"1\"}\n",
    )
    .unwrap();
    let out = posilab(&["batch", path.to_str().unwrap(), "--canonical"]);
    assert_eq!(out.status.code(), Some(0));
    let lines: Vec<Value> =
        String::from_utf8(out.stdout).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0]["report"]["map_class"]["kind"], "Identity");
    assert_eq!(lines[1]["input"]["descriptor"], "parabolic:t=1");
    assert_eq!(lines[1]["report"]["posinormal"]["value"], false);
    assert_eq!(lines[2]["error"]["kind"], "NotASelfmap");
    assert_eq!(lines[2]["line"], 3);
}

#[test]
fn batch_preserves_order() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("maps.jsonl");
    let specs: Vec<String> = (1..=24).map(|k| format!("parabolic:t={k}/29")).collect();
    fs::write(&path, specs.join("\n")).unwrap();
    let out = posilab(&["batch", path.to_str().unwrap(), "--canonical"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let got: Vec<String> = text
        .lines()
        .map(|l| serde_json::from_str::<Value>(l).unwrap()["input"]["descriptor"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(got, specs);
    let again = posilab(&["batch", path.to_str().unwrap(), "--canonical"]);
    assert_eq!(again.stdout, text.as_bytes());
}

#[test]
fn empty_batch() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.jsonl");
    fs::write(&path, "").unwrap();
    let out = posilab(&["batch", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
}

#[test]
fn missing_batch_file() {
    let out = posilab(&["batch", "/nonexistent/maps.jsonl"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["error"]["kind"], "IoError");
}

#[test]
fn csv_dump() {
    let dir = tempfile::tempdir().unwrap();
    let out = posilab(&["analyze", "parabolic:t=1/2", "--verify=16,32", "--csv-dir", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let csv = fs::read_to_string(dir.path().join("cowen.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows[0], "N,residual");
    assert_eq!(rows.len(), 3);
    assert!(rows[1].starts_with("16,") && rows[2].starts_with("32,"));
    assert!(dir.path().join("range_membership.csv").exists());
}

#[test]
fn csv_dump_in_batch_is_prefixed_by_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("maps.jsonl");
    fs::write(&path, "parabolic:t=1/2\nconstant:v=1/3\n").unwrap();
    let csv = dir.path().join("csv");
    let out = posilab(&["batch", path.to_str().unwrap(), "--verify=16,32", "--csv-dir", csv.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(csv.join("line1_cowen.csv").exists());
    assert!(csv.join("line2_cowen.csv").exists());
}

#[test]
fn corpus_batch() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("corpus.jsonl");
    let lines: Vec<String> = posilab::corpus::corpus(20_240_601, 500).iter().map(|e| e.spec.to_string()).collect();
    fs::write(&path, lines.join("\n")).unwrap();
    let out = posilab(&["batch", path.to_str().unwrap(), "--canonical"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 500);
    for (k, l) in text.lines().enumerate() {
        let v: Value = serde_json::from_str(l).unwrap();
        assert!(v.get("error").is_none(), "line {}: {v}", k + 1);
        assert_eq!(v["report"]["posinormal"]["route_case"], v["report"]["posinormal"]["route_criterion"]);
    }
}
