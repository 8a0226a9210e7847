//! End-to-end runs of the `koszul` binary.

use std::path::Path;
use std::process::Command;

use serde_json::Value;

struct Run {
    code: i32,
    stdout: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", self.stdout))
    }

    fn result(&self) -> Value {
        assert_eq!(self.code, 0, "{}", self.stdout);
        self.json()["result"].clone()
    }
}

fn koszul_env(args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_koszul"));
    cmd.args(args).env_remove("KOSZUL_SEED");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    Run { code: out.status.code().expect("exit code"), stdout: String::from_utf8(out.stdout).expect("utf-8") }
}

fn koszul(args: &[&str]) -> Run {
    koszul_env(args, &[])
}

fn write(dir: &Path, name: &str, doc: &Value) -> String {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(doc).unwrap()).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn bimetric_on_so3_uses_the_killing_form() {
    let r = koszul(&["invariants", "--catalog", "so3", "--which", "bimetric"]).result();
    assert_eq!(r["exists"], "yes");
    assert_eq!(r["witness"], "killing");
    assert_eq!(r["value"], 0);
}

#[test]
fn tower_dimensions() {
    let r = koszul(&["flat-models", "tower", "--m", "1", "--steps", "3"]).result();
    assert_eq!(r["dims"], serde_json::json!([1, 2, 6, 42]));
    assert_eq!(r["associative"], serde_json::json!([null, true, true, true]));
}

#[test]
fn jacobi_violation_exits_with_the_failing_triple() {
    let dir = tempfile::tempdir().unwrap();
    let bad = serde_json::json!({"dim": 3, "bracket": [[0, 1, 1, "1"], [1, 2, 0, "1"]]});
    let path = write(dir.path(), "bad.json", &bad);
    let run = koszul(&["check-lie", "--algebra", &path]);
    assert_eq!(run.code, 2);
    let err = &run.json()["error"];
    assert_eq!(err["kind"], "JacobiViolation");
    assert_eq!(err["witness"], serde_json::json!([0, 1, 2]));
}

#[test]
fn validation_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let diag = serde_json::json!({"dim": 2, "bracket": [[0, 0, 1, "1"]]});
    let path = write(dir.path(), "diag.json", &diag);
    let run = koszul(&["check-lie", "--algebra", &path]);
    assert_eq!(run.code, 2);
    assert_eq!(run.json()["error"]["kind"], "NotSkew");

    let run = koszul(&["check-lie", "--algebra", "/nonexistent/algebra.json"]);
    assert_eq!(run.code, 2);
    assert_eq!(run.json()["error"]["kind"], "Io");

    let run = koszul(&["invariants", "--which", "bimetric"]);
    assert_eq!(run.code, 2);
    assert_eq!(run.json()["error"]["kind"], "Usage");

    let run = koszul(&["invariants", "--catalog", "so4", "--which", "bimetric"]);
    assert_eq!(run.code, 2);
    assert_eq!(run.json()["error"]["kind"], "Validation");

    // The +-connection of so(3) has torsion.
    let run = koszul(&["invariants", "--catalog", "so3", "--cartan", "plus", "--which", "s*b"]);
    assert_eq!(run.code, 2);
    assert_eq!(run.json()["error"]["kind"], "NotTorsionFree");
}

#[test]
fn clap_usage_errors_exit_2() {
    assert_eq!(koszul(&["invariants", "--catalog", "so3", "--which", "nope"]).code, 2);
    assert_eq!(koszul(&["no-such-command"]).code, 2);
}

#[test]
fn reports_are_deterministic() {
    let args = ["invariants", "--catalog", "abelian:4", "--cartan", "minus", "--which", "s*b", "--samples", "8"];
    let a = koszul(&args);
    let b = koszul(&args);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.contains("timing_ms"));

    // The environment seed is the default for --seed.
    let with_flag = koszul(&["invariants", "--catalog", "sl2", "--which", "sb", "--seed", "99"]).json();
    let with_env = koszul_env(&["invariants", "--catalog", "sl2", "--which", "sb"], &[("KOSZUL_SEED", "99")]).json();
    assert_eq!(with_flag["seed"], 99);
    assert_eq!(with_env["seed"], 99);
    assert_eq!(with_flag["result"], with_env["result"]);
    assert_eq!(with_flag["inputs_digest"], with_env["inputs_digest"]);
}

#[test]
fn timing_is_opt_in() {
    let r = koszul(&["catalog", "--timing"]).json();
    assert!(r["timing_ms"].as_f64().is_some());
}

#[test]
fn digest_depends_on_content_not_formatting() {
    let dir = tempfile::tempdir().unwrap();
    let compact = dir.path().join("compact.json");
    std::fs::write(&compact, r#"{"dim":3,"bracket":[[0,1,2,"1"],[1,2,0,"1"],[2,0,1,"1"]]}"#).unwrap();
    let spaced = dir.path().join("spaced.json");
    std::fs::write(&spaced, "{ \"dim\": 3,\n \"bracket\": [ [2,0,1,\"2/2\"], [0,1,2,\"1\"], [1,2,0,\"1\"] ] }\n").unwrap();
    let a = koszul(&["check-lie", "--algebra", compact.to_str().unwrap()]).json();
    let b = koszul(&["check-lie", "--algebra", spaced.to_str().unwrap()]).json();
    let c = koszul(&["check-lie", "--catalog", "so3"]).json();
    assert_eq!(a["inputs_digest"], b["inputs_digest"]);
    assert_eq!(a["inputs_digest"], c["inputs_digest"]);
    let d = koszul(&["check-lie", "--catalog", "sl2"]).json();
    assert_ne!(a["inputs_digest"], d["inputs_digest"]);
}

/// Writes every dumped document to a file, feeds it back through its flag and
/// checks the second dump is identical.
fn assert_round_trip(first: &[&str]) {
    let dir = tempfile::tempdir().unwrap();
    let mut args: Vec<String> = first.iter().map(|s| s.to_string()).collect();
    args.push("--dump".into());
    let run = koszul(&args.iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!(run.code, 0, "{}", run.stdout);
    let docs = run.json();
    let docs = docs.as_object().expect("dump is an object");
    assert!(!docs.is_empty());

    let mut again: Vec<String> = vec![first[0].to_string()];
    let mut rest = first[1..].iter().peekable();
    // Keep the non-input flags, drop the catalog the documents replace.
    while let Some(a) = rest.next() {
        if *a == "--catalog" || *a == "--cartan" {
            rest.next();
        } else {
            again.push(a.to_string());
        }
    }
    for (label, doc) in docs {
        again.push(format!("--{label}"));
        again.push(write(dir.path(), &format!("{label}.json"), doc));
    }
    again.push("--dump".into());
    let second = koszul(&again.iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!(second.code, 0, "{}", second.stdout);
    assert_eq!(&second.json(), &Value::Object(docs.clone()), "{again:?}");
}

#[test]
fn dumped_documents_reload_exactly() {
    assert_round_trip(&["check-lie", "--catalog", "heisenberg"]);
    assert_round_trip(&["check-lie", "--catalog", "affine:1"]);
    assert_round_trip(&["invariants", "--catalog", "so3", "--cartan", "zero", "--which", "rb"]);
    assert_round_trip(&["gauge", "--catalog", "sl2", "--cartan", "zero", "--op", "fe"]);
    assert_round_trip(&["spencer", "--catalog", "so3", "--op", "cohomology"]);
    assert_round_trip(&["spencer", "--catalog", "cauchy-riemann", "--op", "prolong"]);
}

#[test]
fn dumped_metric_and_ideal_reload_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let metric = serde_json::json!({"dim": 3, "sym": "symmetric", "entries": [[0, 0, "2"], [1, 0, "1/3"], [1, 1, "1"], [2, 2, "-5/7"]]});
    let metric = write(dir.path(), "metric.json", &metric);
    let docs = koszul(&["invariants", "--catalog", "so3", "--metric", &metric, "--which", "sb", "--dump"]).json();
    let reloaded = write(dir.path(), "metric2.json", &docs["metric"]);
    let again = koszul(&["invariants", "--catalog", "so3", "--metric", &reloaded, "--which", "sb", "--dump"]).json();
    assert_eq!(docs, again);
    assert_eq!(docs["metric"]["entries"][1], serde_json::json!([0, 1, "1/3"]));

    let ideal = serde_json::json!({"dim": 4, "basis": [["2", "0", "0", "0"], ["0", "4/2", "0", "0"]]});
    let ideal = write(dir.path(), "ideal.json", &ideal);
    let docs = koszul(&["flat-models", "ideal", "--catalog", "matrix:2", "--ideal", &ideal, "--dump"]).json();
    let reloaded = write(dir.path(), "ideal2.json", &docs["ideal"]);
    let again = koszul(&["flat-models", "ideal", "--catalog", "matrix:2", "--ideal", &reloaded, "--dump"]).json();
    assert_eq!(docs, again);
}

#[test]
fn subcommands_produce_expected_payloads() {
    let r = koszul(&["gauge", "--catalog", "heisenberg", "--op", "fe-star"]).result();
    assert_eq!((r["dim_solution"].as_u64(), r["r_b"].as_u64()), (Some(12), Some(3)));

    let r = koszul(&["kv-cohomology", "--catalog", "so3", "--complex", "ce", "--coeffs", "scalar"]).result();
    assert_eq!(r["cohomology"], serde_json::json!([1, 0, 0, 1]));

    let r = koszul(&["kv-cohomology", "--catalog", "zero:2", "--coeffs", "scalar"]).result();
    assert_eq!(r["cohomology"], serde_json::json!([0, 2, 4, 8]));

    let r = koszul(&["spencer", "--catalog", "so3", "--op", "involutive", "--trials", "16"]).result();
    assert_eq!(r["involutive"], "no");

    let r = koszul(&["flat-models", "completeness", "--catalog", "affine:1"]).result();
    assert_eq!(r["verdict"], "incomplete");
    assert_eq!(r["det"], "0");

    let r = koszul(&["statmodel", "--family", "bernoulli", "--op", "fisher", "--theta", "0.5"]).result();
    assert!((r["fisher"][0][0].as_f64().unwrap() - 4.0).abs() < 1e-6);

    let r = koszul(&["statmodel", "--family", "curved4", "--op", "defect"]).result();
    assert_eq!(r["exponential_like"], false);

    let r = koszul(&["statmodel", "--family", "categorical-natural:3", "--op", "alpha", "--alpha", "-1", "--theta", "0.2,-0.4"])
        .result();
    assert!(r["max_abs_lowered"].as_f64().unwrap() < 1e-5);
}

#[test]
fn statmodel_rejects_points_outside_the_domain() {
    let run = koszul(&["statmodel", "--family", "bernoulli", "--op", "fisher", "--theta", "1.5"]);
    assert_eq!(run.code, 2);
    assert_eq!(run.json()["error"]["kind"], "DomainViolation");
    let run = koszul(&["statmodel", "--family", "bernoulli", "--op", "fisher", "--theta", "0.1,0.2"]);
    assert_eq!(run.json()["error"]["kind"], "DimensionMismatch");
}

#[test]
fn text_format_renders_a_table() {
    let run = koszul(&["flat-models", "tower", "--m", "2", "--steps", "2", "--format", "text"]);
    assert_eq!(run.code, 0);
    assert!(run.stdout.contains("dims"));
    assert!(run.stdout.contains("[2, 6, 42]"));
}
