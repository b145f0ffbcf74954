use std::path::{Path, PathBuf};
use std::process::Command;

use qlat::files::{FactorizationFile, FunctionFile};
use qlat::{fixtures, FunctionTable};
use serde_json::Value;
use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).expect("stdout is a JSON report")
    }

    fn result(&self) -> Value {
        self.json()["result"].clone()
    }
}

fn qlat(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_qlat"))
        .args(args)
        .env_remove("QLAT_BUDGET")
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().expect("exited normally"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn write_function(dir: &TempDir, name: &str, f: &FunctionTable) -> PathBuf {
    write(dir, name, &serde_json::to_string(&FunctionFile::from_table(f)).unwrap())
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn classify_xor() {
    let dir = TempDir::new().unwrap();
    let f = write_function(&dir, "xor.json", &fixtures::xor());
    let run = qlat(&["classify", "-f", s(&f)]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let r = run.result();
    assert_eq!(r["predicates"]["polynomial"], false);
    assert_eq!(r["predicates"]["quasi_polynomial"], false);
    assert!(r["predicates"]["quasi_polynomial_witness"].is_object());
    assert_eq!(r["hat_dnf"], serde_json::json!([0, 0, 0, 1]));
    assert_eq!(r["hat_cnf"], serde_json::json!([0, 1, 1, 1]));
    assert_eq!(run.json()["exit_status"], 0);
}

#[test]
fn classify_median() {
    let dir = TempDir::new().unwrap();
    let f = write_function(&dir, "median.json", &fixtures::median3());
    let r = qlat(&["classify", "-f", s(&f)]).result();
    assert_eq!(r["predicates"]["polynomial"], true);
    assert_eq!(r["predicates"]["sugeno"], true);
    assert_eq!(r["predicates"]["median_decomposable"], true);
}

#[test]
fn classify_step_map_example() {
    let dir = TempDir::new().unwrap();
    let f = write_function(&dir, "step.json", &fixtures::quasi_idempotency_counterexample());
    let r = qlat(&["classify", "-f", s(&f)]).result();
    assert_eq!(r["predicates"]["quasi_polynomial"], true);
    assert_eq!(r["predicates"]["quasi_idempotent"], false);
    assert_eq!(r["predicates"]["transformed_polynomial"], false);
    assert!(r["canonical_factorization"].is_object());
}

#[test]
fn classify_reports_relabeling() {
    let dir = TempDir::new().unwrap();
    // rows: 0 = top, 1 = bottom
    let text = r#"{"arity":1,
        "domain":{"kind":"explicit","size":2,"leq":[[1,0],[1,1]]},
        "codomain":{"kind":"chain","size":2},
        "values":[1,0]}"#;
    let f = write(&dir, "explicit.json", text);
    let r = qlat(&["classify", "-f", s(&f)]).result();
    assert_eq!(r["relabeling"]["domain"], serde_json::json!([1, 0]));
    assert_eq!(r["relabeling"]["codomain"], Value::Null);
    // identity after relabeling
    assert_eq!(r["diagonal"], serde_json::json!([0, 1]));
}

#[test]
fn factorize_xor_fails_in_every_mode() {
    let dir = TempDir::new().unwrap();
    let f = write_function(&dir, "xor.json", &fixtures::xor());
    for mode in ["canonical", "sugeno", "transformed", "all"] {
        let run = qlat(&["factorize", "-f", s(&f), "--mode", mode]);
        assert_eq!(run.code, 1, "mode {mode}");
        let r = run.result();
        assert_eq!(r["exists"], false);
        assert_eq!(r["witness"]["type"], "coordinate", "mode {mode}");
    }
}

#[test]
fn factorize_median_sugeno_pins_endpoints() {
    let dir = TempDir::new().unwrap();
    let f = write_function(&dir, "median.json", &fixtures::median3());
    let out = dir.path().join("fact.json");
    let run = qlat(&["factorize", "-f", s(&f), "--mode", "sugeno", "-o", s(&out)]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let file: FactorizationFile = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let alpha = &file.p.alpha;
    assert_eq!(alpha[0], 0);
    assert_eq!(*alpha.last().unwrap(), 2);
    let fact = file.to_factorization().unwrap();
    assert_eq!(fact.compose().unwrap(), fixtures::median3());
}

#[test]
fn factorize_constant_all_includes_every_map() {
    let dir = TempDir::new().unwrap();
    let f = fixtures::constant3();
    let path = write_function(&dir, "const.json", &f);
    let out = dir.path().join("all.json");
    let run = qlat(&["factorize", "-f", s(&path), "--mode", "all", "-o", s(&out)]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let r = run.result();
    let files: Vec<FactorizationFile> = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(r["count"].as_u64().unwrap() as usize, files.len());
    let c = f.at(0);
    let constant: Vec<_> = files.iter().filter(|x| x.p.alpha.iter().all(|&a| a == c)).collect();
    // p ≡ c pairs with every bracket map on chain(3)
    let mut tables: Vec<_> = constant.iter().map(|x| x.phi.table.clone()).collect();
    tables.dedup();
    assert_eq!(tables.len(), constant.len());
    assert!(constant.len() >= 17);
    for x in &files {
        assert_eq!(x.to_factorization().unwrap().compose().unwrap(), f);
    }
}

#[test]
fn factorize_transformed_round_trip() {
    let dir = TempDir::new().unwrap();
    let f = write_function(&dir, "median.json", &fixtures::median3());
    let out = dir.path().join("t.json");
    let run = qlat(&["factorize", "-f", s(&f), "--mode", "transformed", "-o", s(&out)]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let file: FactorizationFile = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(file.to_factorization().unwrap().compose().unwrap(), fixtures::median3());
}

#[test]
fn enumerate_counts() {
    let cases = [
        ("polynomial", "chain:2", 6),
        ("polynomial", "chain:3", 20),
        ("sugeno", "chain:2", 4),
    ];
    for (class, lattice, expected) in cases {
        let run = qlat(&[
            "enumerate", "--arity", "2", "--domain", lattice, "--codomain", lattice, "--class", class, "--count-only",
        ]);
        assert_eq!(run.code, 0, "{}", run.stderr);
        let r = run.result();
        assert_eq!(r["count"], expected, "{class} on {lattice}");
        assert!(r.get("members").is_none());
    }
}

#[test]
fn enumerate_members_are_function_files() {
    let run = qlat(&[
        "enumerate",
        "--arity",
        "2",
        "--domain",
        r#"{"kind":"chain","size":2}"#,
        "--codomain",
        "chain:2",
        "--class",
        "quasi",
    ]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let r = run.result();
    let members: Vec<FunctionFile> = serde_json::from_value(r["members"].clone()).unwrap();
    assert_eq!(members.len() as u64, r["count"].as_u64().unwrap());
    for m in members {
        let t = m.to_table().unwrap();
        assert!(qlat::quasipoly::is_quasi_polynomial(&t).unwrap().holds(qlat::Property::QuasiPolynomial));
    }
}

#[test]
fn enumerate_polynomial_needs_one_lattice() {
    let run = qlat(&[
        "enumerate", "--arity", "2", "--domain", "chain:2", "--codomain", "chain:3", "--class", "polynomial",
    ]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("equal domain and codomain"));
}

#[test]
fn malformed_inputs_exit_2() {
    let dir = TempDir::new().unwrap();
    let truncated = write(&dir, "bad.json", "{\"arity\":2,\n\"values\":[0");
    let run = qlat(&["classify", "-f", s(&truncated)]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("line 2"), "{}", run.stderr);
    assert_eq!(run.json()["exit_status"], 2);

    let out_of_range = write(
        &dir,
        "range.json",
        r#"{"arity":1,"domain":{"kind":"chain","size":2},"codomain":{"kind":"chain","size":2},"values":[0,5]}"#,
    );
    let run = qlat(&["classify", "-f", s(&out_of_range)]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("values[1]"), "{}", run.stderr);

    let pentagon = write(
        &dir,
        "n5.json",
        r#"{"arity":1,"codomain":{"kind":"chain","size":2},"values":[0,0,0,0,0],
            "domain":{"kind":"explicit","size":5,"leq":[
              [1,1,1,1,1],[0,1,1,0,1],[0,0,1,0,1],[0,0,0,1,1],[0,0,0,0,1]]}}"#,
    );
    let run = qlat(&["factorize", "-f", s(&pentagon)]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("not distributive"), "{}", run.stderr);

    assert_eq!(qlat(&["classify", "-f", "/nonexistent/file.json"]).code, 2);
    assert_eq!(qlat(&["verify", "--max-elems", "9"]).code, 2);
    assert_eq!(qlat(&["verify", "--suite", "bogus"]).code, 2);
    assert_eq!(qlat(&["enumerate", "--arity", "2", "--domain", "chain:x", "--codomain", "chain:2", "--class", "quasi"]).code, 2);
}

#[test]
fn reports_are_byte_stable() {
    let dir = TempDir::new().unwrap();
    let f = write_function(&dir, "step.json", &fixtures::quasi_idempotency_counterexample());
    let a = qlat(&["classify", "-f", s(&f)]);
    let b = qlat(&["classify", "-f", s(&f)]);
    assert_eq!(a.stdout, b.stdout);
    let args = ["verify", "--suite", "core", "--max-elems", "2", "--max-arity", "2", "--samples", "500", "--seed", "7"];
    assert_eq!(qlat(&args).stdout, qlat(&args).stdout);
}

#[derive(Debug, PartialEq, serde::Serialize, serde::Deserialize)]
struct Report {
    command: Vec<String>,
    inputs: Vec<Digest>,
    result: Value,
    exit_status: i32,
}

#[derive(Debug, PartialEq, serde::Serialize, serde::Deserialize)]
struct Digest {
    name: String,
    source: String,
    sha256: String,
}

#[test]
fn report_round_trips() {
    let dir = TempDir::new().unwrap();
    let f = write_function(&dir, "xor.json", &fixtures::xor());
    let run = qlat(&["classify", "-f", s(&f)]);
    let report: Report = serde_json::from_str(&run.stdout).unwrap();
    assert_eq!(serde_json::to_string_pretty(&report).unwrap(), run.stdout.trim_end());
    assert_eq!(report.command, ["classify", "-f", s(&f)]);
    assert_eq!(report.inputs[0].sha256.len(), 64);
    assert_eq!(report.exit_status, run.code);
}

#[test]
fn verify_small_suites_pass() {
    for suite in ["core", "chains", "transformed"] {
        let run = qlat(&["verify", "--suite", suite, "--max-elems", "2", "--max-arity", "2", "--samples", "1000"]);
        assert_eq!(run.code, 0, "{suite}: {}", run.stdout);
        let r = run.result();
        assert_eq!(r["failed"], 0);
        assert!(r["checks"].as_u64().unwrap() > 0);
        let names: Vec<&str> = r["results"].as_array().unwrap().iter().map(|c| c["check"].as_str().unwrap()).collect();
        assert!(names.windows(2).all(|w| w[0] <= w[1]));
    }
}
