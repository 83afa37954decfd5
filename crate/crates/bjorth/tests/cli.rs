//! End-to-end tests of the command-line interface: exit codes, report
//! formats, and the agreement between text and JSON output.

use std::path::{Path, PathBuf};
use std::process::Output;

fn fixture_dir(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn bjorth(args: &[&str]) -> Output {
    std::process::Command::new(env!("CARGO_BIN_EXE_bjorth"))
        .args(args)
        .output()
        .unwrap()
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("process terminated by signal")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

const L2_2D: &str = r#"{"dim": 2, "norm": {"type": "lp", "p": 2.0}}"#;
const LINF_2D: &str = r#"{"dim": 2, "norm": {"type": "lp", "p": "inf"}}"#;
const AXIS_PENCIL: &str = r#"{"x": [1.0, 0.0], "y": [0.0, 1.0]}"#;

#[test]
fn check_ortho_reports_true_for_perpendicular_axes() {
    let dir = fixture_dir("cli-check-ortho");
    let space = write(&dir, "space.json", L2_2D);
    let input = write(&dir, "pair.json", r#"{"u": [1.0, 0.0], "v": [0.0, 1.0]}"#);
    let out = bjorth(&[
        "check-ortho",
        "--space",
        space.to_str().unwrap(),
        "--input",
        input.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("orthogonal: true"), "{text}");
}

#[test]
fn interval_finds_the_sup_norm_segment() {
    let dir = fixture_dir("cli-interval");
    let space = write(&dir, "space.json", LINF_2D);
    let input = write(&dir, "pencil.json", AXIS_PENCIL);
    let out = bjorth(&[
        "interval",
        "--space",
        space.to_str().unwrap(),
        "--input",
        input.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(exit_code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report = stdout_json(&out);
    assert_eq!(report["command"], "interval");
    assert_eq!(report["result"]["kind"], "interval");
    let m = report["result"]["m"].as_f64().unwrap();
    let cap = report["result"]["M"].as_f64().unwrap();
    assert!((m + 1.0).abs() <= 1e-9, "m = {m}");
    assert!((cap - 1.0).abs() <= 1e-9, "M = {cap}");
}

#[test]
fn reconstruct_rejects_alpha_inside_the_interval() {
    let dir = fixture_dir("cli-reconstruct-inside");
    let space = write(&dir, "space.json", L2_2D);
    let input = write(&dir, "pencil.json", AXIS_PENCIL);
    let out = bjorth(&[
        "reconstruct",
        "--space",
        space.to_str().unwrap(),
        "--input",
        input.to_str().unwrap(),
        "--alpha",
        "0",
    ]);
    assert_eq!(exit_code(&out), 4, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn malformed_inputs_exit_2() {
    let dir = fixture_dir("cli-malformed");
    let good_space = write(&dir, "space.json", L2_2D);
    let good_input = write(&dir, "pair.json", r#"{"u": [1.0, 0.0], "v": [0.0, 1.0]}"#);
    let broken = write(&dir, "broken.json", "{not json");
    let bad_p = write(&dir, "badp.json", r#"{"dim": 2, "norm": {"type": "lp", "p": 0.5}}"#);
    let nonfinite = write(&dir, "nan.json", r#"{"u": [1.0, null], "v": [0.0, 1.0]}"#);
    let ragged = write(
        &dir,
        "ragged.json",
        r#"{"matrix": [[1.0, 0.0], [0.0]]}"#,
    );
    let absent = dir.join("absent.json");
    let cases: Vec<Vec<&str>> = vec![
        vec!["check-ortho", "--space", broken.to_str().unwrap(), "--input", good_input.to_str().unwrap()],
        vec!["check-ortho", "--space", bad_p.to_str().unwrap(), "--input", good_input.to_str().unwrap()],
        vec!["check-ortho", "--space", good_space.to_str().unwrap(), "--input", nonfinite.to_str().unwrap()],
        vec!["classify-operator", "--space", good_space.to_str().unwrap(), "--input", ragged.to_str().unwrap()],
        vec!["check-ortho", "--space", absent.to_str().unwrap(), "--input", good_input.to_str().unwrap()],
    ];
    for args in cases {
        let out = bjorth(&args);
        assert_eq!(
            exit_code(&out),
            2,
            "args {args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(!out.stderr.is_empty(), "args {args:?}: silent failure");
    }
}

#[test]
fn dimension_mismatch_exits_3() {
    let dir = fixture_dir("cli-dimension");
    let space = write(&dir, "space.json", L2_2D);
    let input = write(&dir, "pair.json", r#"{"u": [1.0, 0.0, 0.0], "v": [0.0, 1.0, 0.0]}"#);
    let out = bjorth(&[
        "check-ortho",
        "--space",
        space.to_str().unwrap(),
        "--input",
        input.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 3, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn precondition_violations_exit_4() {
    let dir = fixture_dir("cli-precondition");
    let space = write(&dir, "space.json", L2_2D);
    let zero_u = write(&dir, "zero.json", r#"{"u": [0.0, 0.0], "v": [0.0, 1.0]}"#);
    let out = bjorth(&[
        "check-ortho",
        "--space",
        space.to_str().unwrap(),
        "--input",
        zero_u.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 4, "{}", String::from_utf8_lossy(&out.stderr));

    let dependent = write(&dir, "dependent.json", r#"{"x": [1.0, 2.0], "y": [2.0, 4.0]}"#);
    let out = bjorth(&[
        "interval",
        "--space",
        space.to_str().unwrap(),
        "--input",
        dependent.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 4, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn json_reports_round_trip() {
    let dir = fixture_dir("cli-roundtrip");
    let space = write(&dir, "space.json", L2_2D);
    let input = write(&dir, "pencil.json", AXIS_PENCIL);
    for command in ["interval", "companion", "reconstruct"] {
        let mut args = vec![
            command,
            "--space",
            space.to_str().unwrap(),
            "--input",
            input.to_str().unwrap(),
            "--format",
            "json",
        ];
        if command != "interval" {
            args.extend(["--alpha", "1.5"]);
        }
        let out = bjorth(&args);
        assert_eq!(exit_code(&out), 0, "{command}: {}", String::from_utf8_lossy(&out.stderr));
        let parsed = stdout_json(&out);
        let reparsed: serde_json::Value =
            serde_json::from_str(&serde_json::to_string(&parsed).unwrap()).unwrap();
        assert_eq!(parsed, reparsed, "{command} report does not round-trip");
        assert_eq!(parsed["command"], command);
        assert!(parsed["space"].is_object(), "{command} report lacks the space");
    }
}

#[test]
fn text_and_json_agree_on_numeric_fields() {
    let dir = fixture_dir("cli-agreement");
    let space = write(&dir, "space.json", L2_2D);
    let input = write(&dir, "pencil.json", AXIS_PENCIL);
    let base = [
        "reconstruct",
        "--space",
        space.to_str().unwrap(),
        "--input",
        input.to_str().unwrap(),
        "--alpha",
        "1.5",
    ];
    let mut text_args = base.to_vec();
    text_args.extend(["--format", "text"]);
    let mut json_args = base.to_vec();
    json_args.extend(["--format", "json"]);
    let text_out = bjorth(&text_args);
    let json_out = bjorth(&json_args);
    assert_eq!(exit_code(&text_out), 0);
    assert_eq!(exit_code(&json_out), 0);
    let report = stdout_json(&json_out);
    let text = String::from_utf8(text_out.stdout).unwrap();
    for field in ["alpha", "reconstructed", "direct", "rel_error"] {
        let from_json = report["result"][field].as_f64().unwrap();
        let line = text
            .lines()
            .find(|l| l.trim_start().starts_with(&format!("{field}:")))
            .unwrap_or_else(|| panic!("text output lacks {field}: {text}"));
        let from_text: f64 = line.split(':').nth(1).unwrap().trim().parse().unwrap();
        let tol = 1e-11 * from_json.abs().max(1e-12);
        assert!(
            (from_text - from_json).abs() <= tol,
            "{field}: text {from_text} vs json {from_json}"
        );
    }
}

#[test]
fn classify_operator_accepts_weighted_and_polyhedral_spaces() {
    let dir = fixture_dir("cli-spaces");
    let weighted = write(
        &dir,
        "weighted.json",
        r#"{"dim": 2, "norm": {"type": "weighted_lp", "p": 2.0, "weights": [1.0, 4.0]}}"#,
    );
    let polyhedral = write(
        &dir,
        "polyhedral.json",
        r#"{"dim": 2, "norm": {"type": "polyhedral", "generators": [[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]}}"#,
    );
    let identity = write(&dir, "identity.json", r#"{"matrix": [[1.0, 0.0], [0.0, 1.0]]}"#);
    for space in [&weighted, &polyhedral] {
        let out = bjorth(&[
            "classify-operator",
            "--space",
            space.to_str().unwrap(),
            "--input",
            identity.to_str().unwrap(),
            "--pairs",
            "50",
            "--format",
            "json",
        ]);
        assert_eq!(exit_code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        let report = stdout_json(&out);
        assert_eq!(report["result"]["verdict"]["preserves"]["outcome"], "preserves");
        assert_eq!(report["diagnostics"]["seed"], 0);
    }
}

#[test]
fn theorem_suite_flags_inconsistency_with_exit_5() {
    // A rank-one projection preserves sampled orthogonality trivially on its
    // image but fails the ratio test, so the verdict is inconsistent.
    let dir = fixture_dir("cli-inconsistent");
    let space = write(&dir, "space.json", L2_2D);
    let projection = write(&dir, "projection.json", r#"{"matrix": [[1.0, 0.0], [0.0, 0.0]]}"#);
    let out = bjorth(&[
        "classify-operator",
        "--space",
        space.to_str().unwrap(),
        "--input",
        projection.to_str().unwrap(),
        "--pairs",
        "60",
        "--format",
        "json",
    ]);
    let report = stdout_json(&out);
    if report["result"]["verdict"]["inconsistent"] == serde_json::Value::Bool(true) {
        assert_eq!(exit_code(&out), 5, "{}", String::from_utf8_lossy(&out.stderr));
    } else {
        assert_eq!(exit_code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn batch_runs_each_job_with_its_own_format() {
    let dir = fixture_dir("cli-batch");
    let jobs = write(
        &dir,
        "jobs.json",
        r#"[
  {"command": "interval", "space": {"dim": 2, "norm": {"type": "lp", "p": "inf"}},
   "input": {"x": [1.0, 0.0], "y": [0.0, 1.0]}},
  {"command": "check-ortho", "space": {"dim": 2, "norm": {"type": "lp", "p": 2.0}},
   "inputs": {"u": [1.0, 0.0], "v": [0.0, 1.0]}, "output_format": "text"},
  {"command": "companion", "space": {"dim": 2, "norm": {"type": "lp", "p": 2.0}},
   "input": {"x": [1.0, 0.0], "y": [0.0, 1.0]}, "alpha": 2.0}
]"#,
    );
    let out = bjorth(&["batch", "--jobs", jobs.to_str().unwrap(), "--format", "json"]);
    assert_eq!(exit_code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let blocks: Vec<&str> = text.split("\n---\n").collect();
    assert_eq!(blocks.len(), 3, "{text}");
    let first: serde_json::Value = serde_json::from_str(blocks[0]).unwrap();
    assert_eq!(first["command"], "interval");
    assert!(blocks[1].contains("orthogonal: true"), "{}", blocks[1]);
    let third: serde_json::Value = serde_json::from_str(blocks[2]).unwrap();
    assert_eq!(third["result"]["status"], "value");
}

#[test]
fn batch_reports_failing_jobs_and_keeps_going() {
    let dir = fixture_dir("cli-batch-errors");
    let jobs = write(
        &dir,
        "jobs.json",
        r#"[
  {"command": "reconstruct", "space": {"dim": 2, "norm": {"type": "lp", "p": 2.0}},
   "input": {"x": [1.0, 0.0], "y": [0.0, 1.0]}, "alpha": 0.0},
  {"command": "interval", "space": {"dim": 2, "norm": {"type": "lp", "p": 2.0}},
   "input": {"x": [1.0, 0.0], "y": [0.0, 1.0]}}
]"#,
    );
    let out = bjorth(&["batch", "--jobs", jobs.to_str().unwrap(), "--format", "json"]);
    assert_eq!(
        exit_code(&out),
        4,
        "first failure should set the exit code: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    let blocks: Vec<&str> = text.split("\n---\n").collect();
    assert_eq!(blocks.len(), 2, "{text}");
    let second: serde_json::Value = serde_json::from_str(blocks[1]).unwrap();
    assert_eq!(second["result"]["kind"], "interval");
}
