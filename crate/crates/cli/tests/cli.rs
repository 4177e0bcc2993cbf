//! End-to-end tests of the `qclab` binary: the documented invocations,
//! determinism of the emitted bytes, exit codes, and the matrix-file
//! round trip.

use std::process::{Command, Output};

fn qclab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qclab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_report(args: &[&str]) -> serde_json::Value {
    let out = qclab(args);
    assert!(
        out.status.success(),
        "qclab {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON envelope")
}

#[test]
fn eval_orbit_sum_example() {
    let v = json_report(&[
        "eval", "--w", "ab", "--rep", "regular:2", "--e", "1:1", "--g", "abababab",
    ]);
    assert_eq!(v["schema"], "qclab-v1");
    assert_eq!(v["command"], "eval");
    assert_eq!(v["config"]["w"], "ab");
    assert_eq!(v["report"]["support_size"], 4);
    assert_eq!(v["report"]["norm"]["Exact"]["pow"], "4");
    let vector = v["report"]["vector"].as_object().unwrap();
    let keys: Vec<&String> = vector.keys().collect();
    assert_eq!(keys, ["1", "ab", "abab", "ababab"]);
}

#[test]
fn vanish_example_is_exactly_zero() {
    let v = json_report(&[
        "vanish",
        "--w", "a^5b^5a^7b^7",
        "--rep", "regular:2",
        "--e", "1:1",
        "--subgroup", "a^2,b",
        "--samples", "10000",
        "--maxlen", "200",
        "--seed", "7",
    ]);
    assert_eq!(v["report"]["exact_zero"], true);
    assert_eq!(v["report"]["max_norm"]["Exact"]["pow"], "0");
}

#[test]
fn defect_example_stays_within_bound() {
    let out = qclab(&[
        "defect", "--w", "ab", "--rep", "trivial", "--e", "1", "--exact-radius", "4",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["report"]["bound"]["Exact"]["pow"], "12");
    assert_eq!(v["report"]["bound"]["Exact"]["p"], 1);
    let observed = v["report"]["observed_decimal"].as_f64().unwrap();
    assert!(observed <= 12.0);
}

#[test]
fn identical_argv_gives_identical_bytes() {
    for args in [
        vec![
            "vanish", "--w", "ab", "--rep", "regular:2", "--e", "1:1", "--subgroup", "a",
            "--samples", "200", "--maxlen", "40", "--seed", "5",
        ],
        vec![
            "defect", "--w", "ab", "--rep", "regular:2", "--e", "1:1", "--maxlen", "8",
            "--count", "500", "--seed", "3",
        ],
        vec![
            "greedy", "--w", "aba", "--rep", "regular:2", "--e", "1:1", "--steps", "5",
            "--y-radius", "1",
        ],
        vec!["growth", "--w", "ab", "--rep", "regular:inf", "--family", "harmonic", "--n", "6"],
        vec![
            "independence", "--m-list", "1,5", "--rep", "trivial", "--e", "1", "--witnesses",
            "3", "--seed", "2",
        ],
        vec!["eval", "--w", "ab", "--rep", "regular:3", "--e", "1:2/3;b:-1", "--g", "aBab^2"],
        vec!["u2", "--seed", "6", "--denom-bound", "25"],
        vec!["ucheck", "--space", "l2:4", "--r", "2", "--trials", "3000", "--seed", "8"],
    ] {
        let first = qclab(&args);
        let second = qclab(&args);
        assert!(first.status.success(), "{args:?}");
        assert_eq!(first.stdout, second.stdout, "nondeterministic output for {args:?}");
    }
    // and independent of the thread count
    let one = qclab(&[
        "--threads", "1", "defect", "--w", "ab", "--rep", "trivial", "--e", "1",
        "--exact-radius", "4",
    ]);
    let many = qclab(&[
        "--threads", "2", "defect", "--w", "ab", "--rep", "trivial", "--e", "1",
        "--exact-radius", "4",
    ]);
    assert_eq!(one.stdout, many.stdout);
}

#[test]
fn csv_carries_the_versioned_header() {
    let out = qclab(&[
        "growth", "--w", "ab", "--rep", "regular:inf", "--family", "harmonic", "--n", "4",
        "--format", "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# qclab-v1 growth"));
    assert_eq!(lines.next(), Some("n,norm_decimal,norm_exact,coordinate,certified_bound,exceeded"));
    let n4 = text.lines().find(|l| l.starts_with("4,")).unwrap();
    assert!(n4.contains("25/12"), "harmonic row: {n4}");
}

#[test]
fn usage_errors_exit_2() {
    // unknown letter in the pattern
    let out = qclab(&["eval", "--w", "ac", "--rep", "trivial", "--e", "1", "--g", "a"]);
    assert_eq!(out.status.code(), Some(2));
    // pattern not cyclically reduced
    let out = qclab(&["eval", "--w", "abA", "--rep", "trivial", "--e", "1", "--g", "a"]);
    assert_eq!(out.status.code(), Some(2));
    // missing defect mode
    let out = qclab(&["defect", "--w", "ab", "--rep", "trivial", "--e", "1"]);
    assert_eq!(out.status.code(), Some(2));
    // radius guard without --force
    let out = qclab(&[
        "defect", "--w", "ab", "--rep", "trivial", "--e", "1", "--exact-radius", "7",
    ]);
    assert_eq!(out.status.code(), Some(2));
    // clap-level: unknown flag
    let out = qclab(&["eval", "--nope"]);
    assert_eq!(out.status.code(), Some(2));
    // vector literal in the wrong backend syntax
    let out = qclab(&["eval", "--w", "ab", "--rep", "regular:2", "--e", "1", "--g", "a"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn u2_report_round_trips_as_a_matrix_file() {
    let v = json_report(&["u2", "--seed", "11", "--denom-bound", "20"]);
    let rep = &v["report"]["rep"];
    assert_eq!(rep["dim"], 2);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rep.json");
    std::fs::write(&path, serde_json::to_string(rep).unwrap()).unwrap();

    let matrix_arg = format!("matrix:{}", path.display());
    let direct = json_report(&[
        "eval", "--w", "ab", "--rep", "u2:11:20", "--e", "1,0", "--g", "ababab",
    ]);
    let via_file = json_report(&[
        "eval", "--w", "ab", "--rep", &matrix_arg, "--e", "1,0", "--g", "ababab",
    ]);
    assert_eq!(direct["report"]["vector"], via_file["report"]["vector"]);
}

#[test]
fn out_flag_writes_the_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = qclab(&[
        "eval", "--w", "ab", "--rep", "trivial", "--e", "1", "--g", "abab", "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["report"]["vector"], "2");
}

#[test]
fn ucheck_negative_control_reports_violations() {
    let clean = json_report(&[
        "ucheck", "--space", "l2:8", "--r", "1", "--trials", "20000", "--seed", "9",
    ]);
    assert_eq!(clean["report"]["violations_total"], 0);
    let control = json_report(&[
        "ucheck", "--space", "l2:8", "--r", "1", "--trials", "20000", "--seed", "9",
        "--mu-scale", "100",
    ]);
    assert!(control["report"]["violations_total"].as_u64().unwrap() >= 1);
}
