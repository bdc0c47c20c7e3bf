use std::io::Write as _;
use std::process::{Command, Output};

fn indyn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_indyn"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn def_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

const FIG1: &str = r#"{
    "system": {"generator": "zoo", "name": "fig1", "params": {"q": 16}},
    "measures": {
        "a": [{"point": "-1/2", "num": 1, "den": 1}],
        "b": [{"point": "-1/2", "num": 1, "den": 2}, {"point": "1/2", "num": 1, "den": 2}]
    }
}"#;

#[test]
fn list_names_every_scenario_without_numbered_references() {
    let o = indyn(&["--list", "--format", "text"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for name in ["prohorov_oracle", "thm38_nonshadowing", "entropy"] {
        assert!(text.contains(name));
    }
    assert!(!text.contains("Thm") && !text.contains("Lemma") && !text.contains("Example"));
}

#[test]
fn single_scenario_passes_with_overrides() {
    let o = indyn(&["--scenario", "ex34_no_chain", "--param", "delta=3/10"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["scenarios"][0]["status"], "pass");
    assert_eq!(v["seed"], 0);
}

#[test]
fn lemma21_with_more_trials_and_other_seed() {
    let o = indyn(&["--scenario", "lemma21", "--param", "trials=500", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(indyn(&["--scenario", "nope"]).status.code(), Some(2));
    assert_eq!(
        indyn(&["--scenario", "lemma21", "--param", "bogus=1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        indyn(&["--scenario", "lemma21", "--param", "trials=1/2"]).status.code(),
        Some(2)
    );
    assert_eq!(indyn(&["--param", "noequals"]).status.code(), Some(2));
    assert_eq!(indyn(&["--format", "xml"]).status.code(), Some(2));
}

#[test]
fn expectation_failure_exits_1() {
    // a window that excludes the estimate must fail, not pass silently
    let o = indyn(&[
        "--scenario",
        "entropy",
        "--grid",
        "256",
        "--param",
        "n_max=6",
        "--param",
        "lo=0.9",
        "--param",
        "hi=1",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["scenarios"][0]["status"], "fail");
}

#[test]
fn identical_runs_give_identical_verdicts() {
    let args = [
        "--scenario",
        "thm38_nonshadowing",
        "--scenario",
        "prohorov_oracle",
        "--seed",
        "3",
    ];
    let strip = |o: Output| {
        let mut v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        v.as_object_mut().unwrap().remove("timings_ms");
        v
    };
    let a = strip(indyn(&args));
    let b = strip(indyn(&[&args[..], &["--jobs", "2"]].concat()));
    assert_eq!(a, b);
    assert_eq!(a["scenarios"][0]["name"], "prohorov_oracle");
}

#[test]
fn csv_export_has_the_curve_columns() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("curve.csv");
    let o = indyn(&[
        "--scenario",
        "entropy",
        "--grid",
        "256",
        "--param",
        "n_max=4",
        "--param",
        "lo=0",
        "--param",
        "hi=1",
        "--csv",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("eps,n,a_n,s_n,method,rate"));
    assert_eq!(lines.count(), 5 * 4);
}

#[test]
fn orbit_query_from_minus_half() {
    let f = def_file(FIG1);
    let o = indyn(&[
        "orbit",
        "--def",
        f.path().to_str().unwrap(),
        "--from",
        "-1/2",
        "--steps",
        "5",
        "--format",
        "text",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "-1/2 -> 1 -> -1 -> 0 -> 0 -> 0");
}

#[test]
fn prohorov_query_prints_exact_and_float() {
    let f = def_file(FIG1);
    let o = indyn(&[
        "prohorov",
        "--def",
        f.path().to_str().unwrap(),
        "--mu",
        "a",
        "--nu",
        "b",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["result"]["distance"], serde_json::json!({"num": 1, "den": 2}));
    assert_eq!(v["result"]["float"], 0.5);
    assert_eq!(v["result"]["oracle_checked"], true);
}

#[test]
fn entropy_query_of_swap_is_zero() {
    let f = def_file(r#"{"system": {"generator": "zoo", "name": "swap2"}}"#);
    let o = indyn(&["entropy", "--def", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["result"]["estimate"], 0.0);
}

#[test]
fn remaining_queries_run() {
    let f = def_file(FIG1);
    let p = f.path().to_str().unwrap();
    for args in [
        vec!["chain", "--def", p, "--from", "0", "--to", "1", "--delta", "1/4"],
        vec!["shadowing", "--def", p, "--delta", "1/8", "--eps", "1/4"],
        vec![
            "sensitivity",
            "--def",
            p,
            "--x",
            "1/4",
            "--eps",
            "1/4",
            "--delta",
            "1/2",
            "--horizon",
            "40",
        ],
        vec!["pairstats", "--def", p, "--x", "1/4", "--y", "3/8", "--horizon", "50"],
    ] {
        let o = indyn(&args);
        assert!(
            matches!(o.status.code(), Some(0) | Some(3)),
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
}

#[test]
fn malformed_definition_reports_position() {
    let f = def_file("{\n  \"system\": {\"generator\": \"zoo\",\n  \"name\": swap2}\n}");
    let o = indyn(&["orbit", "--def", f.path().to_str().unwrap(), "--from", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}
