use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

const COB: &str = "inner:a=1,b=5,eps=b;outer:a=2,b=13,eps=b";

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_reeb-toolkit"));
    c.env_remove("REEB_TOOLKIT_JOBS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child =
        bin().args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn lines(o: &Output) -> Vec<Value> {
    String::from_utf8(o.stdout.clone())
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap_or_else(|e| panic!("{l}: {e}")))
        .collect()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn error_kind(o: &Output) -> String {
    let err: Value =
        serde_json::from_slice(&o.stderr).unwrap_or_else(|e| panic!("{:?}: {e}", String::from_utf8_lossy(&o.stderr)));
    assert!(err["error"]["message"].is_string());
    err["error"]["kind"].as_str().unwrap().to_string()
}

/// Data records and the trailing summary, with `elapsed` removed.
fn search(o: &Output) -> (Vec<Value>, Value) {
    let mut v = lines(o);
    let mut summary = v.pop().expect("summary record");
    assert!(summary["elapsed"].is_f64());
    summary.as_object_mut().unwrap().remove("elapsed");
    (v, summary)
}

#[test]
fn check_main_on_the_reference_cobordism() {
    let o = run(&["check-main", "--cobordism", COB, "--k", "4"]);
    assert_eq!(code(&o), 0);
    let v = &lines(&o)[0];
    assert_eq!(v["applicable"], true);
    assert_eq!(v["witness"]["l"], 4);
    assert_eq!(v["reasons"].as_array().unwrap().len(), 3);
}

#[test]
fn check_alt_reports_inapplicable_k() {
    let o = run(&["check-alt", "--cobordism", COB, "--k", "1"]);
    assert_eq!(code(&o), 2);
    assert_eq!(error_kind(&o), "invalid_argument");
    let o = run(&["check-alt", "--cobordism", COB, "--k", "3"]);
    assert_eq!(code(&o), 0);
    assert!(lines(&o)[0]["applicable"].is_boolean());
}

#[test]
fn integral_ratio_is_a_degenerate_tie() {
    let o = run(&["cz", "--ellipsoid", "a=1,b=5", "--orbit", "alpha,1"]);
    assert_eq!(code(&o), 3);
    assert_eq!(error_kind(&o), "degenerate_tie");
    assert!(o.stdout.is_empty());
    let json = r#"{"a": {"base": "2", "eps": "0"}, "b": {"base": "6", "eps": "0"}}"#;
    let o = run(&["spectrum", "--ellipsoid", json]);
    assert_eq!(code(&o), 3);
}

#[test]
fn fibonacci_value() {
    let o = run(&["fibonacci", "--n", "6"]);
    assert_eq!(code(&o), 0);
    assert_eq!(lines(&o)[0]["value"], 89);
    let o = run(&["--format", "table", "fibonacci", "--n", "6"]);
    assert!(String::from_utf8(o.stdout).unwrap().contains("value  89"));
}

#[test]
fn cz_coincidence() {
    let o = run(&["cz", "--ellipsoid", "a=1,b=13/2,eps=b", "--orbit", "alpha,13"]);
    assert_eq!(lines(&o)[0]["cz"], 29);
    let o = run(&["cz", "--ellipsoid", "a=1/7,b=4/7,eps=b", "--orbit", r#"{"gen": "alpha", "mult": 12}"#]);
    assert_eq!(lines(&o)[0]["cz"], 29);
}

#[test]
fn spectrum_is_ordered_by_rank() {
    let o = run(&["spectrum", "--ellipsoid", "a=1,b=5/2,eps=b", "--count", "8"]);
    let v = lines(&o);
    assert_eq!(v.len(), 8);
    for (i, r) in v.iter().enumerate() {
        assert_eq!(r["rank"], i as u64 + 1);
        assert_eq!(r["cz"], 2 * i as u64 + 3);
    }
    assert_eq!(v[2]["orbit"]["gen"], "beta");
}

#[test]
fn malformed_inputs_exit_2_with_json_error() {
    for args in [
        vec!["bogus"],
        vec!["cz", "--ellipsoid", "a=1", "--orbit", "alpha,1"],
        vec!["cz", "--ellipsoid", "a=1,b=5,eps=c", "--orbit", "alpha,1"],
        vec!["cz", "--ellipsoid", "a=1,b=5,eps=b", "--orbit", "gamma,1"],
        vec!["cz", "--ellipsoid", "a=1,b=5,eps=b", "--orbit", "alpha,0"],
        vec!["index", "--data", "{not json"],
        vec!["index", "--data", "@/nonexistent/file.json"],
        vec!["buildings", "--cobordism", "inner:a=2,b=13,eps=b;outer:a=1,b=5,eps=b", "--k", "1", "--l", "1"],
        vec!["buildings", "--cobordism", COB, "--k", "4", "--l", "4", "--caps", "depth=2"],
        vec!["nope", "--n", "3", "--c1", "3/2"],
        vec!["answer1", "--c", "x"],
        vec!["fibonacci", "--n", "0"],
    ] {
        let o = run(&args);
        assert_eq!(code(&o), 2, "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
        error_kind(&o);
    }
}

#[test]
fn buildings_stream_and_summarise() {
    let o = run(&["buildings", "--cobordism", COB, "--k", "4", "--l", "4"]);
    assert_eq!(code(&o), 0);
    let (items, summary) = search(&o);
    assert_eq!(items.len(), 1);
    assert_eq!(summary["count"], 1);
    assert_eq!(summary["cap_hit"], false);
    assert_eq!(summary["interrupted"], false);
    assert_eq!(summary["caps"]["max_levels_per_side"], 3);
    let levels = items[0]["levels"].as_array().unwrap();
    assert_eq!(levels.len(), 1);
    assert_eq!(levels[0]["kind"], "middle");
}

#[test]
fn output_is_deterministic_across_runs_and_jobs() {
    let args = ["buildings", "--cobordism", COB, "--k", "6", "--l", "6", "--caps", "levels=2,mult=10"];
    let first = search(&run(&args));
    let again = search(&run(&args));
    let seq = search(&bin().args(args).env("REEB_TOOLKIT_JOBS", "1").output().unwrap());
    let flag = search(&run(&[&["--jobs", "4"], &args[..]].concat()));
    assert_eq!(first, again);
    assert_eq!(first, seq);
    assert_eq!(first, flag);

    let args = ["enumerate", "--setting", "a=1,b=13/2,eps=b", "--positive", "alpha,8"];
    let raw =
        |o: Output| String::from_utf8(o.stdout).unwrap().lines().rev().skip(1).map(String::from).collect::<Vec<_>>();
    assert_eq!(raw(run(&args)), raw(run(&args)));
}

#[test]
fn exhausted_caps_exit_4_with_partial_summary() {
    let o = run(&["buildings", "--cobordism", COB, "--k", "4", "--l", "4", "--caps", "levels=1,mult=2"]);
    assert_eq!(code(&o), 4);
    let (_, summary) = search(&o);
    assert_eq!(summary["cap_hit"], true);
    assert!(o.stderr.is_empty());

    let o = run(&["enumerate", "--setting", "a=1,b=13/2,eps=b", "--positive", "alpha,9", "--caps", "neg=2,mult=3"]);
    assert_eq!(code(&o), 4);
    let (items, summary) = search(&o);
    assert_eq!(summary["count"], items.len());
    assert_eq!(summary["cap_hit"], true);
}

#[test]
fn building_records_validate_back() {
    let o = run(&["buildings", "--cobordism", COB, "--k", "4", "--l", "4"]);
    let (items, _) = search(&o);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b.json");
    std::fs::write(&path, items[0].to_string()).unwrap();
    let o = run(&["validate", "--building", &format!("@{}", path.display())]);
    assert_eq!(code(&o), 0);
    let d = &lines(&o)[0];
    assert_eq!(d["cylindrical"], true);
    assert_eq!(d["total_index"], 0);
    assert_eq!(d["violations"], Value::Array(vec![]));

    let o = run_stdin(&["validate", "--building", "-"], &items[0].to_string());
    assert_eq!(code(&o), 0);
}

#[test]
fn broken_building_fails_validation() {
    let cob: Value =
        serde_json::from_str(&String::from_utf8(run(&["nope", "--n", "2", "--c1", "1/2"]).stdout).unwrap()).unwrap();
    let building = serde_json::json!({
        "cobordism": { "inner": cob["inner"], "outer": cob["outer"] },
        "levels": [{ "kind": "middle", "curves": [{ "pos": [{"gen": "alpha", "mult": 5}], "neg": [{"gen": "alpha", "mult": 3}] }] }],
        "bottom": {"gen": "alpha", "mult": 4},
        "top": {"gen": "alpha", "mult": 5},
    });
    let o = run(&["validate", "--building", &building.to_string()]);
    assert_eq!(code(&o), 2);
    assert_eq!(error_kind(&o), "not_cylindrical");
    let d = &lines(&o)[0];
    assert_eq!(d["cylindrical"], false);
    assert!(d["violations"].as_array().unwrap().iter().any(|v| v["kind"] == "bottom_mismatch"));
}

#[test]
fn enumerated_data_round_trip_through_index() {
    let setting = format!("cobordism:{COB}");
    let o = run(&["enumerate", "--setting", &setting, "--positive", "alpha,5", "--caps", "neg=3,mult=8"]);
    let (items, summary) = search(&o);
    assert_eq!(summary["count"], items.len());
    assert!(!items.is_empty());
    for d in &items {
        let o = run(&["index", "--data", &d.to_string()]);
        assert_eq!(code(&o), 0);
        let r = &lines(&o)[0];
        assert_eq!(r["action_feasible"], true);
        assert!(r["index"].as_i64().unwrap() % 2 == 0);
        for key in ["setting", "pos", "neg"] {
            assert_eq!(r[key], d[key]);
        }
        let again = run(&["index", "--data", &r.to_string()]);
        assert_eq!(lines(&again)[0], *r);
    }
}

#[test]
fn cobordism_json_is_accepted_back() {
    let o = run(&["answer1", "--c", "2"]);
    let r = &lines(&o)[0];
    assert_eq!(r["obstructed"], true);
    let cob = r["data"]["setting"]["cobordism"].to_string();
    let o = run(&["check-main", "--cobordism", &cob, "--k", "1"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let o = run(&["index", "--data", &r["data"].to_string()]);
    assert_eq!(lines(&o)[0]["action_feasible"], false);
}

#[test]
fn nope_instance_record() {
    let o = run(&["nope", "--n", "3", "--c1", "9/10"]);
    let r = &lines(&o)[0];
    assert_eq!(r["cz_equal"], true);
    assert_eq!(r["hypothesis_g_odd"], true);
    assert_eq!(r["nonexistence_verified"], false);
    assert_eq!(r["inner_orbit"]["mult"], 29);
    let o = run(&["cz", "--ellipsoid", &r["outer"].to_string(), "--orbit", &r["outer_orbit"].to_string()]);
    assert_eq!(lines(&o)[0]["cz"], r["cz_outer"]);
}

#[test]
fn bad_jobs_env_is_a_usage_error() {
    let o = bin().args(["fibonacci", "--n", "3"]).env("REEB_TOOLKIT_JOBS", "many").output().unwrap();
    assert_eq!(code(&o), 2);
    assert_eq!(error_kind(&o), "usage");
}

#[test]
fn table_output() {
    let o = run(&["--format", "table", "buildings", "--cobordism", COB, "--k", "4", "--l", "4"]);
    let text = String::from_utf8(o.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 3, "{text}");
    assert!(rows[0].starts_with("levels  building"));
    assert!(rows[1].ends_with("Middle: {α^4} → {α^4}"));
    assert!(rows[2].starts_with("# 1 result(s)"));
}
