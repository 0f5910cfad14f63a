use std::path::Path;
use std::process::{Command, Output};

fn antichain(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_antichain"))
        .env("ANTICHAIN_CACHE_DIR", cache)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn count_prints_exact_values() {
    let dir = tempfile::tempdir().unwrap();
    let o = antichain(dir.path(), &["count", "--t", "3", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "980");
    let o = antichain(dir.path(), &["count", "--t", "2", "--n", "4", "--engine", "oracle"]);
    assert_eq!(stdout(&o).trim(), "168");
}

#[test]
fn count_fills_and_reuses_the_cache() {
    let dir = tempfile::tempdir().unwrap();
    let first = antichain(dir.path(), &["count", "--t", "2", "--n", "5"]);
    assert!(stderr(&first).contains("cached=false"), "{}", stderr(&first));
    let file = std::fs::read_to_string(dir.path().join("alpha-cache.json")).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&file).unwrap();
    assert_eq!(doc["alpha"]["2,5,sos-1"], "7581");
    let second = antichain(dir.path(), &["count", "--t", "2", "--n", "5"]);
    assert!(stderr(&second).contains("cached=true"));
    assert_eq!(stdout(&second).trim(), "7581");
}

#[test]
fn count_refuses_oversized_levels() {
    let dir = tempfile::tempdir().unwrap();
    let o = antichain(dir.path(), &["--no-cache", "count", "--t", "3", "--n", "5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("51"), "{}", stderr(&o));
}

#[test]
fn weighted_count_with_unit_lambda_matches_alpha() {
    let dir = tempfile::tempdir().unwrap();
    let o = antichain(dir.path(), &["count", "--t", "2", "--n", "3", "--engine", "weighted", "--lambda", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "20");
}

#[test]
fn json_count_is_parseable() {
    let dir = tempfile::tempdir().unwrap();
    let o = antichain(dir.path(), &["--format", "json", "count", "--t", "2", "--n", "2"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["value"], "6");
}

#[test]
fn bounds_json_has_section4_block() {
    let dir = tempfile::tempdir().unwrap();
    let o = antichain(dir.path(), &["--format", "json", "bounds", "--t", "2", "--n", "65536"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["section4"]["applicable"], true);
    assert_eq!(doc["section4"]["ok"], true);
}

#[test]
fn chains_verify_and_locate() {
    let dir = tempfile::tempdir().unwrap();
    let o = antichain(dir.path(), &["chains", "--t", "4", "--n", "6", "--verify", "--contains", "0,2,1,3,2,1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("580 chains"));
    assert!(text.contains("[0, 2, 1, 3, 0, 1] < [0, 2, 1, 3, 1, 1]"));
    assert!(!text.contains("false"));
}

#[test]
fn unknown_suite_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = antichain(dir.path(), &["verify", "nonsense"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_reports_pass_lines() {
    let dir = tempfile::tempdir().unwrap();
    let o = antichain(dir.path(), &["--seed", "7", "verify", "thm33", "--trials", "50"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("PASS thm33"));
}

#[test]
fn replay_rechecks_a_saved_instance() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("case.json");
    let record = serde_json::json!({
        "suite": "entropy/fact22",
        "seed": 1,
        "trial": 0,
        "detail": "",
        "instance": { "kind": "fact22", "atoms": [[[0], "1/2"], [[1], "1/4"], [[2], "1/4"]] }
    });
    std::fs::write(&path, record.to_string()).unwrap();
    let o = antichain(dir.path(), &["verify", "entropy", "--replay", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));

    std::fs::write(&path, "{").unwrap();
    let o = antichain(dir.path(), &["verify", "entropy", "--replay", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn report_writes_csv_and_rejects_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let o = antichain(dir.path(), &["report", "--t", "2..3", "--n", "1..2", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "t,n,N,log2_alpha,lower_trivial,thm11,thm12,thm14,thm15,tightest,ratio");
    assert_eq!(lines.count(), 4);

    let o = antichain(dir.path(), &["report", "--t", "3..2", "--n", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = antichain(dir.path(), &["report", "--t", "2", "--n", "1", "--out", "/nonexistent/dir/r.csv"]);
    assert_eq!(o.status.code(), Some(2));
}
