mod common;

use std::path::Path;
use std::process::{Command, Output};

use common::fixture;

fn droidreplay(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_droidreplay")).args(args).output().unwrap()
}

fn p(path: &Path) -> String {
    path.to_str().unwrap().to_owned()
}

fn f(rel: &str) -> String {
    p(&fixture(rel))
}

fn run_exit(script: &str, devices: &[&str]) -> i32 {
    let mut args = vec!["run".to_owned(), "--script".into(), f(script), "--app".into()];
    let app = if script.contains("pick_gamma") { "apps/list.json" } else { "apps/calculator.json" };
    args.push(f(app));
    for d in devices {
        args.push("--device".into());
        args.push(f(&format!("devices/{d}.json")));
    }
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    droidreplay(&args).status.code().unwrap()
}

#[test]
fn run_exit_codes() {
    assert_eq!(run_exit("golden/divide_by_zero.ir.json", &["recording-1080x1920", "mdpi-480x800"]), 0);
    assert_eq!(run_exit("scripts/wrong_digit.ir.json", &["recording-1080x1920"]), 1);
    assert_eq!(run_exit("scripts/missing_element.ir.json", &["recording-1080x1920"]), 3);
    assert_eq!(run_exit("golden/divide_by_zero.ir.json", &["recording-1080x1920", "tall-table-1440x2560"]), 3);
    assert_eq!(run_exit("scripts/pick_gamma_by_index.ir.json", &["extra-item-1080x1920"]), 1);
    assert_eq!(run_exit("scripts/missing.ir.json", &["recording-1080x1920"]), 2);
    assert_eq!(run_exit("apps/calculator.json", &["recording-1080x1920"]), 2);
}

#[test]
fn run_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = droidreplay(&[
        "run", "--script", &f("scripts/wrong_digit.ir.json"), "--app", &f("apps/calculator.json"),
        "--device", &f("devices/mdpi-480x800.json"), "--out", &p(&out),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["summary"], serde_json::json!({ "total": 1, "pass": 0, "error": 0, "failure": 1 }));
    assert_eq!(report["results"][0]["device"], "mdpi-480x800");
    assert!(String::from_utf8_lossy(&o.stdout).contains("failure"));
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = p(&dir.path().join("x.kt"));
    let o = droidreplay(&["generate", "--trace", &f("golden/divide_by_zero.trace.json"), "--emit", "kotlin", "--out", &out]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(droidreplay(&["frobnicate"]).status.code(), Some(2));
    let o = droidreplay(&["record", "--app", &f("apps/calculator.json"), "--device", &f("devices/mdpi-480x800.json"),
        "--gestures", &f("apps/calculator.json"), "--out", &out]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));
}

#[test]
fn record_is_deterministic_and_generate_names_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let record = |name: &str| {
        let out = dir.path().join(name);
        let o = droidreplay(&["record", "--app", &f("apps/calculator.json"), "--device", &f("devices/recording-1080x1920.json"),
            "--gestures", &f("logs/divide_by_zero.jsonl"), "--out", &p(&out)]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        std::fs::read_to_string(out).unwrap()
    };
    assert_eq!(record("a.trace.json"), record("divide_by_zero.trace.json"));

    let java = dir.path().join("T.java");
    let o = droidreplay(&["generate", "--trace", &p(&dir.path().join("divide_by_zero.trace.json")), "--out", &p(&java)]);
    assert!(o.status.success());
    assert_eq!(std::fs::read_to_string(&java).unwrap(), std::fs::read_to_string(fixture("golden/DivideByZeroTest.java")).unwrap());

    let ir = dir.path().join("t.ir.json");
    let o = droidreplay(&["generate", "--trace", &p(&dir.path().join("a.trace.json")), "--emit", "ir", "--retain-time",
        "--name", "divide_by_zero", "--out", &p(&ir)]);
    assert!(o.status.success());
    assert_eq!(std::fs::read_to_string(&ir).unwrap(), std::fs::read_to_string(fixture("golden/divide_by_zero.retain.ir.json")).unwrap());
}

#[test]
fn empty_log_records_a_header_only_trace() {
    let dir = tempfile::tempdir().unwrap();
    let log = dir.path().join("empty.jsonl");
    std::fs::write(&log, "\n").unwrap();
    let out = dir.path().join("empty.trace.json");
    let o = droidreplay(&["record", "--app", &f("apps/calculator.json"), "--device", &f("devices/recording-1080x1920.json"),
        "--gestures", &p(&log), "--out", &p(&out)]);
    assert!(o.status.success());
    let trace: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(trace, serde_json::json!({ "mainActivity": "MainActivity", "package": "com.calculator", "actions": [] }));
}

#[test]
fn off_screen_gestures_warn_but_record_the_rest() {
    let dir = tempfile::tempdir().unwrap();
    let log = dir.path().join("log.jsonl");
    std::fs::write(&log, "{\"timestamp\":1,\"kind\":\"click\",\"x\":9000,\"y\":1}\n{\"timestamp\":2,\"kind\":\"click\",\"x\":405,\"y\":1320}\n").unwrap();
    let out = dir.path().join("t.json");
    let o = droidreplay(&["record", "--app", &f("apps/calculator.json"), "--device", &f("devices/recording-1080x1920.json"),
        "--gestures", &p(&log), "--out", &p(&out)]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning: entry 1"));
    let trace: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(trace["actions"].as_array().unwrap().len(), 1);
}
