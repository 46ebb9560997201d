//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
//! and exits non-zero if any fails.

mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use common::{fixture, http, read, spawn_service};
use droidreplay_cli::{load_app, load_device};
use droidreplay_core::device::{AppSpec, DeviceSession, Emitted, Gesture, GestureAction};
use droidreplay_core::executor::{run_all, ExecOptions, ExecutionReport, Outcome};
use droidreplay_core::live::{parse_log, record_log, LogEntry};
use droidreplay_core::oracle::PropertyRegistry;
use droidreplay_core::recorder::{Action, InteractionDef, InteractionType, RecordedTrace, Recorder};
use droidreplay_core::testgen::{generate, parse_ir, Operation, Statement};
use droidreplay_core::ui::random::{random_tree, TreeShape};
use droidreplay_core::ui::{build_resource_id_map, evaluate_xpath, hit_test, xpath_for, MatchResult, NodeId, Selector, UiNode, UiTree};
use droidreplay_core::App;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const GOLDEN_PATH_BUDGET: Duration = Duration::from_secs(1);
const XPATH_BUDGET: Duration = Duration::from_secs(30);
const RANDOM_TREES: u64 = 1000;
const RANDOM_TRACES: u64 = 500;
const FSM_MAX_LEN: u32 = 6;
const RECORDING_DEVICE: &str = "recording-1080x1920";
const CLEAN_DEVICES: [&str; 6] = [
    "mdpi-480x800",
    "xhdpi-720x1280",
    "xhdpi-768x1280",
    "recording-1080x1920",
    "xxhdpi-1080x1920",
    "qhd-1440x2560",
];

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn app(name: &str) -> Arc<App> {
    load_app(&fixture(&format!("apps/{name}.json"))).unwrap()
}

fn device(name: &str) -> droidreplay_core::DeviceProfile {
    load_device(&fixture(&format!("devices/{name}.json"))).unwrap()
}

fn registry() -> Arc<PropertyRegistry> {
    Arc::new(PropertyRegistry::default())
}

fn record(app: Arc<App>, log: &[LogEntry]) -> Result<RecordedTrace, String> {
    let (trace, warnings) = record_log(app, device(RECORDING_DEVICE), registry(), log).map_err(|e| e.to_string())?;
    ensure!(warnings.is_empty(), "recording warnings: {warnings:?}");
    Ok(trace)
}

fn run(script: &str, app_name: &str, devices: &[droidreplay_core::DeviceProfile]) -> ExecutionReport {
    let script = parse_ir(&read(script)).unwrap();
    run_all(&script, &app(app_name), devices, ExecOptions::default()).unwrap()
}

fn cli(args: &[&str]) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_droidreplay")).args(args).output().map_err(|e| e.to_string())?;
    ensure!(out.status.success(), "droidreplay {args:?}: {}", String::from_utf8_lossy(&out.stderr));
    Ok(())
}

fn golden_path() -> Verdict {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let trace = dir.path().join("divide_by_zero.trace.json");
    let java = dir.path().join("DivideByZeroTest.java");
    let path = |p: &Path| p.to_str().unwrap().to_owned();
    let started = Instant::now();
    cli(&[
        "record",
        "--app", &path(&fixture("apps/calculator.json")),
        "--device", &path(&fixture(&format!("devices/{RECORDING_DEVICE}.json"))),
        "--gestures", &path(&fixture("logs/divide_by_zero.jsonl")),
        "--out", &path(&trace),
    ])?;
    cli(&["generate", "--trace", &path(&trace), "--emit", "espresso", "--out", &path(&java)])?;
    let elapsed = started.elapsed();
    let source = std::fs::read_to_string(&java).map_err(|e| e.to_string())?;
    ensure!(source == read("golden/DivideByZeroTest.java"), "generated test differs from the golden file");
    ensure!(std::fs::read_to_string(&trace).unwrap() == read("golden/divide_by_zero.trace.json"), "trace differs from the golden file");

    let body: Vec<&str> = source.lines().map(str::trim).filter(|l| l.starts_with("onView(") || l.starts_with(".check(")).collect();
    let expected = [
        "onView(withId(R.id.btn5)).perform(click());",
        "onView(withId(R.id.display))",
        ".check(matches(withText(\"5\")));",
        "onView(withId(R.id.divide)).perform(click());",
        "onView(withId(R.id.display))",
        ".check(matches(withText(\"/\")));",
        "onView(withId(R.id.btn0)).perform(click());",
        "onView(withId(R.id.display))",
        ".check(matches(withText(\"0\")));",
        "onView(withId(R.id.equals))",
        ".check(matches(isClickable()));",
        "onView(withId(R.id.equals)).perform(click());",
        "onView(withId(R.id.display))",
        ".check(matches(withText(\"ERROR\")));",
    ];
    ensure!(body == expected, "statement bodies differ: {body:?}");
    ensure!(!source.contains("typeText"), "unexpected typing statement");
    // Setup plus nine statements.
    let script = generate(&RecordedTrace::from_json(&read("golden/divide_by_zero.trace.json")).unwrap(), "d", false);
    let statements = 1 + script.steps.len();
    ensure!(statements == 10, "{statements} statements");
    ensure!(elapsed < GOLDEN_PATH_BUDGET, "took {elapsed:?}");
    Ok(format!("10 statements, byte-exact, {} ms", elapsed.as_millis()))
}

fn first_click(spec: AppSpec) -> Result<Selector, String> {
    let log = vec![parse_log(&read("logs/divide_by_zero.jsonl")).unwrap().remove(0)];
    let trace = record(Arc::new(App::new(spec).map_err(|e| e.to_string())?), &log)?;
    match trace.actions.first() {
        Some(Action::Interaction(i)) => Ok(i.selector.clone()),
        other => Err(format!("no interaction recorded: {other:?}")),
    }
}

fn calculator_spec() -> AppSpec {
    serde_json::from_str(&read("apps/calculator.json")).unwrap()
}

/// Moves transitions triggered through `id` onto a text-based selector so
/// the app stays valid once the id is changed.
fn rebind(spec: &mut AppSpec, id: &str, text: &str) {
    let old = Selector::resource_id(id).unwrap();
    for t in &mut spec.transitions {
        if t.target == old {
            t.target = Selector::property_based("Button", Some(text.into())).unwrap();
        }
    }
}

fn selector_algorithm() -> Verdict {
    let expected = Selector::XPath("/RelativeLayout/TableLayout[2]/TableRow[2]/Button[2]".into());

    let mut spec = calculator_spec();
    rebind(&mut spec, "btn5", "5");
    spec.screens.get_mut("MainActivity").unwrap().root.children[2].children[1].children[1].resource_id = None;
    let a = first_click(spec)?;
    ensure!(a == expected, "(a) got {a}");

    let mut spec = calculator_spec();
    rebind(&mut spec, "btn5", "5");
    rebind(&mut spec, "btn6", "6");
    spec.screens.get_mut("MainActivity").unwrap().root.children[2].children[1].children[2].resource_id = Some("btn5".into());
    let b = first_click(spec)?;
    ensure!(b == expected, "(b) got {b}");

    let picker = app("picker");
    let probe = DeviceSession::new(picker.clone(), device(RECORDING_DEVICE)).unwrap();
    let (x, y) = probe.tree().nodes().find(|n| n.resource_id.as_deref() == Some("pick")).unwrap().bounds.center();
    let log = [
        Gesture::new(100, GestureAction::Click { x, y }),
        Gesture::new(200, GestureAction::Select { x: None, y: None, index: Some(4) }),
    ]
    .map(LogEntry::Gesture);
    let trace = record(picker, &log)?;
    let c = match trace.actions.get(1) {
        Some(Action::Interaction(InteractionDef { itype: InteractionType::Select, selector, .. })) => selector.clone(),
        other => return Err(format!("(c) no selection recorded: {other:?}")),
    };
    ensure!(c == Selector::property_based("Button", Some("5".into())).unwrap(), "(c) got {c}");
    Ok(format!("(a) {a} (b) {b} (c) {c}"))
}

fn brute_hit(tree: &UiTree, x: i32, y: i32) -> Option<NodeId> {
    let s = &tree.screen;
    if x < s.left() || x >= s.right() || y < s.top() || y >= s.bottom() {
        return None;
    }
    let walk = tree.walk();
    walk.iter()
        .enumerate()
        .filter(|(_, e)| {
            let b = &e.node.bounds;
            b.left() <= x && x < b.right() && b.top() <= y && y < b.bottom()
        })
        .max_by_key(|(order, e)| (e.depth, *order))
        .map(|(_, e)| e.node.node_id)
}

fn tally(node: &UiNode, out: &mut BTreeMap<String, usize>) {
    if let Some(id) = &node.resource_id {
        *out.entry(id.clone()).or_default() += 1;
    }
    node.children.iter().for_each(|c| tally(c, out));
}

fn xpath_round_trip() -> Verdict {
    let started = Instant::now();
    let mut nodes = 0;
    for seed in 0..RANDOM_TREES {
        let shape = TreeShape { max_depth: 8, max_fanout: 6, id_pool: 1 + (seed as usize % 16), ..TreeShape::default() };
        let tree = random_tree(seed, shape);
        for n in tree.nodes() {
            let path = xpath_for(&tree, n.node_id).ok_or("node without path")?.to_string();
            let found = evaluate_xpath(&tree, &path).map_err(|e| e.to_string())?;
            ensure!(found == MatchResult::Unique(n.node_id), "seed {seed}: {path} gave {found:?}");
            nodes += 1;
        }
        let mut expected = BTreeMap::new();
        tally(&tree.root, &mut expected);
        let map = build_resource_id_map(&tree);
        ensure!(map.iter().map(|(k, v)| (k.to_owned(), v)).collect::<BTreeMap<_, _>>() == expected, "seed {seed}: resource map");
        let mut rng = StdRng::seed_from_u64(seed);
        for _ in 0..32 {
            let (x, y) = (rng.random_range(-20..1100), rng.random_range(-20..1940));
            ensure!(hit_test(&tree, x, y) == brute_hit(&tree, x, y), "seed {seed}: hit test at ({x}, {y})");
        }
    }
    let elapsed = started.elapsed();
    ensure!(elapsed < XPATH_BUDGET, "took {elapsed:?}");
    Ok(format!("{RANDOM_TREES} trees, {nodes} nodes, {} ms", elapsed.as_millis()))
}

#[derive(Clone, Copy, PartialEq)]
enum Step {
    User,
    SetQuery,
    SetStatus,
    Check,
}

fn fsm_filter() -> Verdict {
    let alphabet = [Step::User, Step::SetQuery, Step::SetStatus, Step::Check];
    let mut spec: AppSpec = serde_json::from_str(&read("apps/search.json")).unwrap();
    spec.screens.get_mut("SearchActivity").unwrap().root.children[2].flags.focusable = false;
    let search = Arc::new(App::new(spec).unwrap());
    let query = Selector::resource_id("query").unwrap();
    let status = Selector::resource_id("status").unwrap();
    let mut count = 0;
    for len in 1..=FSM_MAX_LEN {
        for mut code in 0..alphabet.len().pow(len) {
            let seq: Vec<Step> = (0..len)
                .map(|_| {
                    let s = alphabet[code % 4];
                    code /= 4;
                    s
                })
                .collect();
            let mut session = DeviceSession::new(search.clone(), device(RECORDING_DEVICE)).unwrap();
            let mut rec = Recorder::start("com.example.search", "SearchActivity");
            let feed = |rec: &mut Recorder, emitted: Vec<Emitted>| emitted.iter().for_each(|e| rec.on_event(&e.event, &e.tree));
            feed(&mut rec, session.launch_main());
            let center = |s: &DeviceSession, id: &str| s.tree().nodes().find(|n| n.resource_id.as_deref() == Some(id)).unwrap().bounds.center();
            let (qx, qy) = center(&session, "query");
            let (cx, cy) = center(&session, "exact");
            feed(&mut rec, session.dispatch(&Gesture::new(1, GestureAction::Click { x: qx, y: qy })).unwrap());
            let (mut text, mut runs, mut in_run) = (String::new(), Vec::<String>::new(), false);
            for (i, step) in seq.iter().enumerate() {
                let ts = 10 * (i as u64 + 1);
                let emitted = match step {
                    Step::User => {
                        let ch = char::from(b'a' + i as u8);
                        text.push(ch);
                        if !in_run {
                            runs.push(String::new());
                        }
                        *runs.last_mut().unwrap() = text.clone();
                        in_run = true;
                        session.dispatch(&Gesture::new(ts, GestureAction::Type { ch })).unwrap()
                    }
                    Step::SetQuery => {
                        text = format!("p{i}");
                        session.programmatic_text_change(&query, &text).unwrap()
                    }
                    Step::SetStatus => session.programmatic_text_change(&status, &format!("q{i}")).unwrap(),
                    Step::Check => {
                        in_run = false;
                        session.dispatch(&Gesture::new(ts, GestureAction::Click { x: cx, y: cy })).unwrap()
                    }
                };
                feed(&mut rec, emitted);
            }
            let trace = rec.stop();
            let users = seq.iter().filter(|s| **s == Step::User).count();
            let raw = trace.actions.iter().filter(|a| matches!(a, Action::Interaction(i) if i.itype == InteractionType::Type)).count();
            ensure!(raw == users, "{} raw type actions for {users} keystrokes", raw);
            let typed: Vec<String> = generate(&trace, "t", false)
                .steps
                .into_iter()
                .filter_map(|s| match s {
                    Statement::Action(a) if a.action == Operation::TypeText => a.params.first().cloned(),
                    _ => None,
                })
                .collect();
            ensure!(typed == runs, "typed {typed:?}, expected {runs:?}");
            count += 1;
        }
    }
    Ok(format!("{count} interleavings"))
}

fn retain_time() -> Verdict {
    let click = |ts| Action::Interaction(InteractionDef {
        itype: InteractionType::Click,
        selector: Selector::resource_id("btn5").unwrap(),
        timestamp: ts,
        props: Vec::new(),
    });
    let mut trace = RecordedTrace::new("com.calculator", "MainActivity");
    trace.actions = vec![click(1000), click(31000)];
    let steps = generate(&trace, "t", true).steps;
    ensure!(steps.len() == 3 && steps[1] == Statement::Pause { duration_ms: 30000 }, "steps: {steps:?}");

    let selectors = ["btn5", "display", "query"].map(|s| Selector::resource_id(s).unwrap());
    for seed in 0..RANDOM_TRACES {
        let mut rng = StdRng::seed_from_u64(seed);
        let mut trace = RecordedTrace::new("com.calculator", "MainActivity");
        let mut now = 0;
        for _ in 0..rng.random_range(0..30) {
            now += rng.random_range(0..5000);
            let selector = selectors[rng.random_range(0..3)].clone();
            let itype = if rng.random_bool(0.5) { InteractionType::Type } else { InteractionType::Click };
            let props = if itype == InteractionType::Type { vec![format!("{now}")] } else { Vec::new() };
            trace.actions.push(Action::Interaction(InteractionDef { itype, selector, timestamp: now, props }));
        }
        let script = generate(&trace, "t", true);
        let stamps: Vec<u64> = droidreplay_core::testgen::coalesce(&trace.actions).iter().map(Action::timestamp).collect();
        let span = stamps.last().zip(stamps.first()).map_or(0, |(l, f)| l - f);
        ensure!(script.total_pause_ms() == span, "seed {seed}: pauses {} vs span {span}", script.total_pause_ms());
        let pauses = script.steps.len() - script.action_count();
        ensure!(pauses == script.action_count().saturating_sub(1), "seed {seed}: {pauses} pauses");
    }
    Ok(format!("PauseStmt(30000); sum-of-pauses on {RANDOM_TRACES} random traces"))
}

fn outcomes(r: &ExecutionReport) -> Vec<(Outcome, Option<usize>)> {
    r.results.iter().map(|x| (x.outcome, x.failing_step)).collect()
}

fn cross_device() -> Verdict {
    let clean: Vec<_> = CLEAN_DEVICES.iter().map(|d| device(d)).collect();
    let densities: Vec<f64> = clean.iter().map(|d| d.density).collect();
    ensure!(densities.iter().cloned().fold(f64::MAX, f64::min) <= 1.0 && densities.iter().cloned().fold(0.0, f64::max) >= 3.5, "density span");
    let report = run("golden/divide_by_zero.ir.json", "calculator", &clean);
    ensure!(report.results.iter().all(|r| r.outcome == Outcome::Pass), "clean profiles: {}", report.text_summary());
    let durations: Vec<_> = report.results.iter().map(|r| r.duration_ms).collect();
    ensure!(durations.windows(2).all(|w| w[0] == w[1]), "durations differ: {durations:?}");

    let tall = [device("tall-table-1440x2560")];
    let d7 = run("golden/divide_by_zero.ir.json", "calculator", &tall);
    ensure!(outcomes(&d7) == [(Outcome::Error, Some(5))], "extra bottom space: {:?}", outcomes(&d7));
    let scrolled = run("scripts/divide_by_zero_scrolled.ir.json", "calculator", &tall);
    ensure!(outcomes(&scrolled) == [(Outcome::Pass, None)], "with scroll: {:?}", outcomes(&scrolled));

    let extra = [device("extra-item-1080x1920")];
    let by_text = run("scripts/pick_gamma_by_text.ir.json", "list", &extra);
    ensure!(outcomes(&by_text) == [(Outcome::Pass, None)], "index-free: {:?}", outcomes(&by_text));
    let by_index = run("scripts/pick_gamma_by_index.ir.json", "list", &extra);
    ensure!(by_index.results[0].outcome == Outcome::Failure, "index-based: {:?}", outcomes(&by_index));
    Ok(format!(
        "{} clean profiles pass; extra space errors at step 5, scroll restores; extra item breaks only the index-based selector",
        clean.len()
    ))
}

fn error_failure_partition() -> Verdict {
    let cases = [
        ("missing_element", "error", 2),
        ("ambiguous_button", "error", 2),
        ("wrong_digit", "failure", 2),
    ];
    for (name, outcome, step) in cases {
        let report = run(&format!("scripts/{name}.ir.json"), "calculator", &[device(RECORDING_DEVICE)]);
        let json: serde_json::Value = serde_json::from_str(&report.to_json()).map_err(|e| e.to_string())?;
        let r = &json["results"][0];
        ensure!(r["outcome"] == outcome, "{name}: outcome {}", r["outcome"]);
        ensure!(r["failingStep"] == step, "{name}: failing step {}", r["failingStep"]);
        ensure!(r["debug"]["tree"]["root"].is_object(), "{name}: no debug tree");
        ensure!(r["message"].is_string(), "{name}: no message");
    }
    Ok("missing -> error, ambiguous -> error, false assertion -> failure".into())
}

fn path_equivalence() -> Verdict {
    let addr = spawn_service("calculator", RECORDING_DEVICE);
    let log = read("logs/divide_by_zero.jsonl");
    let call = |path: &str, body: &serde_json::Value| -> Result<String, String> {
        let (status, text) = http(&addr, "POST", path, &body.to_string())?;
        ensure!(status == 200, "{path} -> {status}: {text}");
        Ok(text)
    };
    for line in log.lines().filter(|l| !l.trim().is_empty()) {
        let mut v: serde_json::Value = serde_json::from_str(line).unwrap();
        match v["kind"].as_str() {
            Some("assert") => {
                let obj = v.as_object_mut().unwrap();
                let point = serde_json::json!({ "x": obj.remove("x"), "y": obj.remove("y") });
                obj.remove("kind");
                call("/session/assert/begin", &point)?;
                call("/session/assert/commit", &v)?;
            }
            Some("autoAssert") => {
                call("/session/assert/auto", &v)?;
            }
            _ => {
                call("/session/gesture", &v)?;
            }
        }
    }
    let served: RecordedTrace = serde_json::from_str(&call("/session/stop", &serde_json::json!({}))?).map_err(|e| e.to_string())?;
    let headless = record(app("calculator"), &parse_log(&log).unwrap())?;
    ensure!(served == headless, "service trace differs from the headless trace");
    Ok(format!("{} actions identical over HTTP", served.actions.len()))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("calculator golden path", golden_path),
        ("selector algorithm", selector_algorithm),
        ("xpath round-trip", xpath_round_trip),
        ("fsm filter", fsm_filter),
        ("retain-time", retain_time),
        ("cross-device replay", cross_device),
        ("error/failure partition", error_failure_partition),
        ("path equivalence", path_equivalence),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let verdict = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        match verdict {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(reason) => {
                failed += 1;
                println!("FAIL {name}: {reason}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
