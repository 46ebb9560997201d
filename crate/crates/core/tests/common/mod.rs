#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use droidreplay_core::device::{App, DeviceProfile};
use droidreplay_core::ui::Selector;

pub fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(rel)
}

pub fn read(rel: &str) -> String {
    std::fs::read_to_string(fixture(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"))
}

pub fn app(name: &str) -> Arc<App> {
    Arc::new(App::from_json(&read(&format!("apps/{name}.json"))).unwrap())
}

pub fn load_device(name: &str) -> DeviceProfile {
    DeviceProfile::from_json(&read(&format!("devices/{name}.json"))).unwrap()
}

pub fn device(name: &str) -> DeviceProfile {
    load_device(name)
}

pub fn calculator_xpath_btn5() -> Selector {
    Selector::xpath("/RelativeLayout/TableLayout[2]/TableRow[2]/Button[2]").unwrap()
}

use droidreplay_core::device::AppSpec;
use droidreplay_core::live::{parse_log, record_log, LogEntry};
use droidreplay_core::oracle::PropertyRegistry;
use droidreplay_core::recorder::RecordedTrace;

pub fn app_spec(name: &str) -> AppSpec {
    serde_json::from_str(&read(&format!("apps/{name}.json"))).unwrap()
}

pub fn divide_by_zero_log() -> Vec<LogEntry> {
    parse_log(&read("logs/divide_by_zero.jsonl")).unwrap()
}

pub fn record_with(app: Arc<App>, log: &[LogEntry]) -> RecordedTrace {
    let (trace, warnings) =
        record_log(app, device("recording-1080x1920"), Arc::new(PropertyRegistry::default()), log).unwrap();
    assert!(warnings.is_empty(), "{warnings:?}");
    trace
}

/// Devices without quirks used for cross-device replay.
pub const CLEAN_DEVICES: [&str; 6] = [
    "mdpi-480x800",
    "xhdpi-720x1280",
    "xhdpi-768x1280",
    "recording-1080x1920",
    "xxhdpi-1080x1920",
    "qhd-1440x2560",
];
