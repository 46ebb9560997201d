//! Fixture loading shared by the benchmarks.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use droidreplay_core::device::{App, DeviceProfile};
use droidreplay_core::live::{parse_log, LogEntry};
use droidreplay_core::testgen::{parse_ir, TestScript};

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn read(rel: &str) -> String {
    std::fs::read_to_string(fixtures().join(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"))
}

pub fn app(name: &str) -> Arc<App> {
    Arc::new(App::from_json(&read(&format!("apps/{name}.json"))).expect("valid app"))
}

pub fn device(name: &str) -> DeviceProfile {
    DeviceProfile::from_json(&read(&format!("devices/{name}.json"))).expect("valid device")
}

pub fn log(name: &str) -> Vec<LogEntry> {
    parse_log(&read(&format!("logs/{name}.jsonl"))).expect("valid log")
}

pub fn script(rel: &str) -> TestScript {
    parse_ir(&read(rel)).expect("valid script")
}

/// Every quirk-free device profile in the fixtures.
pub fn clean_devices() -> Vec<DeviceProfile> {
    ["mdpi-480x800", "xhdpi-720x1280", "xhdpi-768x1280", "recording-1080x1920", "xxhdpi-1080x1920", "qhd-1440x2560"]
        .into_iter()
        .map(device)
        .collect()
}
