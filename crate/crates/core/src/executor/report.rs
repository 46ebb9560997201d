use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::ui::{Selector, UiTree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    /// The element could not be found, was ambiguous or not actionable.
    Error,
    /// An assertion evaluated to false.
    Failure,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Error => "error",
            Outcome::Failure => "failure",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DebugSnapshot {
    pub tree: UiTree,
    /// Selector that did not resolve, when that caused the stop.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub selector: Option<Selector>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DeviceResult {
    pub device: String,
    pub outcome: Outcome,
    pub duration_ms: u64,
    pub failing_step: Option<usize>,
    pub message: Option<String>,
    pub debug: Option<DebugSnapshot>,
}

impl DeviceResult {
    pub fn pass(device: String, duration_ms: u64) -> Self {
        DeviceResult { device, outcome: Outcome::Pass, duration_ms, failing_step: None, message: None, debug: None }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub error: usize,
    pub failure: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ExecutionReport {
    pub script_id: String,
    pub results: Vec<DeviceResult>,
    pub summary: Summary,
}

impl ExecutionReport {
    pub fn new(script_id: String, results: Vec<DeviceResult>) -> Self {
        let summary = Summary::of(&results);
        ExecutionReport { script_id, results, summary }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.pass == self.summary.total
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn text_summary(&self) -> String {
        let width = self.results.iter().map(|r| r.device.len()).max().unwrap_or(0);
        let mut out = format!("script {}\n", self.script_id);
        for r in &self.results {
            let _ = write!(out, "  {:<width$}  {:<7}  {:>6} ms", r.device, r.outcome.as_str(), r.duration_ms);
            if let (Some(step), Some(msg)) = (r.failing_step, &r.message) {
                let _ = write!(out, "  step {step}: {msg}");
            }
            out.push('\n');
        }
        let s = &self.summary;
        let _ = writeln!(out, "{} devices: {} pass, {} failure, {} error", s.total, s.pass, s.failure, s.error);
        out
    }
}

impl Summary {
    pub fn of(results: &[DeviceResult]) -> Self {
        results.iter().fold(Summary { total: results.len(), ..Summary::default() }, |mut s, r| {
            match r.outcome {
                Outcome::Pass => s.pass += 1,
                Outcome::Error => s.error += 1,
                Outcome::Failure => s.failure += 1,
            }
            s
        })
    }
}
