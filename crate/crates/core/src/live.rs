//! A recording session driven gesture by gesture, shared by the headless
//! gesture-log path and the HTTP service.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::device::{App, DeviceError, DeviceProfile, DeviceSession, Emitted, Gesture, GestureAction, KeyType};
use crate::oracle::{auto_assert, commit_manual, manual_select, ManualChoice, ManualSelection, OracleError, PropertyKind, PropertyRegistry};
use crate::recorder::{AssertionDef, RecordedTrace, Recorder};
use crate::ui::{hit_test, UiTree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Recording,
    /// The assertion pane is open; gestures do not reach the app.
    Asserting,
    Stopped,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LiveError {
    #[error("request not allowed while {actual:?}")]
    WrongPhase { actual: Phase },
    #[error("no element selected")]
    NoSelection,
    #[error("no element at ({x}, {y})")]
    NothingAt { x: i32, y: i32 },
    #[error(transparent)]
    Device(#[from] DeviceError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// What happened to a gesture.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum GestureOutcome {
    /// Delivered to the app; carries the number of accessibility events.
    Delivered(usize),
    /// Swallowed by the assertion pane.
    Intercepted,
}

/// Manual assertion as entered by the tester, with the related element
/// given by a point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct AssertCommit {
    pub property: PropertyKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub other: Option<Point>,
    #[serde(default)]
    pub negated: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Point {
    pub x: i32,
    pub y: i32,
}

pub struct LiveSession {
    device: DeviceSession,
    recorder: Recorder,
    registry: Arc<PropertyRegistry>,
    phase: Phase,
    selection: Option<ManualSelection>,
}

impl LiveSession {
    /// Launches the main activity and starts recording.
    pub fn start(app: Arc<App>, profile: DeviceProfile, registry: Arc<PropertyRegistry>) -> Result<Self, DeviceError> {
        let mut device = DeviceSession::new(app.clone(), profile)?;
        let mut recorder = Recorder::start(app.package(), app.main_activity());
        for e in device.launch_main() {
            recorder.on_event(&e.event, &e.tree);
        }
        Ok(LiveSession { device, recorder, registry, phase: Phase::Recording, selection: None })
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn tree(&self) -> &Arc<UiTree> {
        self.device.tree()
    }

    pub fn trace(&self) -> &RecordedTrace {
        self.recorder.trace()
    }

    pub fn selection(&self) -> Option<&ManualSelection> {
        self.selection.as_ref()
    }

    pub fn clock(&self) -> u64 {
        self.device.clock()
    }

    fn require(&self, phase: Phase) -> Result<(), LiveError> {
        if self.phase == phase {
            Ok(())
        } else {
            Err(LiveError::WrongPhase { actual: self.phase })
        }
    }

    fn feed(&mut self, events: &[Emitted]) {
        for e in events {
            self.recorder.on_event(&e.event, &e.tree);
        }
    }

    pub fn gesture(&mut self, gesture: &Gesture) -> Result<GestureOutcome, LiveError> {
        match self.phase {
            Phase::Asserting => return Ok(GestureOutcome::Intercepted),
            Phase::Stopped => return Err(LiveError::WrongPhase { actual: Phase::Stopped }),
            Phase::Recording => {}
        }
        let events = self.device.dispatch(gesture)?;
        self.feed(&events);
        if let GestureAction::Key { key } = gesture.action {
            self.recorder.record_key(key, gesture.timestamp);
        }
        Ok(GestureOutcome::Delivered(events.len()))
    }

    pub fn key(&mut self, key: KeyType, timestamp: u64) -> Result<GestureOutcome, LiveError> {
        self.gesture(&Gesture::new(timestamp, GestureAction::Key { key }))
    }

    /// Opens the assertion pane and selects the element under the point.
    pub fn assert_begin(&mut self, x: i32, y: i32) -> Result<Option<ManualSelection>, LiveError> {
        self.require(Phase::Recording)?;
        self.phase = Phase::Asserting;
        self.assert_select(x, y)
    }

    /// Re-selects while dragging; a point over nothing clears the selection.
    pub fn assert_select(&mut self, x: i32, y: i32) -> Result<Option<ManualSelection>, LiveError> {
        self.require(Phase::Asserting)?;
        self.selection = manual_select(&self.registry, self.device.tree(), x, y);
        Ok(self.selection.clone())
    }

    pub fn assert_commit(&mut self, commit: &AssertCommit) -> Result<AssertionDef, LiveError> {
        self.require(Phase::Asserting)?;
        let selection = self.selection.as_ref().ok_or(LiveError::NoSelection)?;
        let tree = self.device.tree().clone();
        let other = match commit.other {
            Some(Point { x, y }) => Some(hit_test(&tree, x, y).ok_or(LiveError::NothingAt { x, y })?),
            None => None,
        };
        let choice = ManualChoice { value: commit.value.clone(), other, negated: commit.negated, threshold: commit.threshold };
        let timestamp = commit.timestamp.unwrap_or_else(|| self.device.clock());
        let assertion = commit_manual(&mut self.recorder, &tree, selection.node_id, commit.property, choice, timestamp)?;
        self.selection = None;
        self.phase = Phase::Recording;
        Ok(assertion)
    }

    pub fn assert_cancel(&mut self) -> Result<(), LiveError> {
        self.require(Phase::Asserting)?;
        self.selection = None;
        self.phase = Phase::Recording;
        Ok(())
    }

    /// Records one assertion per relevant property of the element under
    /// the point.
    pub fn assert_auto(&mut self, x: i32, y: i32, timestamp: Option<u64>) -> Result<Vec<AssertionDef>, LiveError> {
        self.require(Phase::Recording)?;
        let tree = self.device.tree().clone();
        let ts = timestamp.unwrap_or_else(|| self.device.clock());
        let assertions = auto_assert(&self.registry, &self.recorder, &tree, x, y, ts);
        for a in &assertions {
            self.recorder.record_assertion(a.clone()).map_err(OracleError::from)?;
        }
        Ok(assertions)
    }

    pub fn stop(&mut self) -> Result<RecordedTrace, LiveError> {
        if self.phase == Phase::Stopped {
            return Err(LiveError::WrongPhase { actual: Phase::Stopped });
        }
        self.phase = Phase::Stopped;
        self.selection = None;
        Ok(self.recorder.trace().clone())
    }
}

/// One line of a headless gesture log.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LogEntry {
    Gesture(Gesture),
    /// Manual assertion on the element under (x, y).
    Assert { x: i32, y: i32, commit: AssertCommit },
    /// Automatic assertions on the element under (x, y).
    AutoAssert { x: i32, y: i32, timestamp: u64 },
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
enum AssertLine {
    #[serde(rename_all = "camelCase")]
    Assert {
        x: i32,
        y: i32,
        #[serde(flatten)]
        commit: AssertCommitFields,
    },
    AutoAssert { x: i32, y: i32, timestamp: u64 },
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct AssertCommitFields {
    property: PropertyKind,
    #[serde(default)]
    value: Option<String>,
    #[serde(default)]
    other: Option<Point>,
    #[serde(default)]
    negated: bool,
    #[serde(default)]
    threshold: Option<u8>,
    timestamp: u64,
}

impl LogEntry {
    pub fn timestamp(&self) -> u64 {
        match self {
            LogEntry::Gesture(g) => g.timestamp,
            LogEntry::Assert { commit, .. } => commit.timestamp.unwrap_or(0),
            LogEntry::AutoAssert { timestamp, .. } => *timestamp,
        }
    }

    pub fn parse(line: &str) -> Result<Self, String> {
        let value: serde_json::Value = serde_json::from_str(line).map_err(|e| e.to_string())?;
        match value.get("kind").and_then(|k| k.as_str()) {
            Some("assert" | "autoAssert") => {
                let parsed: AssertLine = serde_json::from_value(value).map_err(|e| e.to_string())?;
                Ok(match parsed {
                    AssertLine::Assert { x, y, commit: c } => LogEntry::Assert {
                        x,
                        y,
                        commit: AssertCommit {
                            property: c.property,
                            value: c.value,
                            other: c.other,
                            negated: c.negated,
                            threshold: c.threshold,
                            timestamp: Some(c.timestamp),
                        },
                    },
                    AssertLine::AutoAssert { x, y, timestamp } => LogEntry::AutoAssert { x, y, timestamp },
                })
            }
            _ => serde_json::from_value(value).map(LogEntry::Gesture).map_err(|e| e.to_string()),
        }
    }
}

/// Parses a JSON-lines gesture log; blank lines are skipped.
pub fn parse_log(text: &str) -> Result<Vec<LogEntry>, String> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| LogEntry::parse(l).map_err(|e| format!("line {}: {e}", i + 1)))
        .collect()
}

/// Applies one log entry to a live session.
pub fn apply_entry(session: &mut LiveSession, entry: &LogEntry) -> Result<(), LiveError> {
    match entry {
        LogEntry::Gesture(g) => session.gesture(g).map(drop),
        LogEntry::Assert { x, y, commit } => {
            if session.assert_begin(*x, *y)?.is_none() {
                session.assert_cancel()?;
                return Err(LiveError::NothingAt { x: *x, y: *y });
            }
            session.assert_commit(commit).map(drop)
        }
        LogEntry::AutoAssert { x, y, timestamp } => session.assert_auto(*x, *y, Some(*timestamp)).map(drop),
    }
}

/// Records a whole gesture log. Entries that cannot be applied, such as
/// gestures outside the screen, are skipped and reported as warnings.
pub fn record_log(
    app: Arc<App>,
    profile: DeviceProfile,
    registry: Arc<PropertyRegistry>,
    entries: &[LogEntry],
) -> Result<(RecordedTrace, Vec<String>), DeviceError> {
    let mut session = LiveSession::start(app, profile, registry)?;
    let mut warnings = Vec::new();
    for (i, entry) in entries.iter().enumerate() {
        if let Err(e) = apply_entry(&mut session, entry) {
            warnings.push(format!("entry {}: {e}; skipped", i + 1));
        }
    }
    let trace = session.stop().expect("session was recording");
    Ok((trace, warnings))
}
