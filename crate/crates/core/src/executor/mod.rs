//! Replays test scripts on simulated devices and reports the outcome per
//! device.

mod report;

pub use report::{DebugSnapshot, DeviceResult, ExecutionReport, Outcome, Summary};

use std::sync::Arc;

use crate::device::{App, DeviceError, DeviceProfile, DeviceSession, KeyType, PerformAction, PerformError, ScrollDirection};
use crate::oracle::{check_assertion, CheckError};
use crate::testgen::{ActionStmt, Operation, Statement, TestScript};
use crate::ui::{evaluate_selector, MatchResult, Selector};

/// Virtual time charged for every executed statement, setup included.
pub const STEP_COST_MS: u64 = 1;
pub const DEFAULT_QUIESCENCE_TIMEOUT_MS: u64 = 5_000;
const POLL_MS: u64 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExecOptions {
    pub quiescence_timeout_ms: u64,
}

impl Default for ExecOptions {
    fn default() -> Self {
        ExecOptions { quiescence_timeout_ms: DEFAULT_QUIESCENCE_TIMEOUT_MS }
    }
}

/// One fresh session per device, in input order.
pub fn prepare(app: &Arc<App>, devices: &[DeviceProfile]) -> Result<Vec<DeviceSession>, DeviceError> {
    devices.iter().map(|d| DeviceSession::new(app.clone(), d.clone())).collect()
}

fn wait_until_idle(session: &mut DeviceSession, timeout_ms: u64) -> bool {
    let deadline = session.clock() + timeout_ms;
    while !session.is_idle() {
        if session.clock() >= deadline {
            return false;
        }
        session.advance_clock(POLL_MS);
    }
    true
}

struct Stop {
    outcome: Outcome,
    message: String,
    selector: Option<Selector>,
}

impl Stop {
    fn error(message: impl Into<String>, selector: Option<&Selector>) -> Self {
        Stop { outcome: Outcome::Error, message: message.into(), selector: selector.cloned() }
    }
}

fn perform_action(stmt: &ActionStmt) -> Result<PerformAction, Stop> {
    let param = || stmt.params.first().cloned().unwrap_or_default();
    Ok(match stmt.action {
        Operation::Click => PerformAction::Click,
        Operation::LongClick => PerformAction::LongClick,
        Operation::Select => PerformAction::Select,
        Operation::TypeText => PerformAction::TypeText(param()),
        Operation::Scroll => match ScrollDirection::parse(&param()) {
            Some(d) => PerformAction::Scroll(d),
            None => return Err(Stop::error(format!("unknown scroll direction {:?}", param()), None)),
        },
        _ => unreachable!("not an element action"),
    })
}

fn run_statement(session: &mut DeviceSession, stmt: &ActionStmt) -> Result<(), Stop> {
    match &stmt.action {
        Operation::PressImeAction => {
            session.press_key(KeyType::Action);
            Ok(())
        }
        Operation::CloseKeyboard => {
            session.press_key(KeyType::Close);
            Ok(())
        }
        Operation::Check { .. } => {
            let assertion = stmt.assertion().ok_or_else(|| Stop::error("check without selector", None))?;
            let tree = session.tree().clone();
            match check_assertion(&tree, &assertion, &tree.screen) {
                Ok(true) => Ok(()),
                Ok(false) => {
                    let mut message = format!(
                        "assertion failed: {}{} on {}",
                        if assertion.negated { "not " } else { "" },
                        assertion.property,
                        assertion.selector
                    );
                    if let (Some(expected), Ok(MatchResult::Unique(id))) =
                        (assertion.expected_text(), evaluate_selector(&tree, &assertion.selector))
                    {
                        let found = tree.find(id).and_then(|n| n.text.as_deref());
                        message.push_str(&format!(" (expected {expected:?}, found {found:?})"));
                    }
                    Err(Stop { outcome: Outcome::Failure, message, selector: None })
                }
                Err(e) => {
                    let selector = e.selector().cloned();
                    Err(Stop { outcome: Outcome::Error, message: describe_check(&e), selector })
                }
            }
        }
        _ => {
            let selector = stmt.selector.as_ref().ok_or_else(|| Stop::error("action without selector", None))?;
            let action = perform_action(stmt)?;
            session.perform(selector, &action).map(drop).map_err(|e| {
                let unresolved = match &e {
                    PerformError::Selector(_) => None,
                    _ => Some(selector),
                };
                Stop::error(e.to_string(), unresolved)
            })
        }
    }
}

fn describe_check(e: &CheckError) -> String {
    match e {
        CheckError::Unresolved { selector, found } => match found {
            MatchResult::NotFound => format!("no element matches {selector}"),
            MatchResult::Ambiguous(n) => format!("{n} elements match {selector}"),
            MatchResult::Unique(_) => unreachable!("unique matches resolve"),
        },
        CheckError::Selector(x) => x.to_string(),
    }
}

/// Runs the script on one prepared session.
///
/// Step 0 is the setup; step `k` is the `k`-th statement.
pub fn execute(script: &TestScript, session: &mut DeviceSession, options: ExecOptions) -> DeviceResult {
    let start = session.clock();
    let device = session.device().name.clone();
    let finish = |session: &DeviceSession, step: Option<(usize, Stop)>| {
        let duration_ms = session.clock() - start;
        match step {
            None => DeviceResult::pass(device.clone(), duration_ms),
            Some((k, stop)) => DeviceResult {
                device: device.clone(),
                outcome: stop.outcome,
                duration_ms,
                failing_step: Some(k),
                message: Some(stop.message),
                debug: Some(DebugSnapshot { tree: (**session.tree()).clone(), selector: stop.selector }),
            },
        }
    };

    session.advance_clock(STEP_COST_MS);
    if script.setup.package != session.app().package() {
        let msg = format!("script targets {} but the app is {}", script.setup.package, session.app().package());
        return finish(session, Some((0, Stop::error(msg, None))));
    }
    if let Err(e) = session.launch(&script.setup.activity) {
        return finish(session, Some((0, Stop::error(e.to_string(), None))));
    }

    for (i, step) in script.steps.iter().enumerate() {
        let k = i + 1;
        if !wait_until_idle(session, options.quiescence_timeout_ms) {
            let msg = format!("UI not idle after {} ms", options.quiescence_timeout_ms);
            return finish(session, Some((k, Stop::error(msg, None))));
        }
        match step {
            Statement::Pause { duration_ms } => session.advance_clock(*duration_ms),
            Statement::Action(stmt) => {
                session.advance_clock(STEP_COST_MS);
                if let Err(stop) = run_statement(session, stmt) {
                    return finish(session, Some((k, stop)));
                }
            }
        }
    }
    finish(session, None)
}

/// Runs the script on every device concurrently; results keep input order.
pub fn run_all(
    script: &TestScript,
    app: &Arc<App>,
    devices: &[DeviceProfile],
    options: ExecOptions,
) -> Result<ExecutionReport, DeviceError> {
    let sessions = prepare(app, devices)?;
    let results = std::thread::scope(|scope| {
        let handles: Vec<_> = sessions
            .into_iter()
            .map(|mut s| scope.spawn(move || execute(script, &mut s, options)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("device run panicked")).collect()
    });
    Ok(ExecutionReport::new(script.id.clone(), results))
}
