//! Compiles recorded traces into test scripts.

mod espresso;
mod ir;

pub use espresso::{camel_case, emit_espresso, java_string};
pub use ir::{emit_ir, parse_ir, ActionStmt, Operation, Setup, Statement, TestScript};

use crate::device::KeyType;
use crate::recorder::{Action, AssertionProps, InteractionType, RecordedTrace};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TestgenError {
    #[error("invalid script: {0}")]
    Invalid(String),
    #[error("malformed script: {0}")]
    Json(String),
}

/// Merges runs of type actions on the same element into one action that
/// carries the final text and the last keystroke's timestamp.
pub fn coalesce(actions: &[Action]) -> Vec<Action> {
    let mut out: Vec<Action> = Vec::with_capacity(actions.len());
    for action in actions {
        if let (Some(Action::Interaction(prev)), Action::Interaction(cur)) = (out.last_mut(), action) {
            if prev.itype == InteractionType::Type && cur.itype == InteractionType::Type && prev.selector == cur.selector {
                prev.props = cur.props.clone();
                prev.timestamp = cur.timestamp;
                continue;
            }
        }
        out.push(action.clone());
    }
    out
}

fn statement_for(action: &Action) -> ActionStmt {
    match action {
        Action::Interaction(i) => ActionStmt {
            selector: Some(i.selector.clone()),
            action: match i.itype {
                InteractionType::Click => Operation::Click,
                InteractionType::LongClick => Operation::LongClick,
                InteractionType::Type => Operation::TypeText,
                InteractionType::Select => Operation::Select,
                InteractionType::Scroll => Operation::Scroll,
            },
            params: i.props.clone(),
        },
        Action::Assertion(a) => {
            let (params, other) = match &a.props {
                AssertionProps::Values(v) => (v.clone(), None),
                AssertionProps::Selector(s) => (Vec::new(), Some(s.clone())),
            };
            ActionStmt {
                selector: Some(a.selector.clone()),
                action: Operation::Check { property: a.property, negated: a.negated, threshold: a.threshold, other },
                params,
            }
        }
        Action::Key(k) => ActionStmt {
            selector: None,
            action: match k.key {
                KeyType::Action => Operation::PressImeAction,
                KeyType::Close => Operation::CloseKeyboard,
            },
            params: Vec::new(),
        },
    }
}

/// One statement per (coalesced) action; with `retain_time`, a pause equal
/// to the recorded gap separates consecutive statements.
pub fn generate(trace: &RecordedTrace, id: &str, retain_time: bool) -> TestScript {
    let actions = coalesce(&trace.actions);
    let mut steps = Vec::with_capacity(actions.len() * if retain_time { 2 } else { 1 });
    let mut previous: Option<u64> = None;
    for action in &actions {
        let ts = action.timestamp();
        if let (true, Some(prev)) = (retain_time, previous) {
            steps.push(Statement::Pause { duration_ms: ts.saturating_sub(prev) });
        }
        previous = Some(ts);
        steps.push(Statement::Action(statement_for(action)));
    }
    TestScript {
        id: id.to_owned(),
        retain_time,
        setup: Setup { package: trace.package.clone(), activity: trace.main_activity.clone() },
        steps,
    }
}
