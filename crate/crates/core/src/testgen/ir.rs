use serde::{Deserialize, Serialize};

use crate::oracle::PropertyKind;
use crate::recorder::{AssertionDef, AssertionProps};
use crate::ui::Selector;

use super::TestgenError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "camelCase", deny_unknown_fields)]
pub enum Operation {
    Click,
    LongClick,
    /// Replaces the field content with `params[0]`.
    TypeText,
    Select,
    /// Scrolls in direction `params[0]`.
    Scroll,
    PressImeAction,
    CloseKeyboard,
    /// Assertion; expected values are in `params`.
    #[serde(rename_all = "camelCase")]
    Check {
        property: PropertyKind,
        #[serde(default)]
        negated: bool,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        threshold: Option<u8>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        other: Option<Selector>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ActionStmt {
    /// Element the statement acts on; keyboard statements have none.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub selector: Option<Selector>,
    pub action: Operation,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub params: Vec<String>,
}

impl ActionStmt {
    /// The assertion a check statement evaluates.
    pub fn assertion(&self) -> Option<AssertionDef> {
        let Operation::Check { property, negated, threshold, other } = &self.action else { return None };
        let props = match other {
            Some(o) => AssertionProps::Selector(o.clone()),
            None => AssertionProps::Values(self.params.clone()),
        };
        Some(AssertionDef {
            property: *property,
            selector: self.selector.clone()?,
            timestamp: 0,
            props,
            negated: *negated,
            threshold: *threshold,
        })
    }

    fn validate(&self, index: usize) -> Result<(), TestgenError> {
        let bad = |reason: &str| Err(TestgenError::Invalid(format!("step {index}: {reason}")));
        let needs_selector = !matches!(self.action, Operation::PressImeAction | Operation::CloseKeyboard);
        if needs_selector != self.selector.is_some() {
            return bad(if needs_selector { "missing selector" } else { "keyboard steps take no selector" });
        }
        match &self.action {
            Operation::TypeText if self.params.len() != 1 => bad("typeText needs one parameter"),
            Operation::Scroll if self.params.len() != 1 || !matches!(self.params[0].as_str(), "up" | "down") => {
                bad("scroll needs a direction")
            }
            Operation::Check { .. } => match self.assertion() {
                Some(a) => a.validate().map_err(|e| TestgenError::Invalid(format!("step {index}: {e}"))),
                None => bad("check needs a selector"),
            },
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum Statement {
    Action(ActionStmt),
    #[serde(rename_all = "camelCase")]
    Pause { duration_ms: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Setup {
    pub package: String,
    pub activity: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct TestScript {
    pub id: String,
    pub retain_time: bool,
    pub setup: Setup,
    pub steps: Vec<Statement>,
}

impl TestScript {
    pub fn action_count(&self) -> usize {
        self.steps.iter().filter(|s| matches!(s, Statement::Action(_))).count()
    }

    pub fn total_pause_ms(&self) -> u64 {
        self.steps
            .iter()
            .map(|s| match s {
                Statement::Pause { duration_ms } => *duration_ms,
                Statement::Action(_) => 0,
            })
            .sum()
    }

    pub fn validate(&self) -> Result<(), TestgenError> {
        for (i, step) in self.steps.iter().enumerate() {
            if let Statement::Action(a) = step {
                a.validate(i + 1)?;
            }
        }
        Ok(())
    }
}

/// Canonical JSON: fixed key order, two-space indent, trailing newline.
pub fn emit_ir(script: &TestScript) -> String {
    let mut s = serde_json::to_string_pretty(script).expect("script serializes");
    s.push('\n');
    s
}

pub fn parse_ir(s: &str) -> Result<TestScript, TestgenError> {
    let script: TestScript = serde_json::from_str(s).map_err(|e| TestgenError::Json(e.to_string()))?;
    script.validate()?;
    Ok(script)
}
