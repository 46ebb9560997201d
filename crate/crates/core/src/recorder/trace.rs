//! The recorded trace: interactions, assertions and key presses in the order
//! the tester performed them.

use serde::{Deserialize, Serialize};

use crate::device::KeyType;
use crate::oracle::PropertyKind;
use crate::ui::Selector;

use super::RecorderError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum InteractionType {
    Click,
    LongClick,
    Type,
    Select,
    Scroll,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct InteractionDef {
    #[serde(rename = "type")]
    pub itype: InteractionType,
    pub selector: Selector,
    pub timestamp: u64,
    /// Typed text for `type`, direction for `scroll`, empty otherwise.
    #[serde(default)]
    pub props: Vec<String>,
}

/// Expected value of an assertion: literal values for unary properties, the
/// related element for relational ones.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum AssertionProps {
    Values(Vec<String>),
    Selector(Selector),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct AssertionDef {
    #[serde(rename = "type")]
    pub property: PropertyKind,
    pub selector: Selector,
    pub timestamp: u64,
    pub props: AssertionProps,
    #[serde(default)]
    pub negated: bool,
    /// Minimum visible area in percent; only for `displayed`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<u8>,
}

impl AssertionDef {
    pub fn unary(property: PropertyKind, selector: Selector, timestamp: u64) -> Self {
        AssertionDef { property, selector, timestamp, props: AssertionProps::Values(Vec::new()), negated: false, threshold: None }
    }

    pub fn other_selector(&self) -> Option<&Selector> {
        match &self.props {
            AssertionProps::Selector(s) => Some(s),
            AssertionProps::Values(_) => None,
        }
    }

    pub fn expected_text(&self) -> Option<&str> {
        match &self.props {
            AssertionProps::Values(v) => v.first().map(String::as_str),
            AssertionProps::Selector(_) => None,
        }
    }

    pub fn validate(&self) -> Result<(), RecorderError> {
        let bad = |reason: &str| Err(RecorderError::InvalidAction(format!("{} assertion: {reason}", self.property)));
        match (&self.props, self.property) {
            (AssertionProps::Selector(_), p) if !p.is_relational() => return bad("only relational properties take a selector"),
            (AssertionProps::Values(_), p) if p.is_relational() => return bad("needs a second selector"),
            (AssertionProps::Values(v), PropertyKind::Text) if v.len() != 1 => return bad("needs exactly one value"),
            (AssertionProps::Values(v), p) if p != PropertyKind::Text && !v.is_empty() => {
                return bad("takes no values")
            }
            _ => {}
        }
        match self.threshold {
            Some(_) if self.property != PropertyKind::Displayed => bad("threshold applies only to displayed"),
            Some(t) if !(1..=100).contains(&t) => bad("threshold must be within 1..=100"),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KeyDef {
    #[serde(rename = "type")]
    pub key: KeyType,
    pub timestamp: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum Action {
    Interaction(InteractionDef),
    Assertion(AssertionDef),
    Key(KeyDef),
}

impl Action {
    pub fn timestamp(&self) -> u64 {
        match self {
            Action::Interaction(i) => i.timestamp,
            Action::Assertion(a) => a.timestamp,
            Action::Key(k) => k.timestamp,
        }
    }

    pub fn selector(&self) -> Option<&Selector> {
        match self {
            Action::Interaction(i) => Some(&i.selector),
            Action::Assertion(a) => Some(&a.selector),
            Action::Key(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct RecordedTrace {
    pub main_activity: String,
    pub package: String,
    pub actions: Vec<Action>,
}

impl RecordedTrace {
    pub fn new(package: impl Into<String>, main_activity: impl Into<String>) -> Self {
        RecordedTrace { main_activity: main_activity.into(), package: package.into(), actions: Vec::new() }
    }

    pub fn validate(&self) -> Result<(), RecorderError> {
        let mut last = 0;
        for (i, action) in self.actions.iter().enumerate() {
            if action.timestamp() < last {
                return Err(RecorderError::InvalidAction(format!("action {i}: timestamp goes backwards")));
            }
            last = action.timestamp();
            match action {
                Action::Interaction(def) => {
                    if def.itype == InteractionType::Type && def.props.len() != 1 {
                        return Err(RecorderError::InvalidAction(format!("action {i}: type needs exactly one text")));
                    }
                }
                Action::Assertion(def) => def.validate()?,
                Action::Key(_) => {}
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("trace serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self, RecorderError> {
        let trace: RecordedTrace = serde_json::from_str(s).map_err(|e| RecorderError::Json(e.to_string()))?;
        trace.validate()?;
        Ok(trace)
    }
}
