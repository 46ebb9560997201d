//! Assertion definition and checking over the assertable properties.

mod property;

pub use property::{PropertyKind, PropertyRegistry};

use std::collections::BTreeSet;

use crate::device::EventPayload;
use crate::recorder::{AssertionDef, AssertionProps, Recorder, RecorderError};
use crate::ui::{evaluate_selector, hit_test, MatchResult, NodeId, Rect, Selector, UiNode, UiTree, XPathError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("invalid property registry: {0}")]
    Registry(String),
    #[error("node {0} is not in the current tree")]
    UnknownNode(NodeId),
    #[error("{0} assertions need a second element")]
    MissingOther(PropertyKind),
    #[error("{0} does not apply to the selected element")]
    NotApplicable(PropertyKind),
    #[error("no selector identifies the selected element")]
    NoSelector,
    #[error(transparent)]
    Invalid(#[from] RecorderError),
}

/// Why an assertion could not be evaluated.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CheckError {
    #[error("selector {selector} matched {found:?}")]
    Unresolved { selector: Selector, found: MatchResult },
    #[error(transparent)]
    Selector(#[from] XPathError),
}

impl CheckError {
    pub fn selector(&self) -> Option<&Selector> {
        match self {
            CheckError::Unresolved { selector, .. } => Some(selector),
            CheckError::Selector(_) => None,
        }
    }
}

/// Fully on screen with a non-empty area, or at least `threshold` percent
/// visible when a threshold is given.
pub fn is_displayed(bounds: &Rect, screen: &Rect, threshold: Option<u8>) -> bool {
    match threshold {
        Some(t) => bounds.visible_at_least(screen, t),
        None => !bounds.is_empty() && screen.contains_rect(bounds),
    }
}

/// Current value of a boolean property on `node`.
pub fn flag_value(node: &UiNode, property: PropertyKind, screen: &Rect) -> Option<bool> {
    let f = &node.flags;
    Some(match property {
        PropertyKind::Checked => f.checked,
        PropertyKind::Clickable => f.clickable,
        PropertyKind::Displayed => is_displayed(&node.bounds, screen, None),
        PropertyKind::Enabled => f.enabled,
        PropertyKind::Focus => f.focused,
        PropertyKind::Focusable => f.focusable,
        PropertyKind::Text | PropertyKind::Child | PropertyKind::Parent | PropertyKind::Sibling => return None,
    })
}

fn resolve(tree: &UiTree, selector: &Selector) -> Result<NodeId, CheckError> {
    match evaluate_selector(tree, selector)? {
        MatchResult::Unique(id) => Ok(id),
        found => Err(CheckError::Unresolved { selector: selector.clone(), found }),
    }
}

/// Nodes of `tree` holding the asserted property.
pub fn holders(tree: &UiTree, assertion: &AssertionDef, screen: &Rect) -> Result<BTreeSet<NodeId>, CheckError> {
    let p = assertion.property;
    if p.is_relational() {
        let other = assertion.other_selector().expect("validated relational assertion");
        let b = resolve(tree, other)?;
        let parent = tree.parent_of(b);
        return Ok(match p {
            PropertyKind::Child => tree.find(b).map(|n| n.children.iter().map(|c| c.node_id).collect()).unwrap_or_default(),
            PropertyKind::Parent => parent.map(|n| n.node_id).into_iter().collect(),
            _ => parent
                .map(|n| n.children.iter().map(|c| c.node_id).filter(|&c| c != b).collect())
                .unwrap_or_default(),
        });
    }
    Ok(tree
        .nodes()
        .filter(|n| match p {
            PropertyKind::Text => n.text.as_deref() == assertion.expected_text(),
            PropertyKind::Displayed => is_displayed(&n.bounds, screen, assertion.threshold),
            _ => flag_value(n, p, screen).unwrap_or(false),
        })
        .map(|n| n.node_id)
        .collect())
}

/// Evaluates an assertion on `tree`: the primary element must be among the
/// holders of the property, or outside them when negated.
pub fn check_assertion(tree: &UiTree, assertion: &AssertionDef, screen: &Rect) -> Result<bool, CheckError> {
    let target = resolve(tree, &assertion.selector)?;
    let held = holders(tree, assertion, screen)?.contains(&target);
    Ok(held != assertion.negated)
}

/// Element picked in the assertion pane.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ManualSelection {
    pub node_id: NodeId,
    pub bounds: Rect,
    pub properties: Vec<PropertyKind>,
}

pub fn manual_select(registry: &PropertyRegistry, tree: &UiTree, x: i32, y: i32) -> Option<ManualSelection> {
    let node = tree.find(hit_test(tree, x, y)?)?;
    Some(ManualSelection { node_id: node.node_id, bounds: node.bounds, properties: registry.property_menu(node) })
}

fn selector_for(recorder: &Recorder, tree: &UiTree, id: NodeId) -> Result<Selector, OracleError> {
    recorder.choose_selector(Some(id), &EventPayload::default(), tree).ok_or(OracleError::NoSelector)
}

/// One assertion per relevant property of the element under the point,
/// each capturing the property's current value.
pub fn auto_assert(
    registry: &PropertyRegistry,
    recorder: &Recorder,
    tree: &UiTree,
    x: i32,
    y: i32,
    timestamp: u64,
) -> Vec<AssertionDef> {
    let Some(node) = hit_test(tree, x, y).and_then(|id| tree.find(id)) else { return Vec::new() };
    let Ok(selector) = selector_for(recorder, tree, node.node_id) else { return Vec::new() };
    registry
        .relevant_properties(&node.class_name)
        .iter()
        .filter(|p| !p.is_relational() && p.applies_to(node))
        .map(|&p| {
            let mut a = AssertionDef::unary(p, selector.clone(), timestamp);
            match flag_value(node, p, &tree.screen) {
                Some(value) => a.negated = !value,
                None => a.props = AssertionProps::Values(vec![node.text.clone().unwrap_or_default()]),
            }
            a
        })
        .collect()
}

/// Tester's choices for a manually defined assertion.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ManualChoice {
    /// Expected text; the element's current text when absent.
    pub value: Option<String>,
    /// Related element for child, parent and sibling.
    pub other: Option<NodeId>,
    pub negated: bool,
    pub threshold: Option<u8>,
}

/// Builds the assertion and appends it to the recorder's trace.
pub fn commit_manual(
    recorder: &mut Recorder,
    tree: &UiTree,
    node: NodeId,
    property: PropertyKind,
    choice: ManualChoice,
    timestamp: u64,
) -> Result<AssertionDef, OracleError> {
    let target = tree.find(node).ok_or(OracleError::UnknownNode(node))?;
    let selector = selector_for(recorder, tree, node)?;
    let props = if property.is_relational() {
        let other = choice.other.ok_or(OracleError::MissingOther(property))?;
        if !tree.contains(other) {
            return Err(OracleError::UnknownNode(other));
        }
        AssertionProps::Selector(selector_for(recorder, tree, other)?)
    } else if property == PropertyKind::Text {
        match choice.value.or_else(|| target.text.clone()) {
            Some(v) => AssertionProps::Values(vec![v]),
            None => return Err(OracleError::NotApplicable(property)),
        }
    } else {
        if !property.applies_to(target) {
            return Err(OracleError::NotApplicable(property));
        }
        AssertionProps::Values(Vec::new())
    };
    let assertion = AssertionDef { property, selector, timestamp, props, negated: choice.negated, threshold: choice.threshold };
    recorder.record_assertion(assertion.clone())?;
    Ok(assertion)
}
