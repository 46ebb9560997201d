use std::fmt;

use serde::{Deserialize, Serialize};

use super::xpath::{is_valid_class_name, XPath, XPathError};
use super::{simple_class_name, NodeId, UiNode, UiTree, UiError};

/// Device-independent reference to a UI element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", try_from = "RawSelector", into = "RawSelector")]
pub enum Selector {
    ResourceId(String),
    XPath(String),
    PropertyBased { class_name: String, text: Option<String> },
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
enum RawSelector {
    ResourceId(String),
    Xpath(String),
    PropertyBased {
        #[serde(rename = "class")]
        class_name: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        text: Option<String>,
    },
}

impl TryFrom<RawSelector> for Selector {
    type Error = UiError;

    fn try_from(raw: RawSelector) -> Result<Self, Self::Error> {
        match raw {
            RawSelector::ResourceId(id) => Selector::resource_id(id),
            RawSelector::Xpath(path) => Ok(Selector::xpath(&path)?),
            RawSelector::PropertyBased { class_name, text } => Selector::property_based(class_name, text),
        }
    }
}

impl From<Selector> for RawSelector {
    fn from(s: Selector) -> Self {
        match s {
            Selector::ResourceId(id) => RawSelector::ResourceId(id),
            Selector::XPath(path) => RawSelector::Xpath(path),
            Selector::PropertyBased { class_name, text } => RawSelector::PropertyBased { class_name, text },
        }
    }
}

impl Selector {
    pub fn resource_id(id: impl Into<String>) -> Result<Self, UiError> {
        let id = id.into();
        if id.is_empty() {
            return Err(UiError::EmptyResourceId);
        }
        Ok(Selector::ResourceId(id))
    }

    pub fn xpath(path: &str) -> Result<Self, XPathError> {
        XPath::parse(path).map(|p| Selector::XPath(p.to_string()))
    }

    pub fn property_based(class_name: impl Into<String>, text: Option<String>) -> Result<Self, UiError> {
        let class_name = class_name.into();
        if !is_valid_class_name(&class_name) {
            return Err(UiError::InvalidClassName(class_name));
        }
        Ok(Selector::PropertyBased { class_name, text })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Selector::ResourceId(_) => "resource-id",
            Selector::XPath(_) => "xpath",
            Selector::PropertyBased { .. } => "property-based",
        }
    }
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Selector::ResourceId(id) => write!(f, "id:{id}"),
            Selector::XPath(path) => write!(f, "xpath:{path}"),
            Selector::PropertyBased { class_name, text: Some(t) } => write!(f, "{class_name}[text={t:?}]"),
            Selector::PropertyBased { class_name, text: None } => write!(f, "{class_name}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum MatchResult {
    Unique(NodeId),
    NotFound,
    Ambiguous(usize),
}

impl MatchResult {
    pub fn from_matches(ids: impl IntoIterator<Item = NodeId>) -> Self {
        let mut iter = ids.into_iter();
        match (iter.next(), iter.next()) {
            (None, _) => MatchResult::NotFound,
            (Some(id), None) => MatchResult::Unique(id),
            (Some(_), Some(_)) => MatchResult::Ambiguous(2 + iter.count()),
        }
    }

    pub fn unique(self) -> Option<NodeId> {
        match self {
            MatchResult::Unique(id) => Some(id),
            _ => None,
        }
    }
}

fn class_matches(node: &UiNode, class_name: &str) -> bool {
    node.class_name == class_name || node.simple_class() == simple_class_name(class_name)
}

pub fn evaluate_selector(tree: &UiTree, selector: &Selector) -> Result<MatchResult, XPathError> {
    Ok(match selector {
        Selector::ResourceId(id) => MatchResult::from_matches(
            tree.nodes().filter(|n| n.resource_id.as_deref() == Some(id)).map(|n| n.node_id),
        ),
        Selector::XPath(path) => return super::evaluate_xpath(tree, path),
        Selector::PropertyBased { class_name, text } => MatchResult::from_matches(
            tree.nodes()
                .filter(|n| class_matches(n, class_name))
                .filter(|n| text.is_none() || n.text == *text)
                .map(|n| n.node_id),
        ),
    })
}
