use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ui::{simple_class_name, UiNode};

use super::OracleError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum PropertyKind {
    Checked,
    Clickable,
    Displayed,
    Enabled,
    Focus,
    Focusable,
    Text,
    Child,
    Parent,
    Sibling,
}

impl PropertyKind {
    pub const ALL: [PropertyKind; 10] = [
        PropertyKind::Checked,
        PropertyKind::Clickable,
        PropertyKind::Displayed,
        PropertyKind::Enabled,
        PropertyKind::Focus,
        PropertyKind::Focusable,
        PropertyKind::Text,
        PropertyKind::Child,
        PropertyKind::Parent,
        PropertyKind::Sibling,
    ];

    pub fn is_relational(self) -> bool {
        matches!(self, PropertyKind::Child | PropertyKind::Parent | PropertyKind::Sibling)
    }

    pub fn is_boolean(self) -> bool {
        !self.is_relational() && self != PropertyKind::Text
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PropertyKind::Checked => "checked",
            PropertyKind::Clickable => "clickable",
            PropertyKind::Displayed => "displayed",
            PropertyKind::Enabled => "enabled",
            PropertyKind::Focus => "focus",
            PropertyKind::Focusable => "focusable",
            PropertyKind::Text => "text",
            PropertyKind::Child => "child",
            PropertyKind::Parent => "parent",
            PropertyKind::Sibling => "sibling",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        PropertyKind::ALL.into_iter().find(|p| p.as_str() == s)
    }

    /// Whether the property makes sense for `node` at all.
    pub fn applies_to(self, node: &UiNode) -> bool {
        match self {
            PropertyKind::Checked => node.flags.checkable,
            PropertyKind::Text => node.text.is_some(),
            _ => true,
        }
    }
}

impl fmt::Display for PropertyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Relevant properties per widget class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyRegistry {
    default: Vec<PropertyKind>,
    classes: BTreeMap<String, Vec<PropertyKind>>,
}

const BUILTIN: &str = include_str!("../../data/relevant_properties.json");

impl Default for PropertyRegistry {
    fn default() -> Self {
        PropertyRegistry::from_json(BUILTIN).expect("bundled registry is valid")
    }
}

impl PropertyRegistry {
    pub fn from_json(s: &str) -> Result<Self, OracleError> {
        let reg: PropertyRegistry = serde_json::from_str(s).map_err(|e| OracleError::Registry(e.to_string()))?;
        for (class, props) in std::iter::once(("default", &reg.default)).chain(reg.classes.iter().map(|(k, v)| (k.as_str(), v))) {
            for (i, p) in props.iter().enumerate() {
                if props[..i].contains(p) {
                    return Err(OracleError::Registry(format!("{class}: {p} listed twice")));
                }
            }
        }
        Ok(reg)
    }

    /// Looked up by full class name, then simple name, then the default list.
    pub fn relevant_properties(&self, class_name: &str) -> &[PropertyKind] {
        self.classes
            .get(class_name)
            .or_else(|| self.classes.get(simple_class_name(class_name)))
            .unwrap_or(&self.default)
    }

    /// Relevant properties first, then every other property that applies.
    pub fn property_menu(&self, node: &UiNode) -> Vec<PropertyKind> {
        let relevant = self.relevant_properties(&node.class_name);
        let mut menu: Vec<_> = relevant.iter().copied().filter(|p| p.applies_to(node)).collect();
        menu.extend(PropertyKind::ALL.into_iter().filter(|p| p.applies_to(node) && !relevant.contains(p)));
        menu
    }
}
