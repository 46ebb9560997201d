use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Rect, UiError};

/// Identifier of a node, unique within one [`UiTree`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u32);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// State flags of a node. Unspecified flags read as `false`, except
/// `enabled`, which defaults to `true`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default)]
pub struct NodeFlags {
    pub clickable: bool,
    pub long_clickable: bool,
    pub checkable: bool,
    pub checked: bool,
    pub enabled: bool,
    pub focusable: bool,
    pub focused: bool,
    pub editable: bool,
    pub scrollable: bool,
    pub selectable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct UiNode {
    pub node_id: NodeId,
    #[serde(rename = "class")]
    pub class_name: String,
    #[serde(default)]
    pub resource_id: Option<String>,
    #[serde(default)]
    pub text: Option<String>,
    pub bounds: Rect,
    #[serde(default)]
    pub flags: NodeFlags,
    #[serde(default)]
    pub children: Vec<UiNode>,
}

impl Default for NodeFlags {
    fn default() -> Self {
        NodeFlags {
            clickable: false,
            long_clickable: false,
            checkable: false,
            checked: false,
            enabled: true,
            focusable: false,
            focused: false,
            editable: false,
            scrollable: false,
            selectable: false,
        }
    }
}

impl UiNode {
    pub fn new(node_id: NodeId, class_name: impl Into<String>, bounds: Rect) -> Self {
        UiNode {
            node_id,
            class_name: class_name.into(),
            resource_id: None,
            text: None,
            bounds,
            flags: NodeFlags::default(),
            children: Vec::new(),
        }
    }

    pub fn with_resource_id(mut self, id: impl Into<String>) -> Self {
        self.resource_id = Some(id.into());
        self
    }

    pub fn with_text(mut self, text: impl Into<String>) -> Self {
        self.text = Some(text.into());
        self
    }

    pub fn with_flags(mut self, flags: NodeFlags) -> Self {
        self.flags = flags;
        self
    }

    pub fn with_children(mut self, children: Vec<UiNode>) -> Self {
        self.children = children;
        self
    }

    /// Unqualified class name: `android.widget.Button` -> `Button`.
    pub fn simple_class(&self) -> &str {
        simple_class_name(&self.class_name)
    }
}

pub fn simple_class_name(class_name: &str) -> &str {
    class_name.rsplit('.').next().unwrap_or(class_name)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum WindowKind {
    Activity,
    Dialog,
    Popup,
}

/// Accessibility hierarchy of one window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UiTree {
    pub window: WindowKind,
    pub active: bool,
    pub screen: Rect,
    pub root: UiNode,
}

/// A node visited during a pre-order walk, with its structural position.
#[derive(Debug, Clone, Copy)]
pub struct NodeEntry<'a> {
    pub node: &'a UiNode,
    pub depth: usize,
    /// Pre-order position of the parent, `None` for the root.
    pub parent: Option<usize>,
    /// Position among the parent's children.
    pub sibling_index: usize,
}

impl UiTree {
    pub fn new(window: WindowKind, screen: Rect, root: UiNode) -> Self {
        UiTree { window, active: true, screen, root }
    }

    /// Pre-order walk; document order, parents before children.
    pub fn walk(&self) -> Vec<NodeEntry<'_>> {
        let mut out = Vec::new();
        let mut stack = vec![(&self.root, 0usize, None, 0usize)];
        while let Some((node, depth, parent, sibling_index)) = stack.pop() {
            let me = out.len();
            out.push(NodeEntry { node, depth, parent, sibling_index });
            for (i, child) in node.children.iter().enumerate().rev() {
                stack.push((child, depth + 1, Some(me), i));
            }
        }
        out
    }

    pub fn nodes(&self) -> impl Iterator<Item = &UiNode> {
        let mut stack = vec![&self.root];
        std::iter::from_fn(move || {
            let node = stack.pop()?;
            stack.extend(node.children.iter().rev());
            Some(node)
        })
    }

    pub fn len(&self) -> usize {
        self.nodes().count()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn find(&self, id: NodeId) -> Option<&UiNode> {
        self.nodes().find(|n| n.node_id == id)
    }

    pub fn find_mut(&mut self, id: NodeId) -> Option<&mut UiNode> {
        let mut stack = vec![&mut self.root];
        while let Some(node) = stack.pop() {
            if node.node_id == id {
                return Some(node);
            }
            stack.extend(node.children.iter_mut());
        }
        None
    }

    pub fn contains(&self, id: NodeId) -> bool {
        self.find(id).is_some()
    }

    /// Node ids from the root down to `id`, inclusive.
    pub fn path_to(&self, id: NodeId) -> Option<Vec<&UiNode>> {
        fn go<'a>(node: &'a UiNode, id: NodeId, acc: &mut Vec<&'a UiNode>) -> bool {
            acc.push(node);
            if node.node_id == id {
                return true;
            }
            for child in &node.children {
                if go(child, id, acc) {
                    return true;
                }
            }
            acc.pop();
            false
        }
        let mut acc = Vec::new();
        go(&self.root, id, &mut acc).then_some(acc)
    }

    pub fn parent_of(&self, id: NodeId) -> Option<&UiNode> {
        let path = self.path_to(id)?;
        path.len().checked_sub(2).map(|i| path[i])
    }

    /// Checks the structural invariants: unique node ids and text on
    /// every editable node.
    pub fn validate(&self) -> Result<(), UiError> {
        let mut seen = HashSet::new();
        for node in self.nodes() {
            if !seen.insert(node.node_id) {
                return Err(UiError::DuplicateNodeId(node.node_id));
            }
            if node.flags.editable && node.text.is_none() {
                return Err(UiError::EditableWithoutText(node.node_id));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("tree serialization is infallible")
    }

    pub fn from_json(s: &str) -> Result<Self, UiError> {
        let tree: UiTree = serde_json::from_str(s).map_err(|e| UiError::Json(e.to_string()))?;
        tree.validate()?;
        Ok(tree)
    }
}
