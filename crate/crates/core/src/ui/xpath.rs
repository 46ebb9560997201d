//! Positional XPath subset over UI trees.
//!
//! Grammar:
//!
//! ```text
//! path    := ( "/" class index? )+
//! class   := [A-Za-z_][A-Za-z0-9_.]*
//! index   := "[" [1-9][0-9]* "]"
//! ```
//!
//! Each step selects the children of the current node set whose class
//! equals `class`; an index keeps only the i-th such child (1-based,
//! counted per parent among same-class siblings).

use std::fmt;
use std::str::FromStr;

use super::{MatchResult, NodeId, UiNode, UiTree};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid xpath {path:?} at byte {offset}: {reason}")]
pub struct XPathError {
    pub path: String,
    pub offset: usize,
    pub reason: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Step {
    pub class_name: String,
    pub index: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct XPath {
    steps: Vec<Step>,
}

pub fn is_valid_class_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.')
}

impl XPath {
    pub fn parse(path: &str) -> Result<Self, XPathError> {
        let err = |offset, reason| XPathError { path: path.to_owned(), offset, reason };
        let bytes = path.as_bytes();
        let mut pos = 0;
        let mut steps = Vec::new();
        if bytes.is_empty() {
            return Err(err(0, "empty path"));
        }
        while pos < bytes.len() {
            if bytes[pos] != b'/' {
                return Err(err(pos, "expected '/'"));
            }
            pos += 1;
            let start = pos;
            while pos < bytes.len() && bytes[pos] != b'/' && bytes[pos] != b'[' {
                pos += 1;
            }
            let class_name = &path[start..pos];
            if !is_valid_class_name(class_name) {
                return Err(err(start, "invalid class name"));
            }
            let mut index = None;
            if pos < bytes.len() && bytes[pos] == b'[' {
                pos += 1;
                let digits = pos;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                let literal = &path[digits..pos];
                if literal.is_empty() || literal.starts_with('0') {
                    return Err(err(digits, "index must be a positive integer"));
                }
                if pos >= bytes.len() || bytes[pos] != b']' {
                    return Err(err(pos, "expected ']'"));
                }
                pos += 1;
                index = Some(literal.parse().map_err(|_| err(digits, "index out of range"))?);
            }
            steps.push(Step { class_name: class_name.to_owned(), index });
        }
        Ok(XPath { steps })
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// Nodes selected by this path, in document order.
    pub fn select<'a>(&self, tree: &'a UiTree) -> Vec<&'a UiNode> {
        let (first, rest) = self.steps.split_first().expect("parsed paths are non-empty");
        let root_matches =
            tree.root.class_name == first.class_name && first.index.is_none_or(|i| i == 1);
        let mut current: Vec<&UiNode> = if root_matches { vec![&tree.root] } else { Vec::new() };
        for step in rest {
            let mut next = Vec::new();
            for node in current {
                let same_class = node.children.iter().filter(|c| c.class_name == step.class_name);
                match step.index {
                    Some(i) => next.extend(same_class.skip(i as usize - 1).take(1)),
                    None => next.extend(same_class),
                }
            }
            current = next;
            if current.is_empty() {
                break;
            }
        }
        current
    }
}

impl FromStr for XPath {
    type Err = XPathError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        XPath::parse(s)
    }
}

impl fmt::Display for XPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for step in &self.steps {
            write!(f, "/{}", step.class_name)?;
            if let Some(i) = step.index {
                write!(f, "[{i}]")?;
            }
        }
        Ok(())
    }
}

/// Absolute path of `node` in `tree`, or `None` when the node is absent.
///
/// A step carries an index only when its parent has more than one child
/// of the same class.
pub fn xpath_for(tree: &UiTree, node: NodeId) -> Option<XPath> {
    let path = tree.path_to(node)?;
    let mut steps = vec![Step { class_name: path[0].class_name.clone(), index: None }];
    for pair in path.windows(2) {
        let (parent, child) = (pair[0], pair[1]);
        let mut position = 0;
        let mut total = 0;
        for sibling in parent.children.iter().filter(|c| c.class_name == child.class_name) {
            total += 1;
            if sibling.node_id == child.node_id {
                position = total;
            }
        }
        steps.push(Step {
            class_name: child.class_name.clone(),
            index: (total > 1).then_some(position),
        });
    }
    Some(XPath { steps })
}

pub fn evaluate_xpath(tree: &UiTree, path: &str) -> Result<MatchResult, XPathError> {
    let xpath = XPath::parse(path)?;
    Ok(MatchResult::from_matches(xpath.select(tree).iter().map(|n| n.node_id)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ui::{Rect, WindowKind};

    fn n(id: u32, class: &str) -> UiNode {
        UiNode::new(NodeId(id), class, Rect::sized(1, 1).unwrap())
    }

    #[test]
    fn parses_and_prints() {
        let p = XPath::parse("/RelativeLayout/TableLayout[2]/TableRow[2]/Button[2]").unwrap();
        assert_eq!(p.steps().len(), 4);
        assert_eq!(p.steps()[1].index, Some(2));
        assert_eq!(p.to_string(), "/RelativeLayout/TableLayout[2]/TableRow[2]/Button[2]");
        assert_eq!(XPath::parse("/android.widget.Button").unwrap().steps()[0].class_name,
            "android.widget.Button");
    }

    #[test]
    fn rejects_malformed_paths() {
        for bad in ["", "/", "A", "//A", "/A[0]", "/A[]", "/A[1", "/1A", "/A[-1]", "/A[01]", "/A/"] {
            assert!(XPath::parse(bad).is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn indexes_count_same_class_siblings_only() {
        let root = n(0, "LinearLayout").with_children(vec![
            n(1, "TextView"),
            n(2, "Button"),
            n(3, "TextView"),
            n(4, "ImageView"),
        ]);
        let tree = UiTree::new(WindowKind::Activity, Rect::sized(1, 1).unwrap(), root);
        assert_eq!(xpath_for(&tree, NodeId(3)).unwrap().to_string(), "/LinearLayout/TextView[2]");
        assert_eq!(xpath_for(&tree, NodeId(2)).unwrap().to_string(), "/LinearLayout/Button");
        assert_eq!(xpath_for(&tree, NodeId(0)).unwrap().to_string(), "/LinearLayout");
        assert!(xpath_for(&tree, NodeId(9)).is_none());
        assert_eq!(evaluate_xpath(&tree, "/LinearLayout/TextView[2]").unwrap(),
            MatchResult::Unique(NodeId(3)));
        assert_eq!(evaluate_xpath(&tree, "/LinearLayout/TextView").unwrap(),
            MatchResult::Ambiguous(2));
        assert_eq!(evaluate_xpath(&tree, "/LinearLayout/TextView[3]").unwrap(),
            MatchResult::NotFound);
        assert_eq!(evaluate_xpath(&tree, "/FrameLayout").unwrap(), MatchResult::NotFound);
        assert_eq!(evaluate_xpath(&tree, "/LinearLayout[1]").unwrap(),
            MatchResult::Unique(NodeId(0)));
        assert_eq!(evaluate_xpath(&tree, "/LinearLayout[2]").unwrap(), MatchResult::NotFound);
    }

    #[test]
    fn unindexed_steps_fan_out_across_parents() {
        let root = n(0, "L").with_children(vec![
            n(1, "R").with_children(vec![n(3, "B")]),
            n(2, "R").with_children(vec![n(4, "B")]),
        ]);
        let tree = UiTree::new(WindowKind::Activity, Rect::sized(1, 1).unwrap(), root);
        assert_eq!(evaluate_xpath(&tree, "/L/R/B").unwrap(), MatchResult::Ambiguous(2));
        assert_eq!(evaluate_xpath(&tree, "/L/R/B[1]").unwrap(), MatchResult::Ambiguous(2));
        assert_eq!(evaluate_xpath(&tree, "/L/R[2]/B").unwrap(), MatchResult::Unique(NodeId(4)));
    }
}
