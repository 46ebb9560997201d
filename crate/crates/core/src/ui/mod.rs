//! Accessibility hierarchy model and the queries run against it.

mod geometry;
pub mod random;
mod resource_map;
mod selector;
mod tree;
pub mod xpath;

pub use geometry::Rect;
pub use hit_test::hit_test;
pub use resource_map::{build_resource_id_map, build_resource_id_map_traced, ResourceIdMap};
pub use selector::{evaluate_selector, MatchResult, Selector};
pub use tree::{simple_class_name, NodeEntry, NodeFlags, NodeId, UiNode, UiTree, WindowKind};
pub use xpath::{evaluate_xpath, xpath_for, XPath, XPathError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum UiError {
    #[error("invalid rectangle l={left} t={top} r={right} b={bottom}")]
    InvalidRect { left: i32, top: i32, right: i32, bottom: i32 },
    #[error("node id {0} appears more than once")]
    DuplicateNodeId(NodeId),
    #[error("editable node {0} has no text field")]
    EditableWithoutText(NodeId),
    #[error("resource id must not be empty")]
    EmptyResourceId,
    #[error("invalid class name {0:?}")]
    InvalidClassName(String),
    #[error(transparent)]
    XPath(#[from] XPathError),
    #[error("malformed tree json: {0}")]
    Json(String),
}
