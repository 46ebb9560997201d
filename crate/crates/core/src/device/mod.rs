//! Simulated device and app: renders screens for a device profile, runs
//! app transitions and reports accessibility events.

pub mod app;
mod event;
mod profile;
mod render;
mod session;

pub use app::{App, AppSpec};
pub use event::{
    AccEvent, Emitted, EventKind, EventPayload, Gesture, GestureAction, KeyType, ScrollDirection, BACKSPACE,
};
pub use profile::{DeviceProfile, Quirk};
pub use render::{render, AppState, Rendered, WidgetState};
pub use session::{DeviceSession, PerformAction};

use crate::ui::{Selector, XPathError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DeviceError {
    #[error("invalid device profile {name:?}: {reason}")]
    InvalidProfile { name: String, reason: String },
    #[error("invalid app spec: {0}")]
    InvalidApp(String),
    #[error("unknown screen {0:?}")]
    UnknownScreen(String),
    #[error("point ({x}, {y}) is outside the screen")]
    PointOffScreen { x: i32, y: i32 },
    #[error("invalid gesture: {0}")]
    InvalidGesture(String),
    #[error("malformed {0}")]
    Json(String),
}

/// Why an action on a selected element could not be carried out.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PerformError {
    #[error("no element matches {0}")]
    NotFound(Selector),
    #[error("{count} elements match {selector}")]
    Ambiguous { selector: Selector, count: usize },
    #[error("element {selector} is off screen (center at {x}, {y})")]
    OffScreen { selector: Selector, x: i32, y: i32 },
    #[error("element {selector} cannot take this action: {reason}")]
    NotActionable { selector: Selector, reason: String },
    #[error(transparent)]
    Selector(#[from] XPathError),
}
