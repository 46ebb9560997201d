use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::ui::{NodeId, UiTree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EventKind {
    ViewClicked,
    ViewLongClicked,
    ViewTextChanged,
    ViewSelected,
    ViewScrolled,
    WindowStateChanged,
    WindowContentChanged,
}

impl EventKind {
    pub fn is_window_event(self) -> bool {
        matches!(self, EventKind::WindowStateChanged | EventKind::WindowContentChanged)
    }
}

/// Details carried by an event; class and text of the source are always
/// filled for interaction events so the element can be described even
/// after its window is gone.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EventPayload {
    #[serde(default, skip_serializing_if = "Option::is_none", rename = "class")]
    pub class_name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub text: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AccEvent {
    pub kind: EventKind,
    /// Absent when the source window became inactive.
    pub source: Option<NodeId>,
    #[serde(default)]
    pub payload: EventPayload,
    /// Milliseconds since session start.
    pub timestamp: u64,
}

/// An event together with the window content current when it fired.
#[derive(Debug, Clone)]
pub struct Emitted {
    pub event: AccEvent,
    pub tree: Arc<UiTree>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum KeyType {
    /// Input-method action key.
    Action,
    /// Hides the on-screen keyboard.
    Close,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum ScrollDirection {
    Up,
    Down,
}

impl ScrollDirection {
    pub fn as_str(self) -> &'static str {
        match self {
            ScrollDirection::Up => "up",
            ScrollDirection::Down => "down",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "up" => Some(ScrollDirection::Up),
            "down" => Some(ScrollDirection::Down),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum GestureAction {
    Click { x: i32, y: i32 },
    LongClick { x: i32, y: i32 },
    /// One keystroke on the focused field; `\u{8}` deletes the last character.
    Type { ch: char },
    /// Select the item under a point, or the `index`-th selectable node.
    Select {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        x: Option<i32>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        y: Option<i32>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        index: Option<usize>,
    },
    Scroll { direction: ScrollDirection },
    Key { key: KeyType },
}

pub const BACKSPACE: char = '\u{8}';

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gesture {
    pub timestamp: u64,
    #[serde(flatten)]
    pub action: GestureAction,
}

impl Gesture {
    pub fn new(timestamp: u64, action: GestureAction) -> Self {
        Gesture { timestamp, action }
    }

    pub fn point(&self) -> Option<(i32, i32)> {
        match self.action {
            GestureAction::Click { x, y } | GestureAction::LongClick { x, y } => Some((x, y)),
            GestureAction::Select { x: Some(x), y: Some(y), .. } => Some((x, y)),
            _ => None,
        }
    }
}
