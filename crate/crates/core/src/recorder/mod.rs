//! Turns the device's event stream into a recorded trace.

mod trace;

use std::sync::Arc;

pub use trace::{Action, AssertionDef, AssertionProps, InteractionDef, InteractionType, KeyDef, RecordedTrace};

use crate::device::{AccEvent, EventKind, EventPayload, KeyType};
use crate::ui::{build_resource_id_map, xpath_for, NodeId, ResourceIdMap, Selector, UiTree};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RecorderError {
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("malformed trace: {0}")]
    Json(String),
}

/// Separates user typing from text set by the app: a text change is kept
/// only when the very next event reports new window content.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub enum TypeFsm {
    #[default]
    Idle,
    Pending(InteractionDef),
}

impl TypeFsm {
    /// Feeds the next event kind; returns the accepted type action, if any.
    pub fn resolve(&mut self, next: EventKind) -> Option<InteractionDef> {
        match std::mem::take(self) {
            TypeFsm::Pending(def) if next == EventKind::WindowContentChanged => Some(def),
            _ => None,
        }
    }

    pub fn is_pending(&self) -> bool {
        matches!(self, TypeFsm::Pending(_))
    }
}

/// One recording session.
#[derive(Debug, Clone)]
pub struct Recorder {
    trace: RecordedTrace,
    ids: ResourceIdMap,
    tree: Option<Arc<UiTree>>,
    fsm: TypeFsm,
}

impl Recorder {
    pub fn start(package: impl Into<String>, main_activity: impl Into<String>) -> Self {
        Recorder {
            trace: RecordedTrace::new(package, main_activity),
            ids: ResourceIdMap::default(),
            tree: None,
            fsm: TypeFsm::Idle,
        }
    }

    pub fn trace(&self) -> &RecordedTrace {
        &self.trace
    }

    pub fn resource_ids(&self) -> &ResourceIdMap {
        &self.ids
    }

    /// Tree seen with the latest window event.
    pub fn current_tree(&self) -> Option<&Arc<UiTree>> {
        self.tree.as_ref()
    }

    pub fn on_event(&mut self, event: &AccEvent, tree: &Arc<UiTree>) {
        if let Some(def) = self.fsm.resolve(event.kind) {
            self.push(Action::Interaction(def));
        }
        let itype = match event.kind {
            EventKind::WindowStateChanged | EventKind::WindowContentChanged => {
                self.ids = build_resource_id_map(tree);
                self.tree = Some(tree.clone());
                return;
            }
            EventKind::ViewTextChanged => {
                if let Some(selector) = self.choose_selector(event.source, &event.payload, tree) {
                    self.fsm = TypeFsm::Pending(InteractionDef {
                        itype: InteractionType::Type,
                        selector,
                        timestamp: event.timestamp,
                        props: vec![event.payload.text.clone().unwrap_or_default()],
                    });
                }
                return;
            }
            EventKind::ViewClicked => InteractionType::Click,
            EventKind::ViewLongClicked => InteractionType::LongClick,
            EventKind::ViewSelected => InteractionType::Select,
            EventKind::ViewScrolled => InteractionType::Scroll,
        };
        let Some(selector) = self.choose_selector(event.source, &event.payload, tree) else { return };
        let props = match itype {
            InteractionType::Scroll => event.payload.text.iter().cloned().collect(),
            _ => Vec::new(),
        };
        self.push(Action::Interaction(InteractionDef { itype, selector, timestamp: event.timestamp, props }));
    }

    /// Unique resource id, else the node's XPath, else class and text from
    /// the event when the source is no longer part of the UI.
    pub fn choose_selector(&self, source: Option<NodeId>, payload: &EventPayload, tree: &UiTree) -> Option<Selector> {
        if let Some(node) = source.and_then(|id| tree.find(id)) {
            if let Some(id) = &node.resource_id {
                if self.ids.is_unique(id) {
                    return Selector::resource_id(id.clone()).ok();
                }
            }
            return xpath_for(tree, node.node_id).map(|p| Selector::XPath(p.to_string()));
        }
        let class_name = payload.class_name.clone()?;
        Selector::property_based(class_name, payload.text.clone()).ok()
    }

    pub fn record_key(&mut self, key: KeyType, timestamp: u64) {
        self.push(Action::Key(KeyDef { key, timestamp }));
    }

    pub fn record_assertion(&mut self, assertion: AssertionDef) -> Result<(), RecorderError> {
        assertion.validate()?;
        self.push(Action::Assertion(assertion));
        Ok(())
    }

    /// Ends the session; an unresolved text change is dropped.
    pub fn stop(self) -> RecordedTrace {
        self.trace
    }

    fn push(&mut self, mut action: Action) {
        let floor = self.trace.actions.last().map_or(0, Action::timestamp);
        let ts = match &mut action {
            Action::Interaction(d) => &mut d.timestamp,
            Action::Assertion(d) => &mut d.timestamp,
            Action::Key(d) => &mut d.timestamp,
        };
        *ts = (*ts).max(floor);
        self.trace.actions.push(action);
    }
}
