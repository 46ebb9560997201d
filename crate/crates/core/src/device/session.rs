use std::sync::Arc;

use super::app::{App, Effect, TriggerKind};
use super::event::{AccEvent, Emitted, EventKind, EventPayload, Gesture, GestureAction, KeyType, ScrollDirection, BACKSPACE};
use super::render::{render, AppState, Rendered};
use super::{DeviceError, DeviceProfile, PerformError};
use crate::ui::{evaluate_selector, hit_test, MatchResult, NodeId, Selector, UiNode, UiTree};

/// Operation requested on a resolved element by the test executor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PerformAction {
    Click,
    LongClick,
    Select,
    /// Replace the field content with the given text.
    TypeText(String),
    Scroll(ScrollDirection),
}

/// One running app on one simulated device.
///
/// Transitions settle synchronously, so the UI is quiescent whenever no
/// method is executing.
#[derive(Debug, Clone)]
pub struct DeviceSession {
    app: Arc<App>,
    device: DeviceProfile,
    state: AppState,
    /// Window stack; the first entry is the activity, later ones dialogs.
    stack: Vec<String>,
    current: Rendered,
    clock: u64,
}

impl DeviceSession {
    /// A session showing the main activity in its initial state.
    pub fn new(app: Arc<App>, device: DeviceProfile) -> Result<Self, DeviceError> {
        device.validate()?;
        let state = AppState::initial(app.spec());
        let main = app.main_activity().to_owned();
        let current = render(&app, &main, &state, &device)?;
        Ok(DeviceSession { app, device, state, stack: vec![main], current, clock: 0 })
    }

    /// Restarts the app at `activity` with fresh state.
    pub fn launch(&mut self, activity: &str) -> Result<Vec<Emitted>, DeviceError> {
        if self.app.screen(activity).is_none() {
            return Err(DeviceError::UnknownScreen(activity.to_owned()));
        }
        self.state = AppState::initial(self.app.spec());
        self.stack = vec![activity.to_owned()];
        self.rerender();
        Ok(vec![self.window_event(EventKind::WindowStateChanged)])
    }

    pub fn launch_main(&mut self) -> Vec<Emitted> {
        let main = self.app.main_activity().to_owned();
        self.launch(&main).expect("main activity validated with the app")
    }

    pub fn app(&self) -> &App {
        &self.app
    }

    pub fn device(&self) -> &DeviceProfile {
        &self.device
    }

    pub fn tree(&self) -> &Arc<UiTree> {
        &self.current.tree
    }

    pub fn rendered(&self) -> &Rendered {
        &self.current
    }

    pub fn state(&self) -> &AppState {
        &self.state
    }

    pub fn current_screen(&self) -> &str {
        self.stack.last().expect("stack never empty")
    }

    pub fn window_stack(&self) -> &[String] {
        &self.stack
    }

    pub fn clock(&self) -> u64 {
        self.clock
    }

    pub fn advance_clock(&mut self, ms: u64) {
        self.clock += ms;
    }

    /// No transition is ever left pending between calls.
    pub fn is_idle(&self) -> bool {
        true
    }

    /// Delivers a user gesture and returns the accessibility events it
    /// produced, in emission order.
    pub fn dispatch(&mut self, gesture: &Gesture) -> Result<Vec<Emitted>, DeviceError> {
        if let Some((x, y)) = gesture.point() {
            if !self.device.screen().contains_point(x, y) {
                return Err(DeviceError::PointOffScreen { x, y });
            }
        }
        self.clock = self.clock.max(gesture.timestamp);
        Ok(match &gesture.action {
            GestureAction::Click { x, y } => self.activate_at(*x, *y, TriggerKind::Click),
            GestureAction::LongClick { x, y } => self.activate_at(*x, *y, TriggerKind::LongClick),
            GestureAction::Select { x: Some(x), y: Some(y), index: None } => {
                self.activate_at(*x, *y, TriggerKind::Select)
            }
            GestureAction::Select { x: None, y: None, index: Some(i) } => {
                let target = self
                    .current
                    .tree
                    .nodes()
                    .filter(|n| n.flags.selectable)
                    .nth(*i)
                    .map(|n| n.node_id);
                match target {
                    Some(t) => self.activate(t, TriggerKind::Select),
                    None => Vec::new(),
                }
            }
            GestureAction::Select { .. } => {
                return Err(DeviceError::InvalidGesture("select needs either x and y or index".into()))
            }
            GestureAction::Type { ch } => self.type_char(*ch),
            GestureAction::Scroll { direction } => self.scroll(*direction),
            GestureAction::Key { key } => self.press_key(*key),
        })
    }

    /// Changes a node's text the way app code would: the only event is
    /// `VIEW_TEXT_CHANGED`.
    pub fn programmatic_text_change(&mut self, selector: &Selector, text: &str) -> Result<Vec<Emitted>, PerformError> {
        let target = self.resolve(selector)?;
        let node = self.current.tree.find(target).expect("resolved node exists");
        let template = self.current.origins.get(&target).copied();
        let template = match template {
            Some(t) if node.flags.editable || node.text.is_some() => t,
            _ => {
                return Err(PerformError::NotActionable {
                    selector: selector.clone(),
                    reason: "node holds no text".into(),
                })
            }
        };
        let screen = self.current_screen().to_owned();
        self.set_template_text(&screen, template, text.to_owned());
        self.rerender();
        let source = self.current.node_for_template(template);
        Ok(vec![self.emit(EventKind::ViewTextChanged, source, self.payload_of(source), self.current.tree.clone())])
    }

    /// Executes an action on the element designated by `selector`, as a
    /// test runner would.
    pub fn perform(&mut self, selector: &Selector, action: &PerformAction) -> Result<Vec<Emitted>, PerformError> {
        let target = self.resolve(selector)?;
        let node = self.current.tree.find(target).expect("resolved node exists");
        if !matches!(action, PerformAction::Scroll(_)) {
            let (cx, cy) = node.bounds.center();
            if !self.current.tree.screen.contains_point(cx, cy) {
                return Err(PerformError::OffScreen { selector: selector.clone(), x: cx, y: cy });
            }
        }
        Ok(match action {
            PerformAction::Click => self.activate(target, TriggerKind::Click),
            PerformAction::LongClick => self.activate(target, TriggerKind::LongClick),
            PerformAction::Select => self.activate(target, TriggerKind::Select),
            PerformAction::Scroll(direction) => self.scroll(*direction),
            PerformAction::TypeText(text) => {
                let template = match self.current.origins.get(&target) {
                    Some(&t) if node.flags.editable && node.flags.enabled => t,
                    _ => {
                        return Err(PerformError::NotActionable {
                            selector: selector.clone(),
                            reason: "node is not an enabled editable field".into(),
                        })
                    }
                };
                let screen = self.current_screen().to_owned();
                self.state.widget_mut(&screen).focused = Some(template);
                self.set_template_text(&screen, template, text.clone());
                self.rerender();
                self.text_typed(template)
            }
        })
    }

    /// Input-method keys. They produce no interaction event; only the UI
    /// changes they cause are reported.
    pub fn press_key(&mut self, key: KeyType) -> Vec<Emitted> {
        let screen = self.current_screen().to_owned();
        let focused = self.state.widget(&screen).and_then(|w| w.focused);
        match key {
            KeyType::Action => {
                let Some(target) = focused.and_then(|t| self.current.node_for_template(t)) else {
                    return Vec::new();
                };
                let before = (self.current.tree.clone(), self.stack.clone());
                self.run_transitions(target, TriggerKind::ImeAction);
                self.rerender();
                self.change_event(&before.0, &before.1).into_iter().collect()
            }
            KeyType::Close => {
                if focused.is_none() {
                    return Vec::new();
                }
                let before = (self.current.tree.clone(), self.stack.clone());
                self.state.widget_mut(&screen).focused = None;
                self.rerender();
                self.change_event(&before.0, &before.1).into_iter().collect()
            }
        }
    }

    fn resolve(&self, selector: &Selector) -> Result<NodeId, PerformError> {
        match evaluate_selector(&self.current.tree, selector)? {
            MatchResult::Unique(id) => Ok(id),
            MatchResult::NotFound => Err(PerformError::NotFound(selector.clone())),
            MatchResult::Ambiguous(count) => Err(PerformError::Ambiguous { selector: selector.clone(), count }),
        }
    }

    fn activate_at(&mut self, x: i32, y: i32, kind: TriggerKind) -> Vec<Emitted> {
        match hit_test(&self.current.tree, x, y) {
            Some(target) => self.activate(target, kind),
            None => Vec::new(),
        }
    }

    fn activate(&mut self, target: NodeId, kind: TriggerKind) -> Vec<Emitted> {
        let old_tree = self.current.tree.clone();
        let old_stack = self.stack.clone();
        let Some(node) = old_tree.find(target) else { return Vec::new() };
        let responds = node.flags.enabled
            && match kind {
                TriggerKind::Click => node.flags.clickable,
                TriggerKind::LongClick => node.flags.long_clickable,
                TriggerKind::Select => node.flags.selectable,
                TriggerKind::ImeAction => true,
            };
        if !responds {
            return Vec::new();
        }
        let payload = EventPayload {
            class_name: Some(node.class_name.clone()),
            text: node.text.clone(),
            index: old_tree.parent_of(target).and_then(|p| p.children.iter().position(|c| c.node_id == target)),
        };

        let screen = self.current_screen().to_owned();
        if let (TriggerKind::Click, Some(&t)) = (kind, self.current.origins.get(&target)) {
            let widget = self.state.widget_mut(&screen);
            if node.flags.focusable {
                widget.focused = Some(t);
            }
            if node.flags.checkable {
                widget.checked.insert(t, !node.flags.checked);
            }
        }
        let closed = self.run_transitions(target, kind);
        self.rerender();

        let event_kind = match kind {
            TriggerKind::Click => EventKind::ViewClicked,
            TriggerKind::LongClick => EventKind::ViewLongClicked,
            TriggerKind::Select => EventKind::ViewSelected,
            TriggerKind::ImeAction => unreachable!("ime actions go through press_key"),
        };
        let mut out = Vec::with_capacity(2);
        if closed {
            out.push(self.emit(event_kind, None, payload, self.current.tree.clone()));
        } else {
            out.push(self.emit(event_kind, Some(target), payload, old_tree.clone()));
        }
        out.extend(self.change_event(&old_tree, &old_stack));
        out
    }

    /// Applies the app transitions bound to `target`; returns whether the
    /// window holding `target` was closed.
    fn run_transitions(&mut self, target: NodeId, kind: TriggerKind) -> bool {
        let Some(&template) = self.current.origins.get(&target) else { return false };
        let screen = self.current_screen().to_owned();
        let effects: Vec<Effect> = self
            .app
            .transitions_for(&screen, kind, template)
            .flat_map(|t| t.effects.iter().cloned())
            .collect();
        let depth = self.stack.len();
        let mut closed = false;
        for effect in effects {
            match effect {
                Effect::Set { var, value } => {
                    let v = value.eval(&self.state.vars);
                    self.state.vars.insert(var, v);
                }
                Effect::GoTo(next) => {
                    for s in self.stack.drain(..) {
                        self.state.reset_widget(&s);
                    }
                    self.state.reset_widget(&next);
                    self.stack.push(next);
                }
                Effect::ShowDialog(next) => {
                    self.state.reset_widget(&next);
                    self.stack.push(next);
                }
                Effect::CloseWindow => {
                    if self.stack.len() > 1 {
                        let gone = self.stack.pop().expect("len > 1");
                        self.state.reset_widget(&gone);
                        if self.stack.len() < depth {
                            closed = true;
                        }
                    }
                }
            }
        }
        closed
    }

    fn type_char(&mut self, ch: char) -> Vec<Emitted> {
        let screen = self.current_screen().to_owned();
        let Some(template) = self.state.widget(&screen).and_then(|w| w.focused) else { return Vec::new() };
        let Some(node) = self.current.node_for_template(template).and_then(|id| self.current.tree.find(id)) else {
            return Vec::new();
        };
        if !(node.flags.editable && node.flags.enabled) {
            return Vec::new();
        }
        let mut text = node.text.clone().unwrap_or_default();
        if ch == BACKSPACE {
            text.pop();
        } else {
            text.push(ch);
        }
        self.set_template_text(&screen, template, text);
        self.rerender();
        self.text_typed(template)
    }

    /// Events of a user edit: the text change immediately followed by the
    /// content change of the window.
    fn text_typed(&self, template: usize) -> Vec<Emitted> {
        let source = self.current.node_for_template(template);
        let tree = self.current.tree.clone();
        vec![
            self.emit(EventKind::ViewTextChanged, source, self.payload_of(source), tree.clone()),
            self.emit(EventKind::WindowContentChanged, Some(tree.root.node_id), EventPayload::default(), tree),
        ]
    }

    fn scroll(&mut self, direction: ScrollDirection) -> Vec<Emitted> {
        let before = (self.current.tree.clone(), self.stack.clone());
        let screen = self.current_screen().to_owned();
        let max = self.current.max_scroll();
        let step = (self.device.height_px / 2).max(1);
        let widget = self.state.widget_mut(&screen);
        widget.scroll_px = match direction {
            ScrollDirection::Down => (widget.scroll_px + step).min(max),
            ScrollDirection::Up => (widget.scroll_px - step).max(0),
        };
        self.rerender();
        let tree = self.current.tree.clone();
        let source = tree.nodes().find(|n| n.flags.scrollable).unwrap_or(&tree.root).node_id;
        let payload = EventPayload {
            text: Some(direction.as_str().to_owned()),
            ..self.payload_of(Some(source))
        };
        let mut out = vec![self.emit(EventKind::ViewScrolled, Some(source), payload, tree)];
        out.extend(self.change_event(&before.0, &before.1));
        out
    }

    fn set_template_text(&mut self, screen: &str, template: usize, text: String) {
        let bound = self
            .app
            .screen(screen)
            .and_then(|s| s.root.preorder().get(template).and_then(|n| n.bound_variable().map(str::to_owned)));
        match bound {
            Some(var) => {
                self.state.vars.insert(var, text);
            }
            None => {
                self.state.widget_mut(screen).text.insert(template, text);
            }
        }
    }

    fn rerender(&mut self) {
        let screen = self.current_screen().to_owned();
        self.current = render(&self.app, &screen, &self.state, &self.device).expect("stack holds known screens");
    }

    fn change_event(&self, old_tree: &UiTree, old_stack: &[String]) -> Option<Emitted> {
        let kind = if self.stack != old_stack {
            EventKind::WindowStateChanged
        } else if *self.current.tree != *old_tree {
            EventKind::WindowContentChanged
        } else {
            return None;
        };
        Some(self.window_event(kind))
    }

    fn window_event(&self, kind: EventKind) -> Emitted {
        let tree = self.current.tree.clone();
        let root = tree.root.node_id;
        self.emit(kind, Some(root), EventPayload::default(), tree)
    }

    fn payload_of(&self, node: Option<NodeId>) -> EventPayload {
        let node: Option<&UiNode> = node.and_then(|id| self.current.tree.find(id));
        EventPayload {
            class_name: node.map(|n| n.class_name.clone()),
            text: node.and_then(|n| n.text.clone()),
            index: None,
        }
    }

    fn emit(&self, kind: EventKind, source: Option<NodeId>, payload: EventPayload, tree: Arc<UiTree>) -> Emitted {
        Emitted { event: AccEvent { kind, source, payload, timestamp: self.clock }, tree }
    }
}
