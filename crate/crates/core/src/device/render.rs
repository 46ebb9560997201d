//! Lays out a screen template for a device profile.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use super::app::{substitute, App, AppSpec, ScreenTemplate, TemplateNode};
use super::{DeviceError, DeviceProfile, Quirk};
use crate::ui::{simple_class_name, NodeFlags, NodeId, Rect, UiNode, UiTree};

/// Height given to an inserted list item when the list has no item to copy.
const DEFAULT_ITEM_DP: f64 = 48.0;

/// Per-screen widget state not expressed through state variables.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct WidgetState {
    /// Text set directly on nodes whose text is not bound to a variable.
    pub text: HashMap<usize, String>,
    pub checked: HashMap<usize, bool>,
    pub focused: Option<usize>,
    pub scroll_px: i32,
}

/// Mutable app state: the variables plus widget state per screen.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct AppState {
    pub vars: BTreeMap<String, String>,
    widgets: HashMap<String, WidgetState>,
}

impl AppState {
    pub fn initial(spec: &AppSpec) -> Self {
        AppState { vars: spec.state.clone(), widgets: HashMap::new() }
    }

    pub fn widget(&self, screen: &str) -> Option<&WidgetState> {
        self.widgets.get(screen)
    }

    pub fn widget_mut(&mut self, screen: &str) -> &mut WidgetState {
        self.widgets.entry(screen.to_owned()).or_default()
    }

    /// Drops widget state of a screen, as when its window is destroyed.
    pub fn reset_widget(&mut self, screen: &str) {
        self.widgets.remove(screen);
    }
}

/// A rendered window plus the mapping back to template nodes.
#[derive(Debug, Clone)]
pub struct Rendered {
    pub screen_id: String,
    pub tree: Arc<UiTree>,
    /// Template index of each rendered node; nodes added by quirks have none.
    pub origins: HashMap<NodeId, usize>,
    /// Lowest content edge in pixels before scrolling.
    pub content_bottom: i32,
}

impl Rendered {
    pub fn node_for_template(&self, template_index: usize) -> Option<NodeId> {
        self.origins.iter().find(|(_, &t)| t == template_index).map(|(&id, _)| id)
    }

    /// How far the content can scroll before its bottom edge is visible.
    pub fn max_scroll(&self) -> i32 {
        (self.content_bottom - self.tree.screen.bottom()).max(0)
    }
}

pub fn render(app: &App, screen_id: &str, state: &AppState, device: &DeviceProfile) -> Result<Rendered, DeviceError> {
    let screen = app.screen(screen_id).ok_or_else(|| DeviceError::UnknownScreen(screen_id.to_owned()))?;
    Ok(render_template(screen, screen_id, state, device))
}

struct LayoutNode {
    class_name: String,
    resource_id: Option<String>,
    text: Option<String>,
    flags: NodeFlags,
    /// l, t, r, b in dp.
    bounds: [f64; 4],
    children: Vec<usize>,
    parent: Option<usize>,
    origin: Option<usize>,
}

struct Layout {
    nodes: Vec<LayoutNode>,
}

impl Layout {
    fn build(template: &TemplateNode, vars: &BTreeMap<String, String>, widget: Option<&WidgetState>) -> Self {
        let mut layout = Layout { nodes: Vec::new() };
        let mut counter = 0;
        layout.add(template, None, vars, widget, &mut counter);
        layout
    }

    fn add(
        &mut self,
        t: &TemplateNode,
        parent: Option<usize>,
        vars: &BTreeMap<String, String>,
        widget: Option<&WidgetState>,
        counter: &mut usize,
    ) -> usize {
        let origin = *counter;
        *counter += 1;
        let mut text = widget
            .and_then(|w| w.text.get(&origin).cloned())
            .or_else(|| t.text.as_deref().map(|s| substitute(s, vars)));
        let mut flags = t.flags;
        if flags.editable && text.is_none() {
            text = Some(String::new());
        }
        if let Some(w) = widget {
            flags.focused = w.focused == Some(origin);
            if let Some(&c) = w.checked.get(&origin) {
                flags.checked = c;
            }
        }
        let me = self.nodes.len();
        self.nodes.push(LayoutNode {
            class_name: t.class_name.clone(),
            resource_id: t.resource_id.clone(),
            text,
            flags,
            bounds: [t.bounds.l, t.bounds.t, t.bounds.r, t.bounds.b],
            children: Vec::new(),
            parent,
            origin: Some(origin),
        });
        for child in &t.children {
            let c = self.add(child, Some(me), vars, widget, counter);
            self.nodes[me].children.push(c);
        }
        me
    }

    fn preorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![0];
        while let Some(n) = stack.pop() {
            out.push(n);
            stack.extend(self.nodes[n].children.iter().rev());
        }
        out
    }

    fn subtree_len(&self, n: usize) -> usize {
        1 + self.nodes[n].children.iter().map(|&c| self.subtree_len(c)).sum::<usize>()
    }

    fn shift_subtree(&mut self, n: usize, dy: f64) {
        let b = &mut self.nodes[n].bounds;
        b[1] += dy;
        b[3] += dy;
        for c in self.nodes[n].children.clone() {
            self.shift_subtree(c, dy);
        }
    }

    fn containers(&self, class_name: &str) -> Vec<usize> {
        let wanted = simple_class_name(class_name);
        self.preorder()
            .into_iter()
            .filter(|&n| simple_class_name(&self.nodes[n].class_name) == wanted)
            .collect()
    }

    fn insert_leading_item(&mut self, container: usize, item_text: &str) {
        let existing = self.nodes[container].children.clone();
        let (class_name, flags, bounds) = match existing.first() {
            Some(&first) => {
                let f = &self.nodes[first];
                (f.class_name.clone(), f.flags, f.bounds)
            }
            None => {
                let c = self.nodes[container].bounds;
                ("TextView".to_owned(), NodeFlags::default(), [c[0], c[1], c[2], c[1] + DEFAULT_ITEM_DP])
            }
        };
        let height = bounds[3] - bounds[1];
        for c in existing {
            self.shift_subtree(c, height);
        }
        let item = self.nodes.len();
        self.nodes.push(LayoutNode {
            class_name,
            resource_id: None,
            text: Some(item_text.to_owned()),
            flags: NodeFlags { focused: false, checked: false, ..flags },
            bounds,
            children: Vec::new(),
            parent: Some(container),
            origin: None,
        });
        self.nodes[container].children.insert(0, item);
    }

    fn add_bottom_space(&mut self, container: usize, extra: f64) {
        const EPS: f64 = 1e-9;
        let order = self.preorder();
        let pos = order.iter().position(|&n| n == container).expect("container is in the tree");
        let after = pos + self.subtree_len(container);
        let old_bottom = self.nodes[container].bounds[3];
        self.nodes[container].bounds[3] += extra;
        // The root is the window itself and keeps its size.
        let mut up = self.nodes[container].parent;
        while let Some(a) = up {
            if self.nodes[a].parent.is_some() {
                self.nodes[a].bounds[3] += extra;
            }
            up = self.nodes[a].parent;
        }
        for &n in &order[after..] {
            let b = &mut self.nodes[n].bounds;
            if b[1] >= old_bottom - EPS {
                b[1] += extra;
                b[3] += extra;
            }
        }
    }

    fn apply(&mut self, quirk: &Quirk) {
        match quirk {
            Quirk::ExtraListItem { container_class, item_text } => {
                for c in self.containers(container_class) {
                    self.insert_leading_item(c, item_text);
                }
            }
            Quirk::ExtraBottomSpace { container_class, extra_dp } => {
                for c in self.containers(container_class) {
                    self.add_bottom_space(c, *extra_dp);
                }
            }
        }
    }
}

pub(crate) fn render_template(
    screen: &ScreenTemplate,
    screen_id: &str,
    state: &AppState,
    device: &DeviceProfile,
) -> Rendered {
    let widget = state.widget(screen_id);
    let mut layout = Layout::build(&screen.root, &state.vars, widget);
    // Structural quirks first so geometric ones see the final item list.
    for quirk in device.quirks.iter().filter(|q| matches!(q, Quirk::ExtraListItem { .. })) {
        layout.apply(quirk);
    }
    for quirk in device.quirks.iter().filter(|q| matches!(q, Quirk::ExtraBottomSpace { .. })) {
        layout.apply(quirk);
    }

    let px = |v: f64| (v * device.density).round() as i32;
    let scroll = widget.map_or(0, |w| w.scroll_px);
    let mut origins = HashMap::new();
    let mut next_id = 0u32;
    let mut content_bottom = i32::MIN;

    fn emit(
        layout: &Layout,
        n: usize,
        px: &dyn Fn(f64) -> i32,
        scroll: i32,
        next_id: &mut u32,
        origins: &mut HashMap<NodeId, usize>,
        content_bottom: &mut i32,
    ) -> UiNode {
        let node = &layout.nodes[n];
        let id = NodeId(*next_id);
        *next_id += 1;
        if let Some(o) = node.origin {
            origins.insert(id, o);
        }
        let [l, t, r, b] = node.bounds.map(px);
        *content_bottom = (*content_bottom).max(b);
        let dy = if node.parent.is_some() { -scroll } else { 0 };
        let bounds = Rect::new(l, t, r, b).expect("layout keeps bounds ordered").translate(0, dy);
        let children = node
            .children
            .iter()
            .map(|&c| emit(layout, c, px, scroll, next_id, origins, content_bottom))
            .collect();
        UiNode {
            node_id: id,
            class_name: node.class_name.clone(),
            resource_id: node.resource_id.clone(),
            text: node.text.clone(),
            bounds,
            flags: node.flags,
            children,
        }
    }

    let root = emit(&layout, 0, &px, scroll, &mut next_id, &mut origins, &mut content_bottom);
    Rendered {
        screen_id: screen_id.to_owned(),
        tree: Arc::new(UiTree::new(screen.window, device.screen(), root)),
        origins,
        content_bottom,
    }
}
