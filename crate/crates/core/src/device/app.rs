//! Declarative app description: screen templates laid out in
//! density-independent units, plus the transitions that drive them.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::render::{render_template, AppState};
use super::{DeviceError, DeviceProfile};
use crate::ui::xpath::is_valid_class_name;
use crate::ui::{evaluate_selector, MatchResult, NodeFlags, Selector, WindowKind};

/// Bounds in density-independent units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DpRect {
    pub l: f64,
    pub t: f64,
    pub r: f64,
    pub b: f64,
}

impl DpRect {
    pub fn height(&self) -> f64 {
        self.b - self.t
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TemplateNode {
    #[serde(rename = "class")]
    pub class_name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resource_id: Option<String>,
    /// Display text; `${name}` is replaced by the app state variable `name`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub text: Option<String>,
    pub bounds: DpRect,
    #[serde(default)]
    pub flags: NodeFlags,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<TemplateNode>,
}

impl TemplateNode {
    /// Nodes in pre-order; a node's position in this list is its template index.
    pub fn preorder(&self) -> Vec<&TemplateNode> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(n) = stack.pop() {
            out.push(n);
            stack.extend(n.children.iter().rev());
        }
        out
    }

    /// The state variable this node's text is bound to, when the text is
    /// exactly one `${name}` reference.
    pub fn bound_variable(&self) -> Option<&str> {
        let text = self.text.as_deref()?;
        let inner = text.strip_prefix("${")?.strip_suffix('}')?;
        (!inner.contains('}') && !inner.contains("${")).then_some(inner)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScreenTemplate {
    pub window: WindowKind,
    pub root: TemplateNode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum TriggerKind {
    Click,
    LongClick,
    Select,
    /// The input-method action key pressed while the target has focus.
    ImeAction,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transition {
    pub screen: String,
    pub on: TriggerKind,
    pub target: Selector,
    pub effects: Vec<Effect>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Effect {
    /// Assign a state variable; bound node texts change accordingly.
    Set { var: String, value: Expr },
    GoTo(String),
    ShowDialog(String),
    CloseWindow,
}

/// Value expression over the app state.
///
/// A bare string is a template with `${var}` substitutions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Expr {
    Template(String),
    If {
        #[serde(rename = "if")]
        branch: Box<IfExpr>,
    },
    Calc {
        calc: Box<CalcExpr>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IfExpr {
    pub cond: Cond,
    pub then: Expr,
    #[serde(rename = "else")]
    pub otherwise: Expr,
}

/// Integer arithmetic; any parse failure, overflow or division by zero
/// yields the text `ERROR`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalcExpr {
    pub op: Expr,
    pub left: Expr,
    pub right: Expr,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Cond {
    Eq(Expr, Expr),
    Ne(Expr, Expr),
}

pub const CALC_ERROR: &str = "ERROR";

pub fn substitute(template: &str, vars: &BTreeMap<String, String>) -> String {
    let mut out = String::with_capacity(template.len());
    let mut rest = template;
    while let Some(start) = rest.find("${") {
        out.push_str(&rest[..start]);
        let after = &rest[start + 2..];
        match after.find('}') {
            Some(end) => {
                out.push_str(vars.get(&after[..end]).map_or("", String::as_str));
                rest = &after[end + 1..];
            }
            None => {
                out.push_str(&rest[start..]);
                rest = "";
            }
        }
    }
    out.push_str(rest);
    out
}

impl Expr {
    pub fn eval(&self, vars: &BTreeMap<String, String>) -> String {
        match self {
            Expr::Template(t) => substitute(t, vars),
            Expr::If { branch } => {
                if branch.cond.holds(vars) {
                    branch.then.eval(vars)
                } else {
                    branch.otherwise.eval(vars)
                }
            }
            Expr::Calc { calc } => calculate(
                &calc.op.eval(vars),
                &calc.left.eval(vars),
                &calc.right.eval(vars),
            )
            .map_or_else(|| CALC_ERROR.to_owned(), |v| v.to_string()),
        }
    }
}

impl Cond {
    pub fn holds(&self, vars: &BTreeMap<String, String>) -> bool {
        match self {
            Cond::Eq(a, b) => a.eval(vars) == b.eval(vars),
            Cond::Ne(a, b) => a.eval(vars) != b.eval(vars),
        }
    }
}

fn calculate(op: &str, left: &str, right: &str) -> Option<i64> {
    let l: i64 = left.trim().parse().ok()?;
    let r: i64 = right.trim().parse().ok()?;
    match op.trim() {
        "+" => l.checked_add(r),
        "-" => l.checked_sub(r),
        "*" => l.checked_mul(r),
        "/" => l.checked_div(r),
        _ => None,
    }
}

/// App description as stored on disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AppSpec {
    pub package: String,
    pub main_activity: String,
    #[serde(default)]
    pub state: BTreeMap<String, String>,
    pub screens: BTreeMap<String, ScreenTemplate>,
    #[serde(default)]
    pub transitions: Vec<Transition>,
}

/// A validated [`AppSpec`] with every transition bound to the template
/// node its selector designates.
#[derive(Debug, Clone)]
pub struct App {
    spec: AppSpec,
    bindings: HashMap<(String, TriggerKind, usize), Vec<usize>>,
}

impl App {
    pub fn new(spec: AppSpec) -> Result<Self, DeviceError> {
        let invalid = |reason: String| DeviceError::InvalidApp(reason);
        match spec.screens.get(&spec.main_activity) {
            None => return Err(invalid(format!("main activity {:?} is not a screen", spec.main_activity))),
            Some(s) if s.window != WindowKind::Activity => {
                return Err(invalid(format!("main activity {:?} is not an activity window", spec.main_activity)))
            }
            Some(_) => {}
        }
        for (id, screen) in &spec.screens {
            for node in screen.root.preorder() {
                if !is_valid_class_name(&node.class_name) {
                    return Err(invalid(format!("screen {id:?}: invalid class name {:?}", node.class_name)));
                }
                let b = node.bounds;
                if !(b.l <= b.r && b.t <= b.b) || ![b.l, b.t, b.r, b.b].iter().all(|v| v.is_finite()) {
                    return Err(invalid(format!("screen {id:?}: bad bounds on {}", node.class_name)));
                }
            }
        }

        let neutral = DeviceProfile::new("template", 1, 1, 1.0).expect("static profile");
        let initial = AppState::initial(&spec);
        let mut bindings: HashMap<_, Vec<usize>> = HashMap::new();
        for (i, t) in spec.transitions.iter().enumerate() {
            let screen = spec
                .screens
                .get(&t.screen)
                .ok_or_else(|| invalid(format!("transition {i}: unknown screen {:?}", t.screen)))?;
            for effect in &t.effects {
                if let Effect::GoTo(s) | Effect::ShowDialog(s) = effect {
                    if !spec.screens.contains_key(s) {
                        return Err(invalid(format!("transition {i}: unknown target screen {s:?}")));
                    }
                }
            }
            let rendered = render_template(screen, &t.screen, &initial, &neutral);
            let target = match evaluate_selector(&rendered.tree, &t.target) {
                Ok(MatchResult::Unique(id)) => rendered.origins[&id],
                Ok(other) => {
                    return Err(invalid(format!(
                        "transition {i}: target {} does not resolve uniquely on {:?} ({other:?})",
                        t.target, t.screen
                    )))
                }
                Err(e) => return Err(invalid(format!("transition {i}: {e}"))),
            };
            bindings.entry((t.screen.clone(), t.on, target)).or_default().push(i);
        }
        Ok(App { spec, bindings })
    }

    pub fn from_json(s: &str) -> Result<Self, DeviceError> {
        let spec: AppSpec = serde_json::from_str(s).map_err(|e| DeviceError::Json(format!("app spec: {e}")))?;
        App::new(spec)
    }

    pub fn spec(&self) -> &AppSpec {
        &self.spec
    }

    pub fn package(&self) -> &str {
        &self.spec.package
    }

    pub fn main_activity(&self) -> &str {
        &self.spec.main_activity
    }

    pub fn screen(&self, id: &str) -> Option<&ScreenTemplate> {
        self.spec.screens.get(id)
    }

    /// Transitions fired by `kind` on template node `target` of `screen`.
    pub fn transitions_for(&self, screen: &str, kind: TriggerKind, target: usize) -> impl Iterator<Item = &Transition> {
        self.bindings
            .get(&(screen.to_owned(), kind, target))
            .into_iter()
            .flatten()
            .map(|&i| &self.spec.transitions[i])
    }
}
