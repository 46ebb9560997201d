//! Espresso-style Java source for a test script.

use std::fmt::Write;

use crate::oracle::PropertyKind;
use crate::ui::Selector;

use super::ir::{ActionStmt, Operation, Statement, TestScript};

/// `divide_by_zero` → `DivideByZero`.
pub fn camel_case(id: &str) -> String {
    let mut out = String::new();
    for part in id.split(|c: char| !c.is_ascii_alphanumeric()).filter(|p| !p.is_empty()) {
        let mut chars = part.chars();
        if let Some(first) = chars.next() {
            out.push(first.to_ascii_uppercase());
            out.extend(chars);
        }
    }
    if out.is_empty() || out.starts_with(|c: char| c.is_ascii_digit()) {
        out.insert_str(0, "Recorded");
    }
    out
}

pub fn java_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 || c as u32 == 0x7f => {
                let _ = write!(out, "\\{:03o}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn view_matcher(selector: &Selector) -> String {
    match selector {
        Selector::ResourceId(id) => format!("withId(R.id.{id})"),
        Selector::XPath(path) => format!("withXPath({})", java_string(path)),
        Selector::PropertyBased { class_name, text } => {
            let class = format!("withClassName(endsWith({}))", java_string(class_name));
            match text {
                Some(t) => format!("allOf({class}, withText({}))", java_string(t)),
                None => class,
            }
        }
    }
}

fn check_matcher(stmt: &ActionStmt, property: PropertyKind, threshold: Option<u8>, other: Option<&Selector>) -> String {
    let related = || view_matcher(other.expect("validated relational check"));
    match property {
        PropertyKind::Checked => "isChecked()".into(),
        PropertyKind::Clickable => "isClickable()".into(),
        PropertyKind::Displayed => match threshold {
            Some(t) => format!("isDisplayingAtLeast({t})"),
            None => "isDisplayed()".into(),
        },
        PropertyKind::Enabled => "isEnabled()".into(),
        PropertyKind::Focus => "hasFocus()".into(),
        PropertyKind::Focusable => "isFocusable()".into(),
        PropertyKind::Text => format!("withText({})", java_string(stmt.params.first().map_or("", String::as_str))),
        PropertyKind::Child => format!("withParent({})", related()),
        PropertyKind::Parent => format!("withChild({})", related()),
        PropertyKind::Sibling => format!("hasSibling({})", related()),
    }
}

fn statement(out: &mut String, stmt: &ActionStmt) {
    const IND: &str = "        ";
    const CONT: &str = "                ";
    let target = || format!("onView({})", view_matcher(stmt.selector.as_ref().expect("validated selector")));
    let param = || java_string(stmt.params.first().map_or("", String::as_str));
    let _ = match &stmt.action {
        Operation::Click => writeln!(out, "{IND}{}.perform(click());", target()),
        Operation::LongClick => writeln!(out, "{IND}{}.perform(longClick());", target()),
        Operation::TypeText => writeln!(out, "{IND}{}.perform(typeText({}));", target(), param()),
        Operation::Select => writeln!(out, "{IND}{}.perform(scrollTo(), click());", target()),
        Operation::Scroll => {
            let swipe = if stmt.params.first().map(String::as_str) == Some("up") { "swipeDown" } else { "swipeUp" };
            writeln!(out, "{IND}{}.perform({swipe}());", target())
        }
        Operation::PressImeAction => writeln!(out, "{IND}onView(isFocused()).perform(pressImeActionButton());"),
        Operation::CloseKeyboard => writeln!(out, "{IND}closeSoftKeyboard();"),
        Operation::Check { property, negated, threshold, other } => {
            let m = check_matcher(stmt, *property, *threshold, other.as_ref());
            let m = if *negated { format!("not({m})") } else { m };
            writeln!(out, "{IND}{}\n{CONT}.check(matches({m}));", target())
        }
    };
}

pub fn emit_espresso(script: &TestScript) -> String {
    let name = camel_case(&script.id);
    let package = &script.setup.package;
    let activity = script.setup.activity.trim_start_matches('.');
    let mut out = String::new();
    let _ = write!(
        out,
        "package {package};

import static androidx.test.espresso.Espresso.closeSoftKeyboard;
import static androidx.test.espresso.Espresso.onView;
import static androidx.test.espresso.action.ViewActions.*;
import static androidx.test.espresso.assertion.ViewAssertions.matches;
import static androidx.test.espresso.matcher.ViewMatchers.*;
import static org.hamcrest.Matchers.*;
import static {package}.replay.ReplaySupport.*;

import androidx.test.ext.junit.rules.ActivityScenarioRule;
import androidx.test.ext.junit.runners.AndroidJUnit4;

import org.junit.Rule;
import org.junit.Test;
import org.junit.runner.RunWith;

@RunWith(AndroidJUnit4.class)
public class {name}Test {{
    @Rule
    public ActivityScenarioRule<{activity}> activityRule =
            new ActivityScenarioRule<>({activity}.class);

    @Test
    public void test{name}() {{
"
    );
    for step in &script.steps {
        match step {
            Statement::Action(a) => statement(&mut out, a),
            Statement::Pause { duration_ms } => {
                let _ = writeln!(out, "        pauseTest({duration_ms});");
            }
        }
    }
    out.push_str("    }\n}\n");
    out
}
