//! Record/replay engine for UI tests against simulated mobile devices.
//!
//! The pipeline runs in three stages: [`recorder`] turns a tester's session
//! into a [`RecordedTrace`], [`testgen`] compiles the trace into a
//! [`TestScript`], and [`executor`] replays the script on any number of
//! [`DeviceProfile`]s.

pub mod device;
pub mod executor;
pub mod live;
pub mod oracle;
pub mod recorder;
pub mod testgen;
pub mod ui;

pub use device::{App, AppSpec, DeviceProfile, DeviceSession, Gesture, Quirk};
pub use executor::{run_all, ExecOptions, ExecutionReport, Outcome};
pub use live::{LiveSession, Phase};
pub use oracle::{PropertyKind, PropertyRegistry};
pub use recorder::{Action, AssertionDef, RecordedTrace, Recorder};
pub use testgen::{emit_espresso, emit_ir, generate, parse_ir, TestScript};
pub use ui::{MatchResult, Rect, Selector, UiNode, UiTree};
