//! Headless commands and the live recording service.

pub mod service;

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{Context, Result};
use droidreplay_core::device::{App, DeviceProfile};
use droidreplay_core::executor::{run_all, ExecOptions, ExecutionReport, Outcome};
use droidreplay_core::live::{parse_log, record_log};
use droidreplay_core::oracle::PropertyRegistry;
use droidreplay_core::recorder::RecordedTrace;
use droidreplay_core::testgen::{emit_espresso, emit_ir, generate, parse_ir};

/// Exit status of `run` when every device passes.
pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
/// Bad input: unreadable or malformed files, usage errors.
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_ERROR: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmitFormat {
    Espresso,
    Ir,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

pub fn load_app(path: &Path) -> Result<Arc<App>> {
    let app = App::from_json(&read(path)?).with_context(|| format!("loading app {}", path.display()))?;
    Ok(Arc::new(app))
}

pub fn load_device(path: &Path) -> Result<DeviceProfile> {
    DeviceProfile::from_json(&read(path)?).with_context(|| format!("loading device {}", path.display()))
}

pub fn load_registry(path: Option<&Path>) -> Result<Arc<PropertyRegistry>> {
    Ok(Arc::new(match path {
        Some(p) => PropertyRegistry::from_json(&read(p)?).with_context(|| format!("loading registry {}", p.display()))?,
        None => PropertyRegistry::default(),
    }))
}

pub struct RecordArgs {
    pub app: PathBuf,
    pub device: PathBuf,
    pub gestures: PathBuf,
    pub out: PathBuf,
    pub registry: Option<PathBuf>,
}

/// Replays a gesture log through the simulator and recorder; returns the
/// warnings for skipped entries.
pub fn record(args: &RecordArgs) -> Result<Vec<String>> {
    let app = load_app(&args.app)?;
    let device = load_device(&args.device)?;
    let registry = load_registry(args.registry.as_deref())?;
    let entries = parse_log(&read(&args.gestures)?)
        .map_err(anyhow::Error::msg)
        .with_context(|| format!("parsing {}", args.gestures.display()))?;
    let (trace, warnings) = record_log(app, device, registry, &entries)?;
    write(&args.out, &trace.to_json())?;
    Ok(warnings)
}

pub struct GenerateArgs {
    pub trace: PathBuf,
    pub retain_time: bool,
    pub emit: EmitFormat,
    pub out: PathBuf,
    pub name: Option<String>,
}

/// Script id used when none is given: the trace file name without
/// extensions.
pub fn default_script_id(trace: &Path) -> String {
    let name = trace.file_name().and_then(|n| n.to_str()).unwrap_or("recorded");
    name.split('.').next().filter(|s| !s.is_empty()).unwrap_or("recorded").to_owned()
}

pub fn generate_script(args: &GenerateArgs) -> Result<()> {
    let trace = RecordedTrace::from_json(&read(&args.trace)?).with_context(|| format!("parsing {}", args.trace.display()))?;
    let id = args.name.clone().unwrap_or_else(|| default_script_id(&args.trace));
    let script = generate(&trace, &id, args.retain_time);
    let text = match args.emit {
        EmitFormat::Espresso => emit_espresso(&script),
        EmitFormat::Ir => emit_ir(&script),
    };
    write(&args.out, &text)
}

pub struct RunArgs {
    pub script: PathBuf,
    pub app: PathBuf,
    pub devices: Vec<PathBuf>,
    pub out: Option<PathBuf>,
}

pub fn exit_code(report: &ExecutionReport) -> i32 {
    let outcomes = || report.results.iter().map(|r| r.outcome);
    if outcomes().any(|o| o == Outcome::Error) {
        EXIT_ERROR
    } else if outcomes().any(|o| o == Outcome::Failure) {
        EXIT_FAILURE
    } else {
        EXIT_PASS
    }
}

pub fn run_script(args: &RunArgs) -> Result<ExecutionReport> {
    let script = parse_ir(&read(&args.script)?).with_context(|| format!("parsing {}", args.script.display()))?;
    let app = load_app(&args.app)?;
    let devices = args.devices.iter().map(|d| load_device(d)).collect::<Result<Vec<_>>>()?;
    let report = run_all(&script, &app, &devices, ExecOptions::default())?;
    if let Some(out) = &args.out {
        write(out, &report.to_json())?;
    }
    Ok(report)
}
