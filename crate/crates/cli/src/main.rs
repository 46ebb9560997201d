use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use droidreplay_cli::service::{self, ServiceConfig};
use droidreplay_cli::{
    exit_code, generate_script, load_app, load_device, load_registry, record, run_script, EmitFormat, GenerateArgs,
    RecordArgs, RunArgs, EXIT_INPUT,
};

#[derive(Parser)]
#[command(name = "droidreplay", version, about = "Record, generate and replay UI tests on simulated devices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Espresso,
    Ir,
}

#[derive(Subcommand)]
enum Command {
    /// Record a trace by replaying a gesture log.
    Record {
        #[arg(long)]
        app: PathBuf,
        #[arg(long)]
        device: PathBuf,
        #[arg(long)]
        gestures: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Relevant-properties registry replacing the built-in one.
        #[arg(long)]
        registry: Option<PathBuf>,
    },
    /// Compile a trace into a test script.
    Generate {
        #[arg(long)]
        trace: PathBuf,
        /// Insert pauses matching the recorded gaps between actions.
        #[arg(long)]
        retain_time: bool,
        #[arg(long, value_enum, default_value = "espresso")]
        emit: Format,
        #[arg(long)]
        out: PathBuf,
        /// Test name; defaults to the trace file name.
        #[arg(long)]
        name: Option<String>,
    },
    /// Run a script (IR) on one or more devices.
    Run {
        #[arg(long)]
        script: PathBuf,
        #[arg(long)]
        app: PathBuf,
        #[arg(long = "device", required = true)]
        devices: Vec<PathBuf>,
        /// Where to write the JSON report.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Serve a live recording session over HTTP.
    Serve {
        #[arg(long)]
        app: PathBuf,
        #[arg(long)]
        device: PathBuf,
        #[arg(long, env = "DROIDREPLAY_PORT", default_value_t = 8765)]
        port: u16,
        #[arg(long)]
        registry: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INPUT as u8)
        }
    }
}

fn dispatch(command: Command) -> anyhow::Result<i32> {
    match command {
        Command::Record { app, device, gestures, out, registry } => {
            for w in record(&RecordArgs { app, device, gestures, out, registry })? {
                eprintln!("warning: {w}");
            }
            Ok(0)
        }
        Command::Generate { trace, retain_time, emit, out, name } => {
            let emit = match emit {
                Format::Espresso => EmitFormat::Espresso,
                Format::Ir => EmitFormat::Ir,
            };
            generate_script(&GenerateArgs { trace, retain_time, emit, out, name })?;
            Ok(0)
        }
        Command::Run { script, app, devices, out } => {
            let report = run_script(&RunArgs { script, app, devices, out })?;
            print!("{}", report.text_summary());
            Ok(exit_code(&report))
        }
        Command::Serve { app, device, port, registry } => {
            let config = ServiceConfig { app: load_app(&app)?, device: load_device(&device)?, registry: load_registry(registry.as_deref())? };
            let runtime = tokio::runtime::Runtime::new()?;
            runtime.block_on(async move {
                let listener = tokio::net::TcpListener::bind(("127.0.0.1", port)).await?;
                eprintln!("listening on http://{}", listener.local_addr()?);
                service::serve(listener, config).await
            })?;
            Ok(0)
        }
    }
}
