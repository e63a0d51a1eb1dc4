//! Command-line front end.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::net::{IpAddr, Ipv4Addr, SocketAddr};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::cost::{self, CostReport, Method, PhysicalModel};
use crate::engine::default_profile_path;
use crate::layout::{self, Layout};
use crate::logo::{segments_to_svg, Environment};
use crate::scanner::ScanConfig;
use crate::server::{self, ServeOptions, DEFAULT_PORT};

#[derive(Debug, Parser)]
#[command(
    name = "scanboard",
    version,
    about = "Scanning keyboard for a Logo turtle"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a Logo program headlessly.
    Run(RunArgs),
    /// Predict input effort for a program.
    Simulate(SimulateArgs),
    /// Inspect keyboard layouts.
    #[command(subcommand)]
    Layout(LayoutCommand),
    /// Start the UI-facing service.
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    file: PathBuf,
    /// Write the drawing as SVG.
    #[arg(long)]
    svg: Option<PathBuf>,
    #[arg(long, default_value_t = 400.0)]
    width: f64,
    #[arg(long, default_value_t = 400.0)]
    height: f64,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long)]
    program: PathBuf,
    /// Layout document; the built-in layout when omitted.
    #[arg(long)]
    layout: Option<PathBuf>,
    /// Restrict to one or more methods (default: all three).
    #[arg(long, value_enum)]
    method: Vec<Method>,
    #[arg(long, default_value_t = ScanConfig::default().period_ms)]
    period_ms: u64,
    /// Print only the JSON lines, not the table.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Subcommand)]
enum LayoutCommand {
    /// Check a layout document against the layout invariants.
    Validate { file: PathBuf },
    /// Print a layout document in canonical form.
    Show { file: Option<PathBuf> },
}

#[derive(Debug, Args)]
struct ServeArgs {
    #[arg(long, default_value_t = DEFAULT_PORT)]
    port: u16,
    #[arg(long, default_value_t = IpAddr::V4(Ipv4Addr::LOCALHOST))]
    host: IpAddr,
    /// Profile file (default: $SCANBOARD_PROFILE or ./scanboard-profile.json).
    #[arg(long)]
    profile: Option<PathBuf>,
    /// Do not inject clock ticks; clients send their own.
    #[arg(long)]
    no_clock: bool,
}

/// Runs the CLI with `args` (including the program name) and returns the
/// process exit code: 0 on success, 1 on failure, 2 on usage errors.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(()) => 0,
        Err(message) => {
            let _ = writeln!(err, "error: {message}");
            1
        }
    }
}

fn execute(command: Command, out: &mut dyn Write) -> Result<(), String> {
    match command {
        Command::Run(args) => run_program(args, out),
        Command::Simulate(args) => simulate(args, out),
        Command::Layout(LayoutCommand::Validate { file }) => {
            let layout = load_layout(&file)?;
            writeln!(out, "{}: ok, {} keys", file.display(), layout.key_count()).map_err(io_err)
        }
        Command::Layout(LayoutCommand::Show { file }) => {
            let layout = match file {
                Some(f) => load_layout(&f)?,
                None => layout::default_layout(),
            };
            write!(out, "{}", layout::render(&layout)).map_err(io_err)
        }
        Command::Serve(args) => {
            let addr = SocketAddr::new(args.host, args.port);
            let options = ServeOptions {
                profile: args.profile.unwrap_or_else(default_profile_path),
                clock: !args.no_clock,
            };
            eprintln!("listening on {addr}");
            server::serve(addr, options).map_err(|e| format!("cannot serve on {addr}: {e}"))
        }
    }
}

fn io_err(e: std::io::Error) -> String {
    e.to_string()
}

fn read_file(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn load_layout(path: &Path) -> Result<Layout, String> {
    layout::load_layout(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn run_program(args: RunArgs, out: &mut dyn Write) -> Result<(), String> {
    let source = read_file(&args.file)?;
    let mut env = Environment::new();
    let result = env.run(&source);
    let report = match &result {
        Ok(report) => report,
        Err(failure) => &failure.report,
    };
    for line in &report.printed {
        writeln!(out, "{line}").map_err(io_err)?;
    }
    if let Err(failure) = result {
        return Err(format!("{}: {}", args.file.display(), failure.error));
    }
    if let Some(svg_path) = args.svg {
        let svg = segments_to_svg(&env.turtle.segments, args.width, args.height)
            .map_err(|e| e.to_string())?;
        fs::write(&svg_path, svg)
            .map_err(|e| format!("cannot write {}: {e}", svg_path.display()))?;
    }
    Ok(())
}

fn simulate(args: SimulateArgs, out: &mut dyn Write) -> Result<(), String> {
    let program = read_file(&args.program)?;
    let layout = match &args.layout {
        Some(path) => load_layout(path)?,
        None => layout::default_layout(),
    };
    let scan = ScanConfig {
        period_ms: args.period_ms,
        ..ScanConfig::default()
    };
    scan.validate().map_err(|e| e.to_string())?;
    let methods = if args.method.is_empty() {
        vec![Method::Physical, Method::Direct, Method::Scanning]
    } else {
        args.method
    };
    let mut reports: Vec<CostReport> = Vec::new();
    for method in methods {
        let report = match method {
            Method::Physical => cost::physical_cost(&program, &PhysicalModel::default()),
            Method::Direct => {
                let plan = cost::plan_selections(&program, &layout).map_err(|e| e.to_string())?;
                cost::direct_cost(&plan)
            }
            Method::Scanning => {
                let plan = cost::plan_selections(&program, &layout).map_err(|e| e.to_string())?;
                cost::scanning_cost(&plan, &layout, &scan).map_err(|e| e.to_string())?
            }
        };
        reports.push(report);
    }
    if !args.json {
        write!(out, "{}", cost::render_table(&reports)).map_err(io_err)?;
    }
    for report in &reports {
        let line = serde_json::to_string(report).expect("reports serialize");
        writeln!(out, "{line}").map_err(io_err)?;
    }
    Ok(())
}
