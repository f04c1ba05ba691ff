//! `groundup`: runs the demo scenes interactively or headless, and serves
//! the message bus to other processes over TCP.

mod headless;
mod serve;
mod term;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use groundup::demo::{self, DemoOptions};
use groundup::input::Script;
use groundup::kernel::ColorMode;
use groundup::widgets::Theme;

/// Exit code for an unknown demo name.
const EXIT_UNKNOWN_DEMO: u8 = 2;
/// Exit code for a script that fails to parse.
const EXIT_SCRIPT: u8 = 3;
/// Exit code when the server port is taken.
const EXIT_PORT_BUSY: u8 = 4;

#[derive(Parser)]
#[command(name = "groundup", version, about = "A small windowing system drawn into its own framebuffer")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a demo scene.
    Run(RunArgs),
    /// Serve the message bus on a local TCP port until interrupted.
    Serve(ServeArgs),
    /// List the demo names.
    List,
}

#[derive(Args)]
struct RunArgs {
    /// Demo name (see `groundup list`).
    demo: String,
    /// Theme file overriding the demo's skin.
    #[arg(long, value_name = "FILE")]
    theme: Option<PathBuf>,
    #[arg(long, default_value = "hicolor", value_parser = parse_mode)]
    mode: ColorMode,
    /// Screen size as WxH.
    #[arg(long, default_value = "640x480", value_parser = parse_size)]
    size: (u32, u32),
    /// Input script to replay; headless runs default to the demo's tour.
    #[arg(long, value_name = "FILE")]
    script: Option<PathBuf>,
    /// Replay without a display and print the frame hashes.
    #[arg(long)]
    headless: bool,
    /// Write a P6 snapshot every N ticks.
    #[arg(long, value_name = "N")]
    snapshot_every: Option<u64>,
    /// Directory for snapshots.
    #[arg(long, value_name = "DIR", default_value = ".")]
    snapshot_dir: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct ServeArgs {
    #[arg(long, default_value = "127.0.0.1")]
    host: String,
    /// Port to listen on; 0 picks a free one.
    #[arg(long, default_value_t = 7878)]
    port: u16,
}

fn parse_mode(s: &str) -> Result<ColorMode, String> {
    ColorMode::parse(s).ok_or_else(|| format!("expected indexed or hicolor, got {s:?}"))
}

fn parse_size(s: &str) -> Result<(u32, u32), String> {
    let bad = || format!("expected WxH, got {s:?}");
    let (w, h) = s.split_once(['x', 'X']).ok_or_else(bad)?;
    let w: u32 = w.parse().map_err(|_| bad())?;
    let h: u32 = h.parse().map_err(|_| bad())?;
    if w == 0 || h == 0 {
        return Err(bad());
    }
    Ok((w, h))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::List => {
            for n in demo::NAMES {
                println!("{n}");
            }
            ExitCode::SUCCESS
        }
        Command::Run(args) => run(args),
        Command::Serve(args) => serve::serve(&args.host, args.port),
    }
}

fn run(args: RunArgs) -> ExitCode {
    if !demo::NAMES.contains(&args.demo.as_str()) {
        eprintln!("unknown demo {:?}; available: {}", args.demo, demo::NAMES.join(", "));
        return ExitCode::from(EXIT_UNKNOWN_DEMO);
    }
    let theme = match args.theme.as_ref().map(Theme::load).transpose() {
        Ok(t) => t,
        Err(e) => {
            eprintln!("theme: {e}");
            return ExitCode::FAILURE;
        }
    };
    let text = match &args.script {
        Some(path) => match std::fs::read_to_string(path) {
            Ok(t) => Some(t),
            Err(e) => {
                eprintln!("{}: {e}", path.display());
                return ExitCode::FAILURE;
            }
        },
        None if args.headless => demo::tour(&args.demo).map(str::to_owned),
        None => None,
    };
    let script = match text.as_deref().map(Script::parse).transpose() {
        Ok(s) => s.unwrap_or_default(),
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_SCRIPT);
        }
    };
    let opts = DemoOptions {
        width: args.size.0,
        height: args.size.1,
        mode: args.mode,
        theme,
        seed: args.seed,
    };
    let demo = demo::build(&args.demo, &opts).expect("name checked above");
    let result = if args.headless {
        let snapshots = args.snapshot_every.map(|n| (n.max(1), args.snapshot_dir.as_path()));
        headless::replay(demo, &script, snapshots, &mut std::io::stdout().lock())
    } else {
        term::interactive(demo, &script)
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
