//! `softlin` — scene-file driven verification of soft linear space
//! computations. Verbs: `check` (run a scene, human summary), `report`
//! (run a scene, machine report), `selftest` (built-in theorem battery).
//!
//! Exit codes: 0 all verdicts pass, 1 a property was violated (or a task
//! errored), 2 input error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use softlin_cli::report::{emit, Format, OptsEcho};
use softlin_cli::{exec, scene};

#[derive(Parser)]
#[command(name = "softlin", version, about = "Soft linear space verification runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scene file and print a human-readable summary.
    Check(RunArgs),
    /// Run a scene file and emit the full report (json by default).
    Report(RunArgs),
    /// Run the built-in theorem battery (criteria 1-11).
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Scene file (JSON, schema 1)
    scene: PathBuf,
    /// Comparison tolerance
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Sample count for randomized checks
    #[arg(long, default_value_t = 1000)]
    samples: u32,
    /// RNG seed (SOFTLIN_SEED overrides this default)
    #[arg(long, env = "SOFTLIN_SEED", default_value_t = 0)]
    seed: u64,
    /// Window end N for sequence checks
    #[arg(long = "window-n", default_value_t = 10_000)]
    window_n: u64,
    /// Output format (check defaults to text, report to json)
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct SelftestArgs {
    /// RNG seed (SOFTLIN_SEED overrides this default)
    #[arg(long, env = "SOFTLIN_SEED", default_value_t = 0)]
    seed: u64,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Check(args) => run_scene(args, "check", Format::Text),
        Command::Report(args) => run_scene(args, "report", Format::Json),
        Command::Selftest(args) => run_selftest(args),
    }
}

fn run_scene(args: RunArgs, command: &str, default_format: Format) -> ExitCode {
    let text = match std::fs::read_to_string(&args.scene) {
        Ok(text) => text,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", args.scene.display());
            return ExitCode::from(2);
        }
    };
    let scene = match scene::parse_scene_str(&text) {
        Ok(scene) => scene,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let opts = OptsEcho {
        tol: args.tol,
        samples: args.samples,
        seed: args.seed,
        window_n: args.window_n,
    };
    let report = exec::execute(&scene, opts, command);
    print!("{}", emit(&report, args.format.unwrap_or(default_format)));
    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run_selftest(args: SelftestArgs) -> ExitCode {
    let opts = OptsEcho {
        tol: softlin::DEFAULT_TOL,
        samples: 10_000,
        seed: args.seed,
        window_n: 10_000,
    };
    let report = exec::selftest_report(args.seed, opts);
    print!("{}", emit(&report, args.format));
    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
