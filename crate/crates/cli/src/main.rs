use std::path::PathBuf;
use std::process::ExitCode;

use cantor_cli::{load, run, Command, Format, Overrides, RunError};
use clap::Parser;

#[derive(Parser)]
#[command(name = "cantor-index", version, about = "Index pairings on Cantor dynamical systems")]
struct Cli {
    /// One of: space, dynamics, k0, gm-demo, pair-even, pair-odd, trace, summability, synthesize, crossed
    command: Command,
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<Format>,
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
}

fn fail(e: &RunError) -> ExitCode {
    match e {
        RunError::Config(c) => {
            eprintln!("configuration rejected:");
            for i in c.issues() {
                eprintln!("  {i}");
            }
        }
        RunError::Usage(m) => eprintln!("error: {m}"),
        RunError::Exec(x) => {
            eprintln!("{}", serde_json::json!({ "error": x.kind(), "message": x.to_string() }));
        }
        RunError::Io(_) => eprintln!("{}", serde_json::json!({ "error": "io", "message": e.to_string() })),
    }
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let o = Overrides { out: cli.out, format: cli.format, tolerance: cli.tolerance, seed: cli.seed };
    let cfg = match load(cli.command, &cli.config, &o) {
        Ok(c) => c,
        Err(e) => return fail(&e),
    };
    match run(&cfg) {
        Ok((report, text)) => {
            if cfg.settings.out.is_none() {
                print!("{text}");
            }
            for c in report.failed() {
                eprintln!("check failed: {} ({})", c.name, c.detail);
            }
            if report.all_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(e) => fail(&e),
    }
}
