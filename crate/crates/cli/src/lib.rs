//! Batch front end: configuration parsing, command execution and report
//! rendering for the `cantor-index` binary.

pub mod commands;
pub mod config;
pub mod report;

use std::path::Path;

pub use commands::{execute, ExecError};
pub use config::{parse_config, parse_config_for, Command, ConfigError, Format, JobConfig};
pub use report::Report;

/// Overrides taken from the command line; `None` keeps the document's value.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<std::path::PathBuf>,
    pub format: Option<Format>,
    pub tolerance: Option<f64>,
    pub seed: Option<u64>,
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Exec(#[from] ExecError),
    #[error("cannot write report: {0}")]
    Io(#[from] std::io::Error),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Usage(_) | RunError::Config(_) => 1,
            RunError::Exec(_) | RunError::Io(_) => 3,
        }
    }
}

/// Loads and validates a job, applying command-line overrides.
pub fn load(command: Command, path: &Path, o: &Overrides) -> Result<JobConfig, RunError> {
    let doc = std::fs::read_to_string(path).map_err(|e| RunError::Usage(format!("{}: {e}", path.display())))?;
    let mut cfg = parse_config_for(&doc, Some(command))?;
    if let Some(t) = o.tolerance {
        if !(t.is_finite() && t > 0.0) {
            return Err(RunError::Usage(format!("--tolerance must be positive, got {t}")));
        }
        cfg.settings.tolerance = t;
    }
    if let Some(s) = o.seed {
        cfg.settings.seed = s;
    }
    if let Some(f) = o.format {
        cfg.settings.format = f;
    }
    if o.out.is_some() {
        cfg.settings.out = o.out.clone();
    }
    Ok(cfg)
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Dsv => report.to_dsv(),
        Format::Doc => report.to_doc(),
    }
}

/// Runs a loaded job and writes its report. Returns the report so the caller
/// can decide the exit status from its checks.
pub fn run(cfg: &JobConfig) -> Result<(Report, String), RunError> {
    let report = execute(cfg)?;
    let text = render(&report, cfg.settings.format);
    if let Some(p) = &cfg.settings.out {
        std::fs::write(p, &text)?;
    }
    Ok((report, text))
}
