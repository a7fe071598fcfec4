//! Command-line driver for `shearwave-core`: one JSON config per run,
//! CSV/JSON artifacts plus a manifest in the output directory.

// Config checks are written as `!(a > b)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::path::PathBuf;

use serde_json::{json, Value};

pub use config::RunConfig;
pub use error::CliError;
use output::Artifacts;

/// Result of a command that ran to completion.
#[derive(Debug, Clone)]
pub struct Outcome {
    /// False when a declared verification target was missed.
    pub passed: bool,
    pub summary: Value,
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub config: PathBuf,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
    pub quiet: bool,
}

const DEFAULT_OUT: &str = "shearwave-out";

/// Runs one configured command and returns the process exit code:
/// 0 success, 1 verification failure, 2 config error, 3 solver or i/o
/// error.
pub fn run(opts: &RunOptions) -> i32 {
    let cfg = match RunConfig::from_path(&opts.config) {
        Ok(c) => c,
        Err(e) => return fail_early(opts, &e),
    };
    let dir = opts
        .out
        .clone()
        .or_else(|| cfg.output.clone())
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
    let mut artifacts = match Artifacts::create(&dir) {
        Ok(a) => a,
        Err(e) => return fail_early(opts, &e),
    };
    let pool = match opts.threads {
        Some(0) => return fail_early(opts, &CliError::Config("--threads must be positive".into())),
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n).build(),
        None => rayon::ThreadPoolBuilder::new().build(),
    };
    let pool = match pool {
        Ok(p) => p,
        Err(e) => return fail_early(opts, &CliError::Config(e.to_string())),
    };
    let threads = pool.current_num_threads();
    let result = pool.install(|| commands::execute(&cfg, &mut artifacts));
    let (code, status, summary, error) = match &result {
        Ok(o) if o.passed => (0, "ok", o.summary.clone(), Value::Null),
        Ok(o) => (1, "verification_failed", o.summary.clone(), Value::Null),
        Err(e) => (e.exit_code(), e.status(), Value::Null, error_json(e)),
    };
    let manifest = json!({
        "tool": "shearwave",
        "version": env!("CARGO_PKG_VERSION"),
        "command": cfg.command.name(),
        "config": cfg,
        "config_path": opts.config.display().to_string(),
        "threads": threads,
        "status": status,
        "exit_code": code,
        "summary": summary,
        "error": error,
        "artifacts": artifacts.written(),
    });
    if let Err(e) = artifacts.json("manifest.json", &manifest) {
        eprintln!("shearwave: {e}");
        return 3;
    }
    if let Err(e) = &result {
        eprintln!("shearwave: {e}");
    } else if !opts.quiet {
        println!(
            "{}: {status} ({})",
            cfg.command.name(),
            artifacts.dir().display()
        );
        if code == 1 {
            println!(
                "{}",
                serde_json::to_string_pretty(&summary).unwrap_or_default()
            );
        }
    }
    code
}

fn error_json(e: &CliError) -> Value {
    match e {
        CliError::Solver { message, locus } => json!({ "message": message, "locus": locus }),
        other => json!({ "message": other.to_string() }),
    }
}

/// Reports an error raised before the command could start; a manifest is
/// written only when `--out` names a directory.
fn fail_early(opts: &RunOptions, e: &CliError) -> i32 {
    eprintln!("shearwave: {e}");
    if let Some(dir) = &opts.out {
        if let Ok(mut a) = Artifacts::create(dir) {
            let manifest = json!({
                "tool": "shearwave",
                "version": env!("CARGO_PKG_VERSION"),
                "config_path": opts.config.display().to_string(),
                "status": e.status(),
                "exit_code": e.exit_code(),
                "error": error_json(e),
            });
            let _ = a.json("manifest.json", &manifest);
        }
    }
    e.exit_code()
}
