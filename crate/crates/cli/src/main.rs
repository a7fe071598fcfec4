use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use shearwave::RunOptions;

/// Exact solutions, degeneracy analysis, finite-volume evolution and
/// discrete verification for nonlinear shear waves.
#[derive(Parser)]
#[command(version, about, long_about = None)]
struct Cli {
    /// JSON run configuration
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides the config's `output`)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for data-parallel stages
    #[arg(long)]
    threads: Option<usize>,
    /// Only report errors
    #[arg(long)]
    quiet: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = shearwave::run(&RunOptions {
        config: cli.config,
        out: cli.out,
        threads: cli.threads,
        quiet: cli.quiet,
    });
    ExitCode::from(code as u8)
}
