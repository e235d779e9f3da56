//! Command-line front end.
//!
//! Exit codes: 0 success, 1 certificate failure, 2 unreadable or
//! unparsable config, 3 invalid config or failed computation.

mod config;
mod run;

use std::path::PathBuf;

use clap::Parser;

pub use config::{
    Command, InputKind, InputSpec, MeasureSpec, OperationKindSpec, OperationSpec, PGridSpec, PsiKind, PsiSpecConfig,
    RunConfig, TailSpec,
};
pub use run::{exponent_grid, run, Certificate, CliError, RunOutcome};

#[derive(Debug, Parser)]
#[command(name = "gls", about = "GLS norm bounds: bound tables, tail bounds, oracle certificates")]
pub struct Args {
    /// TOML run configuration.
    #[arg(long)]
    pub config: PathBuf,
    /// Directory for the report.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Overrides the config seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Overrides the config tolerance.
    #[arg(long)]
    pub tolerance: Option<f64>,
}

/// Parses the config named in `args`, runs it and returns the exit code.
pub fn execute(args: &Args) -> i32 {
    let text = match std::fs::read_to_string(&args.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("config parse error: {}: {e}", args.config.display());
            return 2;
        }
    };
    let mut cfg = match RunConfig::parse(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("config parse error: {e}");
            return 2;
        }
    };
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(t) = args.tolerance {
        cfg.tolerance = t;
    }
    let base = args.config.parent().map(PathBuf::from).unwrap_or_default();
    match run(&cfg, &base, &args.out) {
        Ok(outcome) => {
            log::info!("wrote {}", outcome.report.display());
            match outcome.certificate {
                Some(c) if !c.passed => {
                    eprintln!("certificate failed: max ratio {} at p = {}", c.max_ratio, c.worst_p);
                    1
                }
                _ => 0,
            }
        }
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
