//! Command-line front end for `symmv-core`: TOML configuration, parallel
//! suite execution, CSV and summary output.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod output;
pub mod run;

use anyhow::{Context, Result};

pub use cli::{Cli, Command};
pub use config::{load_config, parse_config, ConfigError};
pub use run::{run_verify, EXIT_ERROR, EXIT_FAIL, EXIT_OK};

/// Worker count from `SYMMV_THREADS`, if set.
pub fn thread_cap() -> Result<Option<usize>> {
    match std::env::var("SYMMV_THREADS") {
        Ok(v) => {
            let n: usize = v.trim().parse().ok().filter(|n| *n > 0).with_context(|| {
                format!("SYMMV_THREADS must be a positive integer, got {v:?}")
            })?;
            Ok(Some(n))
        }
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(e).context("SYMMV_THREADS"),
    }
}

fn dispatch(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Solve(a) => run::cmd_solve(a),
        Command::Verify(a) => run::cmd_verify(a),
        Command::Sweep(a) => run::cmd_sweep(a),
        Command::Rearrange(a) => run::cmd_rearrange(a),
    }
}

/// Runs a parsed command line and returns the exit code.
pub fn execute(cli: &Cli) -> u8 {
    let result = thread_cap().and_then(|cap| {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = cap {
            builder = builder.num_threads(n);
        }
        let pool = builder.build().context("cannot start worker threads")?;
        pool.install(|| dispatch(cli))
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_ERROR
        }
    }
}
