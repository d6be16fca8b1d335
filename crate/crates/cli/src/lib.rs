//! Command-line driver for `catbell-core`: argument and config handling,
//! result files and thread pools.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod parse;

use config::{Cli, RunConfig};
use error::{exit, CliError, Result};

/// Environment variable holding the default worker count.
pub const WORKERS_ENV: &str = "CATBELL_WORKERS";

/// `--workers`, else `$CATBELL_WORKERS`, else 0 (one per core).
pub fn worker_count(flag: Option<usize>) -> Result<usize> {
    if let Some(n) = flag {
        return Ok(n);
    }
    match std::env::var(WORKERS_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{WORKERS_ENV}: `{v}` is not a worker count"))),
        Err(_) => Ok(0),
    }
}

pub fn run(cli: &Cli) -> Result<u8> {
    let config = RunConfig::resolve(cli)?;
    if cli.dump_config {
        print!("{}", config.to_toml());
        return Ok(exit::SUCCESS);
    }
    commands::run(&config, worker_count(cli.workers)?)
}
