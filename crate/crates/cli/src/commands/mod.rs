mod eval;
mod optimize;
mod scan;
mod verify;

use std::path::Path;

use catbell_core::{ComplexAmplitude, MeasurementSettings};

use crate::config::{Command, Params, RunConfig};
use crate::error::{CliError, Result};
use crate::output::ResultFile;
use crate::parse;

pub use scan::DEGENERACY_NOTE;

/// Run a resolved config and return the process exit status.
pub fn run(config: &RunConfig, workers: usize) -> Result<u8> {
    let p = config.params();
    match config.command {
        Command::Eval => eval::run(p),
        Command::Scan => scan::run(p, workers),
        Command::Verify => verify::run(p),
        Command::Optimize => optimize::run(p, workers),
    }
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {workers} workers: {e}")))
}

fn load_result(p: Params<'_>) -> Result<Option<ResultFile>> {
    p.text("from-result")
        .map(|path| ResultFile::load(Path::new(path)))
        .transpose()
}

/// Where the measurement settings of `eval` and `scan` come from.
fn settings(p: Params<'_>, from: Option<&ResultFile>) -> Result<MeasurementSettings> {
    let explicit = ["z", "zp", "w", "wp"].into_iter().find(|k| p.has(k));
    let paper = p.flag("paper-setting")?;
    if paper && from.is_some() {
        return Err(CliError::Usage(
            "--paper-setting and --from-result are exclusive".into(),
        ));
    }
    if let Some(k) = explicit.filter(|_| paper || from.is_some()) {
        return Err(CliError::param(
            k,
            "conflicts with --paper-setting / --from-result",
        ));
    }
    if paper {
        return Ok(MeasurementSettings::uniform(ComplexAmplitude::real(1.0)?));
    }
    if let Some(r) = from {
        return r.settings().map_err(|m| CliError::param("from-result", m));
    }
    Ok(MeasurementSettings::new(
        p.require("z", parse::complex)?,
        p.require("zp", parse::complex)?,
        p.require("w", parse::complex)?,
        p.require("wp", parse::complex)?,
    ))
}
