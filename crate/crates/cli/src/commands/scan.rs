use std::f64::consts::PI;
use std::path::PathBuf;

use catbell_core::scan::{collect_outcome, evaluate_point, summarize, AxisRange, ScanGrid};
use log::warn;
use rayon::prelude::*;

use crate::config::Params;
use crate::error::{exit, CliError, Result};
use crate::output::{self, Format};
use crate::parse;

pub const DEFAULT_RANGE: (f64, f64) = (0.2, 2.0);
pub const DEFAULT_STEPS: usize = 25;

pub const DEGENERACY_NOTE: &str =
    "note: with z = z' = w = w' = 1 the four correlators coincide, so \
chsh = 2 E(z, w) and |chsh| <= 2 for every state; see \"Degenerate paper setting\" in README.md";

fn axis(p: Params<'_>, key: &str, steps: usize) -> Result<AxisRange> {
    let (min, max) = p.or(key, DEFAULT_RANGE, parse::range)?;
    AxisRange::new(min, max, steps).map_err(|e| CliError::param(key, e.to_string()))
}

fn grid(p: Params<'_>) -> Result<ScanGrid> {
    let from = super::load_result(p)?;
    let settings = super::settings(p, from.as_ref())?;
    let phi = if p.flag("paper-setting")? {
        if p.has("phi") {
            return Err(CliError::param("phi", "fixed to pi by --paper-setting"));
        }
        PI
    } else {
        let default = from.as_ref().map_or(PI, |r| r.state.phi);
        p.or("phi", default, parse::phase)?
    };
    let (na, no) = p.or("steps", (DEFAULT_STEPS, DEFAULT_STEPS), parse::steps)?;
    if na.min(no) < 2 {
        return Err(CliError::param("steps", "each axis needs at least 2 steps"));
    }
    let alpha = axis(p, "alpha-range", na)?;
    let omega = axis(p, "omega-range", no)?;
    Ok(ScanGrid {
        alpha,
        omega,
        settings,
        phi,
    })
}

pub fn run(p: Params<'_>, workers: usize) -> Result<u8> {
    let grid = grid(p)?;
    let format = p.or("format", Format::Csv, Format::parse)?;
    let out = PathBuf::from(p.text("out").unwrap_or(match format {
        Format::Csv => "scan.csv",
        Format::Json => "scan.json",
    }));

    let results: Vec<_> = super::pool(workers)?.install(|| {
        (0..grid.len())
            .into_par_iter()
            .map(|k| {
                let (a, o) = grid.point(k);
                ((a, o), evaluate_point(&grid, a, o))
            })
            .collect()
    });
    let outcome = collect_outcome(results)?;
    for (a, o) in &outcome.skipped {
        warn!("skipped degenerate point alpha={a} omega={o}");
    }
    if outcome.records.is_empty() {
        return Err(CliError::AllDegenerate);
    }

    let text = match format {
        Format::Csv => output::scan_csv(&outcome.records),
        Format::Json => output::scan_json(&outcome.records),
    };
    output::write(&out, &text)?;

    let s = summarize(&outcome.records)?;
    println!("wrote {}", out.display());
    println!("records={} skipped={}", s.records, outcome.skipped.len());
    println!("max_abs_chsh={:.16e}", s.max_abs_chsh);
    println!(
        "argmax_alpha={:.16e} argmax_omega={:.16e}",
        s.argmax.0, s.argmax.1
    );
    println!("violating_fraction={}", s.violating_fraction);
    if p.flag("paper-setting")? {
        println!("{DEGENERACY_NOTE}");
    }
    Ok(exit::SUCCESS)
}
