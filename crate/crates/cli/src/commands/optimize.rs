use std::f64::consts::PI;
use std::path::PathBuf;

use catbell_core::make_cat_state;
use catbell_core::optimize::{
    certify_result, merge_restarts, run_restart, Interval, OptimizationProblem,
};
use log::debug;
use rayon::prelude::*;

use crate::config::Params;
use crate::error::{exit, CliError, Result};
use crate::output::{self, Format, ResultFile};
use crate::parse;

pub const DEFAULT_RANGE: (f64, f64) = (0.3, 2.5);
pub const DEFAULT_SETTING_BOUND: f64 = 3.0;
pub const DEFAULT_BUDGET: usize = 20_000;
pub const DEFAULT_RESTARTS: usize = 16;
pub const DEFAULT_SEED: u64 = 7;

fn interval(p: Params<'_>, key: &str) -> Result<Interval> {
    let (lo, hi) = p.or(key, DEFAULT_RANGE, parse::range)?;
    Interval::new(lo, hi).map_err(|e| CliError::param(key, e.to_string()))
}

fn problem(p: Params<'_>) -> Result<OptimizationProblem> {
    let bound = p.or("setting-bound", DEFAULT_SETTING_BOUND, parse::float)?;
    let budget = p.or("budget", DEFAULT_BUDGET, parse::integer::<usize>)?;
    let restarts = p.or("restarts", DEFAULT_RESTARTS, parse::integer::<usize>)?;
    let seed = p.or("seed", DEFAULT_SEED, parse::integer::<u64>)?;
    let fixed = p.has("sigma") || p.has("eta");
    let free = p.get("free-state", parse::float)?;
    let ranges = ["alpha-range", "omega-range"]
        .into_iter()
        .find(|k| p.has(k));

    let problem = match (fixed, free) {
        (true, Some(_)) => {
            return Err(CliError::param(
                "free-state",
                "conflicts with --sigma / --eta",
            ))
        }
        (true, None) => {
            if let Some(k) = ranges {
                return Err(CliError::param(k, "conflicts with --sigma / --eta"));
            }
            let state = make_cat_state(
                p.require("sigma", parse::complex)?,
                p.require("eta", parse::complex)?,
                p.or("phi", PI, parse::phase)?,
            )?;
            OptimizationProblem::fixed_state(state, bound, budget, restarts, seed)
        }
        (false, Some(b)) => {
            if let Some(k) = ranges.or(p.has("phi").then_some("phi")) {
                return Err(CliError::param(k, "conflicts with --free-state"));
            }
            OptimizationProblem::free_state(b, bound, budget, restarts, seed)
        }
        (false, None) => OptimizationProblem::real_state(
            interval(p, "alpha-range")?,
            interval(p, "omega-range")?,
            p.or("phi", PI, parse::phase)?,
            bound,
            budget,
            restarts,
            seed,
        ),
    };
    Ok(problem?)
}

pub fn run(p: Params<'_>, workers: usize) -> Result<u8> {
    let problem = problem(p)?;
    if p.or("format", Format::Json, Format::parse)? != Format::Json {
        return Err(CliError::param("format", "optimize writes json only"));
    }
    let out = PathBuf::from(p.text("out").unwrap_or("optimize.json"));

    let outcomes = super::pool(workers)?.install(|| {
        (0..problem.restarts)
            .into_par_iter()
            .map(|k| run_restart(&problem, k))
            .collect::<catbell_core::Result<Vec<_>>>()
    })?;
    for o in &outcomes {
        debug!(
            "restart {}: start {:?} -> {} in {} evaluations",
            o.index, o.start_value, o.best_value, o.evaluations
        );
    }
    let result = merge_restarts(&problem, outcomes)?;
    let cert = certify_result(&result)?;
    output::write(&out, &ResultFile::from_result(&result).to_json())?;

    let s = &result.best_settings;
    let st = &result.best_state;
    println!("wrote {}", out.display());
    println!("best_value={:.16e}", result.best_value);
    println!("oracle_value={:.16e} cutoff={}", cert.oracle, cert.cutoff);
    println!("sigma={} eta={} phi={}", st.sigma(), st.eta(), st.phi());
    println!("z={} z'={} w={} w'={}", s.z, s.z_prime, s.w, s.w_prime);
    println!(
        "evaluations_used={} best_restart={} seed={}",
        result.evaluations_used, result.best_restart, result.seed
    );
    Ok(exit::SUCCESS)
}
