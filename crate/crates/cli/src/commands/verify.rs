use catbell_core::verify::{random_samples, run_verification, Requirement, VerifyConfig};

use crate::config::Params;
use crate::error::{exit, CliError, Result};
use crate::parse;

/// Per-component magnitude bound of the random tuples.
pub const SAMPLE_BOUND: f64 = 3.0;
pub const DEFAULT_SEED: u64 = 2024;

pub fn run(p: Params<'_>) -> Result<u8> {
    let cutoff = p.or("cutoff", 64, parse::integer::<usize>)?;
    let count = p.or("samples", 100, parse::integer::<usize>)?;
    if count == 0 {
        return Err(CliError::param(
            "samples",
            "at least one sample is required",
        ));
    }
    let seed = p.or("seed", DEFAULT_SEED, parse::integer::<u64>)?;
    let config = VerifyConfig {
        cutoff,
        samples: random_samples(count, SAMPLE_BOUND, seed),
        literal_vacuum: p.flag("literal-vacuum")?,
    };
    let report = run_verification(&config)?;

    println!(
        "cutoff={} samples={} seed={seed}",
        report.cutoff, report.samples
    );
    for c in &report.checks {
        let (tag, relation) = match c.requirement {
            Requirement::Informational => ("INFO", ""),
            r => (
                if c.passed() { "PASS" } else { "FAIL" },
                match r {
                    Requirement::Below => "<",
                    Requirement::Zero => "==",
                    _ => ">",
                },
            ),
        };
        let bound = match c.requirement {
            Requirement::Zero => "0".to_string(),
            Requirement::Informational => String::new(),
            _ => format!("{:e}", c.tolerance),
        };
        print!("{tag} {:<24} {:e}", c.name, c.value);
        if !relation.is_empty() {
            print!(" {relation} {bound}");
        }
        match &c.note {
            Some(n) => println!(" ({n})"),
            None => println!(),
        }
    }
    match report.first_failure() {
        Some(c) => Err(CliError::Verification {
            name: c.name.to_string(),
            detail: c.note.clone(),
        }),
        None => Ok(exit::SUCCESS),
    }
}
