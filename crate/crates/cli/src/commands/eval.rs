use std::f64::consts::PI;

use catbell_core::fock::{check_cutoff, oracle_chsh};
use catbell_core::{chsh_evaluation, make_cat_state, CatStateParams, Classification};

use crate::config::Params;
use crate::error::{exit, CliError, Result};
use crate::parse;

fn state(p: Params<'_>, from: Option<&crate::output::ResultFile>) -> Result<CatStateParams> {
    if let Some(r) = from {
        if let Some(k) = ["sigma", "eta", "phi"].into_iter().find(|k| p.has(k)) {
            return Err(CliError::param(k, "conflicts with --from-result"));
        }
        return Ok(r.state()?);
    }
    let phi = if p.flag("paper-setting")? {
        if p.has("phi") {
            return Err(CliError::param("phi", "fixed to pi by --paper-setting"));
        }
        PI
    } else {
        p.require("phi", parse::phase)?
    };
    Ok(make_cat_state(
        p.require("sigma", parse::complex)?,
        p.require("eta", parse::complex)?,
        phi,
    )?)
}

pub fn run(p: Params<'_>) -> Result<u8> {
    let from = super::load_result(p)?;
    let state = state(p, from.as_ref())?;
    let settings = super::settings(p, from.as_ref())?;
    let eval = chsh_evaluation(&settings, &state)?;
    let c = eval.components;

    println!(
        "sigma={} eta={} phi={}",
        state.sigma(),
        state.eta(),
        state.phi()
    );
    println!(
        "z={} z'={} w={} w'={}",
        settings.z, settings.z_prime, settings.w, settings.w_prime
    );
    println!("E_zw={:.16e}", c.e_zw);
    println!("E_zpw={:.16e}", c.e_zpw);
    println!("E_zwp={:.16e}", c.e_zwp);
    println!("E_zpwp={:.16e}", c.e_zpwp);
    println!("chsh={:.16e}", eval.chsh.value);
    if let Some(cutoff) = p.get("cutoff", parse::integer::<usize>)? {
        check_cutoff(cutoff, settings.max_magnitude().max(state.max_magnitude()))
            .map_err(|e| CliError::param("cutoff", e.to_string()))?;
        let oracle = oracle_chsh(&settings, &state, cutoff)?;
        println!("oracle_chsh={:.16e} cutoff={cutoff}", oracle.chsh.value);
    }
    println!("classification={}", eval.chsh.classification.as_str());

    Ok(match eval.chsh.classification {
        Classification::Violating => exit::VIOLATING,
        Classification::Classical => exit::SUCCESS,
    })
}
