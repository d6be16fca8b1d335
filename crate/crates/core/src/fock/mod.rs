//! Truncated Fock-space oracle.
//!
//! Every state and observable is built as an explicit matrix or vector in the
//! number basis `|0>, ..., |cutoff-1>` of each mode, and expectations are
//! computed by plain linear algebra. Nothing here calls into
//! [`crate::analytic`] except for reading the state parameters.

mod displacement;
mod matrix;
mod operator;

pub use displacement::{coherent_amplitudes, displacement_matrix, laguerre_sequence};
pub use matrix::DenseMatrix;
pub use operator::{FockOperator, FockVector, KronTerm, ModeTag};

use alloc::vec;
use num_complex::Complex64;

use crate::amplitude::ComplexAmplitude;
use crate::analytic::{
    CatStateParams, ChshComponents, ChshEvaluation, ChshValue, Classification, MeasurementSettings,
    Mode,
};
use crate::error::{Error, Result};

pub const MIN_CUTOFF: usize = 32;

/// Smallest cutoff accepted for displacements up to `magnitude`:
/// `max(32, ceil(B^2 + 6B + 20))`.
pub fn required_cutoff(magnitude: f64) -> usize {
    let b = magnitude.abs();
    let rule = libm::ceil(b * b + 6.0 * b + 20.0) as usize;
    rule.max(MIN_CUTOFF)
}

pub fn check_cutoff(cutoff: usize, magnitude: f64) -> Result<()> {
    let required = required_cutoff(magnitude);
    if cutoff < required || !magnitude.is_finite() {
        return Err(Error::CutoffTooSmall {
            cutoff,
            required,
            magnitude,
        });
    }
    Ok(())
}

/// Dimension of the leading sub-block on which truncated products of
/// displacements up to `magnitude` reproduce the untruncated operator
/// algebra: `floor((sqrt(cutoff) - magnitude - 1.5)^2)`, or 0.
pub fn reliable_dim(cutoff: usize, magnitude: f64) -> usize {
    let r = libm::sqrt(cutoff as f64) - magnitude.abs() - 1.5;
    if r <= 0.0 {
        0
    } else {
        (libm::floor(r * r) as usize).min(cutoff)
    }
}

pub fn build_displacement(alpha: ComplexAmplitude, cutoff: usize) -> Result<FockOperator> {
    check_cutoff(cutoff, alpha.abs())?;
    Ok(FockOperator::single(displacement_matrix(alpha, cutoff)))
}

/// `|alpha> = D(alpha)|0>` in a single mode.
pub fn coherent_vector(alpha: ComplexAmplitude, cutoff: usize) -> Result<FockVector> {
    build_displacement(alpha, cutoff)?.apply(&FockVector::vacuum(cutoff, ModeTag::Single))
}

/// `|z><z|` on `mode`, identity on the other mode.
pub fn build_projector(z: ComplexAmplitude, cutoff: usize, mode: Mode) -> Result<FockOperator> {
    let v = coherent_vector(z, cutoff)?;
    Ok(FockOperator::on_mode(
        DenseMatrix::outer(v.amplitudes(), v.amplitudes()),
        mode,
    ))
}

/// `1 - 2|z><z|` on `mode`, identity on the other mode.
pub fn build_dichotomic(z: ComplexAmplitude, cutoff: usize, mode: Mode) -> Result<FockOperator> {
    let v = coherent_vector(z, cutoff)?;
    let p = DenseMatrix::outer(v.amplitudes(), v.amplitudes());
    let reflection = DenseMatrix::identity(cutoff).sub(&p.scale(Complex64::new(2.0, 0.0)));
    Ok(FockOperator::on_mode(reflection, mode))
}

/// `D^dagger(z) F D(z)` with the displacement on `mode` and
/// `F = 1 - 2 |0>_a<0| (x) |0>_b<0|` the reflection about the two-mode vacuum.
///
/// This operator does not commute with its counterpart on the other mode; it
/// exists to quantify that.
pub fn build_literal_dichotomic(
    z: ComplexAmplitude,
    cutoff: usize,
    mode: Mode,
) -> Result<FockOperator> {
    let d = build_displacement(z, cutoff)?;
    let d = d.as_single().expect("single-mode displacement");
    let id = DenseMatrix::identity(cutoff);
    let mut vac = vec![Complex64::new(0.0, 0.0); cutoff];
    vac[0] = Complex64::new(1.0, 0.0);
    let vac_proj = DenseMatrix::outer(&vac, &vac);

    let d_on = |m: &DenseMatrix| match mode {
        Mode::A => (m.clone(), id.clone()),
        Mode::B => (id.clone(), m.clone()),
    };
    let (da, db) = d_on(d);
    let displacement = FockOperator::bipartite(
        cutoff,
        vec![KronTerm {
            coeff: Complex64::new(1.0, 0.0),
            a: da,
            b: db,
        }],
    )?;
    let reflection = FockOperator::bipartite(
        cutoff,
        vec![
            KronTerm {
                coeff: Complex64::new(1.0, 0.0),
                a: id.clone(),
                b: id.clone(),
            },
            KronTerm {
                coeff: Complex64::new(-2.0, 0.0),
                a: vac_proj.clone(),
                b: vac_proj,
            },
        ],
    )?;
    displacement.adjoint().mul(&reflection)?.mul(&displacement)
}

/// `N (D_a(sigma) D_b(eta) + e^{i phi} D_a(-sigma) D_b(-eta)) |0>`.
pub fn build_cat_state(state: &CatStateParams, cutoff: usize) -> Result<FockVector> {
    check_cutoff(cutoff, state.max_magnitude())?;
    let vac = FockVector::vacuum(cutoff, ModeTag::Single);
    let branch = |s: ComplexAmplitude, e: ComplexAmplitude| -> Result<FockVector> {
        let a = build_displacement(s, cutoff)?.apply(&vac)?;
        let b = build_displacement(e, cutoff)?.apply(&vac)?;
        FockVector::product(&a, &b)
    };
    let plus = branch(state.sigma(), state.eta())?;
    let minus = branch(-state.sigma(), -state.eta())?;
    let phase = Complex64::from_polar(1.0, state.phi());
    Ok(plus
        .add(&minus.scaled(phase))?
        .scaled(Complex64::new(state.norm_factor(), 0.0)))
}

/// `max |op1 op2 - op2 op1|` over all matrix entries.
pub fn commutator_norm(op1: &FockOperator, op2: &FockOperator) -> Result<f64> {
    let ab = op1.mul(op2)?;
    let ba = op2.mul(op1)?;
    Ok(ab.sub(&ba)?.max_abs())
}

/// `<psi| |z><z| |psi>` on one mode, by matrix expectation.
pub fn oracle_proj_single(
    z: ComplexAmplitude,
    state: &CatStateParams,
    mode: Mode,
    cutoff: usize,
) -> Result<f64> {
    let psi = build_cat_state(state, cutoff)?;
    Ok(build_projector(z, cutoff, mode)?.expectation(&psi)?.re)
}

pub fn oracle_proj_joint(
    z: ComplexAmplitude,
    w: ComplexAmplitude,
    state: &CatStateParams,
    cutoff: usize,
) -> Result<f64> {
    let psi = build_cat_state(state, cutoff)?;
    let p = build_projector(z, cutoff, Mode::A)?.mul(&build_projector(w, cutoff, Mode::B)?)?;
    Ok(p.expectation(&psi)?.re)
}

fn correlator_on(psi: &FockVector, z: ComplexAmplitude, w: ComplexAmplitude) -> Result<f64> {
    let cutoff = psi.cutoff();
    let ab = build_dichotomic(z, cutoff, Mode::A)?.mul(&build_dichotomic(w, cutoff, Mode::B)?)?;
    Ok(ab.expectation(psi)?.re)
}

/// `<psi| A(z) B(w) |psi>` by matrix expectation.
pub fn oracle_correlator(
    z: ComplexAmplitude,
    w: ComplexAmplitude,
    state: &CatStateParams,
    cutoff: usize,
) -> Result<f64> {
    correlator_on(&build_cat_state(state, cutoff)?, z, w)
}

/// The CHSH combination assembled from oracle correlators.
pub fn oracle_chsh(
    settings: &MeasurementSettings,
    state: &CatStateParams,
    cutoff: usize,
) -> Result<ChshEvaluation> {
    let psi = build_cat_state(state, cutoff)?;
    let components = ChshComponents {
        e_zw: correlator_on(&psi, settings.z, settings.w)?,
        e_zpw: correlator_on(&psi, settings.z_prime, settings.w)?,
        e_zwp: correlator_on(&psi, settings.z, settings.w_prime)?,
        e_zpwp: correlator_on(&psi, settings.z_prime, settings.w_prime)?,
    };
    let value = components.combine();
    Ok(ChshEvaluation {
        components,
        chsh: ChshValue {
            value,
            classification: Classification::of(value),
        },
    })
}
