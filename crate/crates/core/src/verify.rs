//! Analytic-versus-oracle check suite.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::amplitude::ComplexAmplitude;
use crate::analytic::{
    correlator, make_cat_state, proj_expectation_joint, proj_expectation_single, weyl_compose,
    CatStateParams, Mode,
};
use crate::error::{Error, Result};
use crate::fock::{
    build_cat_state, build_dichotomic, build_displacement, build_literal_dichotomic,
    build_projector, check_cutoff, coherent_vector, commutator_norm, reliable_dim, required_cutoff,
    DenseMatrix, FockVector,
};

pub const ORACLE_TOLERANCE: f64 = 1e-8;
pub const NORM_TOLERANCE: f64 = 1e-9;
pub const HERMITICITY_TOLERANCE: f64 = 1e-12;
pub const CONVERGENCE_TOLERANCE: f64 = 1e-10;
/// `[A(z), A(z')]` must exceed this for `z = 1`, `z' = 1 + i`.
pub const NONCOMMUTING_FLOOR: f64 = 1e-3;

/// One random parameter tuple.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sample {
    pub state: CatStateParams,
    pub z: ComplexAmplitude,
    pub w: ComplexAmplitude,
}

fn unit(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

/// Amplitude uniform in the disc of radius `bound`.
fn disc(rng: &mut ChaCha8Rng, bound: f64) -> ComplexAmplitude {
    let r = bound * libm::sqrt(unit(rng));
    let t = 2.0 * core::f64::consts::PI * unit(rng);
    ComplexAmplitude::new(r * libm::cos(t), r * libm::sin(t)).expect("finite")
}

/// `count` tuples with `|sigma|, |eta|, |z|, |w| <= bound` and
/// `phi` in `[0, 2 pi)`, degenerate states redrawn.
pub fn random_samples(count: usize, bound: f64, seed: u64) -> Vec<Sample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let sigma = disc(&mut rng, bound);
        let eta = disc(&mut rng, bound);
        let phi = 2.0 * core::f64::consts::PI * unit(&mut rng);
        let z = disc(&mut rng, bound);
        let w = disc(&mut rng, bound);
        if let Ok(state) = make_cat_state(sigma, eta, phi) {
            out.push(Sample { state, z, w });
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Requirement {
    /// Measured value must be below the tolerance.
    Below,
    /// Measured value must be exactly zero.
    Zero,
    /// Measured value must exceed the tolerance.
    Above,
    /// Reported only.
    Informational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub name: &'static str,
    pub value: f64,
    pub tolerance: f64,
    pub requirement: Requirement,
    pub note: Option<String>,
}

impl CheckReport {
    fn new(name: &'static str, value: f64, tolerance: f64, requirement: Requirement) -> Self {
        Self {
            name,
            value,
            tolerance,
            requirement,
            note: None,
        }
    }

    pub fn passed(&self) -> bool {
        match self.requirement {
            Requirement::Below => self.value < self.tolerance,
            Requirement::Zero => self.value == 0.0,
            Requirement::Above => self.value > self.tolerance,
            Requirement::Informational => true,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub cutoff: usize,
    pub samples: usize,
    pub checks: Vec<CheckReport>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckReport::passed)
    }

    pub fn first_failure(&self) -> Option<&CheckReport> {
        self.checks.iter().find(|c| !c.passed())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyConfig {
    pub cutoff: usize,
    pub samples: Vec<Sample>,
    /// Also report the commutator of the two-mode-vacuum reflections.
    pub literal_vacuum: bool,
}

fn max_dev(mut it: impl Iterator<Item = Result<f64>>) -> Result<f64> {
    it.try_fold(0.0f64, |m, d| d.map(|d| m.max(d)))
}

/// Largest per-displacement magnitude whose pairwise sums still satisfy the
/// cutoff rule, capped at 2.
fn weyl_magnitude(cutoff: usize) -> f64 {
    let b = libm::sqrt((cutoff as f64 - 11.0).max(0.0)) - 3.0;
    (0.5 * b).clamp(0.0, 2.0)
}

fn rescale(a: ComplexAmplitude, bound: f64) -> ComplexAmplitude {
    let m = a.abs();
    if m <= bound {
        a
    } else {
        let s = bound / m;
        ComplexAmplitude::new(a.re() * s, a.im() * s).expect("finite")
    }
}

/// `max |D(xi) D(xi2) - e^{i phase} D(xi + xi2)|` on the reliable block.
pub fn weyl_residual(
    xi: ComplexAmplitude,
    xi2: ComplexAmplitude,
    cutoff: usize,
) -> Result<(f64, usize)> {
    let w = weyl_compose(xi, xi2);
    let d1 = build_displacement(xi, cutoff)?;
    let d2 = build_displacement(xi2, cutoff)?;
    let dt = build_displacement(w.total, cutoff)?;
    let lhs = d1.mul(&d2)?;
    let rhs = dt
        .as_single()
        .expect("single")
        .scale(Complex64::from_polar(1.0, w.phase));
    let diff = lhs.as_single().expect("single").sub(&rhs);
    let block = reliable_dim(cutoff, xi.abs().max(xi2.abs()).max(w.total.abs()));
    Ok((diff.max_abs_on_block(block), block))
}

/// `max |D^dagger D - 1|` on the reliable block.
pub fn unitarity_residual(alpha: ComplexAmplitude, cutoff: usize) -> Result<(f64, usize)> {
    let d = build_displacement(alpha, cutoff)?;
    let d = d.as_single().expect("single");
    let r = d.adjoint().matmul(d).sub(&DenseMatrix::identity(cutoff));
    let block = reliable_dim(cutoff, alpha.abs());
    Ok((r.max_abs_on_block(block), block))
}

fn reflection_factor(z: ComplexAmplitude, cutoff: usize) -> Result<DenseMatrix> {
    let op = build_dichotomic(z, cutoff, Mode::A)?;
    Ok(op.terms()[0].a.clone())
}

/// Run every check. A cutoff that violates the selection rule for the
/// sampled magnitudes yields a single failing `cutoff rule` check.
pub fn run_verification(config: &VerifyConfig) -> Result<VerificationReport> {
    let cutoff = config.cutoff;
    let magnitude = config
        .samples
        .iter()
        .map(|s| s.state.max_magnitude().max(s.z.abs()).max(s.w.abs()))
        .fold(0.0, f64::max);
    let mut report = VerificationReport {
        cutoff,
        samples: config.samples.len(),
        checks: Vec::new(),
    };
    if let Err(e) = check_cutoff(cutoff, magnitude) {
        let mut c = CheckReport::new(
            "cutoff rule",
            cutoff as f64,
            required_cutoff(magnitude) as f64,
            Requirement::Above,
        );
        c.value = cutoff as f64;
        c.tolerance = required_cutoff(magnitude) as f64 - 0.5;
        c.note = Some(e.to_string());
        report.checks.push(c);
        return Ok(report);
    }

    let psis = config
        .samples
        .iter()
        .map(|s| build_cat_state(&s.state, cutoff))
        .collect::<Result<Vec<FockVector>>>()?;
    let pairs = || config.samples.iter().zip(&psis);

    let corr = max_dev(pairs().map(|(s, psi)| {
        let ab = build_dichotomic(s.z, cutoff, Mode::A)?.mul(&build_dichotomic(
            s.w,
            cutoff,
            Mode::B,
        )?)?;
        Ok((ab.expectation(psi)?.re - correlator(s.z, s.w, &s.state).value()).abs())
    }))?;
    report.checks.push(CheckReport::new(
        "correlator E(z,w)",
        corr,
        ORACLE_TOLERANCE,
        Requirement::Below,
    ));

    let single = max_dev(pairs().map(|(s, psi)| {
        let pa = build_projector(s.z, cutoff, Mode::A)?.expectation(psi)?.re;
        let pb = build_projector(s.w, cutoff, Mode::B)?.expectation(psi)?.re;
        Ok((pa - proj_expectation_single(s.z, &s.state, Mode::A))
            .abs()
            .max((pb - proj_expectation_single(s.w, &s.state, Mode::B)).abs()))
    }))?;
    report.checks.push(CheckReport::new(
        "single-mode projector",
        single,
        ORACLE_TOLERANCE,
        Requirement::Below,
    ));

    let joint = max_dev(pairs().map(|(s, psi)| {
        let p =
            build_projector(s.z, cutoff, Mode::A)?.mul(&build_projector(s.w, cutoff, Mode::B)?)?;
        Ok((p.expectation(psi)?.re - proj_expectation_joint(s.z, s.w, &s.state)).abs())
    }))?;
    report.checks.push(CheckReport::new(
        "joint projector",
        joint,
        ORACLE_TOLERANCE,
        Requirement::Below,
    ));

    let norm = max_dev(psis.iter().map(|psi| Ok((psi.norm() - 1.0).abs())))?;
    report.checks.push(CheckReport::new(
        "state norm",
        norm,
        NORM_TOLERANCE,
        Requirement::Below,
    ));

    let branch = max_dev(pairs().map(|(s, psi)| {
        let b = FockVector::product(
            &coherent_vector(s.state.sigma(), cutoff)?,
            &coherent_vector(s.state.eta(), cutoff)?,
        )?;
        let decay = libm::exp(-2.0 * (s.state.sigma().norm_sqr() + s.state.eta().norm_sqr()));
        let expected = (Complex64::from_polar(decay, s.state.phi()) + 1.0) * s.state.norm_factor();
        Ok((b.inner(psi)? - expected).norm())
    }))?;
    report.checks.push(CheckReport::new(
        "branch overlap",
        branch,
        NORM_TOLERANCE,
        Requirement::Below,
    ));

    let wb = weyl_magnitude(cutoff);
    let weyl = max_dev(
        [
            (
                ComplexAmplitude::new(0.0, 1.0)?,
                ComplexAmplitude::real(1.0)?,
            ),
            (ComplexAmplitude::real(wb)?, ComplexAmplitude::new(0.0, wb)?),
        ]
        .into_iter()
        .chain(
            config
                .samples
                .iter()
                .map(|s| (rescale(s.z, wb), rescale(s.w, wb))),
        )
        .map(|(a, b)| weyl_residual(a, b, cutoff).map(|r| r.0)),
    )?;
    report.checks.push(CheckReport::new(
        "weyl composition",
        weyl,
        ORACLE_TOLERANCE,
        Requirement::Below,
    ));

    let unitary = max_dev(
        config
            .samples
            .iter()
            .map(|s| unitarity_residual(s.z, cutoff).map(|r| r.0)),
    )?;
    report.checks.push(CheckReport::new(
        "displacement unitarity",
        unitary,
        ORACLE_TOLERANCE,
        Requirement::Below,
    ));

    let mut herm = 0.0f64;
    let mut idem = 0.0f64;
    for s in &config.samples {
        for z in [s.z, s.w] {
            let a = reflection_factor(z, cutoff)?;
            herm = herm.max(a.hermiticity_residual());
            idem = idem.max(a.matmul(&a).sub(&DenseMatrix::identity(cutoff)).max_abs());
        }
    }
    report.checks.push(CheckReport::new(
        "dichotomic hermiticity",
        herm,
        HERMITICITY_TOLERANCE,
        Requirement::Below,
    ));
    report.checks.push(CheckReport::new(
        "dichotomic idempotence",
        idem,
        ORACLE_TOLERANCE,
        Requirement::Below,
    ));

    let ab = max_dev(config.samples.iter().take(2).map(|s| {
        commutator_norm(
            &build_dichotomic(s.z, cutoff, Mode::A)?,
            &build_dichotomic(s.w, cutoff, Mode::B)?,
        )
    }))?;
    report
        .checks
        .push(CheckReport::new("[A(z), B(w)]", ab, 0.0, Requirement::Zero));

    let z = ComplexAmplitude::real(1.0)?;
    let zp = ComplexAmplitude::new(1.0, 1.0)?;
    let aa = commutator_norm(
        &build_dichotomic(z, cutoff, Mode::A)?,
        &build_dichotomic(zp, cutoff, Mode::A)?,
    )?;
    report.checks.push(CheckReport::new(
        "[A(1), A(1+i)]",
        aa,
        NONCOMMUTING_FLOOR,
        Requirement::Above,
    ));

    let doubled = 2 * cutoff;
    let conv = max_dev(config.samples.iter().take(5).map(|s| {
        let lo = crate::fock::oracle_correlator(s.z, s.w, &s.state, cutoff)?;
        let hi = crate::fock::oracle_correlator(s.z, s.w, &s.state, doubled)?;
        Ok((lo - hi).abs())
    }))?;
    report.checks.push(CheckReport::new(
        "cutoff convergence",
        conv,
        CONVERGENCE_TOLERANCE,
        Requirement::Below,
    ));

    if config.literal_vacuum {
        let lit = literal_commutator(
            ComplexAmplitude::real(0.5)?,
            ComplexAmplitude::new(0.0, 0.5)?,
            cutoff,
        )?;
        let mut c = CheckReport::new(
            "[A, B] two-mode vacuum reflection",
            lit,
            0.0,
            Requirement::Informational,
        );
        c.note = Some(String::from(
            "D_a^dag(z) F D_a(z) vs D_b^dag(w) F D_b(w) with F = 1 - 2|00><00|",
        ));
        report.checks.push(c);
    }
    Ok(report)
}

/// Commutator norm of the two-mode-vacuum reflections displaced on either
/// mode.
pub fn literal_commutator(z: ComplexAmplitude, w: ComplexAmplitude, cutoff: usize) -> Result<f64> {
    commutator_norm(
        &build_literal_dichotomic(z, cutoff, Mode::A)?,
        &build_literal_dichotomic(w, cutoff, Mode::B)?,
    )
}

impl From<Error> for CheckReport {
    fn from(e: Error) -> Self {
        let mut c = CheckReport::new("error", f64::NAN, 0.0, Requirement::Below);
        c.note = Some(e.to_string());
        c
    }
}
