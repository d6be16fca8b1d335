//! Closed-form expectations for the entangled cat state
//! `N (D_a(sigma) D_b(eta) + e^{i phi} D_a(-sigma) D_b(-eta)) |0>`
//! measured with `A(z) = 1 - 2 |z><z|` on mode `a` and `B(w) = 1 - 2 |w><w|`
//! on mode `b`.
//!
//! Overlaps use `<beta|alpha> = exp(conj(beta) alpha - (|alpha|^2 + |beta|^2) / 2)`
//! throughout. Nothing here touches a matrix; the [`crate::fock`] oracle
//! recomputes every quantity by linear algebra.

use core::f64::consts::SQRT_2;

use libm::{cos, exp, sqrt};
use num_complex::Complex64;

use crate::amplitude::ComplexAmplitude;
use crate::error::{Error, Result};

pub const CLASSICAL_BOUND: f64 = 2.0;
pub const TSIRELSON_BOUND: f64 = 2.0 * SQRT_2;

/// Normalization denominators below this are treated as a vanishing state.
pub const DEGENERACY_TOLERANCE: f64 = 1e-12;
/// Slack above the Tsirelson bound before a CHSH value is reported as a bug.
pub const TSIRELSON_ERROR_SLACK: f64 = 1e-6;

const ROUNDOFF_FLOOR: f64 = -1e-12;

/// `<u|v>` for coherent states `|u>`, `|v>`.
pub fn coherent_overlap(u: ComplexAmplitude, v: ComplexAmplitude) -> Complex64 {
    let cross = u.to_complex().conj() * v.to_complex();
    let exponent = Complex64::new(cross.re - 0.5 * u.norm_sqr() - 0.5 * v.norm_sqr(), cross.im);
    exponent.exp()
}

/// `D(xi) D(xi2) = e^{i phase} D(total)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeylProduct {
    pub phase: f64,
    pub total: ComplexAmplitude,
}

pub fn weyl_compose(xi: ComplexAmplitude, xi2: ComplexAmplitude) -> WeylProduct {
    WeylProduct {
        phase: xi.im() * xi2.re() - xi.re() * xi2.im(),
        total: xi + xi2,
    }
}

/// Parameters of the two-mode cat state together with its normalization.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CatStateParams {
    sigma: ComplexAmplitude,
    eta: ComplexAmplitude,
    phi: f64,
    norm_factor: f64,
}

impl CatStateParams {
    pub fn new(sigma: ComplexAmplitude, eta: ComplexAmplitude, phi: f64) -> Result<Self> {
        if !phi.is_finite() {
            return Err(Error::NonFinite { what: "phi" });
        }
        let denominator = normalization_denominator(sigma, eta, phi);
        if denominator.is_nan() || denominator < DEGENERACY_TOLERANCE {
            return Err(Error::DegenerateState { denominator });
        }
        Ok(Self {
            sigma,
            eta,
            phi,
            norm_factor: 1.0 / sqrt(2.0 * denominator),
        })
    }

    pub fn sigma(&self) -> ComplexAmplitude {
        self.sigma
    }

    pub fn eta(&self) -> ComplexAmplitude {
        self.eta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn norm_factor(&self) -> f64 {
        self.norm_factor
    }

    /// Largest displacement magnitude appearing in the state.
    pub fn max_magnitude(&self) -> f64 {
        self.sigma.abs().max(self.eta.abs())
    }

    fn norm_sqr(&self) -> f64 {
        self.norm_factor * self.norm_factor
    }
}

/// `1 + cos(phi) exp(-2(|sigma|^2 + |eta|^2))`, i.e. `1 / (2 N^2)`.
pub fn normalization_denominator(sigma: ComplexAmplitude, eta: ComplexAmplitude, phi: f64) -> f64 {
    1.0 + cos(phi) * exp(-2.0 * (sigma.norm_sqr() + eta.norm_sqr()))
}

pub fn make_cat_state(
    sigma: ComplexAmplitude,
    eta: ComplexAmplitude,
    phi: f64,
) -> Result<CatStateParams> {
    CatStateParams::new(sigma, eta, phi)
}

/// Which oscillator an observable acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    A,
    B,
}

fn clamp_roundoff(x: f64) -> f64 {
    if (ROUNDOFF_FLOOR..0.0).contains(&x) {
        0.0
    } else {
        x
    }
}

/// `<psi| |z><z| (x) 1 |psi>` (mode A) or `<psi| 1 (x) |z><z| |psi>` (mode B).
pub fn proj_expectation_single(z: ComplexAmplitude, state: &CatStateParams, mode: Mode) -> f64 {
    let (own, other) = match mode {
        Mode::A => (state.sigma, state.eta),
        Mode::B => (state.eta, state.sigma),
    };
    let d_minus = (z - own).norm_sqr();
    let d_plus = (z + own).norm_sqr();
    let interference = 2.0
        * exp(-2.0 * other.norm_sqr() - 0.5 * (d_minus + d_plus))
        * cos(state.phi + 2.0 * own.symplectic(z));
    clamp_roundoff(state.norm_sqr() * (exp(-d_minus) + exp(-d_plus) + interference))
}

/// `<psi| |z><z| (x) |w><w| |psi>`.
pub fn proj_expectation_joint(
    z: ComplexAmplitude,
    w: ComplexAmplitude,
    state: &CatStateParams,
) -> f64 {
    let za_minus = (z - state.sigma).norm_sqr();
    let za_plus = (z + state.sigma).norm_sqr();
    let wb_minus = (w - state.eta).norm_sqr();
    let wb_plus = (w + state.eta).norm_sqr();
    let phase = state.phi + 2.0 * state.sigma.symplectic(z) + 2.0 * state.eta.symplectic(w);
    let interference = 2.0 * exp(-0.5 * (za_minus + za_plus + wb_minus + wb_plus)) * cos(phase);
    clamp_roundoff(
        state.norm_sqr() * (exp(-za_minus - wb_minus) + exp(-za_plus - wb_plus) + interference),
    )
}

/// Expectation of a single `A(z) (x) B(w)`; bounded by 1 in magnitude.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct CorrelatorValue(f64);

impl CorrelatorValue {
    pub fn value(self) -> f64 {
        self.0
    }
}

/// `E(z, w) = <psi| A(z) (x) B(w) |psi>`.
pub fn correlator(
    z: ComplexAmplitude,
    w: ComplexAmplitude,
    state: &CatStateParams,
) -> CorrelatorValue {
    let pa = proj_expectation_single(z, state, Mode::A);
    let pb = proj_expectation_single(w, state, Mode::B);
    let pab = proj_expectation_joint(z, w, state);
    CorrelatorValue(1.0 - 2.0 * pa - 2.0 * pb + 4.0 * pab)
}

/// The four displacements `(z, z', w, w')` selecting the observables
/// `A(z), A(z')` on mode `a` and `B(w), B(w')` on mode `b`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct MeasurementSettings {
    pub z: ComplexAmplitude,
    pub z_prime: ComplexAmplitude,
    pub w: ComplexAmplitude,
    pub w_prime: ComplexAmplitude,
}

impl MeasurementSettings {
    pub fn new(
        z: ComplexAmplitude,
        z_prime: ComplexAmplitude,
        w: ComplexAmplitude,
        w_prime: ComplexAmplitude,
    ) -> Self {
        Self {
            z,
            z_prime,
            w,
            w_prime,
        }
    }

    /// All four displacements equal to `a`.
    pub fn uniform(a: ComplexAmplitude) -> Self {
        Self::new(a, a, a, a)
    }

    pub fn max_magnitude(&self) -> f64 {
        self.z
            .abs()
            .max(self.z_prime.abs())
            .max(self.w.abs())
            .max(self.w_prime.abs())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Classification {
    Classical,
    Violating,
}

impl Classification {
    pub fn of(value: f64) -> Self {
        if value.abs() > CLASSICAL_BOUND {
            Classification::Violating
        } else {
            Classification::Classical
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Classical => "classical",
            Classification::Violating => "violating",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChshValue {
    pub value: f64,
    pub classification: Classification,
}

/// The four correlators entering the CHSH sum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChshComponents {
    pub e_zw: f64,
    pub e_zpw: f64,
    pub e_zwp: f64,
    pub e_zpwp: f64,
}

impl ChshComponents {
    /// Grouped so that identical settings give exactly `2 E(z, w)`.
    pub fn combine(&self) -> f64 {
        (self.e_zw + self.e_zpw) + (self.e_zwp - self.e_zpwp)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChshEvaluation {
    pub components: ChshComponents,
    pub chsh: ChshValue,
}

/// Evaluate all four correlators and their CHSH combination
/// `E(z,w) + E(z',w) + E(z,w') - E(z',w')`.
pub fn chsh_evaluation(
    settings: &MeasurementSettings,
    state: &CatStateParams,
) -> Result<ChshEvaluation> {
    let components = ChshComponents {
        e_zw: correlator(settings.z, settings.w, state).value(),
        e_zpw: correlator(settings.z_prime, settings.w, state).value(),
        e_zwp: correlator(settings.z, settings.w_prime, state).value(),
        e_zpwp: correlator(settings.z_prime, settings.w_prime, state).value(),
    };
    let value = components.combine();
    if value.is_nan() || value.abs() > TSIRELSON_BOUND + TSIRELSON_ERROR_SLACK {
        return Err(Error::TsirelsonViolation { value });
    }
    Ok(ChshEvaluation {
        components,
        chsh: ChshValue {
            value,
            classification: Classification::of(value),
        },
    })
}

pub fn chsh(settings: &MeasurementSettings, state: &CatStateParams) -> Result<ChshValue> {
    chsh_evaluation(settings, state).map(|e| e.chsh)
}
