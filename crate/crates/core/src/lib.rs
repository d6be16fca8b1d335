//! Bell-CHSH correlations of two-mode entangled Schrödinger-cat states measured
//! with displaced vacuum-projector observables.
//!
//! The crate is `no_std` and only needs `alloc`. It is split into:
//!
//! - [`analytic`]: closed-form overlaps, state normalization, projector
//!   expectations, the correlator `E(z, w)` and the CHSH combination.
//! - [`fock`]: an independent brute-force oracle that builds every state and
//!   operator as a dense matrix in a truncated number basis.
//! - [`scan`]: evaluation of the CHSH value over a real `(alpha, omega)` grid.
//! - [`optimize`]: multi-start Nelder-Mead search for the largest violation.
//! - [`verify`]: the analytic-versus-oracle check suite.
//!
//! IO, threading and the command-line driver live in the `catbell` crate.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod amplitude;
pub mod analytic;
pub mod error;
pub mod fock;
pub mod optimize;
pub mod scan;
pub mod verify;

pub use amplitude::ComplexAmplitude;
pub use analytic::{
    chsh, chsh_evaluation, coherent_overlap, correlator, make_cat_state, proj_expectation_joint,
    proj_expectation_single, weyl_compose, CatStateParams, ChshComponents, ChshEvaluation,
    ChshValue, Classification, CorrelatorValue, MeasurementSettings, Mode, WeylProduct,
    CLASSICAL_BOUND, TSIRELSON_BOUND,
};
pub use error::{Error, Result};
