use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite value for {what}")]
    NonFinite { what: &'static str },

    /// The two branches of the cat superposition cancel and the
    /// normalization factor diverges.
    #[error(
        "degenerate cat state: normalization denominator 1 + cos(phi) exp(-2(|sigma|^2 + |eta|^2)) = {denominator:e} is below 1e-12"
    )]
    DegenerateState { denominator: f64 },

    /// A CHSH value beyond the Tsirelson bound. This is an implementation
    /// bug, never a physical result.
    #[error("CHSH value {value} exceeds the Tsirelson bound 2*sqrt(2)")]
    TsirelsonViolation { value: f64 },

    #[error("Fock cutoff {cutoff} too small: displacements of magnitude {magnitude} need at least {required}")]
    CutoffTooSmall {
        cutoff: usize,
        required: usize,
        magnitude: f64,
    },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid scan grid: {0}")]
    InvalidGrid(&'static str),

    #[error("empty scan: no records to summarize")]
    EmptyScan,

    #[error("invalid optimization problem: {0}")]
    InvalidProblem(&'static str),

    #[error("every optimizer start point is a degenerate state")]
    DegenerateRegion,

    #[error("certification failed: analytic {analytic} vs oracle {oracle}")]
    CertificationFailed { analytic: f64, oracle: f64 },
}
