//! CHSH value over a real `(alpha, omega)` grid with `sigma = alpha`,
//! `eta = omega` and fixed measurement settings.

use alloc::vec::Vec;

use crate::amplitude::ComplexAmplitude;
use crate::analytic::{
    chsh_evaluation, make_cat_state, Classification, MeasurementSettings, TSIRELSON_BOUND,
};
use crate::error::{Error, Result};

/// `steps` equally spaced values from `min` to `max` inclusive.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AxisRange {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl AxisRange {
    pub fn new(min: f64, max: f64, steps: usize) -> Result<Self> {
        if !(min.is_finite() && max.is_finite()) {
            return Err(Error::InvalidGrid("axis bounds must be finite"));
        }
        if steps < 2 {
            return Err(Error::InvalidGrid("an axis needs at least 2 steps"));
        }
        if min >= max {
            return Err(Error::InvalidGrid("axis min must be below max"));
        }
        Ok(Self { min, max, steps })
    }

    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.steps {
            self.max
        } else {
            self.min + (self.max - self.min) * (i as f64) / ((self.steps - 1) as f64)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanGrid {
    pub alpha: AxisRange,
    pub omega: AxisRange,
    pub settings: MeasurementSettings,
    pub phi: f64,
}

impl ScanGrid {
    pub fn len(&self) -> usize {
        self.alpha.steps * self.omega.steps
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Grid point `index` in row-major order over `(alpha, omega)`.
    pub fn point(&self, index: usize) -> (f64, f64) {
        let i = index / self.omega.steps;
        let j = index % self.omega.steps;
        (self.alpha.value(i), self.omega.value(j))
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        (0..self.len()).map(move |k| self.point(k))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanRecord {
    pub alpha: f64,
    pub omega: f64,
    pub e_zw: f64,
    pub e_zpw: f64,
    pub e_zwp: f64,
    pub e_zpwp: f64,
    pub chsh: f64,
    pub classification: Classification,
}

/// Evaluate one grid point. Degenerate states and Tsirelson breaches are
/// reported as errors for the caller to triage.
pub fn evaluate_point(grid: &ScanGrid, alpha: f64, omega: f64) -> Result<ScanRecord> {
    let state = make_cat_state(
        ComplexAmplitude::real(alpha)?,
        ComplexAmplitude::real(omega)?,
        grid.phi,
    )?;
    let eval = chsh_evaluation(&grid.settings, &state)?;
    if eval.chsh.value.abs() > TSIRELSON_BOUND + 1e-9 {
        return Err(Error::TsirelsonViolation {
            value: eval.chsh.value,
        });
    }
    let c = eval.components;
    Ok(ScanRecord {
        alpha,
        omega,
        e_zw: c.e_zw,
        e_zpw: c.e_zpw,
        e_zwp: c.e_zwp,
        e_zpwp: c.e_zpwp,
        chsh: eval.chsh.value,
        classification: eval.chsh.classification,
    })
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ScanOutcome {
    pub records: Vec<ScanRecord>,
    /// Grid points whose state is degenerate.
    pub skipped: Vec<(f64, f64)>,
}

/// Fold per-point results, in grid order, into an outcome. Degenerate points
/// are skipped; any other error aborts.
pub fn collect_outcome(
    results: impl IntoIterator<Item = ((f64, f64), Result<ScanRecord>)>,
) -> Result<ScanOutcome> {
    let mut out = ScanOutcome::default();
    for (point, r) in results {
        match r {
            Ok(rec) => out.records.push(rec),
            Err(Error::DegenerateState { .. }) => out.skipped.push(point),
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Sequential scan over the whole grid.
pub fn run_scan(grid: &ScanGrid) -> Result<ScanOutcome> {
    collect_outcome(
        grid.points()
            .map(|(a, o)| ((a, o), evaluate_point(grid, a, o))),
    )
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanSummary {
    pub max_abs_chsh: f64,
    pub argmax: (f64, f64),
    pub violating_fraction: f64,
    pub records: usize,
}

/// Largest `|chsh|` with ties going to the smallest `alpha`, then `omega`.
pub fn summarize(records: &[ScanRecord]) -> Result<ScanSummary> {
    let first = records.first().ok_or(Error::EmptyScan)?;
    let mut best = first;
    for r in &records[1..] {
        let (v, bv) = (r.chsh.abs(), best.chsh.abs());
        let smaller_point = (r.alpha, r.omega) < (best.alpha, best.omega);
        if v > bv || (v == bv && smaller_point) {
            best = r;
        }
    }
    let violating = records
        .iter()
        .filter(|r| r.classification == Classification::Violating)
        .count();
    Ok(ScanSummary {
        max_abs_chsh: best.chsh.abs(),
        argmax: (best.alpha, best.omega),
        violating_fraction: violating as f64 / records.len() as f64,
        records: records.len(),
    })
}
