//! Multi-start search for the largest `|<C>|`.
//!
//! The search vector has 13 coordinates: the real and imaginary parts of
//! `z, z', w, w'`, then `sigma`, `eta` and `phi`. Coordinates whose interval
//! is a single point are held fixed. Each restart runs a box-clamped
//! Nelder-Mead from one point of a shifted Halton sequence, so the whole
//! search is a deterministic function of the problem and its seed.

pub mod halton;
pub mod nelder_mead;

use alloc::vec::Vec;
use core::f64::consts::PI;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::amplitude::ComplexAmplitude;
use crate::analytic::{chsh, make_cat_state, CatStateParams, MeasurementSettings, TSIRELSON_BOUND};
use crate::error::{Error, Result};
use crate::fock::{oracle_chsh, required_cutoff};
use nelder_mead::{minimize, NelderMeadConfig};

pub const DIMS: usize = 13;
pub const MIN_BUDGET: usize = 100;
/// Largest analytic-versus-oracle disagreement a certified result may show.
pub const CERTIFICATION_TOLERANCE: f64 = 1e-7;
/// Smallest oracle cutoff used for certification.
pub const CERTIFICATION_CUTOFF: usize = 64;
/// Contraction radii cycled over restarts.
pub const START_SHELLS: [f64; 4] = [0.125, 0.25, 0.5, 1.0];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(Error::InvalidProblem("bounds must be finite"));
        }
        if lo > hi {
            return Err(Error::InvalidProblem(
                "interval lower bound above upper bound",
            ));
        }
        Ok(Self { lo, hi })
    }

    pub fn point(x: f64) -> Result<Self> {
        Self::new(x, x)
    }

    /// `[-r, r]`.
    pub fn symmetric(r: f64) -> Result<Self> {
        Self::new(-r.abs(), r.abs())
    }

    pub fn is_fixed(&self) -> bool {
        self.lo == self.hi
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StateBounds {
    pub sigma_re: Interval,
    pub sigma_im: Interval,
    pub eta_re: Interval,
    pub eta_im: Interval,
    pub phi: Interval,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StateSpace {
    Fixed(CatStateParams),
    Bounded(StateBounds),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OptimizationProblem {
    pub state: StateSpace,
    /// Re/im bounds of `z, z', w, w'` in that order.
    pub settings_bounds: [Interval; 8],
    pub budget: usize,
    pub restarts: usize,
    pub seed: u64,
}

impl OptimizationProblem {
    fn with_state(
        state: StateSpace,
        setting_bound: f64,
        budget: usize,
        restarts: usize,
        seed: u64,
    ) -> Result<Self> {
        let p = Self {
            state,
            settings_bounds: [Interval::symmetric(setting_bound)?; 8],
            budget,
            restarts,
            seed,
        };
        p.validate()?;
        Ok(p)
    }

    /// Settings free in `[-setting_bound, setting_bound]` per component, state fixed.
    pub fn fixed_state(
        state: CatStateParams,
        setting_bound: f64,
        budget: usize,
        restarts: usize,
        seed: u64,
    ) -> Result<Self> {
        Self::with_state(
            StateSpace::Fixed(state),
            setting_bound,
            budget,
            restarts,
            seed,
        )
    }

    /// Real `sigma = alpha`, `eta = omega` free in their intervals, `phi` fixed.
    pub fn real_state(
        alpha: Interval,
        omega: Interval,
        phi: f64,
        setting_bound: f64,
        budget: usize,
        restarts: usize,
        seed: u64,
    ) -> Result<Self> {
        let zero = Interval::point(0.0)?;
        let bounds = StateBounds {
            sigma_re: alpha,
            sigma_im: zero,
            eta_re: omega,
            eta_im: zero,
            phi: Interval::point(phi)?,
        };
        Self::with_state(
            StateSpace::Bounded(bounds),
            setting_bound,
            budget,
            restarts,
            seed,
        )
    }

    /// Complex `sigma`, `eta` free per component in `[-state_bound, state_bound]`
    /// and `phi` free in `[0, 2 pi]`.
    pub fn free_state(
        state_bound: f64,
        setting_bound: f64,
        budget: usize,
        restarts: usize,
        seed: u64,
    ) -> Result<Self> {
        let s = Interval::symmetric(state_bound)?;
        let bounds = StateBounds {
            sigma_re: s,
            sigma_im: s,
            eta_re: s,
            eta_im: s,
            phi: Interval::new(0.0, 2.0 * PI)?,
        };
        Self::with_state(
            StateSpace::Bounded(bounds),
            setting_bound,
            budget,
            restarts,
            seed,
        )
    }

    pub fn validate(&self) -> Result<()> {
        if self.budget < MIN_BUDGET {
            return Err(Error::InvalidProblem(
                "budget must be at least 100 evaluations",
            ));
        }
        if self.restarts == 0 {
            return Err(Error::InvalidProblem("at least one restart is required"));
        }
        for i in self.bounds() {
            Interval::new(i.lo, i.hi)?;
        }
        Ok(())
    }

    /// All 13 coordinate intervals.
    pub fn bounds(&self) -> [Interval; DIMS] {
        let mut b = [Interval { lo: 0.0, hi: 0.0 }; DIMS];
        b[..8].copy_from_slice(&self.settings_bounds);
        let state = match self.state {
            StateSpace::Fixed(s) => [
                s.sigma().re(),
                s.sigma().im(),
                s.eta().re(),
                s.eta().im(),
                s.phi(),
            ]
            .map(|x| Interval { lo: x, hi: x }),
            StateSpace::Bounded(sb) => [sb.sigma_re, sb.sigma_im, sb.eta_re, sb.eta_im, sb.phi],
        };
        b[8..].copy_from_slice(&state);
        b
    }

    fn free_dims(&self) -> Vec<usize> {
        let b = self.bounds();
        (0..DIMS).filter(|&d| !b[d].is_fixed()).collect()
    }

    /// Decode a search vector into settings and state.
    pub fn decode(&self, x: &[f64]) -> Result<(MeasurementSettings, CatStateParams)> {
        let a = |i: usize| ComplexAmplitude::new(x[i], x[i + 1]);
        let settings = MeasurementSettings::new(a(0)?, a(2)?, a(4)?, a(6)?);
        let state = match self.state {
            StateSpace::Fixed(s) => s,
            StateSpace::Bounded(_) => make_cat_state(a(8)?, a(10)?, x[12])?,
        };
        Ok((settings, state))
    }

    /// `|chsh|` at `x`, or `None` for a degenerate state.
    pub fn objective(&self, x: &[f64]) -> Result<Option<f64>> {
        let (settings, state) = match self.decode(x) {
            Ok(v) => v,
            Err(Error::DegenerateState { .. }) => return Ok(None),
            Err(e) => return Err(e),
        };
        Ok(Some(chsh(&settings, &state)?.value.abs()))
    }

    /// Start point of every restart.
    ///
    /// Each start is a Halton point with a seed-dependent Cranley-Patterson
    /// shift, contracted toward the box point nearest the origin by the
    /// radius `START_SHELLS[k % 4]`. The correlator's Gaussian terms vanish a
    /// few units away from the state amplitudes, so starts spread uniformly
    /// over a wide box mostly land on a flat region where `|<C>| = 2`.
    pub fn start_points(&self) -> Vec<[f64; DIMS]> {
        let bounds = self.bounds();
        let free = self.free_dims();
        let anchor = bounds.map(|i| 0.0f64.clamp(i.lo, i.hi));
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let shifts: Vec<f64> = free
            .iter()
            .map(|_| (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64)
            .collect();
        (0..self.restarts)
            .map(|k| {
                let radius = START_SHELLS[k % START_SHELLS.len()];
                let mut x = anchor;
                for (h, (&d, shift)) in free.iter().zip(&shifts).enumerate() {
                    let v = halton::halton(k as u64 + 1, h) + shift;
                    let u = if v >= 1.0 { v - 1.0 } else { v };
                    let full = bounds[d].lo + u * (bounds[d].hi - bounds[d].lo);
                    x[d] = anchor[d] + radius * (full - anchor[d]);
                }
                x
            })
            .collect()
    }

    /// Evaluations granted to restart `index`.
    pub fn restart_budget(&self, index: usize) -> usize {
        let base = self.budget / self.restarts;
        base + usize::from(index < self.budget % self.restarts)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RestartOutcome {
    pub index: usize,
    /// `None` when the start point is a degenerate state.
    pub start_value: Option<f64>,
    pub best_value: f64,
    pub best_x: [f64; DIMS],
    pub evaluations: usize,
    pub trace: Vec<(usize, f64)>,
}

/// Run restart `index` of `problem`.
pub fn run_restart(problem: &OptimizationProblem, index: usize) -> Result<RestartOutcome> {
    let start = problem.start_points()[index];
    let start_value = problem.objective(&start)?;
    if start_value.is_none() {
        return Ok(RestartOutcome {
            index,
            start_value: None,
            best_value: f64::NEG_INFINITY,
            best_x: start,
            evaluations: 1,
            trace: Vec::new(),
        });
    }

    let bounds = problem.bounds();
    let lower = bounds.map(|i| i.lo);
    let upper = bounds.map(|i| i.hi);
    let mut failure = None;
    let mut f = |x: &[f64]| match problem.objective(x) {
        Ok(Some(v)) => -v,
        Ok(None) => f64::INFINITY,
        Err(e) => {
            failure.get_or_insert(e);
            f64::INFINITY
        }
    };
    let min = minimize(
        &mut f,
        &start,
        &lower,
        &upper,
        problem.restart_budget(index),
        &NelderMeadConfig::default(),
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let mut best_x = start;
    best_x.copy_from_slice(&min.x);
    Ok(RestartOutcome {
        index,
        start_value,
        best_value: -min.value,
        best_x,
        evaluations: min.evaluations + 1,
        trace: min.trace.into_iter().map(|(i, v)| (i, -v)).collect(),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct OptimizationResult {
    pub best_value: f64,
    pub best_settings: MeasurementSettings,
    pub best_state: CatStateParams,
    pub evaluations_used: usize,
    /// `(evaluation index, incumbent value)`, non-decreasing in both.
    pub trace: Vec<(usize, f64)>,
    pub best_restart: usize,
    pub seed: u64,
}

/// Combine restart outcomes (in any order) into one result. The best value
/// wins, ties go to the lowest restart index.
pub fn merge_restarts(
    problem: &OptimizationProblem,
    mut outcomes: Vec<RestartOutcome>,
) -> Result<OptimizationResult> {
    outcomes.sort_by_key(|o| o.index);
    let mut best: Option<&RestartOutcome> = None;
    let mut trace = Vec::new();
    let mut offset = 0;
    let mut incumbent = f64::NEG_INFINITY;
    for o in &outcomes {
        if o.start_value.is_some() {
            for &(i, v) in &o.trace {
                if v > incumbent {
                    incumbent = v;
                    trace.push((offset + i, v));
                }
            }
            if best.is_none_or(|b| o.best_value > b.best_value) {
                best = Some(o);
            }
        }
        offset += o.evaluations;
    }
    let best = best.ok_or(Error::DegenerateRegion)?;
    if best.best_value > TSIRELSON_BOUND + 1e-9 {
        return Err(Error::TsirelsonViolation {
            value: best.best_value,
        });
    }
    let (best_settings, best_state) = problem.decode(&best.best_x)?;
    Ok(OptimizationResult {
        best_value: best.best_value,
        best_settings,
        best_state,
        evaluations_used: offset,
        trace,
        best_restart: best.index,
        seed: problem.seed,
    })
}

/// Sequential multi-start maximization of `|chsh|`.
pub fn maximize_violation(problem: &OptimizationProblem) -> Result<OptimizationResult> {
    problem.validate()?;
    let outcomes = (0..problem.restarts)
        .map(|k| run_restart(problem, k))
        .collect::<Result<Vec<_>>>()?;
    merge_restarts(problem, outcomes)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Certification {
    pub analytic: f64,
    pub oracle: f64,
    pub cutoff: usize,
}

/// Recompute a reported optimum from scratch with both the closed form and
/// the Fock oracle.
pub fn certify(
    settings: &MeasurementSettings,
    state: &CatStateParams,
    reported: f64,
) -> Result<Certification> {
    let state = make_cat_state(state.sigma(), state.eta(), state.phi())?;
    let analytic = chsh(settings, &state)?.value.abs();
    let magnitude = settings.max_magnitude().max(state.max_magnitude());
    let cutoff = required_cutoff(magnitude).max(CERTIFICATION_CUTOFF);
    let oracle = oracle_chsh(settings, &state, cutoff)?.chsh.value.abs();
    let agree = |a: f64, b: f64| (a - b).abs() <= CERTIFICATION_TOLERANCE;
    if !agree(analytic, oracle) || !agree(analytic, reported) {
        return Err(Error::CertificationFailed { analytic, oracle });
    }
    Ok(Certification {
        analytic,
        oracle,
        cutoff,
    })
}

pub fn certify_result(result: &OptimizationResult) -> Result<Certification> {
    certify(&result.best_settings, &result.best_state, result.best_value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vacuum() -> CatStateParams {
        make_cat_state(ComplexAmplitude::ZERO, ComplexAmplitude::ZERO, 0.0).unwrap()
    }

    #[test]
    fn problem_validation() {
        assert!(OptimizationProblem::fixed_state(vacuum(), 3.0, 99, 1, 0).is_err());
        assert!(OptimizationProblem::fixed_state(vacuum(), 3.0, 100, 0, 0).is_err());
        assert!(OptimizationProblem::fixed_state(vacuum(), f64::INFINITY, 100, 1, 0).is_err());
        assert!(Interval::new(1.0, 0.0).is_err());
    }

    #[test]
    fn starts_stay_in_box_and_depend_on_seed() {
        let a = Interval::new(0.3, 2.5).unwrap();
        let p = OptimizationProblem::real_state(a, a, PI, 3.0, 1000, 16, 7).unwrap();
        let starts = p.start_points();
        assert_eq!(starts.len(), 16);
        for x in &starts {
            for (v, b) in x.iter().zip(p.bounds()) {
                assert!(b.lo <= *v && *v <= b.hi);
            }
            assert_eq!(x[9], 0.0);
            assert_eq!(x[12], PI);
        }
        let q = OptimizationProblem { seed: 8, ..p };
        assert_ne!(q.start_points(), starts);
        assert_eq!(p.start_points(), starts);
    }

    #[test]
    fn restart_budgets_sum_to_total() {
        let p = OptimizationProblem::fixed_state(vacuum(), 3.0, 1003, 4, 0).unwrap();
        assert_eq!((0..4).map(|k| p.restart_budget(k)).sum::<usize>(), 1003);
    }

    #[test]
    fn vacuum_never_exceeds_two() {
        let p = OptimizationProblem::fixed_state(vacuum(), 3.0, 20_000, 8, 1).unwrap();
        let r = maximize_violation(&p).unwrap();
        assert!(r.best_value <= 2.0 + 1e-12);
        assert!((r.best_value - 2.0).abs() < 1e-6, "{}", r.best_value);
        assert!(r.evaluations_used <= 20_000 + 8);
    }

    #[test]
    fn deterministic_and_monotone() {
        let a = Interval::new(0.3, 2.5).unwrap();
        let p = OptimizationProblem::real_state(a, a, PI, 3.0, 4000, 4, 3).unwrap();
        let r1 = maximize_violation(&p).unwrap();
        let r2 = maximize_violation(&p).unwrap();
        assert_eq!(r1, r2);
        assert!(r1
            .trace
            .windows(2)
            .all(|w| w[0].0 < w[1].0 && w[0].1 <= w[1].1));
        assert_eq!(r1.trace.last().unwrap().1, r1.best_value);
    }

    #[test]
    fn best_at_least_every_start() {
        let a = Interval::new(0.3, 2.5).unwrap();
        let p = OptimizationProblem::real_state(a, a, PI, 3.0, 3000, 6, 11).unwrap();
        let r = maximize_violation(&p).unwrap();
        for x in p.start_points() {
            assert!(r.best_value >= p.objective(&x).unwrap().unwrap());
        }
    }

    #[test]
    fn merge_is_order_independent_and_ties_go_to_lowest_index() {
        let p = OptimizationProblem::fixed_state(vacuum(), 3.0, 1000, 3, 0).unwrap();
        let mk = |index, v: f64| RestartOutcome {
            index,
            start_value: Some(0.0),
            best_value: v,
            best_x: [0.5; DIMS],
            evaluations: 10,
            trace: alloc::vec![(1, 0.0), (5, v)],
        };
        let a = merge_restarts(&p, alloc::vec![mk(2, 1.5), mk(0, 1.0), mk(1, 1.5)]).unwrap();
        let b = merge_restarts(&p, alloc::vec![mk(0, 1.0), mk(1, 1.5), mk(2, 1.5)]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.best_restart, 1);
        assert_eq!(a.trace, [(1, 0.0), (5, 1.0), (15, 1.5)]);
    }

    #[test]
    fn all_degenerate_starts() {
        // sigma = eta = 0 and phi = pi everywhere
        let zero = Interval::point(0.0).unwrap();
        let bounds = StateBounds {
            sigma_re: zero,
            sigma_im: zero,
            eta_re: zero,
            eta_im: zero,
            phi: Interval::point(PI).unwrap(),
        };
        let p = OptimizationProblem {
            state: StateSpace::Bounded(bounds),
            settings_bounds: [Interval::symmetric(1.0).unwrap(); 8],
            budget: 200,
            restarts: 2,
            seed: 0,
        };
        assert_eq!(maximize_violation(&p), Err(Error::DegenerateRegion));
    }
}
