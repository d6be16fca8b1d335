//! Box-constrained Nelder-Mead minimization. Trial points are clamped onto
//! the box; there is no penalty term.

use alloc::vec;
use alloc::vec::Vec;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NelderMeadConfig {
    /// Stop once every vertex is within this max-norm distance of the best.
    pub diameter_tol: f64,
    /// Stop once the objective spread over the simplex falls below this.
    pub spread_tol: f64,
    /// Initial edge length as a fraction of each coordinate's box width.
    pub initial_step: f64,
    /// Upper bound on re-inflations of a converged simplex.
    pub max_passes: usize,
}

impl Default for NelderMeadConfig {
    fn default() -> Self {
        Self {
            diameter_tol: 1e-7,
            spread_tol: 1e-10,
            initial_step: 0.1,
            max_passes: 8,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    /// `(evaluation index, best value so far)` at every strict improvement.
    pub trace: Vec<(usize, f64)>,
}

struct Counted<'a, F> {
    f: &'a mut F,
    lower: &'a [f64],
    upper: &'a [f64],
    budget: usize,
    evaluations: usize,
    best_x: Vec<f64>,
    best: f64,
    trace: Vec<(usize, f64)>,
}

impl<F: FnMut(&[f64]) -> f64> Counted<'_, F> {
    fn clamp(&self, x: &mut [f64]) {
        for ((v, lo), hi) in x.iter_mut().zip(self.lower).zip(self.upper) {
            *v = v.clamp(*lo, *hi);
        }
    }

    /// `None` once the budget is spent.
    fn eval(&mut self, x: &mut [f64]) -> Option<f64> {
        if self.evaluations >= self.budget {
            return None;
        }
        self.clamp(x);
        let mut v = (self.f)(x);
        if v.is_nan() {
            v = f64::INFINITY;
        }
        self.evaluations += 1;
        if v < self.best {
            self.best = v;
            self.best_x.clear();
            self.best_x.extend_from_slice(x);
            self.trace.push((self.evaluations, v));
        }
        Some(v)
    }
}

/// Minimize `f` over the box `[lower, upper]` from `start`, using at most
/// `budget` evaluations. Coordinates with `lower == upper` stay fixed.
pub fn minimize<F: FnMut(&[f64]) -> f64>(
    f: &mut F,
    start: &[f64],
    lower: &[f64],
    upper: &[f64],
    budget: usize,
    config: &NelderMeadConfig,
) -> Minimum {
    assert!(start.len() == lower.len() && start.len() == upper.len());
    let mut c = Counted {
        f,
        lower,
        upper,
        budget,
        evaluations: 0,
        best_x: start.to_vec(),
        best: f64::INFINITY,
        trace: Vec::new(),
    };
    let free: Vec<usize> = (0..start.len()).filter(|&i| lower[i] < upper[i]).collect();

    let mut x0 = start.to_vec();
    if c.eval(&mut x0).is_some() && !free.is_empty() {
        let mut previous = c.best;
        for pass in 0..config.max_passes {
            let origin = c.best_x.clone();
            if !run_simplex(&mut c, &origin, &free, config) {
                break;
            }
            if pass > 0 && c.best >= previous - 1e-12 {
                break;
            }
            previous = c.best;
        }
    }

    Minimum {
        x: c.best_x,
        value: c.best,
        evaluations: c.evaluations,
        trace: c.trace,
    }
}

/// One Nelder-Mead run from `origin` over the `free` coordinates. Returns
/// `false` if the budget ran out.
fn run_simplex<F: FnMut(&[f64]) -> f64>(
    c: &mut Counted<'_, F>,
    origin: &[f64],
    free: &[usize],
    config: &NelderMeadConfig,
) -> bool {
    let n = free.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let mut x = origin.to_vec();
    let Some(v) = c.eval(&mut x) else {
        return false;
    };
    simplex.push((x, v));
    for &d in free {
        let mut x = origin.to_vec();
        let width = c.upper[d] - c.lower[d];
        let step = config.initial_step * width;
        x[d] = if x[d] + step <= c.upper[d] {
            x[d] + step
        } else {
            x[d] - step
        };
        let Some(v) = c.eval(&mut x) else {
            return false;
        };
        simplex.push((x, v));
    }

    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best_v = simplex[0].1;
        let worst_v = simplex[n].1;
        let diameter = simplex[1..]
            .iter()
            .map(|(x, _)| {
                free.iter()
                    .map(|&d| (x[d] - simplex[0].0[d]).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        let spread = worst_v - best_v;
        if diameter < config.diameter_tol || (spread.is_finite() && spread < config.spread_tol) {
            return true;
        }

        let mut centroid = vec![0.0; origin.len()];
        for (x, _) in &simplex[..n] {
            for (cd, xd) in centroid.iter_mut().zip(x) {
                *cd += xd / n as f64;
            }
        }
        let toward = |coef: f64, from: &[f64]| -> Vec<f64> {
            centroid
                .iter()
                .zip(from)
                .map(|(cd, fd)| cd + coef * (cd - fd))
                .collect()
        };

        let worst = simplex[n].0.clone();
        let mut xr = toward(1.0, &worst);
        let Some(fr) = c.eval(&mut xr) else {
            return false;
        };

        if fr < best_v {
            let mut xe = toward(2.0, &worst);
            let Some(fe) = c.eval(&mut xe) else {
                return false;
            };
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
            continue;
        }

        let (mut xc, accept_below) = if fr < worst_v {
            (toward(0.5, &worst), fr)
        } else {
            (toward(-0.5, &worst), worst_v)
        };
        let Some(fc) = c.eval(&mut xc) else {
            return false;
        };
        if fc < accept_below || (fr < worst_v && fc <= fr) {
            simplex[n] = (xc, fc);
            continue;
        }

        let best_x = simplex[0].0.clone();
        for vertex in simplex[1..].iter_mut() {
            let mut xs: Vec<f64> = best_x
                .iter()
                .zip(&vertex.0)
                .map(|(b, v)| b + 0.5 * (v - b))
                .collect();
            let Some(fs) = c.eval(&mut xs) else {
                return false;
            };
            *vertex = (xs, fs);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_quadratic_minimum() {
        let mut f = |x: &[f64]| (x[0] - 1.0).powi(2) + 3.0 * (x[1] + 0.5).powi(2);
        let m = minimize(
            &mut f,
            &[0.0, 0.0],
            &[-2.0, -2.0],
            &[2.0, 2.0],
            5000,
            &NelderMeadConfig::default(),
        );
        assert!(
            (m.x[0] - 1.0).abs() < 1e-4 && (m.x[1] + 0.5).abs() < 1e-4,
            "{:?}",
            m.x
        );
        assert!(m.value < 1e-9);
    }

    #[test]
    fn rosenbrock() {
        let mut f = |x: &[f64]| 100.0 * (x[1] - x[0] * x[0]).powi(2) + (1.0 - x[0]).powi(2);
        let m = minimize(
            &mut f,
            &[-1.2, 1.0],
            &[-3.0, -3.0],
            &[3.0, 3.0],
            20_000,
            &NelderMeadConfig::default(),
        );
        assert!(m.value < 1e-10, "{}", m.value);
    }

    #[test]
    fn clamps_to_box() {
        let mut f = |x: &[f64]| x[0];
        let m = minimize(
            &mut f,
            &[0.5],
            &[0.25],
            &[1.0],
            500,
            &NelderMeadConfig::default(),
        );
        assert_eq!(m.x[0], 0.25);
    }

    #[test]
    fn fixed_coordinates_untouched() {
        let mut f = |x: &[f64]| (x[0] - 0.3).powi(2) + x[1];
        let m = minimize(
            &mut f,
            &[0.0, 7.0],
            &[-1.0, 7.0],
            &[1.0, 7.0],
            1000,
            &NelderMeadConfig::default(),
        );
        assert_eq!(m.x[1], 7.0);
        assert!((m.x[0] - 0.3).abs() < 1e-4);
    }

    #[test]
    fn respects_budget_and_trace_is_monotone() {
        let mut f = |x: &[f64]| (x[0] - 0.1).powi(2) + (x[1] - 0.2).powi(2) + (x[2] + 0.3).powi(2);
        let m = minimize(
            &mut f,
            &[1.0, 1.0, 1.0],
            &[-2.0; 3],
            &[2.0; 3],
            37,
            &NelderMeadConfig::default(),
        );
        assert_eq!(m.evaluations, 37);
        assert!(m
            .trace
            .windows(2)
            .all(|w| w[1].1 < w[0].1 && w[1].0 > w[0].0));
    }

    #[test]
    fn infinite_regions_are_avoided() {
        let mut f = |x: &[f64]| {
            if x[0] < 0.0 {
                f64::INFINITY
            } else {
                (x[0] - 0.5).powi(2)
            }
        };
        let m = minimize(
            &mut f,
            &[0.9],
            &[-1.0],
            &[1.0],
            2000,
            &NelderMeadConfig::default(),
        );
        assert!((m.x[0] - 0.5).abs() < 1e-4);
    }
}
