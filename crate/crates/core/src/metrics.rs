//! Convergence-order estimation and Ostrowski efficiency.

use std::time::Duration;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::Complex;

/// Work counters accumulated by the correction kernels.
///
/// `evaluations` uses unit costs: one per polynomial value, two for a value
/// with its derivative, one per node sum or node product.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub evaluations: u64,
    pub divisions: u64,
}

impl std::ops::AddAssign for Tally {
    fn add_assign(&mut self, rhs: Tally) {
        self.evaluations += rhs.evaluations;
        self.divisions += rhs.divisions;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootReport {
    /// Final approximation in the iteration variable.
    pub approximation: Complex,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
    /// `|dz|` of every applied step, in order.
    pub steps: Vec<f64>,
    pub order_estimate: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub roots: Vec<RootReport>,
    /// All unit-cost evaluations, including final residual checks.
    pub evaluations: u64,
    /// Evaluations spent in steps that moved an approximation.
    pub step_evaluations: u64,
    pub divisions: u64,
    pub sweeps: usize,
    /// Evaluations per applied step per root.
    pub alpha: Option<f64>,
    /// Median of the per-root order estimates.
    pub order: Option<f64>,
    pub efficiency: Option<f64>,
    pub warnings: Vec<String>,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl RunReport {
    pub fn all_converged(&self) -> bool {
        self.roots.iter().all(|r| r.converged)
    }

    /// `max_i |dz_i|` over the k-th applied step of every root.
    pub fn sweep_max_steps(&self) -> Vec<f64> {
        let len = self.roots.iter().map(|r| r.steps.len()).max().unwrap_or(0);
        (0..len)
            .map(|k| {
                self.roots
                    .iter()
                    .filter_map(|r| r.steps.get(k))
                    .fold(0.0, |m, &e| f64::max(m, e))
            })
            .collect()
    }

    pub fn approximations(&self) -> Vec<Complex> {
        self.roots.iter().map(|r| r.approximation).collect()
    }

    /// Concatenates the roots of several runs. Per-root estimates are kept;
    /// counters add up and the run-level figures are recomputed.
    pub fn combine(parts: Vec<RunReport>) -> RunReport {
        let mut out = RunReport {
            roots: Vec::new(),
            evaluations: 0,
            step_evaluations: 0,
            divisions: 0,
            sweeps: 0,
            alpha: None,
            order: None,
            efficiency: None,
            warnings: Vec::new(),
            wall_time: Duration::ZERO,
        };
        for part in parts {
            out.roots.extend(part.roots);
            out.evaluations += part.evaluations;
            out.step_evaluations += part.step_evaluations;
            out.divisions += part.divisions;
            out.sweeps += part.sweeps;
            out.warnings.extend(part.warnings);
            out.wall_time += part.wall_time;
        }
        out.fill_totals();
        out
    }

    /// Fills `order`, `alpha` and `efficiency` from the per-root data.
    ///
    /// With `coupled` set, every root is estimated from [`Self::sweep_max_steps`]
    /// truncated at its own last step.
    pub fn summarize(&mut self, coupled: bool) {
        let sweep_max = if coupled {
            self.sweep_max_steps()
        } else {
            Vec::new()
        };
        for root in &mut self.roots {
            let floor = ROUNDING_FLOOR * (1.0 + root.approximation.norm());
            let source = if coupled {
                &sweep_max[..root.steps.len()]
            } else {
                &root.steps[..]
            };
            let informative: Vec<f64> = source.iter().copied().filter(|&e| e > floor).collect();
            root.order_estimate = estimate_order(&informative).ok();
        }
        self.fill_totals();
    }

    fn fill_totals(&mut self) {
        let applied: usize = self.roots.iter().map(|r| r.iterations).sum();
        self.alpha = (applied > 0).then(|| self.step_evaluations as f64 / applied as f64);
        let estimates: Vec<f64> = self.roots.iter().filter_map(|r| r.order_estimate).collect();
        self.order = median(&estimates);
        self.efficiency = match (self.order, self.alpha) {
            (Some(q), Some(a)) => efficiency(q, a).ok(),
            _ => None,
        };
    }
}

/// Ostrowski's efficiency index `q^(1/alpha)`.
pub fn efficiency(q: f64, alpha: f64) -> Result<f64> {
    if !q.is_finite() || q < 1.0 {
        return Err(Error::Precondition(format!("order must be >= 1, got {q}")));
    }
    if !alpha.is_finite() || alpha <= 0.0 {
        return Err(Error::Precondition(format!(
            "alpha must be > 0, got {alpha}"
        )));
    }
    Ok(q.powf(1.0 / alpha))
}

/// Steps below `ROUNDING_FLOOR * (1 + |z|)` are rounding noise, not convergence data.
pub const ROUNDING_FLOOR: f64 = 1e3 * f64::EPSILON;

/// Minimum number of step magnitudes in the tail (two ratio samples).
pub const MIN_TAIL: usize = 4;
/// Longest tail considered; earlier steps are pre-asymptotic.
pub const MAX_TAIL: usize = 6;
/// Steps that shrink by less than this factor belong to the linear phase.
pub const MAX_CONTRACTION: f64 = 0.5;

/// Estimates the convergence order from step magnitudes `e_k`.
///
/// Non-decreasing trailing entries (steps at the rounding floor) and zero
/// steps are dropped. The tail is the last strictly decreasing run, capped at
/// [`MAX_TAIL`] entries, and the estimate is the median over it of
/// `log(e_{k+1}/e_k) / log(e_k/e_{k-1})`.
pub fn estimate_order(steps: &[f64]) -> Result<f64> {
    let usable: Vec<f64> = steps
        .iter()
        .copied()
        .filter(|e| *e > 0.0 && e.is_finite())
        .collect();
    if usable.len() < MIN_TAIL {
        return Err(Error::InsufficientData(format!(
            "{} usable steps, need {MIN_TAIL}",
            usable.len()
        )));
    }

    let mut end = usable.len();
    while end >= 2 && usable[end - 1] >= usable[end - 2] {
        end -= 1;
    }
    if end < 2 {
        return Err(Error::Stagnation);
    }
    let mut start = end - 1;
    while start > 0
        && usable[start] <= MAX_CONTRACTION * usable[start - 1]
        && end - start < MAX_TAIL
    {
        start -= 1;
    }
    let tail = &usable[start..end];
    if tail.len() < MIN_TAIL {
        return Err(Error::InsufficientData(format!(
            "decreasing tail has {} entries, need {MIN_TAIL}",
            tail.len()
        )));
    }
    let ratios: Vec<f64> = tail
        .windows(3)
        .map(|w| (w[2] / w[1]).ln() / (w[1] / w[0]).ln())
        .collect();
    median(&ratios).ok_or(Error::Stagnation)
}

pub(crate) fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    Some(if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    })
}
