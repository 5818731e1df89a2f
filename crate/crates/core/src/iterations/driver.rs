use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::metrics::{RootReport, RunReport, Tally};
use crate::target::{RootTarget, VALUE_COST};
use crate::Complex;

use super::{
    newton_correction, simultaneous_correction, Correction, Method, StoppingCriterion, UpdateOrder,
};

/// Relative size of the escape perturbation applied on measure-zero traps.
pub const PERTURBATION: f64 = 1e-6;
/// Retries per root per sweep before an error is surfaced.
pub const RETRY_BUDGET: u32 = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub method: Method,
    pub order: UpdateOrder,
    /// Frozen tame roots for implicit deflation; empty means no deflation.
    pub tame: Vec<Complex>,
    /// Use the scaled form of the deflated Newton ratio.
    pub scaled: bool,
    pub seed: u64,
    pub retry_budget: u32,
    /// Evaluate Jacobi sweeps on the rayon pool.
    pub parallel: bool,
}

impl RunOptions {
    pub fn new(method: Method) -> Self {
        RunOptions {
            method,
            order: UpdateOrder::Jacobi,
            tame: Vec::new(),
            scaled: true,
            seed: 0,
            retry_budget: RETRY_BUDGET,
            parallel: false,
        }
    }

    pub fn with_tame(mut self, tame: Vec<Complex>) -> Self {
        self.tame = tame;
        self
    }

    pub fn with_order(mut self, order: UpdateOrder) -> Self {
        self.order = order;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RootStatus {
    Active,
    Converged,
    Failed(Error),
}

/// Mutable state of a run; converged and failed roots are frozen.
#[derive(Debug, Clone)]
pub struct IterationState {
    pub approximations: Vec<Complex>,
    pub status: Vec<RootStatus>,
    pub residuals: Vec<f64>,
    pub history: Vec<Vec<f64>>,
    pub iterations: Vec<usize>,
    pub tally: Tally,
    pub step_evaluations: u64,
    pub warnings: Vec<String>,
}

impl IterationState {
    pub fn new(init: &[Complex]) -> Self {
        let m = init.len();
        IterationState {
            approximations: init.to_vec(),
            status: vec![RootStatus::Active; m],
            residuals: vec![f64::INFINITY; m],
            history: vec![Vec::new(); m],
            iterations: vec![0; m],
            tally: Tally::default(),
            step_evaluations: 0,
            warnings: Vec::new(),
        }
    }

    pub fn eval_count(&self) -> u64 {
        self.tally.evaluations
    }

    fn active(&self) -> Vec<usize> {
        (0..self.approximations.len())
            .filter(|&i| self.status[i] == RootStatus::Active)
            .collect()
    }

    fn apply(&mut self, i: usize, c: Correction, cost: Tally, stop: &StoppingCriterion) {
        self.tally += cost;
        self.residuals[i] = c.residual;
        if c.residual <= stop.residual_tol {
            self.status[i] = RootStatus::Converged;
            return;
        }
        let z = self.approximations[i] - c.delta;
        let step = c.delta.norm();
        self.approximations[i] = z;
        self.history[i].push(step);
        self.iterations[i] += 1;
        self.step_evaluations += cost.evaluations;
        if step == 0.0 || step <= stop.step_tol * (1.0 + z.norm()) {
            self.status[i] = RootStatus::Converged;
        }
    }
}

fn perturbable(e: &Error) -> bool {
    matches!(
        e,
        Error::DerivativeZero
            | Error::CoincidentNodes { .. }
            | Error::ZeroDenominator { .. }
            | Error::TameCollision { .. }
            | Error::AtOrigin
    )
}

struct Runner<'a, T: RootTarget + ?Sized> {
    target: &'a T,
    opts: &'a RunOptions,
}

impl<T: RootTarget + ?Sized> Runner<'_, T> {
    fn correction(&self, i: usize, nodes: &[Complex]) -> (Result<Correction>, Tally) {
        let mut tally = Tally::default();
        let result = match self.opts.method {
            Method::Newton => newton_correction(
                self.target,
                nodes[i],
                &self.opts.tame,
                self.opts.scaled,
                &mut tally,
            ),
            m => simultaneous_correction(m, self.target, i, nodes, &self.opts.tame, &mut tally),
        };
        (result, tally)
    }

    /// Retries a failed correction from perturbed positions. `nodes[i]` is
    /// overwritten with each perturbed position.
    fn retry(
        &self,
        i: usize,
        nodes: &mut [Complex],
        first: Error,
        rng: &mut ChaCha8Rng,
        state: &mut IterationState,
        sweep: usize,
    ) -> Result<Correction> {
        let mut err = first;
        for _ in 0..self.opts.retry_budget {
            if !perturbable(&err) {
                break;
            }
            let z = nodes[i];
            let angle = rng.gen::<f64>() * std::f64::consts::TAU;
            nodes[i] = z + Complex::from_polar(PERTURBATION * (1.0 + z.norm()), angle);
            state.approximations[i] = nodes[i];
            state
                .warnings
                .push(format!("root {i}: perturbed at sweep {sweep} after: {err}"));
            let (result, cost) = self.correction(i, nodes);
            state.tally += cost;
            match result {
                Ok(c) => return Ok(c),
                Err(e) => err = e,
            }
        }
        Err(err)
    }

    #[allow(clippy::too_many_arguments)]
    fn settle(
        &self,
        i: usize,
        result: Result<Correction>,
        cost: Tally,
        base: &[Complex],
        rng: &mut ChaCha8Rng,
        state: &mut IterationState,
        stop: &StoppingCriterion,
        sweep: usize,
    ) {
        let err = match result {
            Ok(c) => return state.apply(i, c, cost, stop),
            Err(e) => e,
        };
        state.tally += cost;
        let mut nodes = base.to_vec();
        match self.retry(i, &mut nodes, err, rng, state, sweep) {
            Ok(c) => state.apply(i, c, Tally::default(), stop),
            Err(e) => {
                state
                    .warnings
                    .push(format!("root {i}: failed at sweep {sweep}: {e}"));
                state.status[i] = RootStatus::Failed(e);
            }
        }
    }

    fn sweep(
        &self,
        state: &mut IterationState,
        rng: &mut ChaCha8Rng,
        stop: &StoppingCriterion,
        sweep: usize,
    ) {
        let active = state.active();
        let gauss_seidel =
            self.opts.order == UpdateOrder::GaussSeidel && self.opts.method.is_simultaneous();
        if gauss_seidel {
            for i in active {
                let (result, cost) = self.correction(i, &state.approximations);
                let base = if result.is_err() {
                    state.approximations.clone()
                } else {
                    Vec::new()
                };
                self.settle(i, result, cost, &base, rng, state, stop, sweep);
            }
            return;
        }

        let snapshot = state.approximations.clone();
        let results: Vec<(usize, (Result<Correction>, Tally))> = if self.opts.parallel {
            active
                .par_iter()
                .map(|&i| (i, self.correction(i, &snapshot)))
                .collect()
        } else {
            active
                .iter()
                .map(|&i| (i, self.correction(i, &snapshot)))
                .collect()
        };
        // Retries and state updates happen in index order, so the outcome does
        // not depend on how the corrections were scheduled.
        for (i, (result, cost)) in results {
            self.settle(i, result, cost, &snapshot, rng, state, stop, sweep);
        }
    }
}

/// Iterates `method` on `target` from `init` until every root converges,
/// fails, or `max_iters` sweeps have run.
///
/// Simultaneous methods need `init.len() + tame.len() == degree`. Newton runs
/// each starting point independently.
pub fn run<T: RootTarget + ?Sized>(
    target: &T,
    init: &[Complex],
    stop: &StoppingCriterion,
    opts: &RunOptions,
) -> Result<RunReport> {
    if stop.max_iters == 0 {
        return Err(Error::Precondition("max_iters must be at least 1".into()));
    }
    if init.is_empty() {
        return Err(Error::Precondition("no initial approximations".into()));
    }
    if opts.tame.len() >= target.degree() {
        return Err(Error::Precondition(format!(
            "{} tame roots leave no wild root for degree {}",
            opts.tame.len(),
            target.degree()
        )));
    }
    if opts.method.is_simultaneous() && init.len() + opts.tame.len() != target.degree() {
        return Err(Error::Precondition(format!(
            "{} approximations and {} tame roots do not match degree {}",
            init.len(),
            opts.tame.len(),
            target.degree()
        )));
    }

    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut state = IterationState::new(init);
    let runner = Runner { target, opts };
    let mut sweeps = 0;
    while sweeps < stop.max_iters && state.status.contains(&RootStatus::Active) {
        runner.sweep(&mut state, &mut rng, stop, sweeps);
        sweeps += 1;
    }

    let mut roots = Vec::with_capacity(init.len());
    for i in 0..init.len() {
        let z = state.approximations[i];
        let (residual, error) = match &state.status[i] {
            RootStatus::Failed(e) => (state.residuals[i], Some(e.to_string())),
            _ => match target.sample(z) {
                Ok(s) => {
                    state.tally.evaluations += VALUE_COST;
                    (s.residual, None)
                }
                Err(e) => (f64::INFINITY, Some(e.to_string())),
            },
        };
        roots.push(RootReport {
            approximation: z,
            residual,
            iterations: state.iterations[i],
            converged: state.status[i] == RootStatus::Converged && error.is_none(),
            steps: std::mem::take(&mut state.history[i]),
            order_estimate: None,
            error,
        });
    }

    let mut report = RunReport {
        roots,
        evaluations: state.tally.evaluations,
        step_evaluations: state.step_evaluations,
        divisions: state.tally.divisions,
        sweeps,
        alpha: None,
        order: None,
        efficiency: None,
        warnings: state.warnings,
        wall_time: started.elapsed(),
    };
    report.summarize(opts.method.is_simultaneous());
    Ok(report)
}
