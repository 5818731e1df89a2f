//! Newton, Weierstrass (Durand–Kerner) and Ehrlich (Aberth) iterations.
//!
//! Each iteration is expressed as a per-root *correction kernel* that reads a
//! node snapshot and returns the amount to subtract from the approximation.
//! The same kernels serve the plain iterations, the implicitly deflated ones
//! (extra frozen nodes, see [`crate::deflation`]) and the mapped ones (a
//! different [`RootTarget`], see [`crate::maps`]).

mod driver;
mod secular;

pub use driver::{run, IterationState, RootStatus, RunOptions};
pub use secular::{secular_eval, secular_from_nodes, SecularForm};

use serde::{Deserialize, Serialize};

use crate::error::{finite, Error, Result};
use crate::metrics::Tally;
use crate::poly::Polynomial;
use crate::target::{RootTarget, NODE_SUM_COST, VALUE_AND_DERIVATIVE_COST, VALUE_COST};
use crate::Complex;

const ZERO: Complex = Complex::new(0.0, 0.0);

/// Relative factor on machine epsilon for the deflated-ratio cancellation guard.
pub const CANCELLATION_FACTOR: f64 = 1e3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Newton,
    Weierstrass,
    Ehrlich,
}

impl Method {
    /// Simultaneous methods update all `d` (or all wild) approximations together.
    pub fn is_simultaneous(self) -> bool {
        !matches!(self, Method::Newton)
    }
}

/// Jacobi reads a snapshot taken at the start of a sweep; Gauss–Seidel reuses
/// approximations already updated within the sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UpdateOrder {
    #[default]
    Jacobi,
    GaussSeidel,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StoppingCriterion {
    /// Bound on `|p(z)|`.
    pub residual_tol: f64,
    /// Relative bound on `|dz|`, compared against `step_tol * (1 + |z|)`. Zero disables it.
    pub step_tol: f64,
    pub max_iters: usize,
}

impl StoppingCriterion {
    pub fn new(residual_tol: f64, step_tol: f64, max_iters: usize) -> Result<Self> {
        if !residual_tol.is_finite() || residual_tol <= 0.0 {
            return Err(Error::Precondition(
                "residual tolerance must be positive".into(),
            ));
        }
        if !step_tol.is_finite() || step_tol < 0.0 {
            return Err(Error::Precondition(
                "step tolerance must be non-negative".into(),
            ));
        }
        if max_iters == 0 {
            return Err(Error::Precondition("max_iters must be at least 1".into()));
        }
        Ok(StoppingCriterion {
            residual_tol,
            step_tol,
            max_iters,
        })
    }
}

impl Default for StoppingCriterion {
    fn default() -> Self {
        StoppingCriterion {
            residual_tol: 1e-12,
            step_tol: 0.0,
            max_iters: 500,
        }
    }
}

/// Output of a correction kernel: the new approximation is `z - delta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Correction {
    pub delta: Complex,
    /// Residual at the *input* point.
    pub residual: f64,
}

pub(crate) fn collide(a: Complex, b: Complex) -> bool {
    (a - b).norm() <= f64::EPSILON * (a.norm() + b.norm())
}

/// Newton correction `N_q(z)` for `q = p / prod (x - tame_k)`.
///
/// With an empty tame set this is `1 / r` for `r = p'(z)/p(z)`, the plain
/// Newton ratio. Otherwise `r - s` with `s = sum 1/(z - tame_k)` is the
/// logarithmic derivative of the implicit quotient.
pub(crate) fn newton_correction<T: RootTarget + ?Sized>(
    target: &T,
    z: Complex,
    tame: &[Complex],
    scaled: bool,
    tally: &mut Tally,
) -> Result<Correction> {
    let sample = target.sample_with_log_derivative(z)?;
    tally.evaluations += VALUE_AND_DERIVATIVE_COST;
    let Some(r) = sample.log_derivative else {
        return Ok(Correction {
            delta: ZERO,
            residual: sample.residual,
        });
    };
    if tame.is_empty() {
        if r == ZERO {
            return Err(Error::DerivativeZero);
        }
        return Ok(Correction {
            delta: finite(Complex::new(1.0, 0.0) / r)?,
            residual: sample.residual,
        });
    }

    let mut s = ZERO;
    for (k, &t) in tame.iter().enumerate() {
        if collide(z, t) {
            return Err(Error::TameCollision { index: k });
        }
        s += Complex::new(1.0, 0.0) / (z - t);
    }
    tally.evaluations += NODE_SUM_COST;
    tally.divisions += tame.len() as u64;

    let diff = r - s;
    if diff == ZERO {
        return Err(Error::DerivativeZero);
    }
    if diff.norm() < CANCELLATION_FACTOR * f64::EPSILON * (r.norm() + s.norm()) {
        return Err(Error::Cancellation);
    }
    let one = Complex::new(1.0, 0.0);
    let delta = if scaled && r != ZERO {
        (one / r) / (one - s / r)
    } else {
        one / diff
    };
    Ok(Correction {
        delta: finite(delta)?,
        residual: sample.residual,
    })
}

/// Index in the combined node list (wild first, then tame) of the first node
/// coinciding with `nodes[i]`.
fn check_distinct(i: usize, nodes: &[Complex], tame: &[Complex]) -> Result<()> {
    let zi = nodes[i];
    for (j, &zj) in nodes.iter().enumerate() {
        if j != i && collide(zi, zj) {
            return Err(Error::CoincidentNodes {
                first: i.min(j),
                second: i.max(j),
            });
        }
    }
    for (k, &t) in tame.iter().enumerate() {
        if collide(zi, t) {
            return Err(Error::CoincidentNodes {
                first: i,
                second: nodes.len() + k,
            });
        }
    }
    Ok(())
}

/// Nodes other than `nodes[i]` in a fixed value order, so that a correction
/// does not depend on how the approximations are indexed.
fn canonical_others(i: usize, nodes: &[Complex]) -> Vec<Complex> {
    let mut others: Vec<Complex> = nodes
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(_, &z)| z)
        .collect();
    others.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    others
}

/// Weierstrass correction `f(z_i) / (lead * prod_{j != i} (z_i - z_j))` over
/// the wild nodes and the frozen tame nodes.
pub(crate) fn weierstrass_correction<T: RootTarget + ?Sized>(
    target: &T,
    i: usize,
    nodes: &[Complex],
    tame: &[Complex],
    tally: &mut Tally,
) -> Result<Correction> {
    check_distinct(i, nodes, tame)?;
    let zi = nodes[i];
    let sample = target.sample(zi)?;
    tally.evaluations += VALUE_COST;
    if sample.value == ZERO {
        return Ok(Correction {
            delta: ZERO,
            residual: sample.residual,
        });
    }
    let mut denom = target.leading();
    for zj in canonical_others(i, nodes) {
        denom *= zi - zj;
    }
    for &t in tame {
        denom *= zi - t;
    }
    tally.evaluations += NODE_SUM_COST;
    if denom == ZERO {
        return Err(Error::ZeroDenominator { index: i });
    }
    Ok(Correction {
        delta: finite(sample.value / denom)?,
        residual: sample.residual,
    })
}

/// Ehrlich correction `E_i` with `1/E_i = f'(z_i)/f(z_i) - sum_{j != i} 1/(z_i - z_j)`,
/// the sum running over the other wild nodes and all tame nodes.
pub(crate) fn ehrlich_correction<T: RootTarget + ?Sized>(
    target: &T,
    i: usize,
    nodes: &[Complex],
    tame: &[Complex],
    tally: &mut Tally,
) -> Result<Correction> {
    check_distinct(i, nodes, tame)?;
    let zi = nodes[i];
    let sample = target.sample_with_log_derivative(zi)?;
    tally.evaluations += VALUE_AND_DERIVATIVE_COST;
    let Some(r) = sample.log_derivative else {
        return Ok(Correction {
            delta: ZERO,
            residual: sample.residual,
        });
    };
    let one = Complex::new(1.0, 0.0);
    let mut s = ZERO;
    for zj in canonical_others(i, nodes) {
        s += one / (zi - zj);
    }
    for &t in tame {
        s += one / (zi - t);
    }
    tally.evaluations += NODE_SUM_COST;
    tally.divisions += (nodes.len() - 1 + tame.len()) as u64;
    let inv = r - s;
    if inv == ZERO {
        return Err(Error::ZeroDenominator { index: i });
    }
    Ok(Correction {
        delta: finite(one / inv)?,
        residual: sample.residual,
    })
}

pub(crate) fn simultaneous_correction<T: RootTarget + ?Sized>(
    method: Method,
    target: &T,
    i: usize,
    nodes: &[Complex],
    tame: &[Complex],
    tally: &mut Tally,
) -> Result<Correction> {
    match method {
        Method::Weierstrass => weierstrass_correction(target, i, nodes, tame, tally),
        Method::Ehrlich => ehrlich_correction(target, i, nodes, tame, tally),
        Method::Newton => newton_correction(target, nodes[i], tame, true, tally),
    }
}

/// One sweep of a simultaneous method over `zs` with frozen `tame` nodes.
///
/// Jacobi mode computes every correction from the input snapshot; Gauss–Seidel
/// mode feeds each updated approximation into the following corrections.
pub fn simultaneous_sweep<T: RootTarget + ?Sized>(
    target: &T,
    method: Method,
    zs: &[Complex],
    tame: &[Complex],
    order: UpdateOrder,
) -> Result<Vec<Complex>> {
    if method.is_simultaneous() && zs.len() + tame.len() != target.degree() {
        return Err(Error::Precondition(format!(
            "{} approximations and {} tame roots do not match degree {}",
            zs.len(),
            tame.len(),
            target.degree()
        )));
    }
    let mut tally = Tally::default();
    match order {
        UpdateOrder::Jacobi => zs
            .iter()
            .enumerate()
            .map(|(i, &z)| {
                simultaneous_correction(method, target, i, zs, tame, &mut tally)
                    .map(|c| z - c.delta)
            })
            .collect(),
        UpdateOrder::GaussSeidel => {
            let mut out = zs.to_vec();
            for i in 0..out.len() {
                let c = simultaneous_correction(method, target, i, &out, tame, &mut tally)?;
                out[i] -= c.delta;
            }
            Ok(out)
        }
    }
}

/// `z - p(z)/p'(z)`; an exact root is returned unchanged.
pub fn newton_step(p: &Polynomial, z: Complex) -> Result<Complex> {
    let c = newton_correction(p, z, &[], true, &mut Tally::default())?;
    Ok(z - c.delta)
}

/// One Jacobi sweep of the Weierstrass (Durand–Kerner) iteration.
pub fn weierstrass_step(p: &Polynomial, zs: &[Complex]) -> Result<Vec<Complex>> {
    simultaneous_sweep(p, Method::Weierstrass, zs, &[], UpdateOrder::Jacobi)
}

/// One Jacobi sweep of the Ehrlich (Aberth) iteration.
pub fn ehrlich_step(p: &Polynomial, zs: &[Complex]) -> Result<Vec<Complex>> {
    simultaneous_sweep(p, Method::Ehrlich, zs, &[], UpdateOrder::Jacobi)
}

/// `count` points `center + radius * exp(2 pi i (j + 1/2) / count)`.
///
/// The half-step offset keeps every point off the real axis through `center`.
pub fn circle_init(count: usize, center: Complex, radius: f64) -> Result<Vec<Complex>> {
    if count == 0 {
        return Err(Error::Precondition("count must be at least 1".into()));
    }
    if !radius.is_finite() || radius <= 0.0 {
        return Err(Error::Precondition("radius must be positive".into()));
    }
    Ok((0..count)
        .map(|j| {
            let angle = std::f64::consts::TAU * (j as f64 + 0.5) / count as f64;
            center + Complex::from_polar(radius, angle)
        })
        .collect())
}
