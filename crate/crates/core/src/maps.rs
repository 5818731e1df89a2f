//! Variable maps that re-pose root-finding without expanding the mapped polynomial.
//!
//! * Möbius: `v(z) = (z + c)^d p(a + b / (z + c))`, roots `z_j = b / (x_j - a) - c`.
//! * Reversion: the Möbius map with `a = c = 0`, `b = 1`.
//! * Root squaring: `u(y) = (-1)^d p(sqrt y) p(-sqrt y)`, roots `x_j^2`.
//!
//! Both `v` and `u` are only ever sampled through `p`, and their logarithmic
//! derivatives are transported from `p'/p`, so every iteration in
//! [`crate::iterations`] runs on them unchanged.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{finite, Error, Result};
use crate::iterations::{run, Method, RunOptions, StoppingCriterion};
use crate::metrics::RunReport;
use crate::poly::Polynomial;
use crate::target::{LogSample, RootTarget, Sample};
use crate::Complex;

const ZERO: Complex = Complex::new(0.0, 0.0);

/// Tolerance on `|p_d - 1|` for the root-squaring map.
pub const MONIC_TOL: f64 = 1e-12;
/// Relative tolerance under which `|p(s)|` and `|p(-s)|` count as tied.
pub const TIE_TOL: f64 = 1e-12;
/// Boundary samples used to verify a map's containment property.
pub const CONTAINMENT_SAMPLES: usize = 256;

/// `x = a + b / (z + c)` with `b != 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MobiusMap {
    pub a: Complex,
    pub b: Complex,
    pub c: Complex,
}

impl MobiusMap {
    pub fn new(a: Complex, b: Complex, c: Complex) -> Result<Self> {
        if b == ZERO {
            return Err(Error::Precondition(
                "Möbius parameter b must be nonzero".into(),
            ));
        }
        for v in [a, b, c] {
            finite(v)
                .map_err(|_| Error::Precondition("Möbius parameters must be finite".into()))?;
        }
        Ok(MobiusMap { a, b, c })
    }

    /// `z = 1/x`, turning `p` into its reverse polynomial.
    pub fn reversion() -> Self {
        MobiusMap {
            a: ZERO,
            b: Complex::new(1.0, 0.0),
            c: ZERO,
        }
    }

    /// z-space point to x-space: `a + b / (z + c)`.
    pub fn forward(&self, z: Complex) -> Result<Complex> {
        let w = z + self.c;
        if w == ZERO {
            return Err(Error::Pole);
        }
        finite(self.a + self.b / w)
    }

    /// x-space point to z-space: `b / (x - a) - c`.
    pub fn backward(&self, x: Complex) -> Result<Complex> {
        let w = x - self.a;
        if w == ZERO {
            return Err(Error::Pole);
        }
        finite(self.b / w - self.c)
    }

    /// Samples a map with `|a|` in `[1.5R, 3R]`, `|b|` in `[R/4, R]` and
    /// `|c| <= 1/4`, for the Cauchy radius `R` of `p`.
    pub fn random<R: Rng + ?Sized>(p: &Polynomial, rng: &mut R) -> Self {
        let radius = p.root_radius_bound();
        let tau = std::f64::consts::TAU;
        let a = Complex::from_polar(radius * rng.gen_range(1.5..3.0), rng.gen::<f64>() * tau);
        let b = Complex::from_polar(radius * rng.gen_range(0.25..1.0), rng.gen::<f64>() * tau);
        let c = Complex::from_polar(rng.gen_range(0.0..0.25), rng.gen::<f64>() * tau);
        MobiusMap { a, b, c }
    }
}

pub fn mobius_forward(map: &MobiusMap, z: Complex) -> Result<Complex> {
    map.forward(z)
}

pub fn mobius_backward(map: &MobiusMap, x: Complex) -> Result<Complex> {
    map.backward(x)
}

/// `v(z) = (z + c)^d p(a + b / (z + c))`, evaluated pointwise.
pub fn mobius_eval(p: &Polynomial, map: &MobiusMap, z: Complex) -> Result<Complex> {
    let x = map.forward(z)?;
    finite((z + map.c).powu(p.degree() as u32) * p.eval(x)?)
}

/// `v'(z)/v(z) = d/(z + c) - b/(z + c)^2 * p'(x)/p(x)` at `x = a + b/(z + c)`.
pub fn mobius_newton_ratio_inverse(p: &Polynomial, map: &MobiusMap, z: Complex) -> Result<Complex> {
    MobiusTarget::new(p, *map)?
        .sample_with_log_derivative(z)?
        .log_derivative
        .ok_or(Error::AtRoot)
}

/// `p` seen through a Möbius map.
#[derive(Debug, Clone)]
pub struct MobiusTarget<'a> {
    poly: &'a Polynomial,
    map: MobiusMap,
    leading: Complex,
}

impl<'a> MobiusTarget<'a> {
    /// The leading coefficient of `v` is `p(a)`; it must be nonzero for `v`
    /// to keep degree `d`.
    pub fn new(poly: &'a Polynomial, map: MobiusMap) -> Result<Self> {
        MobiusMap::new(map.a, map.b, map.c)?;
        let leading = poly.eval(map.a)?;
        Ok(MobiusTarget { poly, map, leading })
    }

    pub fn map(&self) -> &MobiusMap {
        &self.map
    }
}

impl RootTarget for MobiusTarget<'_> {
    fn degree(&self) -> usize {
        self.poly.degree()
    }

    fn leading(&self) -> Complex {
        self.leading
    }

    fn sample(&self, z: Complex) -> Result<Sample> {
        let x = self.map.forward(z)?;
        let px = self.poly.eval(x)?;
        let value = finite((z + self.map.c).powu(self.poly.degree() as u32) * px)?;
        Ok(Sample {
            value,
            residual: px.norm(),
        })
    }

    fn sample_with_log_derivative(&self, z: Complex) -> Result<LogSample> {
        let x = self.map.forward(z)?;
        let (px, dpx) = self.poly.eval_with_derivative(x)?;
        let w = z + self.map.c;
        let value = finite(w.powu(self.poly.degree() as u32) * px)?;
        let log_derivative = if px == ZERO {
            None
        } else {
            let d = self.poly.degree() as f64;
            Some(finite(d / w - self.map.b / (w * w) * (dpx / px))?)
        };
        Ok(LogSample {
            value,
            log_derivative,
            residual: px.norm(),
        })
    }
}

/// Builds `a = 2R`, `b = 0.9R`, `c = 0` for the Cauchy radius `R`.
///
/// Every root satisfies `|x_j| < R`, hence `|x_j - a| > R` and
/// `|z_j| = 0.9R / |x_j - a| < 0.9`. The image of the Cauchy disc is checked
/// on sampled boundary points before the map is returned.
pub fn choose_map_into_unit_disc(p: &Polynomial) -> Result<MobiusMap> {
    let radius = p.root_radius_bound();
    let map = MobiusMap::new(
        Complex::new(2.0 * radius, 0.0),
        Complex::new(0.9 * radius, 0.0),
        ZERO,
    )?;
    for k in 0..CONTAINMENT_SAMPLES {
        let angle = std::f64::consts::TAU * k as f64 / CONTAINMENT_SAMPLES as f64;
        let z = map
            .backward(Complex::from_polar(radius, angle))
            .map_err(|e| Error::ConstructionFailure(e.to_string()))?;
        if z.norm() >= 1.0 {
            return Err(Error::ConstructionFailure(format!(
                "boundary point at angle {angle} maps to |z| = {}",
                z.norm()
            )));
        }
    }
    if p.eval(map.a)? == ZERO {
        return Err(Error::ConstructionFailure("p(a) vanishes".into()));
    }
    Ok(map)
}

/// A radius enclosing every z-space root of the mapped polynomial, when one
/// can be derived from root bounds of `p` alone.
pub fn z_space_radius(p: &Polynomial, map: &MobiusMap) -> Option<f64> {
    let upper = p.root_radius_bound();
    let a = map.a.norm();
    if a > upper {
        return Some(map.b.norm() / (a - upper) + map.c.norm());
    }
    let p0 = p.coeffs()[0].norm();
    if map.a == ZERO && p0 > 0.0 {
        let max_rest = p.coeffs()[1..].iter().map(|c| c.norm()).fold(0.0, f64::max);
        let lower = p0 / (p0 + max_rest);
        return Some(map.b.norm() / lower + map.c.norm());
    }
    None
}

/// `(-1)^d p(sqrt y) p(-sqrt y)` for monic `p`; equals `prod (y - x_j^2)`.
pub fn squared_eval(p: &Polynomial, y: Complex) -> Result<Complex> {
    SquaredTarget::new(p)?.sample(y).map(|s| s.value)
}

/// `u'(y)/u(y) = (p'(s)/p(s) - p'(-s)/p(-s)) / (2s)` with `s = sqrt y`.
pub fn squared_newton_ratio_inverse(p: &Polynomial, y: Complex) -> Result<Complex> {
    SquaredTarget::new(p)?
        .sample_with_log_derivative(y)?
        .log_derivative
        .ok_or(Error::AtRoot)
}

/// A monic `p` seen through root squaring.
#[derive(Debug, Clone)]
pub struct SquaredTarget<'a> {
    poly: &'a Polynomial,
}

impl<'a> SquaredTarget<'a> {
    pub fn new(poly: &'a Polynomial) -> Result<Self> {
        if !poly.is_monic(MONIC_TOL) {
            return Err(Error::NotMonic);
        }
        Ok(SquaredTarget { poly })
    }

    fn sign(&self) -> f64 {
        if self.poly.degree().is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }
}

impl RootTarget for SquaredTarget<'_> {
    fn degree(&self) -> usize {
        self.poly.degree()
    }

    fn leading(&self) -> Complex {
        Complex::new(1.0, 0.0)
    }

    fn sample(&self, y: Complex) -> Result<Sample> {
        let s = y.sqrt();
        let plus = self.poly.eval(s)?;
        let minus = self.poly.eval(-s)?;
        Ok(Sample {
            value: finite(self.sign() * plus * minus)?,
            residual: plus.norm().min(minus.norm()),
        })
    }

    fn sample_with_log_derivative(&self, y: Complex) -> Result<LogSample> {
        let s = y.sqrt();
        let (plus, dplus) = self.poly.eval_with_derivative(s)?;
        let (minus, dminus) = self.poly.eval_with_derivative(-s)?;
        let value = finite(self.sign() * plus * minus)?;
        let residual = plus.norm().min(minus.norm());
        if plus == ZERO || minus == ZERO {
            return Ok(LogSample {
                value,
                log_derivative: None,
                residual,
            });
        }
        if y == ZERO {
            return Err(Error::AtOrigin);
        }
        let ratio = 0.5 * (dplus / plus - dminus / minus) / s;
        Ok(LogSample {
            value,
            log_derivative: Some(finite(ratio)?),
            residual,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RecoveredRoot {
    pub root: Complex,
    /// Both signs gave residuals equal within [`TIE_TOL`]; the principal root was kept.
    pub ambiguous: bool,
}

/// Picks from `±sqrt(y_j)` the candidate with the smaller `|p|`.
pub fn recover_roots_from_squares(p: &Polynomial, y_roots: &[Complex]) -> Vec<RecoveredRoot> {
    y_roots
        .iter()
        .map(|&y| {
            let s = y.sqrt();
            let plus = p.eval(s).map(|v| v.norm()).unwrap_or(f64::INFINITY);
            let minus = p.eval(-s).map(|v| v.norm()).unwrap_or(f64::INFINITY);
            if (plus - minus).abs() <= TIE_TOL * plus.max(minus) || plus == minus {
                RecoveredRoot {
                    root: s,
                    ambiguous: true,
                }
            } else if plus < minus {
                RecoveredRoot {
                    root: s,
                    ambiguous: false,
                }
            } else {
                RecoveredRoot {
                    root: -s,
                    ambiguous: false,
                }
            }
        })
        .collect()
}

/// A root found in a mapped variable, carried back to x-space.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MappedRoot {
    /// Approximation in the iteration variable (z for Möbius, y for squaring).
    pub mapped: Complex,
    pub x: Option<Complex>,
    /// `|p(x)|` for the polynomial handed to the run.
    pub residual: f64,
    pub ambiguous: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MappedRun {
    pub report: RunReport,
    pub roots: Vec<MappedRoot>,
}

/// Runs `opts.method` on `v(z)` and maps converged z back to x-space.
///
/// Tame roots in `opts` are x-space roots; they are carried into z-space.
pub fn mobius_run(
    p: &Polynomial,
    map: &MobiusMap,
    init: &[Complex],
    stop: &StoppingCriterion,
    opts: &RunOptions,
) -> Result<MappedRun> {
    let target = MobiusTarget::new(p, *map)?;
    let mut z_opts = opts.clone();
    z_opts.tame = opts
        .tame
        .iter()
        .map(|&x| map.backward(x))
        .collect::<Result<_>>()?;
    let report = run(&target, init, stop, &z_opts)?;
    let roots = report
        .roots
        .iter()
        .map(|r| match map.forward(r.approximation) {
            Ok(x) => MappedRoot {
                mapped: r.approximation,
                x: Some(x),
                residual: p.eval(x).map(|v| v.norm()).unwrap_or(f64::INFINITY),
                ambiguous: false,
                error: r.error.clone(),
            },
            Err(e) => MappedRoot {
                mapped: r.approximation,
                x: None,
                residual: f64::INFINITY,
                ambiguous: false,
                error: Some(r.error.clone().unwrap_or_else(|| e.to_string())),
            },
        })
        .collect();
    Ok(MappedRun { report, roots })
}

/// Newton's iteration on `v(z)` with roots recovered through the map.
pub fn mapped_newton_run(
    p: &Polynomial,
    map: &MobiusMap,
    init: &[Complex],
    stop: &StoppingCriterion,
) -> Result<MappedRun> {
    mobius_run(p, map, init, stop, &RunOptions::new(Method::Newton))
}

/// Newton on `u(y)` followed by sign selection among `±sqrt(y_j)`.
///
/// A non-monic `p` is divided by its leading coefficient first; residuals
/// are reported for that monic polynomial.
pub fn squared_newton_run(
    p: &Polynomial,
    init: &[Complex],
    stop: &StoppingCriterion,
    opts: &RunOptions,
) -> Result<MappedRun> {
    let monic;
    let poly = if p.is_monic(MONIC_TOL) {
        p
    } else {
        monic = p.monic();
        &monic
    };
    let target = SquaredTarget::new(poly)?;
    let mut y_opts = opts.clone();
    y_opts.method = Method::Newton;
    y_opts.tame = opts.tame.iter().map(|x| x * x).collect();
    let mut report = run(&target, init, stop, &y_opts)?;
    if !std::ptr::eq(poly, p) {
        report
            .warnings
            .push("polynomial divided by its leading coefficient before squaring".into());
    }
    let ys = report.approximations();
    let recovered = recover_roots_from_squares(poly, &ys);
    let roots = report
        .roots
        .iter()
        .zip(recovered)
        .map(|(r, rec)| MappedRoot {
            mapped: r.approximation,
            x: Some(rec.root),
            residual: poly
                .eval(rec.root)
                .map(|v| v.norm())
                .unwrap_or(f64::INFINITY),
            ambiguous: rec.ambiguous,
            error: r.error.clone(),
        })
        .collect();
    Ok(MappedRun { report, roots })
}
