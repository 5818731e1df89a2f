//! The run pipeline: normalization, map, iteration with deflation, recovery.

use std::io::Read;

use polytame::maps::{mobius_run, squared_newton_run, z_space_radius, MappedRun};
use polytame::{
    circle_init, explicit_deflate_all, run, Complex, Error, MobiusMap, Polynomial, RunOptions,
    RunReport,
};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::config::{ConfigError, DeflationMode, InitSpec, InputSource, JobConfig, MapSpec};
use crate::parse::{parse_polynomial, ParseError};
use crate::report::{
    pair, ConfigEcho, DeflationEcho, JobReport, MapEcho, NormalizationEcho, Phase, RootEntry,
    Status, Totals,
};

/// Prior-phase roots closer than this (relative) to an accepted one are duplicates.
pub const DUPLICATE_TOL: f64 = 1e-8;
/// Extra rotation of automatic start circles; keeps them off conjugate-symmetric positions.
pub const AUTO_ROTATION: f64 = 0.7;
/// Mapped roots must satisfy `|p(x)| <= CLOSURE_FACTOR * residual_tol * max|p_j|`.
pub const CLOSURE_FACTOR: f64 = 10.0;

#[derive(Debug, Error)]
pub enum JobError {
    #[error("cannot read {source_name}: {error}")]
    Io {
        source_name: String,
        error: std::io::Error,
    },
    #[error("{source_name}: {error}")]
    Parse {
        source_name: String,
        error: ParseError,
    },
    #[error("invalid configuration: {0}")]
    Config(#[from] ConfigError),
    #[error("numerical failure: {0}")]
    Numerical(Error),
}

impl JobError {
    /// 3 for bad input or configuration, 4 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            JobError::Numerical(_) => 4,
            _ => 3,
        }
    }
}

impl From<Error> for JobError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidPolynomial(m) | Error::Precondition(m) => {
                JobError::Config(ConfigError(m))
            }
            Error::NotMonic => JobError::Config(ConfigError(e.to_string())),
            other => JobError::Numerical(other),
        }
    }
}

/// Reads the configured input and runs the job.
pub fn run_job(cfg: &JobConfig) -> Result<JobReport, JobError> {
    let source_name = cfg.input.to_string();
    let text = match &cfg.input {
        InputSource::Text(t) => t.clone(),
        InputSource::File(path) => std::fs::read_to_string(path).map_err(|error| JobError::Io {
            source_name: source_name.clone(),
            error,
        })?,
        InputSource::Stdin => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|error| JobError::Io {
                    source_name: source_name.clone(),
                    error,
                })?;
            buf
        }
    };
    let p = parse_polynomial(&text).map_err(|error| JobError::Parse { source_name, error })?;
    run_polynomial(cfg, &p)
}

#[derive(Debug, Clone, Copy)]
enum Resolved {
    Identity,
    Mobius(MobiusMap),
    Square,
}

/// One iteration run with its roots carried back to the working variable.
struct Stage {
    report: RunReport,
    xs: Vec<Option<Complex>>,
    mapped: Vec<Option<Complex>>,
    ambiguous: Vec<bool>,
}

impl Stage {
    fn from_mapped(run: MappedRun) -> Stage {
        Stage {
            xs: run.roots.iter().map(|r| r.x).collect(),
            mapped: run.roots.iter().map(|r| Some(r.mapped)).collect(),
            ambiguous: run.roots.iter().map(|r| r.ambiguous).collect(),
            report: run.report,
        }
    }
}

struct Pipeline<'a> {
    cfg: &'a JobConfig,
    map: Resolved,
    run_seed: u64,
}

impl Pipeline<'_> {
    fn stage(
        &self,
        poly: &Polynomial,
        init: &[Complex],
        tame: &[Complex],
    ) -> Result<Stage, JobError> {
        let mut opts = RunOptions::new(self.cfg.method)
            .with_order(self.cfg.ordering)
            .with_seed(self.run_seed)
            .with_tame(tame.to_vec());
        opts.parallel = self.cfg.parallel;
        let stop = &self.cfg.stop;
        Ok(match self.map {
            Resolved::Identity => {
                let report = run(poly, init, stop, &opts)?;
                let xs = report.approximations();
                Stage {
                    xs: xs.into_iter().map(Some).collect(),
                    mapped: vec![None; init.len()],
                    ambiguous: vec![false; init.len()],
                    report,
                }
            }
            Resolved::Mobius(map) => Stage::from_mapped(mobius_run(poly, &map, init, stop, &opts)?),
            Resolved::Square => Stage::from_mapped(squared_newton_run(poly, init, stop, &opts)?),
        })
    }

    /// Starting points in the iteration variable for `count` roots of `poly`.
    fn init(
        &self,
        poly: &Polynomial,
        count: usize,
        warnings: &mut Vec<String>,
    ) -> Result<Vec<Complex>, JobError> {
        let origin = Complex::new(0.0, 0.0);
        match &self.cfg.init {
            InitSpec::Points(points) => Ok(points.clone()),
            InitSpec::Circle {
                count,
                center,
                radius,
            } => Ok(circle_init(*count, *center, *radius)?),
            InitSpec::Auto => {
                let bound = poly.root_radius_bound();
                let radius = match self.map {
                    Resolved::Identity => bound,
                    Resolved::Square => bound * bound,
                    Resolved::Mobius(map) => z_space_radius(poly, &map).unwrap_or_else(|| {
                        warnings
                            .push("no z-space root bound for this map; unit circle start".into());
                        1.0
                    }),
                };
                let turn = Complex::from_polar(1.0, AUTO_ROTATION);
                Ok(circle_init(count, origin, radius)?
                    .into_iter()
                    .map(|z| z * turn)
                    .collect())
            }
        }
    }
}

/// Runs the configured pipeline on `p`.
pub fn run_polynomial(cfg: &JobConfig, p: &Polynomial) -> Result<JobReport, JobError> {
    cfg.validate()?;
    let mut warnings = Vec::new();

    let normalized = if cfg.normalize {
        Some(p.normalize_into_unit_disc()?)
    } else {
        None
    };
    let work = normalized
        .as_ref()
        .map_or_else(|| p.clone(), |n| n.poly.clone());
    let to_x = |t: Complex| normalized.as_ref().map_or(t, |n| n.to_original(t));
    let tame: Vec<Complex> = cfg
        .tame
        .iter()
        .map(|&x| normalized.as_ref().map_or(x, |n| n.from_original(x)))
        .collect();

    // One generator: map parameters first, then the driver's perturbation seed.
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (map, map_echo) = match cfg.map {
        MapSpec::None => (Resolved::Identity, None),
        MapSpec::Square => (
            Resolved::Square,
            Some(MapEcho {
                kind: "square",
                a: None,
                b: None,
                c: None,
            }),
        ),
        MapSpec::Reverse => {
            let m = MobiusMap::reversion();
            (Resolved::Mobius(m), Some(MapEcho::mobius("reverse", &m)))
        }
        MapSpec::Mobius { a, b, c } => {
            let m = MobiusMap::new(a, b, c)?;
            (Resolved::Mobius(m), Some(MapEcho::mobius("mobius", &m)))
        }
        MapSpec::RandomMobius => {
            let m = MobiusMap::random(&work, &mut rng);
            (Resolved::Mobius(m), Some(MapEcho::mobius("mobius", &m)))
        }
    };
    let pipeline = Pipeline {
        cfg,
        map,
        run_seed: rng.next_u64(),
    };
    let degree = work.degree();

    let mut roots = Vec::new();
    let mut parts = Vec::new();
    let mut deflation = None;
    let push_stage =
        |stage: &Stage, phase: Phase, keep: &dyn Fn(usize) -> bool, roots: &mut Vec<RootEntry>| {
            for (i, r) in stage.report.roots.iter().enumerate() {
                let x = stage.xs[i].map(to_x);
                roots.push(RootEntry {
                    re: x.map(|x| x.re),
                    im: x.map(|x| x.im),
                    residual: x.and_then(|x| p.eval(x).ok()).map(|v| v.norm()),
                    iterations: r.iterations,
                    converged: r.converged && x.is_some(),
                    order_estimate: r.order_estimate,
                    mapped: stage.mapped[i].map(pair),
                    ambiguous: stage.ambiguous[i],
                    phase,
                    is_final: keep(i),
                    error: r.error.clone(),
                });
            }
        };

    let wild_count = degree.saturating_sub(tame.len());
    match (cfg.deflation, tame.is_empty()) {
        (DeflationMode::None, _) => {
            let init = pipeline.init(&work, degree, &mut warnings)?;
            let stage = pipeline.stage(&work, &init, &[])?;
            push_stage(&stage, Phase::Main, &|_| true, &mut roots);
            parts.push(stage.report);
        }
        (DeflationMode::Implicit, false) => {
            let init = pipeline.init(&work, wild_count, &mut warnings)?;
            let stage = pipeline.stage(&work, &init, &tame)?;
            push_stage(&stage, Phase::Main, &|_| true, &mut roots);
            parts.push(stage.report);
            deflation = Some(echo(cfg.deflation, &tame, false, Vec::new(), &to_x));
        }
        (DeflationMode::Explicit, false) => {
            let (quotient, remainders) = explicit_deflate_all(&work, &tame)?;
            let init = pipeline.init(&quotient, quotient.degree(), &mut warnings)?;
            let stage = pipeline.stage(&quotient, &init, &[])?;
            push_stage(&stage, Phase::Main, &|_| true, &mut roots);
            parts.push(stage.report);
            deflation = Some(echo(cfg.deflation, &tame, false, remainders, &to_x));
        }
        (mode, true) => {
            // Prior phase: converged, distinct roots become the tame set.
            let init = pipeline.init(&work, degree, &mut warnings)?;
            let prior = pipeline.stage(&work, &init, &[])?;
            let accepted = accept_distinct(&prior, degree);
            let accepted_roots: Vec<Complex> = accepted
                .iter()
                .map(|&i| prior.xs[i].expect("accepted roots are finite"))
                .collect();
            let done = accepted.len() >= degree || accepted.is_empty();
            let keep = |i: usize| done || accepted.contains(&i);
            push_stage(&prior, Phase::Prior, &keep, &mut roots);
            warnings.push(format!(
                "prior phase accepted {} of {} roots as tame",
                accepted.len(),
                degree
            ));
            parts.push(prior.report);
            let starts: Vec<Complex> = (0..init.len())
                .filter(|i| !accepted.contains(i))
                .map(|i| init[i])
                .collect();
            let mut remainders = Vec::new();
            if !done && !starts.is_empty() {
                let stage = match mode {
                    DeflationMode::Explicit => {
                        let (quotient, rem) = explicit_deflate_all(&work, &accepted_roots)?;
                        remainders = rem;
                        pipeline.stage(&quotient, &starts, &[])?
                    }
                    _ => pipeline.stage(&work, &starts, &accepted_roots)?,
                };
                push_stage(&stage, Phase::Main, &|_| true, &mut roots);
                parts.push(stage.report);
            }
            deflation = Some(echo(mode, &accepted_roots, true, remainders, &to_x));
        }
    }

    let combined = RunReport::combine(parts);
    warnings.extend(combined.warnings.iter().cloned());

    if !matches!(map, Resolved::Identity) {
        let bound = CLOSURE_FACTOR * cfg.stop.residual_tol * p.max_coeff_modulus();
        for root in roots.iter_mut().filter(|r| r.converged) {
            if root.residual.is_none_or(|res| res > bound) {
                root.converged = false;
                warnings.push(format!(
                    "root ({:?}, {:?}) converged in the mapped variable but |p(x)| exceeds {bound:e}",
                    root.re, root.im
                ));
            }
        }
    }

    let finals: Vec<&RootEntry> = roots.iter().filter(|r| r.is_final).collect();
    let converged = finals.iter().filter(|r| r.converged).count();
    let status = if !finals.is_empty() && converged == finals.len() {
        Status::Converged
    } else if converged > 0 {
        Status::Partial
    } else {
        Status::Failed
    };

    Ok(JobReport {
        config: ConfigEcho::from(cfg),
        degree: p.degree(),
        map: map_echo,
        normalization: normalized.as_ref().map(|n| NormalizationEcho {
            scale: pair(n.scale),
            shift: pair(n.shift),
        }),
        deflation,
        roots,
        totals: Totals {
            evaluations: combined.evaluations,
            step_evaluations: combined.step_evaluations,
            divisions: combined.divisions,
            sweeps: combined.sweeps,
            alpha: combined.alpha,
            order: combined.order,
            efficiency: combined.efficiency,
        },
        warnings,
        status,
    })
}

fn echo(
    mode: DeflationMode,
    tame: &[Complex],
    prior_phase: bool,
    remainders: Vec<Complex>,
    to_x: &dyn Fn(Complex) -> Complex,
) -> DeflationEcho {
    DeflationEcho {
        mode: mode.to_string(),
        tame: tame.iter().map(|&t| pair(to_x(t))).collect(),
        prior_phase,
        remainders: remainders.into_iter().map(pair).collect(),
    }
}

/// Indices of converged prior-phase roots, skipping near-duplicates, at most `degree`.
fn accept_distinct(stage: &Stage, degree: usize) -> Vec<usize> {
    let mut accepted: Vec<usize> = Vec::new();
    for (i, r) in stage.report.roots.iter().enumerate() {
        let Some(x) = stage.xs[i] else { continue };
        if !r.converged || accepted.len() == degree {
            continue;
        }
        let duplicate = accepted.iter().any(|&j| {
            let y = stage.xs[j].expect("accepted roots are finite");
            (x - y).norm() <= DUPLICATE_TOL * (1.0 + x.norm())
        });
        if !duplicate {
            accepted.push(i);
        }
    }
    accepted
}
