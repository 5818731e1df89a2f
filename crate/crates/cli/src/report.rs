//! JSON report layout. `schema/report.schema.json` describes the same shape.

use serde::Serialize;

use crate::config::{method_name, ordering_name, JobConfig};

/// `[re, im]`.
pub type Pair = [f64; 2];

pub fn pair(z: polytame::Complex) -> Pair {
    [z.re, z.im]
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub input: String,
    pub method: &'static str,
    pub deflation: String,
    pub map: String,
    pub ordering: &'static str,
    pub residual_tol: f64,
    pub step_tol: f64,
    pub max_iters: usize,
    pub init: String,
    pub tame: Vec<Pair>,
    pub seed: u64,
    pub normalize: bool,
}

impl From<&JobConfig> for ConfigEcho {
    fn from(cfg: &JobConfig) -> Self {
        ConfigEcho {
            input: cfg.input.to_string(),
            method: method_name(cfg.method),
            deflation: cfg.deflation.to_string(),
            map: cfg.map.to_string(),
            ordering: ordering_name(cfg.ordering),
            residual_tol: cfg.stop.residual_tol,
            step_tol: cfg.stop.step_tol,
            max_iters: cfg.stop.max_iters,
            init: cfg.init.to_string(),
            tame: cfg.tame.iter().map(|&z| pair(z)).collect(),
            seed: cfg.seed,
            normalize: cfg.normalize,
        }
    }
}

/// Map actually used, with sampled parameters resolved.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MapEcho {
    pub kind: &'static str,
    pub a: Option<Pair>,
    pub b: Option<Pair>,
    pub c: Option<Pair>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormalizationEcho {
    pub scale: Pair,
    pub shift: Pair,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Prior,
    Main,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootEntry {
    /// Root in the original variable; absent when the map sent it to infinity.
    pub re: Option<f64>,
    pub im: Option<f64>,
    /// `|p(x)|` for the input polynomial.
    pub residual: Option<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub order_estimate: Option<f64>,
    /// Approximation in the iteration variable when a map is active.
    pub mapped: Option<Pair>,
    /// Both square roots fitted equally well.
    pub ambiguous: bool,
    pub phase: Phase,
    /// Part of the final answer; superseded prior-phase entries are not.
    #[serde(rename = "final")]
    pub is_final: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeflationEcho {
    pub mode: String,
    /// Tame roots handed to the main phase, original variable.
    pub tame: Vec<Pair>,
    pub prior_phase: bool,
    /// Synthetic-division remainders, explicit mode only.
    pub remainders: Vec<Pair>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Totals {
    pub evaluations: u64,
    pub step_evaluations: u64,
    pub divisions: u64,
    pub sweeps: usize,
    pub alpha: Option<f64>,
    pub order: Option<f64>,
    pub efficiency: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Converged,
    Partial,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JobReport {
    pub config: ConfigEcho,
    pub degree: usize,
    pub map: Option<MapEcho>,
    pub normalization: Option<NormalizationEcho>,
    pub deflation: Option<DeflationEcho>,
    pub roots: Vec<RootEntry>,
    pub totals: Totals,
    pub warnings: Vec<String>,
    pub status: Status,
}

impl JobReport {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }

    pub fn final_roots(&self) -> impl Iterator<Item = &RootEntry> {
        self.roots.iter().filter(|r| r.is_final)
    }

    /// 0 all converged, 2 partial (0 with `partial_ok`), 4 nothing converged.
    pub fn exit_code(&self, partial_ok: bool) -> i32 {
        match self.status {
            Status::Converged => 0,
            Status::Partial if partial_ok => 0,
            Status::Partial => 2,
            Status::Failed => 4,
        }
    }
}

impl MapEcho {
    pub fn mobius(kind: &'static str, map: &polytame::MobiusMap) -> Self {
        MapEcho {
            kind,
            a: Some(pair(map.a)),
            b: Some(pair(map.b)),
            c: Some(pair(map.c)),
        }
    }
}
