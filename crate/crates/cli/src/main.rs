use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use polytame::{Method, StoppingCriterion, UpdateOrder};
use polytame_cli::config::{
    parse_method, parse_ordering, DeflationMode, InitSpec, InputSource, JobConfig, MapSpec,
};
use polytame_cli::{parse_values, run_job};

const INPUT_ERROR: u8 = 3;

/// Finds the roots of a polynomial given as ascending coefficients.
#[derive(Debug, Parser)]
#[command(name = "polytame", version)]
struct Cli {
    /// Coefficient file, lowest degree first; `-` reads standard input.
    #[arg(long, default_value = "-")]
    input: String,
    /// newton, weierstrass or ehrlich.
    #[arg(long, default_value = "ehrlich", value_parser = parse_method)]
    method: Method,
    /// none, implicit or explicit.
    #[arg(long, default_value = "none")]
    deflate: DeflationMode,
    /// none, reverse, square, mobius:A,B,C or mobius:random.
    #[arg(long, default_value = "none")]
    map: MapSpec,
    /// jacobi or gauss-seidel.
    #[arg(long, default_value = "jacobi", value_parser = parse_ordering)]
    ordering: UpdateOrder,
    /// Residual tolerance on |p(x)|.
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Relative step tolerance.
    #[arg(long, default_value_t = 0.0)]
    step_tol: f64,
    #[arg(long, default_value_t = 500)]
    max_iters: usize,
    /// auto, circle:COUNT,CENTER,RADIUS or points:Z1,Z2,...
    #[arg(long, default_value = "auto")]
    init: InitSpec,
    /// File of tame roots in the coefficient syntax.
    #[arg(long)]
    tame: Option<PathBuf>,
    #[arg(long, env = "POLYTAME_SEED", default_value_t = 0)]
    seed: u64,
    /// Exit with 0 when only some roots converged.
    #[arg(long)]
    partial_ok: bool,
    /// Write the report here instead of standard output.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Rescale so that all roots lie in the unit disc before iterating.
    #[arg(long)]
    normalize: bool,
    /// Evaluate Jacobi sweeps on several threads.
    #[arg(long)]
    parallel: bool,
}

fn fail(message: impl std::fmt::Display, code: u8) -> ExitCode {
    eprintln!("polytame: {message}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(INPUT_ERROR);
        }
    };

    let stop = match StoppingCriterion::new(cli.tol, cli.step_tol, cli.max_iters) {
        Ok(s) => s,
        Err(e) => return fail(e, INPUT_ERROR),
    };
    let tame = match &cli.tame {
        None => Vec::new(),
        Some(path) => match std::fs::read_to_string(path) {
            Err(e) => return fail(format!("cannot read {}: {e}", path.display()), INPUT_ERROR),
            Ok(text) => match parse_values(&text) {
                Ok(values) => values.into_iter().map(|(z, _)| z).collect(),
                Err(e) => return fail(format!("{}: {e}", path.display()), INPUT_ERROR),
            },
        },
    };

    let mut cfg = JobConfig::new(InputSource::from(cli.input.as_str()), cli.method);
    cfg.deflation = cli.deflate;
    cfg.map = cli.map;
    cfg.ordering = cli.ordering;
    cfg.stop = stop;
    cfg.tame = tame;
    cfg.init = cli.init;
    cfg.seed = cli.seed;
    cfg.normalize = cli.normalize;
    cfg.parallel = cli.parallel;

    let report = match run_job(&cfg) {
        Ok(r) => r,
        Err(e) => return fail(&e, e.exit_code() as u8),
    };
    let json = report.to_json();
    match &cli.json {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &json) {
                return fail(format!("cannot write {}: {e}", path.display()), INPUT_ERROR);
            }
        }
        None => print!("{json}"),
    }
    ExitCode::from(report.exit_code(cli.partial_ok) as u8)
}
