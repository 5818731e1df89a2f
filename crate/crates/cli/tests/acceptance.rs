//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

use std::time::{Duration, Instant};

use polytame::matching::max_pairing_error;
use polytame::{
    efficiency, ehrlich_step, explicit_deflate_all, implicit_ehrlich_step, implicit_newton_step,
    implicit_weierstrass_step, mobius_backward, mobius_eval, mobius_forward,
    mobius_newton_ratio_inverse, recover_roots_from_squares, run, squared_eval,
    squared_newton_ratio_inverse, weierstrass_step, Complex, Method, MobiusMap, Polynomial,
    RootList, RunOptions, StoppingCriterion, TameSet,
};
use polytame_cli::{run_polynomial, DeflationMode, InitSpec, InputSource, JobConfig, MapSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// Tolerances and limits, pinned.
const EFF_DECIMALS_TOL: f64 = 5e-4;
const EFF_REF_NEWTON: f64 = 1.414;
const EFF_REF_EHRLICH: f64 = 1.442;
const ORDER_SHARE: f64 = 0.9;
const ORDER_QUADRATIC: (f64, f64) = (1.7, 2.3);
const ORDER_CUBIC: (f64, f64) = (2.5, 3.5);
const ORDER_START_OFFSET: f64 = 0.2;
const ORDER_RESIDUAL_TOL: f64 = 1e-18;
const ORDER_STEP_TOL: f64 = 1e-15;
const ONE_STEP_TOL: f64 = 1e-10;
const IDENTITY_TOL: f64 = 1e-9;
const TAMING_TOL: f64 = 1e-8;
const TAMING_START_OFFSET: f64 = 0.02;
const TRANSPORT_FD_TOL: f64 = 1e-5;
const REVERSION_TOL: f64 = 1e-12;
const RECOVERY_TOL: f64 = 1e-8;
const FAST: Duration = Duration::from_secs(5);
const TAMING_LIMIT: Duration = Duration::from_secs(10);

fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

fn in_disc(rng: &mut ChaCha8Rng, radius: f64) -> Complex {
    Complex::from_polar(
        radius * rng.gen::<f64>().sqrt(),
        rng.gen_range(0.0..std::f64::consts::TAU),
    )
}

fn in_box(rng: &mut ChaCha8Rng, half: f64) -> Complex {
    c(rng.gen_range(-half..half), rng.gen_range(-half..half))
}

fn separated_roots(rng: &mut ChaCha8Rng, count: usize, radius: f64, sep: f64) -> Vec<Complex> {
    let mut roots: Vec<Complex> = Vec::with_capacity(count);
    while roots.len() < count {
        let z = in_disc(rng, radius);
        if roots.iter().all(|r| (r - z).norm() >= sep) {
            roots.push(z);
        }
    }
    roots
}

fn poly(roots: &[Complex], leading: Complex) -> Polynomial {
    Polynomial::from_roots(&RootList {
        roots: roots.to_vec(),
        leading,
    })
    .unwrap()
}

fn unit_leading(rng: &mut ChaCha8Rng) -> Complex {
    Complex::from_polar(
        rng.gen_range(0.5..2.0),
        rng.gen_range(0.0..std::f64::consts::TAU),
    )
}

fn min_distance(z: Complex, set: &[Complex]) -> f64 {
    set.iter()
        .map(|w| (z - w).norm())
        .fold(f64::INFINITY, f64::min)
}

fn rel(a: Complex, b: Complex) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(f64::MIN_POSITIVE)
}

type Criterion = (&'static str, fn() -> Outcome, Duration);

struct Outcome {
    pass: bool,
    detail: String,
}

fn efficiency_constants() -> Outcome {
    let e2 = efficiency(2.0, 2.0).unwrap();
    let e3 = efficiency(3.0, 3.0).unwrap();
    Outcome {
        pass: (e2 - EFF_REF_NEWTON).abs() < EFF_DECIMALS_TOL
            && (e3 - EFF_REF_EHRLICH).abs() < EFF_DECIMALS_TOL,
        detail: format!(
            "eff(2,2)={e2:.5} eff(3,3)={e3:.5}, references {EFF_REF_NEWTON} and {EFF_REF_EHRLICH}"
        ),
    }
}

fn convergence_orders() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let stop = StoppingCriterion::new(ORDER_RESIDUAL_TOL, ORDER_STEP_TOL, 500).unwrap();
    let mut pass = true;
    let mut parts = Vec::new();
    for method in [Method::Newton, Method::Weierstrass, Method::Ehrlich] {
        let (lo, hi) = if method == Method::Ehrlich {
            ORDER_CUBIC
        } else {
            ORDER_QUADRATIC
        };
        let (mut hits, mut converged) = (0usize, 0usize);
        for _ in 0..20 {
            let roots = separated_roots(&mut rng, 8, 1.0, 0.3);
            let p = poly(&roots, c(1.0, 0.0));
            let init: Vec<Complex> = roots
                .iter()
                .map(|r| {
                    r + Complex::from_polar(
                        ORDER_START_OFFSET,
                        rng.gen_range(0.0..std::f64::consts::TAU),
                    )
                })
                .collect();
            let report = run(&p, &init, &stop, &RunOptions::new(method)).unwrap();
            for root in report.roots.iter().filter(|r| r.converged) {
                converged += 1;
                if root.order_estimate.is_some_and(|q| (lo..=hi).contains(&q)) {
                    hits += 1;
                }
            }
        }
        let share = hits as f64 / converged.max(1) as f64;
        pass &= share >= ORDER_SHARE;
        parts.push(format!("{method:?} {hits}/{converged} in [{lo},{hi}]"));
    }
    Outcome {
        pass,
        detail: format!("{} (need {:.0}%)", parts.join(", "), ORDER_SHARE * 100.0),
    }
}

fn one_step_exactness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let d = rng.gen_range(2..=10);
        let roots = separated_roots(&mut rng, d, 1.0, 0.05);
        let p = poly(&roots, unit_leading(&mut rng));
        let (tame, wild) = roots.split_at(d - 1);
        let z = loop {
            let z = in_box(&mut rng, 2.0);
            if min_distance(z, tame) >= 0.1 {
                break z;
            }
        };
        let next = implicit_newton_step(&p, &TameSet::new(tame.to_vec()), z, true).unwrap();
        worst = worst.max((next - wild[0]).norm());
    }
    Outcome {
        pass: worst <= ONE_STEP_TOL,
        detail: format!("100 instances, max error {worst:.2e} (tol {ONE_STEP_TOL:e})"),
    }
}

fn deflation_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let d = rng.gen_range(2..=12);
        let roots = separated_roots(&mut rng, d, 1.0, 0.05);
        let lead = unit_leading(&mut rng);
        let p = poly(&roots, lead);
        let t = rng.gen_range(1..d);
        let (tame, wild) = roots.split_at(t);
        let q = poly(wild, lead);
        let zs: Vec<Complex> = wild.iter().map(|w| w + in_disc(&mut rng, 0.05)).collect();
        let tame = TameSet::new(tame.to_vec());
        let pairs = [
            (
                implicit_weierstrass_step(&p, &tame, &zs).unwrap(),
                weierstrass_step(&q, &zs).unwrap(),
            ),
            (
                implicit_ehrlich_step(&p, &tame, &zs).unwrap(),
                ehrlich_step(&q, &zs).unwrap(),
            ),
        ];
        for (implicit, plain) in pairs {
            for k in 0..zs.len() {
                worst = worst.max(rel(zs[k] - implicit[k], zs[k] - plain[k]));
            }
        }
    }
    Outcome {
        pass: worst <= IDENTITY_TOL,
        detail: format!("50 instances, max relative gap {worst:.2e} (tol {IDENTITY_TOL:e})"),
    }
}

fn end_to_end_taming() -> Outcome {
    let d = 50;
    let mut coeffs = vec![c(0.0, 0.0); d + 1];
    coeffs[0] = c(-1.0, 0.0);
    coeffs[d] = c(1.0, 0.0);
    let p = Polynomial::new(coeffs).unwrap();
    let roots: Vec<Complex> = (0..d)
        .map(|k| Complex::from_polar(1.0, std::f64::consts::TAU * k as f64 / d as f64))
        .collect();
    let (tame, wild) = roots.split_at(25);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let starts: Vec<Complex> = wild
        .iter()
        .map(|w| {
            w + Complex::from_polar(
                TAMING_START_OFFSET,
                rng.gen_range(0.0..std::f64::consts::TAU),
            )
        })
        .collect();
    let stop = StoppingCriterion::default();

    let implicit = run(
        &p,
        &starts,
        &stop,
        &RunOptions::new(Method::Ehrlich).with_tame(tame.to_vec()),
    )
    .unwrap();
    let implicit_err = max_pairing_error(&implicit.approximations(), wild);

    let (quotient, remainders) = explicit_deflate_all(&p, tame).unwrap();
    let explicit = run(&quotient, &starts, &stop, &RunOptions::new(Method::Ehrlich)).unwrap();
    let explicit_err = max_pairing_error(&explicit.approximations(), wild);
    let explicit_residual = explicit
        .approximations()
        .iter()
        .map(|&x| p.eval(x).unwrap().norm())
        .fold(0.0, f64::max);
    let max_remainder = remainders.iter().map(|r| r.norm()).fold(0.0, f64::max);
    let quotient_at_wild = wild
        .iter()
        .map(|&x| quotient.eval(x).unwrap().norm())
        .fold(0.0, f64::max);

    Outcome {
        pass: implicit.all_converged() && implicit_err <= TAMING_TOL,
        detail: format!(
            "implicit Ehrlich max error {implicit_err:.2e} (tol {TAMING_TOL:e}); explicit comparator: max error {explicit_err:.2e}, max |p(x)| {explicit_residual:.2e}, max remainder {max_remainder:.2e}, max |q(x_wild)| {quotient_at_wild:.2e}"
        ),
    }
}

fn map_transport() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let fd = |f: &dyn Fn(Complex) -> Complex, z: Complex| {
        let h = c(1e-6 * (1.0 + z.norm()), 0.0);
        (f(z + h) - f(z - h)) / (h * 2.0 * f(z))
    };
    let (mut worst_mobius, mut worst_square, mut worst_rev) = (0.0f64, 0.0f64, 0.0f64);
    let mut done = 0;
    while done < 100 {
        let d = rng.gen_range(1..=8);
        let roots = separated_roots(&mut rng, d, 1.0, 0.1);
        let p = poly(&roots, unit_leading(&mut rng));
        let map = MobiusMap::new(
            in_box(&mut rng, 3.0),
            in_disc(&mut rng, 2.0) + c(0.2, 0.0),
            in_box(&mut rng, 1.0),
        )
        .unwrap();
        let z = in_box(&mut rng, 2.0);
        let zroots: Vec<Complex> = roots
            .iter()
            .filter_map(|&x| mobius_backward(&map, x).ok())
            .collect();
        let Ok(x) = mobius_forward(&map, z) else {
            continue;
        };
        if (z + map.c).norm() < 1e-2
            || min_distance(x, &roots) < 1e-2
            || min_distance(z, &zroots) < 1e-2
        {
            continue;
        }
        let got = mobius_newton_ratio_inverse(&p, &map, z).unwrap();
        worst_mobius = worst_mobius.max(rel(got, fd(&|t| mobius_eval(&p, &map, t).unwrap(), z)));

        let monic = poly(&roots, c(1.0, 0.0));
        let squares: Vec<Complex> = roots.iter().map(|x| x * x).collect();
        let y = in_box(&mut rng, 2.0);
        if y.norm() < 1e-2 || min_distance(y, &squares) < 1e-2 {
            continue;
        }
        let got = squared_newton_ratio_inverse(&monic, y).unwrap();
        worst_square = worst_square.max(rel(got, fd(&|t| squared_eval(&monic, t).unwrap(), y)));

        if z.norm() > 1e-2 && p.eval(c(1.0, 0.0) / z).unwrap().norm() > 1e-8 {
            let inv = c(1.0, 0.0) / z;
            let closed = d as f64 / z - p.newton_ratio_inverse(inv).unwrap() / (z * z);
            let got = mobius_newton_ratio_inverse(&p, &MobiusMap::reversion(), z).unwrap();
            worst_rev = worst_rev.max((got - closed).norm() / (1.0 + closed.norm()));
        }
        done += 1;
    }
    Outcome {
        pass: worst_mobius <= TRANSPORT_FD_TOL && worst_square <= TRANSPORT_FD_TOL && worst_rev <= REVERSION_TOL,
        detail: format!(
            "100 pairs: Mobius ratio vs FD {worst_mobius:.2e}, squared ratio vs FD {worst_square:.2e} (tol {TRANSPORT_FD_TOL:e}); reversion closed form {worst_rev:.2e} (tol {REVERSION_TOL:e})"
        ),
    }
}

fn root_recovery() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    let mut done = 0;
    while done < 50 {
        let roots = separated_roots(&mut rng, 8, 1.0, 0.1);
        let squares: Vec<Complex> = roots.iter().map(|x| x * x).collect();
        let distinct = squares
            .iter()
            .enumerate()
            .all(|(i, a)| squares[..i].iter().all(|b| (a - b).norm() > 1e-3));
        if !distinct {
            continue;
        }
        let p = poly(&roots, c(1.0, 0.0));
        let got: Vec<Complex> = recover_roots_from_squares(&p, &squares)
            .into_iter()
            .map(|r| r.root)
            .collect();
        worst = worst.max(max_pairing_error(&got, &roots));
        done += 1;
    }
    Outcome {
        pass: worst <= RECOVERY_TOL,
        detail: format!("50 instances, max error {worst:.2e} (tol {RECOVERY_TOL:e})"),
    }
}

fn determinism() -> Outcome {
    let p = poly(
        &[
            c(0.3, 0.9),
            c(-1.2, 0.1),
            c(0.7, -0.4),
            c(2.0, 0.5),
            c(-0.5, -1.5),
        ],
        c(1.5, 0.5),
    );
    let mut configs = Vec::new();
    for (method, deflation, map) in [
        (Method::Ehrlich, DeflationMode::None, MapSpec::None),
        (
            Method::Weierstrass,
            DeflationMode::Implicit,
            MapSpec::RandomMobius,
        ),
        (Method::Newton, DeflationMode::Explicit, MapSpec::Square),
        (Method::Newton, DeflationMode::Implicit, MapSpec::Reverse),
    ] {
        let mut cfg = JobConfig::new(InputSource::Text(String::new()), method);
        cfg.deflation = deflation;
        cfg.map = map;
        cfg.seed = 1234;
        cfg.parallel = method != Method::Newton;
        if method == Method::Newton {
            cfg.init = InitSpec::Circle {
                count: 7,
                center: c(0.1, 0.0),
                radius: 3.0,
            };
        }
        configs.push(cfg);
    }
    let mut identical = 0;
    for cfg in &configs {
        let a = run_polynomial(cfg, &p).unwrap().to_json();
        let b = run_polynomial(cfg, &p).unwrap().to_json();
        identical += usize::from(a == b);
    }
    Outcome {
        pass: identical == configs.len(),
        detail: format!(
            "{identical}/{} job configurations byte-identical on re-run",
            configs.len()
        ),
    }
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 efficiency constants", efficiency_constants, FAST),
        ("2 convergence orders", convergence_orders, FAST),
        ("3 one-step exactness", one_step_exactness, FAST),
        ("4 deflation identities", deflation_identities, FAST),
        ("5 end-to-end taming", end_to_end_taming, TAMING_LIMIT),
        ("6 map-transport oracles", map_transport, FAST),
        ("7 root recovery", root_recovery, FAST),
        ("8 determinism", determinism, FAST),
    ];
    let mut failed = 0;
    for (name, check, limit) in criteria {
        let started = Instant::now();
        let outcome = check();
        let elapsed = started.elapsed();
        let pass = outcome.pass && elapsed < limit;
        failed += usize::from(!pass);
        println!(
            "[{}] {name}: {} [{:.2}s, limit {}s]",
            if pass { "PASS" } else { "FAIL" },
            outcome.detail,
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
