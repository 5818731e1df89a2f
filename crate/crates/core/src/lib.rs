//! Polynomial root-finding by functional iterations.
//!
//! The crate provides Newton, Weierstrass (Durand–Kerner) and Ehrlich
//! (Aberth) iterations over complex polynomials, implicit deflation of roots
//! that have already been found, and variable maps (Möbius, reversion, root
//! squaring) that are evaluated pointwise and never expanded.
//!
//! ```
//! use polytame::{circle_init, run, Complex, Method, Polynomial, RunOptions, StoppingCriterion};
//!
//! let p = Polynomial::from_real(&[-1.0, 0.0, 0.0, 1.0]).unwrap();
//! let init = circle_init(3, Complex::new(0.0, 0.0), p.root_radius_bound()).unwrap();
//! let report = run(&p, &init, &StoppingCriterion::default(), &RunOptions::new(Method::Ehrlich)).unwrap();
//! assert!(report.all_converged());
//! ```

pub mod deflation;
pub mod error;
pub mod iterations;
pub mod maps;
pub mod matching;
pub mod metrics;
pub mod poly;
pub mod target;

pub use num_complex::Complex64 as Complex;

pub use deflation::{
    explicit_deflate, explicit_deflate_all, implicit_ehrlich_step, implicit_newton_step,
    implicit_weierstrass_step, TameSet,
};
pub use error::{Error, Result};
pub use iterations::{
    circle_init, ehrlich_step, newton_step, run, secular_eval, secular_from_nodes,
    simultaneous_sweep, weierstrass_step, Method, RunOptions, SecularForm, StoppingCriterion,
    UpdateOrder,
};
pub use maps::{
    choose_map_into_unit_disc, mapped_newton_run, mobius_backward, mobius_eval, mobius_forward,
    mobius_newton_ratio_inverse, mobius_run, recover_roots_from_squares, squared_eval,
    squared_newton_ratio_inverse, squared_newton_run, MobiusMap,
};
pub use metrics::{efficiency, estimate_order, RootReport, RunReport};
pub use poly::{Polynomial, RootList};
pub use target::RootTarget;
