#![allow(dead_code)]

use polytame::{Complex, Polynomial, RootList};
use proptest::prelude::*;

pub fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

pub fn point(radius: f64) -> impl Strategy<Value = Complex> {
    (-radius..radius, -radius..radius).prop_map(|(re, im)| c(re, im))
}

/// Between `min` and `max` points in the square of half-width `radius`, pairwise at least `sep` apart.
pub fn separated(
    min: usize,
    max: usize,
    radius: f64,
    sep: f64,
) -> impl Strategy<Value = Vec<Complex>> {
    prop::collection::vec(point(radius), 4 * max).prop_filter_map(
        "too few separated points",
        move |cands| {
            let mut out: Vec<Complex> = Vec::new();
            for z in cands {
                if out.len() == max {
                    break;
                }
                if out.iter().all(|w| (w - z).norm() >= sep) {
                    out.push(z);
                }
            }
            (out.len() >= min).then_some(out)
        },
    )
}

pub fn leading() -> impl Strategy<Value = Complex> {
    (0.5..2.0f64, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| Complex::from_polar(r, t))
}

pub fn from_roots(roots: &[Complex], lead: Complex) -> Polynomial {
    Polynomial::from_roots(&RootList {
        roots: roots.to_vec(),
        leading: lead,
    })
    .unwrap()
}

/// `sum_j c_j z^j` with explicit powers.
pub fn monomial_sum(p: &Polynomial, z: Complex) -> Complex {
    p.coeffs()
        .iter()
        .enumerate()
        .map(|(j, &cj)| cj * z.powu(j as u32))
        .sum()
}

pub fn min_distance(z: Complex, set: &[Complex]) -> f64 {
    set.iter()
        .map(|w| (z - w).norm())
        .fold(f64::INFINITY, f64::min)
}

/// Central difference of `log f` at `z` along the real direction.
pub fn fd_log_derivative(f: impl Fn(Complex) -> Complex, z: Complex) -> Complex {
    let h = 1e-6 * (1.0 + z.norm());
    let hc = c(h, 0.0);
    (f(z + hc) - f(z - hc)) / (hc * 2.0 * f(z))
}

pub fn rel_err(a: Complex, b: Complex) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}
