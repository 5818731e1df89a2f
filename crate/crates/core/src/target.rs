//! Functions whose roots the iterations chase.
//!
//! A [`RootTarget`] is anything with a polynomial root structure that can be
//! sampled pointwise: the input polynomial itself, or the same polynomial seen
//! through a variable map (see [`crate::maps`]). Iterations never need
//! coefficients, only values and logarithmic derivatives.

use crate::error::{finite, Result};
use crate::poly::Polynomial;
use crate::Complex;

/// Unit cost of a single function value.
pub const VALUE_COST: u64 = 1;
/// A value plus a derivative costs two units.
pub const VALUE_AND_DERIVATIVE_COST: u64 = 2;
/// A node sum such as `sum 1/(z - z_j)` or the product `l'(z_i)` costs one unit.
pub const NODE_SUM_COST: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub value: Complex,
    /// `|p(x)|` for the original polynomial at the point corresponding to `z`.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogSample {
    pub value: Complex,
    /// `f'(z) / f(z)`; `None` when `f(z) = 0`.
    pub log_derivative: Option<Complex>,
    pub residual: f64,
}

pub trait RootTarget: Sync {
    fn degree(&self) -> usize;

    /// Leading coefficient of the (possibly never expanded) polynomial.
    fn leading(&self) -> Complex;

    fn sample(&self, z: Complex) -> Result<Sample>;

    fn sample_with_log_derivative(&self, z: Complex) -> Result<LogSample>;
}

impl RootTarget for Polynomial {
    fn degree(&self) -> usize {
        Polynomial::degree(self)
    }

    fn leading(&self) -> Complex {
        Polynomial::leading(self)
    }

    fn sample(&self, z: Complex) -> Result<Sample> {
        let value = self.eval(z)?;
        Ok(Sample {
            value,
            residual: value.norm(),
        })
    }

    fn sample_with_log_derivative(&self, z: Complex) -> Result<LogSample> {
        let (value, deriv) = self.eval_with_derivative(z)?;
        let log_derivative = if value == Complex::new(0.0, 0.0) {
            None
        } else {
            Some(finite(deriv / value)?)
        };
        Ok(LogSample {
            value,
            log_derivative,
            residual: value.norm(),
        })
    }
}
