//! Dense complex polynomials: evaluation, derivatives, root bounds.

use serde::{Deserialize, Serialize};

use crate::error::{finite, Error, Result};
use crate::Complex;

/// A polynomial `p_0 + p_1 x + ... + p_d x^d` with `d >= 1` and `p_d != 0`.
///
/// Coefficients are stored lowest degree first and are always finite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polynomial {
    coeffs: Vec<Complex>,
}

/// Roots together with a leading coefficient: `leading * prod (x - roots[j])`.
#[derive(Debug, Clone, PartialEq)]
pub struct RootList {
    pub roots: Vec<Complex>,
    pub leading: Complex,
}

impl RootList {
    pub fn monic(roots: Vec<Complex>) -> Self {
        RootList {
            roots,
            leading: Complex::new(1.0, 0.0),
        }
    }
}

/// Result of [`Polynomial::normalize_into_unit_disc`]: `poly(x) = p(scale * x + shift)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Normalized {
    pub poly: Polynomial,
    pub scale: Complex,
    pub shift: Complex,
}

impl Normalized {
    /// Maps a root of the normalized polynomial back to the original variable.
    pub fn to_original(&self, x: Complex) -> Complex {
        self.scale * x + self.shift
    }

    pub fn from_original(&self, x: Complex) -> Complex {
        (x - self.shift) / self.scale
    }
}

impl Polynomial {
    /// Builds a polynomial from coefficients listed lowest degree first.
    pub fn new(coeffs: Vec<Complex>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::InvalidPolynomial(format!(
                "degree must be at least 1, got {} coefficient(s)",
                coeffs.len()
            )));
        }
        if let Some(j) = coeffs
            .iter()
            .position(|c| !(c.re.is_finite() && c.im.is_finite()))
        {
            return Err(Error::InvalidPolynomial(format!(
                "coefficient {j} is not finite"
            )));
        }
        if coeffs[coeffs.len() - 1] == Complex::new(0.0, 0.0) {
            return Err(Error::InvalidPolynomial(
                "leading coefficient is zero".into(),
            ));
        }
        Ok(Polynomial { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex::new(c, 0.0)).collect())
    }

    /// Expands `leading * prod (x - x_j)` by repeated multiplication with linear factors.
    pub fn from_roots(roots: &RootList) -> Result<Self> {
        if roots.roots.is_empty() {
            return Err(Error::Precondition(
                "root list must contain at least one root".into(),
            ));
        }
        if roots.leading == Complex::new(0.0, 0.0) {
            return Err(Error::Precondition("leading coefficient is zero".into()));
        }
        let mut coeffs = vec![roots.leading];
        for &root in &roots.roots {
            coeffs.push(Complex::new(0.0, 0.0));
            for k in (1..coeffs.len()).rev() {
                coeffs[k] = coeffs[k - 1] - root * coeffs[k];
            }
            coeffs[0] = -root * coeffs[0];
        }
        Self::new(coeffs)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex] {
        &self.coeffs
    }

    pub fn leading(&self) -> Complex {
        self.coeffs[self.degree()]
    }

    pub fn max_coeff_modulus(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Divides every coefficient by the leading one.
    pub fn monic(&self) -> Polynomial {
        let lead = self.leading();
        Polynomial {
            coeffs: self.coeffs.iter().map(|&c| c / lead).collect(),
        }
    }

    pub fn is_monic(&self, tol: f64) -> bool {
        (self.leading() - Complex::new(1.0, 0.0)).norm() <= tol
    }

    /// Horner evaluation of `p(z)`.
    pub fn eval(&self, z: Complex) -> Result<Complex> {
        let mut acc = self.leading();
        for &c in self.coeffs.iter().rev().skip(1) {
            acc = acc * z + c;
        }
        finite(acc)
    }

    /// `(p(z), p'(z))` in a single Horner pass.
    pub fn eval_with_derivative(&self, z: Complex) -> Result<(Complex, Complex)> {
        let mut value = self.leading();
        let mut deriv = Complex::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev().skip(1) {
            deriv = deriv * z + value;
            value = value * z + c;
        }
        Ok((finite(value)?, finite(deriv)?))
    }

    /// The logarithmic derivative `p'(z) / p(z)`, i.e. `1 / N_p(z)`.
    pub fn newton_ratio_inverse(&self, z: Complex) -> Result<Complex> {
        let (value, deriv) = self.eval_with_derivative(z)?;
        if value == Complex::new(0.0, 0.0) {
            return Err(Error::AtRoot);
        }
        finite(deriv / value)
    }

    /// Cauchy bound `1 + max_{j<d} |p_j / p_d|`; every root lies strictly inside it.
    pub fn root_radius_bound(&self) -> f64 {
        let lead = self.leading().norm();
        1.0 + self.coeffs[..self.degree()]
            .iter()
            .map(|c| c.norm() / lead)
            .fold(0.0, f64::max)
    }

    /// Rescales the variable so that all roots move into the open unit disc.
    pub fn normalize_into_unit_disc(&self) -> Result<Normalized> {
        let bound = self.root_radius_bound();
        let scale = Complex::new(bound, 0.0);
        let mut power = Complex::new(1.0, 0.0);
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for &c in &self.coeffs {
            coeffs.push(finite(c * power)?);
            power *= scale;
        }
        Ok(Normalized {
            poly: Polynomial::new(coeffs)?,
            scale,
            shift: Complex::new(0.0, 0.0),
        })
    }

    /// Independent Horner evaluation at every point.
    pub fn multipoint_eval(&self, points: &[Complex]) -> Result<Vec<Complex>> {
        points.iter().map(|&z| self.eval(z)).collect()
    }
}
