//! Implicit deflation of tame roots, and explicit synthetic division as a comparator.
//!
//! Given tame roots `x_{w+1}, ..., x_d`, the quotient `q(x) = p(x) / t(x)` with
//! `t(x) = p_d prod (x - x_j)` is never formed. Its logarithmic derivative is
//! `p'/p - sum 1/(x - x_j)`, and Weierstrass and Ehrlich corrections of `q`
//! coincide with those of `p` over the node set extended by the tame roots.

use crate::error::{Error, Result};
use crate::iterations::{newton_correction, simultaneous_sweep, Method, UpdateOrder};
use crate::metrics::Tally;
use crate::poly::Polynomial;
use crate::target::RootTarget;
use crate::Complex;

/// Accepted approximations of already-found roots.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TameSet {
    pub roots: Vec<Complex>,
}

impl TameSet {
    pub fn new(roots: Vec<Complex>) -> Self {
        TameSet { roots }
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// Number of wild roots left for a polynomial of degree `degree`.
    pub fn wild_count(&self, degree: usize) -> Result<usize> {
        match degree.checked_sub(self.len()) {
            Some(w) if w >= 1 => Ok(w),
            _ => Err(Error::Precondition(format!(
                "{} tame roots leave no wild root for degree {degree}",
                self.len()
            ))),
        }
    }
}

/// One Newton step on the implicit quotient: `z - N_q(z)`.
///
/// `scaled` selects `(1/r) / (1 - s/r)` over `1 / (r - s)`; both equal `N_q(z)`.
pub fn implicit_newton_step<T: RootTarget + ?Sized>(
    target: &T,
    tame: &TameSet,
    z: Complex,
    scaled: bool,
) -> Result<Complex> {
    implicit_newton_step_tallied(target, tame, z, scaled, &mut Tally::default())
}

/// [`implicit_newton_step`] that also reports its work.
pub fn implicit_newton_step_tallied<T: RootTarget + ?Sized>(
    target: &T,
    tame: &TameSet,
    z: Complex,
    scaled: bool,
    tally: &mut Tally,
) -> Result<Complex> {
    tame.wild_count(target.degree())?;
    let c = newton_correction(target, z, &tame.roots, scaled, tally)?;
    Ok(z - c.delta)
}

/// Weierstrass sweep over `zs ∪ tame` that updates only the wild entries `zs`.
pub fn implicit_weierstrass_step<T: RootTarget + ?Sized>(
    target: &T,
    tame: &TameSet,
    zs: &[Complex],
) -> Result<Vec<Complex>> {
    simultaneous_sweep(
        target,
        Method::Weierstrass,
        zs,
        &tame.roots,
        UpdateOrder::Jacobi,
    )
}

/// Ehrlich sweep whose node sums run over the other wild and all tame nodes.
pub fn implicit_ehrlich_step<T: RootTarget + ?Sized>(
    target: &T,
    tame: &TameSet,
    zs: &[Complex],
) -> Result<Vec<Complex>> {
    simultaneous_sweep(
        target,
        Method::Ehrlich,
        zs,
        &tame.roots,
        UpdateOrder::Jacobi,
    )
}

/// Quotient of synthetic division by `(x - root)` and the discarded remainder `p(root)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Deflated {
    pub quotient: Polynomial,
    pub remainder: Complex,
}

pub fn explicit_deflate(p: &Polynomial, root: Complex) -> Result<Deflated> {
    let d = p.degree();
    if d < 2 {
        return Err(Error::Precondition(
            "explicit deflation needs degree at least 2".into(),
        ));
    }
    let coeffs = p.coeffs();
    let mut quotient = vec![Complex::new(0.0, 0.0); d];
    let mut acc = coeffs[d];
    for k in (0..d).rev() {
        quotient[k] = acc;
        acc = coeffs[k] + root * acc;
    }
    Ok(Deflated {
        quotient: Polynomial::new(quotient)?,
        remainder: acc,
    })
}

/// Deflates `p` by every root in turn. Remainders are returned in order.
pub fn explicit_deflate_all(
    p: &Polynomial,
    roots: &[Complex],
) -> Result<(Polynomial, Vec<Complex>)> {
    let mut current = p.clone();
    let mut remainders = Vec::with_capacity(roots.len());
    for &root in roots {
        let Deflated {
            quotient,
            remainder,
        } = explicit_deflate(&current, root)?;
        current = quotient;
        remainders.push(remainder);
    }
    Ok((current, remainders))
}
