use crate::error::{finite, Error, Result};
use crate::poly::Polynomial;
use crate::Complex;

use super::collide;

/// Secular (Lagrange) representation `s(x) = p(x) / l(x)` of a polynomial
/// relative to distinct nodes, with `l(x) = prod (x - nodes[i])`.
#[derive(Debug, Clone, PartialEq)]
pub struct SecularForm {
    pub nodes: Vec<Complex>,
    /// Weierstrass corrections `p(z_i) / (p_d l'(z_i))` at the nodes.
    pub weights: Vec<Complex>,
    pub leading: Complex,
}

pub fn secular_from_nodes(p: &Polynomial, nodes: &[Complex]) -> Result<SecularForm> {
    if nodes.len() != p.degree() {
        return Err(Error::Precondition(format!(
            "need {} nodes, got {}",
            p.degree(),
            nodes.len()
        )));
    }
    let lead = p.leading();
    let mut weights = Vec::with_capacity(nodes.len());
    for (i, &zi) in nodes.iter().enumerate() {
        let mut denom = lead;
        for (j, &zj) in nodes.iter().enumerate() {
            if j == i {
                continue;
            }
            if collide(zi, zj) {
                return Err(Error::CoincidentNodes {
                    first: i.min(j),
                    second: i.max(j),
                });
            }
            denom *= zi - zj;
        }
        weights.push(finite(p.eval(zi)? / denom)?);
    }
    Ok(SecularForm {
        nodes: nodes.to_vec(),
        weights,
        leading: lead,
    })
}

/// `s(z) = p_d (1 + sum_i w_i / (z - z_i))`, so that `l(z) s(z) = p(z)`.
pub fn secular_eval(s: &SecularForm, z: Complex) -> Result<Complex> {
    let mut acc = Complex::new(1.0, 0.0);
    for (&node, &w) in s.nodes.iter().zip(&s.weights) {
        if z == node {
            return Err(Error::AtNode);
        }
        acc += w / (z - node);
    }
    finite(s.leading * acc)
}
