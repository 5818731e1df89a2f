//! Pairing computed roots with reference roots.

use crate::Complex;

/// Greedy minimum-distance pairing: repeatedly matches the closest remaining
/// (computed, reference) pair. Returns, for each computed root, the index of
/// its reference partner and the distance, or `None` when references ran out.
pub fn greedy_pairing(computed: &[Complex], reference: &[Complex]) -> Vec<Option<(usize, f64)>> {
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(computed.len() * reference.len());
    for (i, z) in computed.iter().enumerate() {
        for (j, r) in reference.iter().enumerate() {
            pairs.push(((z - r).norm(), i, j));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut out = vec![None; computed.len()];
    let mut used = vec![false; reference.len()];
    for (dist, i, j) in pairs {
        if out[i].is_none() && !used[j] {
            out[i] = Some((j, dist));
            used[j] = true;
        }
    }
    out
}

/// Largest pairing distance; infinite when some computed root is unpaired.
pub fn max_pairing_error(computed: &[Complex], reference: &[Complex]) -> f64 {
    greedy_pairing(computed, reference)
        .into_iter()
        .map(|p| p.map_or(f64::INFINITY, |(_, d)| d))
        .fold(0.0, f64::max)
}
