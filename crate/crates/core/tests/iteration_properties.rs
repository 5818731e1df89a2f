mod common;

use common::*;
use polytame::deflation::implicit_newton_step_tallied;
use polytame::metrics::Tally;
use polytame::{
    ehrlich_step, explicit_deflate_all, implicit_ehrlich_step, implicit_newton_step,
    implicit_weierstrass_step, newton_step, secular_eval, secular_from_nodes, weierstrass_step,
    Complex, TameSet,
};
use proptest::prelude::*;

proptest! {
    #[test]
    fn exact_roots_are_fixed_points(roots in separated(2, 8, 1.0, 0.2), lead in leading()) {
        let p = from_roots(&roots, lead);
        for step in [weierstrass_step, ehrlich_step] {
            let next = step(&p, &roots).unwrap();
            for (a, b) in next.iter().zip(&roots) {
                prop_assert!((a - b).norm() <= 1e-13 * (1.0 + b.norm()));
            }
        }
        for &x in &roots {
            prop_assert!((newton_step(&p, x).unwrap() - x).norm() <= 1e-13 * (1.0 + x.norm()));
        }
    }

    #[test]
    fn jacobi_sweeps_commute_with_permutation(
        roots in separated(3, 8, 1.0, 0.2),
        lead in leading(),
        zs in separated(8, 8, 1.5, 0.05),
        shift in 1usize..7,
    ) {
        let p = from_roots(&roots, lead);
        let d = p.degree();
        let zs = &zs[..d];
        let perm: Vec<usize> = (0..d).map(|i| (i * (2 * shift + 1) + shift) % d).collect();
        prop_assume!({ let mut s = perm.clone(); s.sort(); s.dedup(); s.len() == d });
        let permuted: Vec<Complex> = perm.iter().map(|&i| zs[i]).collect();
        for step in [weierstrass_step, ehrlich_step] {
            let direct = step(&p, zs).unwrap();
            let via = step(&p, &permuted).unwrap();
            for (k, &i) in perm.iter().enumerate() {
                prop_assert_eq!(via[k], direct[i]);
            }
        }
    }

    #[test]
    fn secular_form_times_node_polynomial_is_p(
        roots in separated(2, 8, 1.0, 0.1),
        lead in leading(),
        nodes in separated(8, 8, 1.2, 0.05),
        z in point(1.5),
    ) {
        let p = from_roots(&roots, lead);
        let nodes = &nodes[..p.degree()];
        prop_assume!(min_distance(z, nodes) >= 1e-2);
        let s = secular_from_nodes(&p, nodes).unwrap();
        let l: Complex = nodes.iter().map(|&n| z - n).product();
        let lhs = secular_eval(&s, z).unwrap() * l;
        let rhs = p.eval(z).unwrap();
        prop_assert!(rel_err(lhs, rhs) <= 1e-8, "{lhs} vs {rhs}");
    }
}

/// Splits sampled roots into `(tame, wild)` with at least one wild root.
fn split(roots: &[Complex], tame_count: usize) -> (Vec<Complex>, Vec<Complex>) {
    let t = tame_count.min(roots.len() - 1);
    (roots[..t].to_vec(), roots[t..].to_vec())
}

proptest! {
    #[test]
    fn implicit_newton_matches_explicit_quotient(
        roots in separated(2, 10, 1.0, 0.1),
        lead in leading(),
        tame_count in 1usize..9,
        z in point(1.5),
    ) {
        let (tame, wild) = split(&roots, tame_count);
        prop_assume!(min_distance(z, &roots) >= 1e-2);
        let p = from_roots(&roots, lead);
        let q = from_roots(&wild, lead);
        let (qz, dqz) = q.eval_with_derivative(z).unwrap();
        prop_assume!(dqz.norm() > 1e-8);
        let explicit = qz / dqz;
        let implicit = z - implicit_newton_step(&p, &TameSet::new(tame), z, true).unwrap();
        prop_assert!((implicit - explicit).norm() <= 1e-9 * implicit.norm().max(explicit.norm()) + 1e-15);
    }

    #[test]
    fn scaled_and_unscaled_forms_agree(
        roots in separated(2, 10, 1.0, 0.1),
        lead in leading(),
        tame_count in 1usize..9,
        z in point(1.5),
    ) {
        let (tame, _) = split(&roots, tame_count);
        prop_assume!(min_distance(z, &roots) >= 1e-2);
        let p = from_roots(&roots, lead);
        let r = p.newton_ratio_inverse(z).unwrap();
        let s: Complex = tame.iter().map(|&x| Complex::new(1.0, 0.0) / (z - x)).sum();
        prop_assume!((s / r).norm() <= 0.9);
        let tame = TameSet::new(tame);
        let a = z - implicit_newton_step(&p, &tame, z, true).unwrap();
        let b = z - implicit_newton_step(&p, &tame, z, false).unwrap();
        prop_assert!(rel_err(a, b) <= 1e-12);
    }

    #[test]
    fn frozen_node_sweeps_match_quotient_sweeps(
        roots in separated(3, 12, 1.0, 0.1),
        lead in leading(),
        tame_count in 1usize..11,
        offsets in prop::collection::vec(point(0.05), 12),
    ) {
        let (tame, wild) = split(&roots, tame_count);
        let p = from_roots(&roots, lead);
        let q = from_roots(&wild, lead);
        let zs: Vec<Complex> = wild.iter().zip(&offsets).map(|(x, o)| x + o).collect();
        let tame = TameSet::new(tame);
        for (implicit, plain) in [
            (implicit_weierstrass_step(&p, &tame, &zs).unwrap(), weierstrass_step(&q, &zs).unwrap()),
            (implicit_ehrlich_step(&p, &tame, &zs).unwrap(), ehrlich_step(&q, &zs).unwrap()),
        ] {
            for k in 0..zs.len() {
                let (ci, cp) = (zs[k] - implicit[k], zs[k] - plain[k]);
                prop_assert!((ci - cp).norm() <= 1e-9 * cp.norm().max(ci.norm()) + 1e-15, "{ci} vs {cp}");
            }
        }
    }

    #[test]
    fn empty_tame_set_is_bit_identical(roots in separated(2, 8, 1.0, 0.1), lead in leading(), offsets in prop::collection::vec(point(0.05), 8)) {
        let p = from_roots(&roots, lead);
        let zs: Vec<Complex> = roots.iter().zip(&offsets).map(|(x, o)| x + o).collect();
        let empty = TameSet::default();
        prop_assert_eq!(implicit_weierstrass_step(&p, &empty, &zs).unwrap(), weierstrass_step(&p, &zs).unwrap());
        prop_assert_eq!(implicit_ehrlich_step(&p, &empty, &zs).unwrap(), ehrlich_step(&p, &zs).unwrap());
        for &z in &zs {
            prop_assert_eq!(implicit_newton_step(&p, &empty, z, true).unwrap(), newton_step(&p, z).unwrap());
            prop_assert_eq!(implicit_newton_step(&p, &empty, z, false).unwrap(), newton_step(&p, z).unwrap());
        }
    }

    #[test]
    fn linear_quotient_is_solved_in_one_step(
        roots in separated(2, 10, 1.0, 0.1),
        lead in leading(),
        z in point(2.0),
    ) {
        let (tame, wild) = split(&roots, roots.len() - 1);
        prop_assume!(min_distance(z, &tame) >= 0.1);
        let p = from_roots(&roots, lead);
        let next = implicit_newton_step(&p, &TameSet::new(tame), z, true).unwrap();
        prop_assert!((next - wild[0]).norm() <= 1e-10, "{next} vs {}", wild[0]);
    }

    #[test]
    fn newton_work_grows_with_tame_count(roots in separated(3, 10, 1.0, 0.1), lead in leading(), z in point(1.5)) {
        prop_assume!(min_distance(z, &roots) >= 1e-2);
        let p = from_roots(&roots, lead);
        for t in 0..roots.len() {
            let mut tally = Tally::default();
            implicit_newton_step_tallied(&p, &TameSet::new(roots[..t].to_vec()), z, true, &mut tally).unwrap();
            let expected_evals = if t == 0 { 2 } else { 3 };
            prop_assert_eq!(tally.evaluations, expected_evals);
            prop_assert_eq!(tally.divisions, t as u64);
        }
    }
}

#[test]
fn explicit_comparator_on_roots_of_unity() {
    let d = 50;
    let mut coeffs = vec![c(0.0, 0.0); d + 1];
    coeffs[0] = c(-1.0, 0.0);
    coeffs[d] = c(1.0, 0.0);
    let p = polytame::Polynomial::new(coeffs).unwrap();
    let roots: Vec<Complex> = (0..d)
        .map(|k| Complex::from_polar(1.0, std::f64::consts::TAU * k as f64 / d as f64))
        .collect();
    let (q, remainders) = explicit_deflate_all(&p, &roots[..25]).unwrap();
    assert_eq!(q.degree(), 25);
    assert_eq!(remainders.len(), 25);
    let worst = roots[25..]
        .iter()
        .map(|&x| q.eval(x).unwrap().norm())
        .fold(0.0, f64::max);
    assert!(worst.is_finite());
}
