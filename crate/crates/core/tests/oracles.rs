//! Results checked against oracles that share no code path with the library routine under test.

use gpt_kit::composites::{remote_evaluate, tripartite_partial_contraction, BipartiteEffect, BipartiteState};
use gpt_kit::maps::verify_self_duality_witness;
use gpt_kit::models;
use gpt_kit::protocols::{
    bc_cheat_bound, construct_deterministic_teleportation, find_double_decomposition, nondisturbing_basis,
    self_duality_witness, verify_correction_free, verify_teleportation, SymmetryWitness,
};
use gpt_kit::scalar::dot;
use gpt_kit::{Matrix, Rational, Scalar, StateSpace};

type Q = Rational;

fn q(n: i64, d: i64) -> Q {
    Q::from_ratio(n, d)
}

/// Dimension of `{T : T g_k = c_k g_k for all rays}` from the nullspace of the
/// stacked linear system in the unknowns `(vec T, c)`.
fn fixing_map_dimension<S: Scalar>(space: &StateSpace<S>, eps: f64) -> usize {
    let rays = space.cone().generators().unwrap();
    let d = space.dim();
    let m = rays.len();
    let mut rows = Vec::new();
    for (k, g) in rays.iter().enumerate() {
        for i in 0..d {
            let mut row = vec![S::zero(); d * d + m];
            for j in 0..d {
                row[i * d + j] = g[j].clone();
            }
            row[d * d + k] = -g[i].clone();
            rows.push(row);
        }
    }
    let null = Matrix::from_rows(&rows).unwrap().nullspace(eps);
    let projected: Vec<Vec<S>> = null.iter().map(|v| v[..d * d].to_vec()).collect();
    gpt_kit::linalg::rank_of(&projected, eps)
}

#[test]
fn nondisturbing_span_matches_summands() {
    let c3 = models::classical::<Q>(3).unwrap();
    let sum = models::direct_sum(&models::squit::<Q>(), &models::classical(1).unwrap()).unwrap();
    assert_eq!(fixing_map_dimension(&c3, 0.0), 3);
    assert_eq!(nondisturbing_basis(&c3).unwrap().len(), 3);
    assert_eq!(fixing_map_dimension(&sum, 0.0), 2);
    assert_eq!(nondisturbing_basis(&sum).unwrap().len(), 2);
    let p5 = models::polygon::<f64>(5).unwrap();
    assert_eq!(fixing_map_dimension(&p5, 1e-9), 1);
    assert_eq!(nondisturbing_basis(&p5).unwrap().len(), 1);
}

/// Affine function `a·(x, y, 1)` on the square's plane.
fn affine(a: &[Q]) -> [Q; 3] {
    [a[0].clone(), a[1].clone(), a[2].clone()]
}

fn meet(l1: &[Q; 3], l2: &[Q; 3]) -> Option<(Q, Q)> {
    let det = l1[0].clone() * l2[1].clone() - l1[1].clone() * l2[0].clone();
    if det == Q::zero() {
        return None;
    }
    let x = (l1[1].clone() * l2[2].clone() - l1[2].clone() * l2[1].clone()) / det.clone();
    let y = (l1[2].clone() * l2[0].clone() - l1[0].clone() * l2[2].clone()) / det;
    Some((x, y))
}

#[test]
fn square_cheat_bound_by_arrangement_vertices() {
    let s = models::squit::<Q>();
    let dd = find_double_decomposition(&s).unwrap();
    let f0: Vec<[Q; 3]> = dd.distinguishers0.iter().map(|a| affine(a)).collect();
    let f1: Vec<[Q; 3]> = dd.distinguishers1.iter().map(|a| affine(a)).collect();
    let objective = |x: &Q, y: &Q| {
        let eval = |a: &[Q; 3]| a[0].clone() * x.clone() + a[1].clone() * y.clone() + a[2].clone();
        let m0 = f0.iter().map(eval).fold(Q::from_int(-10), |m, v| if v > m { v } else { m });
        let m1 = f1.iter().map(eval).fold(Q::from_int(-10), |m, v| if v > m { v } else { m });
        if m0 < m1 {
            m0
        } else {
            m1
        }
    };
    // Edges of the square and every break line where two of the functions agree.
    let mut lines: Vec<[Q; 3]> = s.cone().facets().unwrap().iter().map(|f| affine(f)).collect();
    let all: Vec<&[Q; 3]> = f0.iter().chain(&f1).collect();
    for i in 0..all.len() {
        for j in i + 1..all.len() {
            lines.push([
                all[i][0].clone() - all[j][0].clone(),
                all[i][1].clone() - all[j][1].clone(),
                all[i][2].clone() - all[j][2].clone(),
            ]);
        }
    }
    let inside = |x: &Q, y: &Q| x.abs() <= Q::one() && y.abs() <= Q::one();
    let mut best = Q::zero();
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            if let Some((x, y)) = meet(&lines[i], &lines[j]) {
                if inside(&x, &y) {
                    let v = objective(&x, &y);
                    if v > best {
                        best = v;
                    }
                }
            }
        }
    }
    assert_eq!(best, q(3, 4));
    let bound = bc_cheat_bound(&s, &dd, 20).unwrap();
    assert_eq!(bound.per_round, best);
    assert!((bound.overall.to_f64() - 0.75f64.powi(20)).abs() < 1e-15);
    assert!((bound.overall.to_f64() - 3.17e-3).abs() < 1e-5);
}

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Smallest `|X0| + |X1|` over disjoint vertex sets of a strictly convex
/// polygon with meeting hulls: single points never meet, a vertex never lies
/// in the hull of others, so the first candidates are crossing diagonals.
fn polygon_min_decomposition(points: &[(f64, f64)]) -> usize {
    let n = points.len();
    for a in 0..n {
        for b in a + 1..n {
            for c in 0..n {
                for d in c + 1..n {
                    if [c, d].iter().any(|x| *x == a || *x == b) {
                        continue;
                    }
                    let (p, r, s, t) = (points[a], points[b], points[c], points[d]);
                    let d1 = cross(p, r, s);
                    let d2 = cross(p, r, t);
                    let d3 = cross(s, t, p);
                    let d4 = cross(s, t, r);
                    if d1 * d2 < 0.0 && d3 * d4 < 0.0 {
                        return 4;
                    }
                }
            }
        }
    }
    usize::MAX
}

#[test]
fn double_decompositions_are_minimal() {
    let s = models::squit::<Q>();
    let dd = find_double_decomposition(&s).unwrap();
    assert!(dd.validate(&s).unwrap());
    let mix0: Vec<Q> = dd.branch0.iter().fold(vec![Q::zero(); 3], |acc, w| {
        acc.iter().zip(&w.state).map(|(a, x)| a.clone() + w.probability.clone() * x.clone()).collect()
    });
    let mix1: Vec<Q> = dd.branch1.iter().fold(vec![Q::zero(); 3], |acc, w| {
        acc.iter().zip(&w.state).map(|(a, x)| a.clone() + w.probability.clone() * x.clone()).collect()
    });
    assert_eq!(mix0, mix1);
    assert_eq!(mix0, vec![Q::zero(), Q::zero(), Q::one()]);
    let square = [(1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0), (1.0, -1.0)];
    assert_eq!(dd.size(), polygon_min_decomposition(&square));
    for n in [5usize, 6, 8] {
        let p = models::polygon::<f64>(n).unwrap();
        let dd = find_double_decomposition(&p).unwrap();
        assert!(dd.validate(&p).unwrap());
        let pts: Vec<(f64, f64)> = p.pure_states().unwrap().iter().map(|v| (v[0], v[1])).collect();
        assert_eq!(dd.size(), polygon_min_decomposition(&pts), "n = {n}");
    }
}

#[test]
fn distinguisher_of_v1_vanishes_on_v3() {
    let s = models::squit::<Q>();
    let dd = find_double_decomposition(&s).unwrap();
    assert_eq!(dot(&dd.distinguishers0[0], &dd.branch0[1].state), Q::zero());
}

/// `μ e_k` by contracting the tripartite tensor, independent of the operator views.
fn mu_by_contraction(dim: usize, f: &BipartiteEffect<Q>, omega: &BipartiteState<Q>) -> Matrix<Q> {
    let cols: Vec<Vec<Q>> = (0..dim)
        .map(|k| {
            let mut e = vec![Q::zero(); dim];
            e[k] = Q::one();
            tripartite_partial_contraction(&e, omega, f).unwrap()
        })
        .collect();
    Matrix::from_columns(&cols).unwrap()
}

#[test]
fn teleportation_maps_agree_with_contraction() {
    for n in 2..5 {
        let c = models::classical::<Q>(n).unwrap();
        let f = BipartiteEffect::new(Matrix::identity(n));
        let omega = BipartiteState::new(Matrix::identity(n).scaled(&q(1, n as i64)));
        let cert = verify_teleportation(&c, &c, &f, &omega).unwrap();
        assert_eq!(cert.mu.matrix(), &mu_by_contraction(n, &f, &omega));
        assert_eq!(cert.mu.matrix(), &Matrix::identity(n).scaled(&q(1, n as i64)));
    }
    let s = models::squit::<Q>();
    let t = construct_deterministic_teleportation(&s, &SymmetryWitness::polygon(4).unwrap()).unwrap();
    for (f, cert) in t.observable.iter().zip(&t.certificates) {
        assert_eq!(cert.mu.matrix(), &mu_by_contraction(3, f, &t.omega));
    }
}

#[test]
fn every_successful_teleportation_gives_a_self_duality_witness() {
    let s = models::squit::<Q>();
    let t = construct_deterministic_teleportation(&s, &SymmetryWitness::polygon(4).unwrap()).unwrap();
    for cert in &t.certificates {
        let w = self_duality_witness(cert, &t.omega, 0.0).unwrap();
        assert!(verify_self_duality_witness(&s, &w).unwrap());
    }
    for n in [3usize, 5, 6] {
        let p = models::polygon::<f64>(n).unwrap();
        let t = construct_deterministic_teleportation(&p, &SymmetryWitness::polygon(n).unwrap()).unwrap();
        for cert in &t.certificates {
            let w = self_duality_witness(cert, &t.omega, 1e-9).unwrap();
            assert!(verify_self_duality_witness(&p, &w).unwrap());
        }
    }
}

#[test]
fn correction_free_protocols_return_the_input() {
    let s = models::squit::<Q>();
    let t = construct_deterministic_teleportation(&s, &SymmetryWitness::polygon(4).unwrap()).unwrap();
    let c3 = models::classical::<Q>(3).unwrap();
    let f3 = BipartiteEffect::new(Matrix::identity(3));
    let w3 = BipartiteState::new(Matrix::identity(3).scaled(&q(1, 3)));
    let cases = [(&s, &t.observable[0], &t.omega), (&c3, &f3, &w3)];
    for (space, f, omega) in cases {
        assert!(verify_correction_free(space, space, f, omega).unwrap());
        for alpha in space.pure_states().unwrap() {
            let r = remote_evaluate((space, space, space), &alpha, omega, f).unwrap();
            assert_eq!(r.normalized.unwrap(), alpha);
        }
    }
    assert!(!verify_correction_free(&s, &s, &t.observable[1], &t.omega).unwrap());
}
