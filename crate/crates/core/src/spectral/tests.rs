use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::complex::{complete_complex, spherical_building, ComplexBuilder, EdgeId, MeasureSpec};

fn graph(n: usize, edges: &[(usize, usize)]) -> Complex {
    let mut b = ComplexBuilder::new(n);
    for &(u, v) in edges {
        b.edge(u, v);
    }
    b.build().unwrap()
}

fn cycle(n: usize) -> Complex {
    graph(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>())
}

/// A connected graph on `n` vertices with random integer edge weights and
/// the vertex measure descending from them.
fn random_weighted(n: usize, rng: &mut impl Rng) -> Complex {
    let mut b = ComplexBuilder::new(n);
    for v in 1..n {
        b.edge(rng.random_range(0..v), v);
    }
    for _ in 0..rng.random_range(0..2 * n) {
        let (u, v) = (rng.random_range(0..n), rng.random_range(0..n));
        if u != v {
            b.edge(u, v);
        }
    }
    let w = (0..b.n_edges()).map(|_| rng.random_range(1..10)).collect();
    b.build_with([MeasureSpec::Descending, MeasureSpec::Weights(w), MeasureSpec::Uniform]).unwrap()
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() < 1e-10
}

#[test]
fn complete_graph_spectra() {
    let k4 = second_eigenvalue(&complete_complex(3).unwrap()).unwrap();
    assert!(close(k4.lambda2, -1.0 / 3.0));
    assert!(close(k4.eigenvalues[0], 1.0));
    assert!(k4.constant_residual < 1e-12);
    let k3 = second_eigenvalue(&cycle(3)).unwrap();
    assert!(close(k3.lambda2, -0.5));
    let c4 = second_eigenvalue(&cycle(4)).unwrap();
    assert!(close(c4.lambda2, 0.0));
    assert!(close(*c4.eigenvalues.last().unwrap(), -1.0));
}

#[test]
fn second_eigenvalue_preconditions() {
    assert!(second_eigenvalue(&graph(1, &[(0, 0)])).is_err());
    let skew = cycle(4).with_measures([MeasureSpec::Uniform, MeasureSpec::Weights(vec![1, 1, 1, 3]), MeasureSpec::Uniform]);
    assert!(matches!(second_eigenvalue(&skew.unwrap()), Err(Error::Precondition(_))));
    let split = second_eigenvalue(&graph(4, &[(0, 1), (2, 3)])).unwrap();
    assert!(!split.connected);
    assert_eq!(split.lambda2, 1.0);
    assert_eq!(split.component, Some(vec![0, 1]));
}

#[test]
fn symmetrized_operator_is_symmetric_and_reconstructs() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10 {
        let g = random_weighted(rng.random_range(2..10), &mut rng);
        let s = graph_spectrum(&g).unwrap();
        let n = g.n_vertices();
        for i in 0..n {
            for j in 0..n {
                assert!((s.matrix[i][j] - s.matrix[j][i]).abs() < 1e-15);
                let back: f64 = (0..n).map(|k| s.eigenvalues[k] * s.vectors[k][i] * s.vectors[k][j]).sum();
                assert!((back - s.matrix[i][j]).abs() < 1e-10);
            }
        }
        assert!(s.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
        assert!(close(s.eigenvalues[0], 1.0));
    }
}

#[test]
fn jacobi_on_random_symmetric_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for n in 1..9 {
        let mut a = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..=i {
                let v: f64 = rng.random_range(-1.0..1.0);
                a[i][j] = v;
                a[j][i] = v;
            }
        }
        let (vals, vecs) = jacobi_eigen(a.clone(), 1e-12);
        for (l, v) in vals.iter().zip(&vecs) {
            for i in 0..n {
                let av: f64 = (0..n).map(|j| a[i][j] * v[j]).sum();
                assert!((av - l * v[i]).abs() < 1e-9);
            }
            assert!(close(v.iter().map(|x| x * x).sum(), 1.0));
        }
        let trace: f64 = (0..n).map(|i| a[i][i]).sum();
        assert!(close(vals.iter().sum(), trace));
    }
}

#[test]
fn loops_count_both_ways() {
    // one loop and one edge at vertex 0: W(0) = 2 + 1, W(1) = 1
    let g = graph(2, &[(0, 0), (0, 1)]);
    let s = graph_spectrum(&g).unwrap();
    assert_eq!(s.degree_weights, vec![3.0, 1.0]);
    assert!(close(s.matrix[0][0], 2.0 / 3.0));
}

#[test]
fn complete_complex_links_and_trickling() {
    for d in 3..=6 {
        let x = complete_complex(d).unwrap();
        let local = local_lambda(&x).unwrap();
        assert_eq!(local.links.len(), d + 1);
        assert!(local.links.iter().all(|l| l.size == d && close(l.lambda2, -1.0 / (d as f64 - 1.0))));
        let t = trickling_check(&x, Tolerances::default()).unwrap();
        assert_eq!(t.holds, Some(true));
        assert!(close(t.global_lambda2.unwrap(), -1.0 / d as f64));
        assert!(close(t.bound.unwrap(), t.global_lambda2.unwrap()));
    }
}

#[test]
fn building_links() {
    let x = spherical_building(2).unwrap();
    let local = local_lambda(&x).unwrap();
    for l in &local.links {
        // points and planes see the Fano incidence graph, lines see K33
        if l.size == 14 {
            assert!(close(l.lambda2, 2f64.sqrt() / 3.0));
        } else {
            assert_eq!(l.size, 6);
            assert!(close(l.lambda2, 0.0));
        }
    }
    assert!(close(local.local_lambda, 2f64.sqrt() / 3.0));
    let t = trickling_check(&x, Tolerances::default()).unwrap();
    assert_eq!(t.holds, Some(true));
}

#[test]
fn trickling_skips_bad_inputs() {
    let g = cycle(5);
    let t = trickling_check(&g, Tolerances::default()).unwrap();
    assert!(t.holds.is_none() && t.skipped.is_some());
    let split = graph(4, &[(0, 1), (2, 3)]);
    assert!(trickling_check(&split, Tolerances::default()).unwrap().skipped.is_some());
}

#[test]
fn cheeger_lower_on_k4_is_tight() {
    let c = weighted_cheeger_lower(&complete_complex(3).unwrap(), Tolerances::default()).unwrap();
    assert!((c.lower - 4.0 / 3.0).abs() < 1e-9);
    assert!((c.h0.unwrap().upper().unwrap() - 4.0 / 3.0).abs() < 1e-9);
    assert_eq!(c.holds, Some(true));
}

#[test]
fn cheeger_lower_on_random_weighted_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..30 {
        let g = random_weighted(rng.random_range(2..=12), &mut rng);
        let c = weighted_cheeger_lower(&g, Tolerances::default()).unwrap();
        assert_eq!(c.holds, Some(true), "lambda2 {} h0 {:?}", c.lambda2, c.h0);
    }
}

#[test]
fn cover_bound_values() {
    let b = cover_cosystole_bound(0.0);
    assert_eq!(b.bound, Some(0.5));
    let b = cover_cosystole_bound(2f64.sqrt() / 3.0);
    assert!(!b.vacuous && b.bound.unwrap() > 0.0);
    assert!(cover_cosystole_bound(0.5).vacuous);
    assert!(cover_cosystole_bound(0.7).bound.is_none());
}

/// A triangulated annulus: outer triangle 0 1 2, inner triangle 3 4 5.
fn annulus() -> Complex {
    let mut b = ComplexBuilder::new(6);
    let mut e = std::collections::HashMap::new();
    for (u, v) in [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5), (0, 4), (1, 5), (2, 3)] {
        e.insert((u, v), b.edge(u, v));
    }
    let step = |e: &std::collections::HashMap<(usize, usize), EdgeId>, u: usize, v: usize| {
        e.get(&(u, v)).map(|&id| (id, false)).unwrap_or_else(|| (e[&(v, u)], true))
    };
    for (u, v, w) in [(0, 1, 4), (0, 4, 3), (1, 2, 5), (1, 5, 4), (2, 0, 3), (2, 3, 5)] {
        b.polygon(vec![step(&e, u, v), step(&e, v, w), step(&e, w, u)]);
    }
    b.build().unwrap()
}

#[test]
fn cover_experiment() {
    let k4 = Arc::new(complete_complex(3).unwrap());
    let c = cover_bound_experiment(&k4, 3, Tolerances::default()).unwrap();
    assert!(c.holds && c.covers.is_empty());
    assert!(c.cosystole.is_infinite());

    let a = Arc::new(annulus());
    assert_eq!(a.betti1_f2(), 1);
    let c = cover_bound_experiment(&a, 3, Tolerances::default()).unwrap();
    assert!(c.holds);
    assert!(!c.covers.is_empty());
    let base = c.bound.local_lambda;
    assert!(c.covers.iter().all(|l| (l.local_lambda - base).abs() < 1e-10));
}
