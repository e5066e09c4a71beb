use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::f2::F2Cochain;
use super::*;
use crate::complex::{complete_complex, presentation_complex, random_complex, EdgeId, Presentation};

fn k3() -> Arc<Complex> {
    Arc::new(complete_complex(2).unwrap())
}

fn t(n: usize, a: usize, b: usize) -> Permutation {
    Permutation::transposition(n, a, b)
}

fn id(n: usize) -> Permutation {
    Permutation::identity(n)
}

fn r(a: i128, b: i128) -> Rational {
    Rational::new(a, b)
}

fn pres(s: &str) -> Arc<Complex> {
    Arc::new(presentation_complex(&s.parse::<Presentation>().unwrap()).unwrap())
}

/// K3 with `(0 1)` on edge `{0,1}` and the identity elsewhere.
fn k3_flip(n: usize) -> Cochain1 {
    Cochain1::identity(k3(), n).with_value(EdgeId(0), t(n, 0, 1)).unwrap()
}

#[test]
fn delta0_examples() {
    let x = k3();
    let g = Permutation::long_cycle(3);
    assert!(Cochain0::constant(x.clone(), g).delta().values().iter().all(Permutation::is_identity));
    let b = Cochain0::new(x.clone(), vec![id(2), t(2, 0, 1), id(2)]).unwrap();
    assert_eq!(b.delta().value(EdgeId(0)), &t(2, 0, 1));
    assert!(b.delta().delta().is_identity());
}

#[test]
fn evaluate_path_examples() {
    let x = k3();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let a = Cochain1::random(x.clone(), 4, &mut rng);
    let e = x.oriented(EdgeId(0), false);
    assert!(a.evaluate_path(&[e, e.reverse()]).unwrap().is_identity());
    assert_eq!(a.evaluate_path(&[e]).unwrap(), *a.value(EdgeId(0)));
    assert!(a.evaluate_path(&[]).unwrap().is_identity());
    let db = Cochain0::random(x.clone(), 4, &mut rng).delta();
    assert!(db.evaluate_path(x.perimeter(crate::complex::PolygonId(0))).unwrap().is_identity());
    // 0 -> 1 then 0 -> 2 is not a path
    assert!(a.evaluate_path(&[e, x.oriented(EdgeId(1), false)]).is_err());
}

#[test]
fn delta1_examples() {
    assert!(Cochain1::identity(k3(), 3).delta().is_identity());
    let d = k3_flip(2).delta();
    assert_eq!(d.values(), &[t(2, 0, 1)]);
}

#[test]
fn norm_examples() {
    assert_eq!(Cochain1::identity(k3(), 2).norm_exact(), r(0, 1));
    let a = k3_flip(2);
    assert_eq!(a.norm_exact(), r(1, 3));
    assert_eq!(a.distance_exact(&a).unwrap(), r(0, 1));
    let other = Cochain1::identity(Arc::new(complete_complex(3).unwrap()), 2);
    assert!(matches!(a.distance_exact(&other), Err(Error::ComplexMismatch)));
}

#[test]
fn act_examples() {
    let x = k3();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let b = Cochain0::random(x.clone(), 3, &mut rng);
    assert!(b.delta().act(&b.inverse()).unwrap().values().iter().all(Permutation::is_identity));
    let a = Cochain1::random(x.clone(), 3, &mut rng);
    assert_eq!(a.act(&Cochain0::identity(x.clone(), 3)).unwrap(), a);
    let g = Cochain0::constant(x.clone(), Permutation::long_cycle(3));
    let per = x.perimeter(crate::complex::PolygonId(0));
    assert_eq!(a.act(&g).unwrap().eval_unchecked(per).norm_exact(), a.eval_unchecked(per).norm_exact());
    assert!(a.act(&Cochain0::identity(x, 2)).is_err());
}

#[test]
fn action_composes() {
    let x = Arc::new(complete_complex(3).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let a = Cochain1::random(x.clone(), 4, &mut rng);
    let b1 = Cochain0::random(x.clone(), 4, &mut rng);
    let b2 = Cochain0::random(x.clone(), 4, &mut rng);
    let twice = a.act(&b1).unwrap().act(&b2).unwrap();
    assert_eq!(twice, a.act(&b1.pointwise(&b2).unwrap()).unwrap());
}

#[test]
fn tree_normalize_examples() {
    let x = k3();
    let tree = x.spanning_tree(VertexId(0)).unwrap();
    assert_eq!(tree.edges(), vec![EdgeId(0), EdgeId(1)]);

    let a = k3_flip(2);
    let (b, z) = a.tree_normalize(&tree).unwrap();
    assert!(b.value(VertexId(0)).is_identity());
    assert_eq!(b.value(VertexId(1)), &t(2, 0, 1));
    assert!(z.value(EdgeId(0)).is_identity() && z.value(EdgeId(1)).is_identity());
    // holonomy of 0 -> 1 -> 2 -> 0 conjugated into the root
    let hol = a.eval_unchecked(x.perimeter(crate::complex::PolygonId(0)));
    assert_eq!(z.value(EdgeId(2)), &hol);

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let db = Cochain0::random(x.clone(), 3, &mut rng).delta();
    let flat = Cochain1::identity(x.clone(), 3).with_value(EdgeId(2), db.value(EdgeId(2)).clone()).unwrap();
    let (b, z) = flat.tree_normalize(&tree).unwrap();
    assert!(b.values().iter().all(Permutation::is_identity));
    assert_eq!(z, flat);
}

#[test]
fn cocycle_and_coboundary_examples() {
    let x = k3();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let db = Cochain0::random(x.clone(), 3, &mut rng).delta();
    assert!(db.is_cocycle() && db.is_coboundary_exact());
    let a = k3_flip(2);
    assert!(!a.is_cocycle() && !a.is_coboundary_exact());

    let y = pres("a, b | b");
    let a = Cochain1::new(y, vec![t(2, 0, 1), id(2)]).unwrap();
    assert!(a.is_cocycle() && !a.is_coboundary_exact());
}

#[test]
fn connected_cochain_examples() {
    assert!(!Cochain1::identity(k3(), 2).is_connected_cochain());
    let y = pres("a, b | b");
    for n in 2..6 {
        let a = Cochain1::new(y.clone(), vec![Permutation::long_cycle(n), id(n)]).unwrap();
        assert!(a.is_connected_cochain());
        let big = Cochain1::new(y.clone(), a.values().iter().map(|p| p.embed(n + 2).unwrap()).collect()).unwrap();
        assert!(!big.is_connected_cochain());
    }
    assert!(k3_flip(2).is_connected_cochain());
}

#[test]
fn dist_to_coboundaries_examples() {
    let x = k3();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let b = Cochain0::random(x.clone(), 3, &mut rng);
    let r0 = b.delta().dist_to_coboundaries(SearchMode::Exact).unwrap();
    assert_eq!(r0.distance, r(0, 1));
    assert_eq!(r0.nearest, b.delta());

    let r1 = k3_flip(2).dist_to_coboundaries(SearchMode::Exact).unwrap();
    assert_eq!(r1.distance, r(1, 3));
    assert!(r1.nearest.is_coboundary_exact());
    assert_eq!(k3_flip(2).distance_exact(&r1.nearest).unwrap(), r(1, 3));

    assert_eq!(Cochain1::identity(x, 4).dist_to_coboundaries(SearchMode::Exact).unwrap().distance, r(0, 1));
}

#[test]
fn dist_to_cocycles_examples() {
    let x = k3();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let db = Cochain0::random(x.clone(), 3, &mut rng).delta();
    assert_eq!(db.dist_to_cocycles(SearchMode::Exact).unwrap().distance, r(0, 1));

    let res = k3_flip(2).dist_to_cocycles(SearchMode::Exact).unwrap();
    assert_eq!(res.distance, r(1, 3));
    assert!(res.nearest.is_cocycle());

    let y = pres("a, b | b");
    let a = Cochain1::new(y, vec![id(2), t(2, 0, 1)]).unwrap();
    let res = a.dist_to_cocycles(SearchMode::Exact).unwrap();
    assert_eq!(res.distance, r(1, 2));
    assert!(res.nearest.value(EdgeId(1)).is_identity());
}

/// Every cochain of degree `n` on `x`, by brute force.
fn all_cochains(x: &Arc<Complex>, n: usize) -> Vec<Cochain1> {
    let group = crate::search::all_permutations(n);
    let mut out = vec![Vec::new()];
    for _ in 0..x.n_edges() {
        out = out
            .into_iter()
            .flat_map(|v: Vec<Permutation>| {
                group.iter().map(move |g| {
                    let mut w = v.clone();
                    w.push(g.clone());
                    w
                })
            })
            .collect();
    }
    out.into_iter().map(|v| Cochain1::with_degree(x.clone(), n, v).unwrap()).collect()
}

fn all_zero_cochains(x: &Arc<Complex>, n: usize) -> Vec<Cochain0> {
    let group = crate::search::all_permutations(n);
    let mut out = vec![Vec::new()];
    for _ in 0..x.n_vertices() {
        out = out
            .into_iter()
            .flat_map(|v: Vec<Permutation>| {
                group.iter().map(move |g| {
                    let mut w = v.clone();
                    w.push(g.clone());
                    w
                })
            })
            .collect();
    }
    out.into_iter().map(|v| Cochain0::new(x.clone(), v).unwrap()).collect()
}

/// Distances to `Z^1` and `B^1` against a full listing of both sets.
#[test]
fn distances_match_brute_force() {
    let cases = [(k3(), 3), (Arc::new(complete_complex(3).unwrap()), 2), (pres("a, b | a b a^-1 b^-1"), 3)];
    for (x, n) in cases {
        let everything = all_cochains(&x, n);
        let cocycles: Vec<&Cochain1> = everything.iter().filter(|a| a.is_cocycle()).collect();
        let coboundaries: Vec<Cochain1> = all_zero_cochains(&x, n).iter().map(Cochain0::delta).collect();
        for a in everything.iter().step_by(7) {
            let dz = cocycles.iter().map(|z| a.distance_exact(z).unwrap()).min().unwrap();
            let db = coboundaries.iter().map(|z| a.distance_exact(z).unwrap()).min().unwrap();
            assert_eq!(a.dist_to_cocycles(SearchMode::Exact).unwrap().distance, dz);
            assert_eq!(a.dist_to_coboundaries(SearchMode::Exact).unwrap().distance, db);
            assert_eq!(a.is_coboundary_exact(), db == r(0, 1));
        }
    }
}

#[test]
fn local_search_is_an_upper_bound() {
    let x = Arc::new(complete_complex(4).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..5 {
        let a = Cochain1::random(x.clone(), 3, &mut rng);
        let exact = a.dist_to_coboundaries(SearchMode::Exact).unwrap();
        let heur = a.dist_to_coboundaries(SearchMode::LocalSearch).unwrap();
        assert!(exact.exact && !heur.exact);
        assert!(heur.distance >= exact.distance);
        assert_eq!(a.distance_exact(&heur.nearest).unwrap(), heur.distance);
    }
}

#[test]
fn exact_guard_trips() {
    let x = Arc::new(complete_complex(6).unwrap());
    let a = Cochain1::identity(x, 5);
    assert!(matches!(a.dist_to_coboundaries(SearchMode::Exact), Err(Error::SizeGuard { .. })));
    assert!(a.dist_to_coboundaries(SearchMode::LocalSearch).is_ok());
}

#[test]
fn same_orbit_finds_beta() {
    let x = Arc::new(complete_complex(3).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let a = Cochain1::random(x.clone(), 4, &mut rng);
    let b = Cochain0::random(x.clone(), 4, &mut rng);
    let moved = a.act(&b).unwrap();
    let found = a.same_orbit(&moved).unwrap().expect("same orbit");
    assert_eq!(a.act(&found).unwrap(), moved);
    let other = moved.with_value(EdgeId(3), moved.value(EdgeId(3)).compose(&t(4, 0, 1)).unwrap()).unwrap();
    assert!(a.same_orbit(&other).unwrap().is_none());
}

#[test]
fn f2_examples() {
    let x = k3();
    let a = F2Cochain::from_bits(x.clone(), 1, &[true, false, false]).unwrap();
    assert_eq!(a.norm_exact(), r(1, 3));
    assert!(a.delta().get(0));
    assert_eq!(a.to_sym1().unwrap(), k3_flip(2));
    let b = F2Cochain::from_bits(x, 0, &[false, true, false]).unwrap();
    assert!(b.delta().is_cocycle());
}

#[test]
fn cochain_json_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.json");
    let x = Arc::new(complete_complex(3).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let a = Cochain1::random(x.clone(), 5, &mut rng);
    save_cochain(&a, Coefficient::Sym(5), &path).unwrap();
    assert_eq!(load_cochain(x.clone(), &path).unwrap(), a);

    let bits = F2Cochain::random(x.clone(), 1, &mut rng).to_sym1().unwrap();
    save_cochain(&bits, Coefficient::F2, &path).unwrap();
    assert_eq!(load_cochain(x.clone(), &path).unwrap(), bits);

    std::fs::write(&path, r#"{"coefficient": {"sym": 3}, "values": {"9": "(1 2)"}}"#).unwrap();
    assert!(matches!(load_cochain(x, &path), Err(Error::Schema { .. })));
}

fn arb_complex() -> impl Strategy<Value = Arc<Complex>> {
    (1usize..6, 0usize..5, 0usize..5, any::<u64>()).prop_map(|(v, e, p, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Arc::new(random_complex(v, e, p, &mut rng).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn delta_delta_is_trivial(x in arb_complex(), n in 1usize..6, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = Cochain0::random(x, n, &mut rng);
        prop_assert!(b.delta().delta().is_identity());
        prop_assert!(b.delta().is_coboundary_exact());
    }

    #[test]
    fn action_preserves_defect(x in arb_complex(), n in 1usize..6, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = Cochain1::random(x.clone(), n, &mut rng);
        let b = Cochain0::random(x, n, &mut rng);
        prop_assert_eq!(a.act(&b).unwrap().delta().norm_exact(), a.delta().norm_exact());
    }

    #[test]
    fn normalization_stays_in_orbit(x in arb_complex(), n in 1usize..4, seed in any::<u64>()) {
        prop_assume!(x.is_connected());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = Cochain1::random(x.clone(), n, &mut rng);
        let tree = x.spanning_tree(VertexId(0)).unwrap();
        let (b, z) = a.tree_normalize(&tree).unwrap();
        prop_assert!(b.value(VertexId(0)).is_identity());
        for e in tree.edges() {
            prop_assert!(z.value(e).is_identity());
        }
        prop_assert!(a.same_orbit(&z).unwrap().is_some());
        prop_assert_eq!(a.is_cocycle(), z.is_cocycle());
        let limit = 1e5;
        if let (Ok(da), Ok(dz)) = (
            a.dist_to_coboundaries_with(SearchMode::Exact, limit),
            z.dist_to_coboundaries_with(SearchMode::Exact, limit),
        ) {
            prop_assert_eq!(da.distance, dz.distance);
        }
        if let (Ok(da), Ok(dz)) = (
            a.dist_to_cocycles_with(SearchMode::Exact, limit),
            z.dist_to_cocycles_with(SearchMode::Exact, limit),
        ) {
            prop_assert_eq!(da.distance, dz.distance);
        }
    }

    #[test]
    fn coboundary_distance_dominates(x in arb_complex(), n in 2usize..4, seed in any::<u64>()) {
        prop_assume!(x.is_connected());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = Cochain1::random(x, n, &mut rng);
        let limit = 1e5;
        if let (Ok(db), Ok(dz)) = (
            a.dist_to_coboundaries_with(SearchMode::Exact, limit),
            a.dist_to_cocycles_with(SearchMode::Exact, limit),
        ) {
            prop_assert!(db.distance >= dz.distance);
            prop_assert!(dz.nearest.is_cocycle());
            prop_assert!(db.nearest.is_coboundary_exact());
        }
    }

    #[test]
    fn f2_matches_sym2(x in arb_complex(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = F2Cochain::random(x.clone(), 1, &mut rng);
        let s = a.to_sym1().unwrap();
        prop_assert_eq!(a.delta().to_perms(), s.delta().values().to_vec());
        prop_assert_eq!(a.norm_exact(), s.norm_exact());
        prop_assert_eq!(a.is_cocycle(), s.is_cocycle());
        let b = F2Cochain::random(x, 0, &mut rng);
        prop_assert_eq!(b.delta().to_perms(), b.to_sym0().unwrap().delta().values().to_vec());
    }
}
