use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::cochain::Cochain0;
use crate::complex::{complete_complex, Complex, EdgeId, OrientedEdge, PolygonId, Presentation};

fn r(a: i128, b: i128) -> Rational {
    Rational::new(a, b)
}

fn k(d: usize) -> Arc<Complex> {
    Arc::new(complete_complex(d).unwrap())
}

/// Follows a vertex sequence along the edges of a complete complex.
fn walk(x: &Complex, vertices: &[usize]) -> Vec<OrientedEdge> {
    vertices
        .windows(2)
        .map(|w| *x.outgoing(VertexId(w[0])).iter().find(|o| o.dst == VertexId(w[1])).unwrap())
        .collect()
}

fn random_loop(x: &Complex, len: usize, rng: &mut impl Rng) -> Vec<OrientedEdge> {
    let mut v = VertexId(0);
    let mut out = Vec::new();
    for _ in 0..len {
        let choices = x.outgoing(v);
        let o = choices[rng.random_range(0..choices.len())];
        out.push(o);
        v = o.dst;
    }
    if v != VertexId(0) {
        out.extend(walk(x, &[v.0, 0]));
    }
    out
}

#[test]
fn reductions() {
    let x = k(3);
    let e = x.oriented(EdgeId(0), false);
    let f = x.oriented(EdgeId(3), false);
    assert!(free_reduce(&[e, f, f.reverse(), e.reverse()]).is_empty());
    assert_eq!(free_reduce(&[e, f]), vec![e, f]);
    let w = walk(&x, &[0, 1, 2, 1, 0]);
    assert!(cyclic_reduce(&w).is_empty());
    let u = walk(&x, &[0, 1, 2, 0]);
    let conj: Vec<OrientedEdge> = walk(&x, &[3, 0]).into_iter().chain(u.clone()).chain(walk(&x, &[0, 3])).collect();
    assert_eq!(cyclic_reduce(&conj), u);
}

#[test]
fn filling_examples() {
    let x = k(3);
    let tri = x.perimeter(PolygonId(0)).to_vec();
    let f = filling_search(&x, &tri, 4).unwrap();
    assert_eq!(f.size(), 1);
    f.verify(&x).unwrap();

    let square = walk(&x, &[0, 1, 2, 3, 0]);
    let f = filling_search(&x, &square, 4).unwrap();
    assert_eq!(f.size(), 2);
    f.verify(&x).unwrap();
    assert_eq!(f.replay(), square);

    let back = walk(&x, &[0, 1, 0]);
    assert_eq!(filling_search(&x, &back, 4).unwrap().size(), 0);
}

#[test]
fn filling_errors() {
    let x = k(3);
    let open = walk(&x, &[0, 1, 2]);
    assert!(filling_search(&x, &open, 4).is_err());
    let square = walk(&x, &[0, 1, 2, 3, 0]);
    assert!(filling_search(&x, &square, 65).is_err());
    assert!(matches!(filling_search(&x, &square, 1), Err(Error::FillingFailed { .. })));

    // the torus relator has no filling in the graph of one loop per generator
    let t = crate::complex::presentation_complex(&"a, b | a b a^-1 b^-1".parse::<Presentation>().unwrap()).unwrap();
    let a = t.oriented(EdgeId(0), false);
    assert!(filling_search(&t, &[a, a], 8).is_err());
}

#[test]
fn tampered_fillings_are_rejected() {
    let x = k(3);
    let square = walk(&x, &[0, 1, 2, 3, 0]);
    let mut f = filling_search(&x, &square, 4).unwrap();
    f.cells.pop();
    assert!(f.verify(&x).is_err());
    let a = Cochain1::identity(x.clone(), 2);
    assert!(filling_defect_bound(&a, &f).is_err());
}

#[test]
fn defect_bound_examples() {
    let x = k(3);
    let square = walk(&x, &[0, 1, 2, 3, 0]);
    let f = filling_search(&x, &square, 4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let z = Cochain0::random(x.clone(), 3, &mut rng).delta();
    assert_eq!(filling_defect_bound(&z, &f).unwrap(), DefectBound { loop_norm: r(0, 1), cell_sum: r(0, 1), holds: true });

    let tri = x.perimeter(PolygonId(2)).to_vec();
    let one = filling_search(&x, &tri, 4).unwrap();
    for _ in 0..20 {
        let a = Cochain1::random(x.clone(), 4, &mut rng);
        let b = filling_defect_bound(&a, &one).unwrap();
        assert_eq!(b.loop_norm, b.cell_sum);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn defect_bound_on_the_square(seed in any::<u64>(), n in 2usize..5) {
        let x = k(3);
        let f = filling_search(&x, &walk(&x, &[0, 1, 2, 3, 0]), 4).unwrap();
        let a = Cochain1::random(x.clone(), n, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert!(filling_defect_bound(&a, &f).unwrap().holds);
    }

    #[test]
    fn fillings_replay(seed in any::<u64>(), len in 1usize..7) {
        let x = k(4);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let target = random_loop(&x, len, &mut rng);
        let f = filling_search(&x, &target, 64).unwrap();
        prop_assert!(f.verify(&x).is_ok());
        prop_assert_eq!(f.replay(), free_reduce(&target));
        let a = Cochain1::random(x.clone(), 3, &mut rng);
        prop_assert!(filling_defect_bound(&a, &f).unwrap().holds);
    }
}

#[test]
fn complete_correction_examples() {
    let x = k(2);
    let z = Cochain0::random(x.clone(), 3, &mut ChaCha8Rng::seed_from_u64(4)).delta();
    let c = correct_complete(&z).unwrap();
    assert_eq!(c.distance, r(0, 1));
    assert!(c.output.same_orbit(&z).unwrap().is_some());

    let a = Cochain1::identity(x.clone(), 2).with_value(EdgeId(0), crate::Permutation::transposition(2, 0, 1)).unwrap();
    let c = correct_complete(&a).unwrap();
    assert_eq!(c.defect, r(1, 1));
    assert_eq!(c.distance, r(1, 3));
    assert_eq!(c.claimed_factor, Some(r(1, 3)));
    assert_eq!(c.holds(), Some(true));
    let Detail::Complete { averaging_identity, apex_norms, .. } = &c.detail else { panic!("wrong detail") };
    assert!(averaging_identity);
    // every apex moves the flip onto exactly one edge
    assert!(apex_norms.iter().all(|n| n.fraction == "1/3"));
    c.recheck().unwrap();

    let wrong = Cochain1::identity(Arc::new(complete_complex(3).unwrap().with_measures(
        [crate::complex::MeasureSpec::Uniform, crate::complex::MeasureSpec::Weights(vec![1, 2, 3, 4, 5, 6]), crate::complex::MeasureSpec::Uniform],
    ).unwrap()), 2);
    assert!(correct_complete(&wrong).is_err());
}

#[test]
fn complete_correction_random_trials() {
    let x = k(4);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..100 {
        let a = Cochain1::random(x.clone(), 3, &mut rng);
        let c = correct_complete(&a).unwrap();
        assert_eq!(c.holds(), Some(true));
        assert!(c.output.is_cocycle());
        let Detail::Complete { averaging_identity, .. } = c.detail else { panic!("wrong detail") };
        assert!(averaging_identity);
        c.recheck().unwrap();
    }
}

#[test]
fn cone_examples() {
    let x = k(3);
    let cf = ConeFillings::new(x.clone(), VertexId(0), 1, 2).unwrap();
    assert!(cf.all_filled());
    assert_eq!(cf.fillings().len(), 3);
    assert_eq!(cf.largest_filling(), Some(1));
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..30 {
        let a = Cochain1::random(x.clone(), 3, &mut rng);
        let c = cf.correct(&a).unwrap();
        assert_eq!(c.claimed_factor, Some(r(2, 1)));
        assert_eq!(c.holds(), Some(true));
        c.recheck().unwrap();
    }
    let z = Cochain0::random(x.clone(), 4, &mut rng).delta();
    assert_eq!(correct_cone(&z, VertexId(2), 1, 2).unwrap().distance, r(0, 1));

    // radius 1 is too small from a vertex of a path of length 3
    let mut b = crate::complex::ComplexBuilder::new(3);
    b.edge(0, 1);
    b.edge(1, 2);
    let path = Arc::new(b.build().unwrap());
    assert!(correct_cone(&Cochain1::identity(path, 2), VertexId(0), 1, 2).is_err());
}

#[test]
fn cone_failures_downgrade() {
    // a budget of zero cells fills nothing
    let x = k(3);
    let cf = ConeFillings::new(x.clone(), VertexId(0), 1, 0).unwrap();
    assert!(!cf.all_filled());
    let a = Cochain1::random(x, 2, &mut ChaCha8Rng::seed_from_u64(1));
    let c = cf.correct(&a).unwrap();
    assert_eq!(c.claimed_factor, None);
    assert!(c.output.is_cocycle());
    let Detail::Cone { failed_fillings, .. } = c.detail else { panic!("wrong detail") };
    assert_eq!(failed_fillings, 3);
}

#[test]
fn exact_correction_is_nearest() {
    let x = k(2);
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..10 {
        let a = Cochain1::random(x.clone(), 3, &mut rng);
        let e = correct_exact(&a).unwrap();
        let c = correct_complete(&a).unwrap();
        assert!(e.distance <= c.distance);
        e.recheck().unwrap();
    }
}

#[test]
fn small_cheeger_examples() {
    let z2: Presentation = "t | t^2".parse().unwrap();
    let mut last = None;
    for (d, bound) in [(5, r(6, 5)), (10, r(4, 15)), (20, r(6, 95))] {
        let p = small_cheeger_presentation(&z2, d).unwrap();
        let w = small_cheeger_witness(&p).unwrap();
        assert_eq!(w.formula_bound, bound);
        assert!(w.within_formula());
        assert_eq!(w.witness.delta().norm_exact() / w.witness.norm_exact(), w.ratio);
        if let Some(prev) = last {
            assert!(w.ratio < prev);
        }
        last = Some(w.ratio);
    }
    let w = small_cheeger_witness(&small_cheeger_presentation(&z2, 5).unwrap()).unwrap();
    assert_eq!(w.ratio, r(21, 55));
    // the witness is as far from the cocycles as its norm says
    assert_eq!(w.witness.dist_to_cocycles(crate::cochain::SearchMode::Exact).unwrap().distance, w.distance);

    assert!(small_cheeger_witness(&z2).is_err());
}

#[test]
fn experiment_examples() {
    let x = k(3);
    let clean = ExperimentConfig { p_corrupt: 0.0, trials: 20, ..Default::default() };
    let res = stability_experiment(x.clone(), &clean).unwrap();
    assert!(res.rows.iter().all(|row| row.distance == 0.0 && row.ratio.is_none()));

    let cfg = ExperimentConfig { p_corrupt: 0.2, trials: 200, method: Method::Complete, ..Default::default() };
    let res = stability_experiment(x.clone(), &cfg).unwrap();
    assert!(res.all_hold());
    assert!(res.max_ratio().unwrap() <= 0.5);
    assert_eq!(res.rows[7].seed, 49);

    let again = stability_experiment(x.clone(), &cfg).unwrap();
    assert_eq!(format!("{:?}", res.rows), format!("{:?}", again.rows));

    let bad = ExperimentConfig { p_corrupt: 1.5, ..Default::default() };
    assert!(stability_experiment(x, &bad).is_err());
}

#[test]
fn experiment_csv() {
    let cfg = ExperimentConfig { trials: 3, ..Default::default() };
    let res = stability_experiment(k(2), &cfg).unwrap();
    let mut buf = Vec::new();
    write_csv(&res.rows, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("trial,defect,distance,ratio,method,seed"));
    assert_eq!(lines.count(), 3);
}

#[test]
fn method_names() {
    for m in [Method::Complete, Method::Cone, Method::Exact] {
        assert_eq!(m.to_string().parse::<Method>().unwrap(), m);
    }
    assert!("fast".parse::<Method>().is_err());
}
