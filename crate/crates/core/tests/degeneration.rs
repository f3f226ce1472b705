use std::collections::BTreeMap;

use limitcoh_core::degeneration::*;
use limitcoh_core::{Error, Matrix, Scalar};

fn dims(lc: &LimitCohomology) -> BTreeMap<i64, usize> {
    lc.degrees.iter().map(|(&n, d)| (n, d.dim())).collect()
}

fn weights(lc: &LimitCohomology, n: i64) -> Vec<i64> {
    lc.degrees[&n].weights.keys().copied().collect()
}

#[test]
fn two_gon_terms_and_limit() {
    let fib = builtin_example("tate-2gon", 3).unwrap();
    let st = steenbrink(&fib).unwrap();
    assert_eq!(st.total().dims(), BTreeMap::from([(0, 2), (1, 4), (2, 2)]));
    assert!(!st.conjectural);

    let lc = limit_cohomology(&fib, None).unwrap();
    assert_eq!(dims(&lc), BTreeMap::from([(0, 1), (1, 2), (2, 1)]));
    assert_eq!(weights(&lc, 0), vec![0]);
    assert_eq!(weights(&lc, 1), vec![0, 2]);
    assert_eq!(weights(&lc, 2), vec![2]);

    let h1 = &lc.degrees[&1];
    assert_eq!(h1.n_rank, 1);
    assert_eq!(h1.normalized_n(fib.field()), Matrix::from_ints(&[&[0, 1], &[0, 0]]));
    assert_eq!(h1.phi_weight_basis, Matrix::from_ints(&[&[1, 0], &[0, 3]]));
    assert!(lc.filtration_matches_frobenius);
    assert!(lc.only_lowers_by_two);
    assert!(lc.weight_ss.degenerates_at_e2);
}

#[test]
fn rescale_multiplies_monodromy() {
    let fib = builtin_example("tate-2gon", 5).unwrap();
    let base = limit_cohomology(&fib, None).unwrap();
    let c = Scalar::from_ratio(2, 7);
    let scaled = limit_cohomology(&fib, Some(&c)).unwrap();
    let n0 = base.degrees[&1].module.monodromy().scale(&c, fib.field());
    assert_eq!(&n0, scaled.degrees[&1].module.monodromy());
    assert!(matches!(limit_cohomology(&fib, Some(&Scalar::zero())), Err(Error::Invalid(_))));
}

#[test]
fn ngon_limit_is_independent_of_n() {
    let reference = limit_cohomology(&builtin_example("tate-2gon", 3).unwrap(), None).unwrap();
    for n in 3..=5 {
        let fib = builtin_example(&format!("tate-ngon({n})"), 3).unwrap();
        let st = steenbrink(&fib).unwrap();
        assert_eq!(st.total().dims(), BTreeMap::from([(0, n), (1, 2 * n), (2, n)]));
        assert!(st.conjectural);
        let lc = limit_cohomology(&fib, None).unwrap();
        assert_eq!(dims(&lc), dims(&reference));
        for deg in 0..=2 {
            assert_eq!(lc.degrees[&deg].weights, reference.degrees[&deg].weights);
            assert_eq!(lc.degrees[&deg].n_rank, reference.degrees[&deg].n_rank);
        }
    }
}

#[test]
fn ngon_name_forms() {
    for name in ["tate-ngon(4)", "tate-ngon:4", "tate-4gon"] {
        assert_eq!(builtin_example(name, 3).unwrap().components().len(), 4);
    }
    assert!(matches!(builtin_example("tate-ngon(1)", 3), Err(Error::UnknownExample(_))));
    assert!(matches!(builtin_example("klein-quartic", 3), Err(Error::UnknownExample(_))));
    assert!(matches!(builtin_example("tate-2gon", 4), Err(Error::NotPrime(_))));
}

#[test]
fn good_reduction_has_no_monodromy() {
    let fib = builtin_example("good-elliptic", 3).unwrap();
    let lc = limit_cohomology(&fib, None).unwrap();
    assert_eq!(dims(&lc), BTreeMap::from([(0, 1), (1, 2), (2, 1)]));
    assert_eq!(weights(&lc, 1), vec![1]);
    assert!(lc.degrees.values().all(|d| d.n_rank == 0));

    let cs = clemens_schmid(&fib).unwrap();
    assert!(cs.monodromy_zero);
    assert!(cs.duality_isomorphisms);
    assert!(cs.all_exact());
}

#[test]
fn two_component_surface_limit() {
    let fib = builtin_example("two-component-surface", 3).unwrap();
    let lc = limit_cohomology(&fib, None).unwrap();
    assert_eq!(dims(&lc), BTreeMap::from([(0, 1), (2, 1), (4, 1)]));
    for (n, d) in &lc.degrees {
        assert_eq!(d.weights, BTreeMap::from([(*n, 1)]));
        assert_eq!(d.n_rank, 0);
    }
}

#[test]
fn special_fiber_complexes_of_two_gon() {
    let fib = builtin_example("tate-2gon", 3).unwrap();
    let s = special_fiber_complexes(&fib).unwrap();
    assert_eq!(s.cohomological.homology_dims(fib.field()).unwrap(), BTreeMap::from([(0, 1), (1, 1), (2, 2)]));
    assert_eq!(s.homological.homology_dims(fib.field()).unwrap(), BTreeMap::from([(0, 2), (1, 1), (2, 1)]));
    assert!(s.poincare_dual);
}

#[test]
fn chi_routes_agree() {
    let fib = builtin_example("tate-2gon", 3).unwrap();
    let r = chi_compare(&fib).unwrap();
    assert_eq!(ChiReport::dims(&r.fiber_profile), BTreeMap::from([(0, 1), (1, 2), (2, 2), (3, 1)]));
    let w: Vec<Vec<i64>> = r.fiber_profile.values().map(|ws| ws.keys().copied().collect()).collect();
    assert_eq!(w, vec![vec![0], vec![0, 2], vec![2, 4], vec![4]]);
    for name in ["good-elliptic", "tate-3gon", "tate-5gon", "two-component-surface"] {
        assert!(chi_report(&builtin_example(name, 3).unwrap()).unwrap().pass(), "{name}");
    }
}

#[test]
fn clemens_schmid_exact_for_ngons() {
    for n in 2..=5 {
        let fib = builtin_example(&format!("tate-{n}gon"), 3).unwrap();
        let cs = clemens_schmid(&fib).unwrap();
        assert_eq!(cs.threads.len(), 2);
        assert!(cs.all_exact(), "n = {n}");
        assert!(cs.wm_pass());
        assert!(!cs.monodromy_zero);
        for t in &cs.threads {
            assert_eq!(t.maps.len(), t.nodes.len());
        }
    }
}

#[test]
fn steenbrink_self_duality() {
    for name in ["good-elliptic", "tate-2gon", "tate-4gon", "two-component-surface"] {
        let sd = self_duality(&builtin_example(name, 3).unwrap()).unwrap();
        assert!(sd.terms_match() && sd.homology_match(), "{name}");
    }
}

#[test]
fn missing_restriction_is_reported() {
    let mut spec = builtin_spec("tate-2gon", 3).unwrap();
    spec.restrictions.pop();
    assert!(matches!(validate_fiber(&spec), Err(Error::MissingRestriction { .. })));
}

#[test]
fn impure_stratum_is_rejected() {
    let mut spec = builtin_spec("good-elliptic", 3).unwrap();
    spec.strata[0].cohomology.get_mut(&1).unwrap()[0].phi = Some(Matrix::from_ints(&[&[1, 0], &[0, 3]]));
    assert!(matches!(validate_fiber(&spec), Err(Error::ImpureStratum { .. })));
}

#[test]
fn restriction_must_commute_with_frobenius() {
    let mut spec = builtin_spec("two-component-surface", 3).unwrap();
    // flip the sign of Frobenius on the double curve
    spec.restrictions.push(RestrictionSpec {
        from: vec!["P2".into()],
        to: vec!["P2".into(), "F1".into()],
        degree: 2,
        matrix: Matrix::from_ints(&[&[1]]),
    });
    spec.strata[2].cohomology.get_mut(&2).unwrap()[0].phi = Some(Matrix::from_ints(&[&[-3]]));
    assert!(validate_fiber(&spec).is_err());
}
