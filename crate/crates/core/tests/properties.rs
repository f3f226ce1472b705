use std::collections::BTreeMap;

use limitcoh_core::algebra::weil_split;
use limitcoh_core::complexes::{bar_mult_table, monodromy_on_graded, projection_formula_matrix, weight_ss};
use limitcoh_core::phimod::{self, hom_ext_phi, hom_ext_phin, monodromy_filtration, tate_twist, tensor, PhiNModule};
use limitcoh_core::random::{random_module, random_pure_column_complex, random_pure_module};
use limitcoh_core::{Field, Matrix, Scalar};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn field(i: usize) -> Field {
    Field::new([2, 3, 5, 7][i % 4]).unwrap()
}

fn weights(d: &PhiNModule, f: &Field) -> BTreeMap<i64, usize> {
    weil_split(d.phi(), f).unwrap().dims()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn relation_forces_nilpotence(seed: u64, pi in 0usize..4) {
        let f = field(pi);
        let d = random_module(&mut ChaCha8Rng::seed_from_u64(seed), &f, 5, (-4, 4));
        prop_assert!(d.monodromy().pow(d.dim(), &f).unwrap().is_zero());
        let filt = monodromy_filtration(&d, &f).unwrap();
        prop_assert!(filt.verify(d.monodromy(), &f).unwrap());
    }

    #[test]
    fn hom_and_ext_agree_for_phi_modules(seed: u64, pi in 0usize..4) {
        let f = field(pi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_module(&mut rng, &f, 4, (-4, 4));
        let e = random_module(&mut rng, &f, 4, (-4, 4));
        let r = hom_ext_phi(d.base(), e.base(), &f);
        prop_assert_eq!(r.hom_dim, r.ext1_dim);
        for h in &r.hom_basis {
            prop_assert_eq!(e.phi().mul(h, &f).unwrap(), h.mul(d.phi(), &f).unwrap());
        }
    }

    #[test]
    fn distinct_pure_weights_are_orthogonal(seed: u64, pi in 0usize..4, a in -4i64..=4, b in -4i64..=4) {
        prop_assume!(a != b);
        let f = field(pi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_pure_module(&mut rng, &f, 2, a);
        let e = random_pure_module(&mut rng, &f, 3, b);
        let r = hom_ext_phi(d.base(), e.base(), &f);
        prop_assert_eq!((r.hom_dim, r.ext1_dim), (0, 0));
    }

    #[test]
    fn tensor_adds_weights(seed: u64, pi in 0usize..4) {
        let f = field(pi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_module(&mut rng, &f, 3, (-4, 4));
        let e = random_module(&mut rng, &f, 3, (-4, 4));
        let mut expected = BTreeMap::new();
        for (a, x) in weights(&d, &f) {
            for (b, y) in weights(&e, &f) {
                *expected.entry(a + b).or_insert(0) += x * y;
            }
        }
        let t = tensor(&d, &e, &f);
        prop_assert_eq!(weights(&t, &f), expected);
        // Leibniz monodromy keeps the relation
        let p = Scalar::from_int(f.p() as i64);
        prop_assert_eq!(t.monodromy().mul(t.phi(), &f).unwrap(), t.phi().mul(t.monodromy(), &f).unwrap().scale(&p, &f));
    }

    #[test]
    fn dual_negates_weights(seed: u64, pi in 0usize..4) {
        let f = field(pi);
        let d = random_module(&mut ChaCha8Rng::seed_from_u64(seed), &f, 5, (-4, 4));
        let expected: BTreeMap<i64, usize> = weights(&d, &f).into_iter().map(|(w, k)| (-w, k)).collect();
        prop_assert_eq!(weights(&phimod::dual(&d, &f), &f), expected);
        prop_assert!(phimod::evaluation(&d, &f).is_ok());
    }

    #[test]
    fn twist_roundtrip(seed: u64, pi in 0usize..4, n in -3i64..=3) {
        let f = field(pi);
        let d = random_module(&mut ChaCha8Rng::seed_from_u64(seed), &f, 5, (-4, 4));
        let t = tate_twist(&d, n, &f);
        let shifted: BTreeMap<i64, usize> = weights(&d, &f).into_iter().map(|(w, k)| (w - 2 * n, k)).collect();
        prop_assert_eq!(weights(&t, &f), shifted);
        let back = tate_twist(&t, -n, &f);
        prop_assert_eq!(back.phi(), d.phi());
        prop_assert_eq!(back.monodromy(), d.monodromy());
    }

    #[test]
    fn ext_euler_characteristic_vanishes(seed: u64, pi in 0usize..4) {
        // the total complex has terms of dimension v, 2v, v
        let f = field(pi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_module(&mut rng, &f, 3, (-2, 2));
        let e = random_module(&mut rng, &f, 3, (-2, 2));
        let r = hom_ext_phin(&d, &e, &f).unwrap();
        prop_assert_eq!(r.ext0_dim + r.ext2_dim, r.ext1_dim);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn pure_column_complexes_degenerate_at_e2(seed: u64, pi in 0usize..4) {
        let f = field(pi);
        let m = random_pure_column_complex(&mut ChaCha8Rng::seed_from_u64(seed), &f);
        let ss = weight_ss(m.complex(), &f).unwrap();
        prop_assert!(ss.columns_pure);
        prop_assert!(ss.degenerates_at_e2);
        prop_assert!(monodromy_on_graded(&m, &f).unwrap().only_lowers_by_two);
    }

    #[test]
    fn euler_characteristic_of_homology(seed: u64, pi in 0usize..4) {
        let f = field(pi);
        let m = random_pure_column_complex(&mut ChaCha8Rng::seed_from_u64(seed), &f);
        let c = m.complex();
        let h: i64 = c.homology_dims(&f).unwrap().iter().map(|(&n, &k)| if n % 2 == 0 { k as i64 } else { -(k as i64) }).sum();
        prop_assert_eq!(c.euler_characteristic(), h);
    }

    #[test]
    fn cone_of_monodromy_has_long_exact_sequence(seed: u64, pi in 0usize..4) {
        let f = field(pi);
        let m = random_pure_column_complex(&mut ChaCha8Rng::seed_from_u64(seed), &f);
        let nu = m.chain_map(&f);
        prop_assert!(nu.long_exact_sequence_holds(&f).unwrap());
        // the fiber is the cone shifted down by one
        let fib = m.fiber(&f).homology_dims(&f).unwrap();
        let cone: BTreeMap<i64, usize> = nu.cone().homology_dims(&f).unwrap().into_iter().map(|(n, k)| (n + 1, k)).collect();
        prop_assert_eq!(fib, cone);
    }

    #[test]
    fn shift_twist_and_dual_preserve_homology_size(seed: u64, pi in 0usize..4, k in -2i64..=2) {
        let f = field(pi);
        let m = random_pure_column_complex(&mut ChaCha8Rng::seed_from_u64(seed), &f);
        let c = m.complex();
        let total: usize = c.homology_dims(&f).unwrap().values().sum();
        for other in [c.shift(k), c.twist_shift(k, &f), c.dual(&f)] {
            prop_assert_eq!(other.homology_dims(&f).unwrap().values().sum::<usize>(), total);
        }
    }
}

/// Number of interleavings of an `a`-letter word with a `b`-letter word.
fn shuffles(a: usize, b: usize) -> BigInt {
    let n = a + b;
    BigInt::from((0u32..1 << n).filter(|m| m.count_ones() as usize == a).count())
}

#[test]
fn bar_table_counts_shuffles() {
    let table = bar_mult_table(8);
    for a in 0..=8 {
        for b in 0..=(8 - a) {
            assert_eq!(table.coeff(a, b), &shuffles(a, b), "c({a},{b})");
        }
    }
    let factorials = [1u64, 1, 2, 6, 24, 120, 720, 5040, 40320];
    for (n, fact) in factorials.iter().enumerate().skip(1) {
        assert_eq!(table.mu(n), BigInt::from(*fact));
    }
}

/// Coefficients of `(X + A)^m` in `X`, by repeated multiplication.
fn binomial_expansion(a: &Matrix, m: usize, f: &Field) -> Vec<Matrix> {
    let d = a.rows();
    let mut c = vec![Matrix::identity(d)];
    for _ in 0..m {
        let mut next = vec![Matrix::zeros(d, d); c.len() + 1];
        for (k, ck) in c.iter().enumerate() {
            next[k] = next[k].add(&ck.mul(a, f).unwrap()).unwrap();
            next[k + 1] = next[k + 1].add(ck).unwrap();
        }
        c = next;
    }
    c
}

#[test]
fn projection_formula_matches_polynomial_expansion() {
    let f = Field::new(3).unwrap();
    let fx = Matrix::from_ints(&[&[0, 1], &[0, 0]]);
    let y = PhiNModule::tate(-1, &f);
    let n_max = 4;
    let b = projection_formula_matrix(&y, &fx, n_max, &f).unwrap();
    for m in 0..=n_max {
        let coeffs = binomial_expansion(&fx, m, &f);
        for n in 0..=n_max {
            let expected = if n <= m { coeffs[n].clone() } else { Matrix::zeros(2, 2) };
            assert_eq!(b.submatrix(2 * m, 2, 2 * n, 2), expected, "block ({m},{n})");
        }
    }
}

proptest! {
    #[test]
    fn charpoly_matches_determinant(entries in proptest::collection::vec((-3i64..=3, -2i64..=2), 16), x in -4i64..=4, pi in 0usize..4) {
        // entries a + b√p of a 4×4 matrix, checked against det(xI − A)
        let f = field(pi);
        let a = Matrix::from_fn(4, 4, |i, j| {
            let (u, v) = entries[4 * i + j];
            Scalar::from_int(u).add(&f.mul(&Scalar::from_int(v), &Scalar::sqrt_p()))
        });
        let xi = Matrix::scalar(4, &Scalar::from_int(x));
        let cp = a.charpoly(&f).unwrap();
        prop_assert_eq!(cp.eval(&Scalar::from_int(x), &f), xi.sub(&a).unwrap().det(&f).unwrap());
    }
}
