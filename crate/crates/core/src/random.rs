//! Seeded generators of small random objects, for randomized checks.

use std::collections::BTreeMap;

use rand::Rng;

use crate::algebra::{Field, Matrix, Scalar};
use crate::complexes::{cofree_truncation, Complex, MonodromyComplex, Term};
use crate::phimod::{mk_phin, PhiNModule};

/// Unit lower times unit upper triangular, entries in `{−1, 0, 1}`.
pub fn random_invertible<R: Rng>(rng: &mut R, n: usize, f: &Field) -> Matrix {
    let l = Matrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => Scalar::one(),
        std::cmp::Ordering::Greater => Scalar::from_int(rng.gen_range(-1..=1)),
        std::cmp::Ordering::Less => Scalar::zero(),
    });
    let u = Matrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => Scalar::one(),
        std::cmp::Ordering::Less => Scalar::from_int(rng.gen_range(-1..=1)),
        std::cmp::Ordering::Greater => Scalar::zero(),
    });
    l.mul(&u, f).expect("square")
}

/// Eigenvalue data `(weight, negative)` of a basis vector.
type Eigen = (i64, bool);

fn eigen_diag(eig: &[Eigen], f: &Field) -> Matrix {
    let vals: Vec<Scalar> = eig.iter().map(|&(m, neg)| f.weil_number(m, neg)).collect();
    Matrix::diag(&vals)
}

/// A random `(φ,N)`-module of dimension `1..=max_dim` with weights in
/// `weights`, Frobenius diagonalizable over `Q(√p)` and a random `N`
/// compatible with it, all conjugated by a random change of basis.
pub fn random_module<R: Rng>(rng: &mut R, f: &Field, max_dim: usize, weights: (i64, i64)) -> PhiNModule {
    let dim = rng.gen_range(1..=max_dim);
    let mut eig: Vec<Eigen> = Vec::with_capacity(dim);
    for i in 0..dim {
        // chains of weights m, m−2, ... give room for monodromy
        let chained = i > 0 && eig[i - 1].0 - 2 >= weights.0 && rng.gen_bool(0.5);
        let e = if chained { (eig[i - 1].0 - 2, eig[i - 1].1) } else { (rng.gen_range(weights.0..=weights.1), rng.gen_bool(0.3)) };
        eig.push(e);
    }
    let n = Matrix::from_fn(dim, dim, |r, c| {
        let (mc, sc) = eig[c];
        let (mr, sr) = eig[r];
        if mr == mc - 2 && sr == sc {
            Scalar::from_int(rng.gen_range(-2..=2))
        } else {
            Scalar::zero()
        }
    });
    let p = random_invertible(rng, dim, f);
    let pinv = p.inverse(f).expect("unitriangular product");
    let phi = Matrix::product(&[&p, &eigen_diag(&eig, f), &pinv], f).expect("square");
    let n = Matrix::product(&[&p, &n, &pinv], f).expect("square");
    mk_phin(phi, Some(n), f).expect("N lowers weight by two")
}

/// A random φ-module pure of weight `weight`, with `N = 0`.
pub fn random_pure_module<R: Rng>(rng: &mut R, f: &Field, dim: usize, weight: i64) -> PhiNModule {
    let eig: Vec<Eigen> = (0..dim).map(|_| (weight, rng.gen_bool(0.3))).collect();
    pure_with(rng, f, &eig).0
}

fn pure_with<R: Rng>(rng: &mut R, f: &Field, eig: &[Eigen]) -> (PhiNModule, Matrix) {
    let p = random_invertible(rng, eig.len(), f);
    let phi = Matrix::product(&[&p, &eigen_diag(eig, f), &p.inverse(f).expect("invertible")], f).expect("square");
    (PhiNModule::from_phi(phi, f).expect("invertible"), p)
}

/// `A → B` in degrees 0, 1, both pure of weight `w`, with a random
/// Frobenius-equivariant differential; columns `−w` and `1 − w`.
fn two_term<R: Rng>(rng: &mut R, f: &Field, w: i64) -> Complex {
    let a: Vec<Eigen> = (0..rng.gen_range(1..=2)).map(|_| (w, rng.gen_bool(0.3))).collect();
    let b: Vec<Eigen> = (0..rng.gen_range(1..=2)).map(|_| (w, rng.gen_bool(0.3))).collect();
    let (ma, pa) = pure_with(rng, f, &a);
    let (mb, pb) = pure_with(rng, f, &b);
    let e = Matrix::from_fn(b.len(), a.len(), |r, c| if a[c] == b[r] { Scalar::from_int(rng.gen_range(-1..=2)) } else { Scalar::zero() });
    let d = Matrix::product(&[&pb, &e, &pa.inverse(f).expect("invertible")], f).expect("shapes");
    let terms = BTreeMap::from([(0, Term::single(ma, "A", -w)), (1, Term::single(mb, "B", 1 - w))]);
    Complex::new(terms, BTreeMap::from([(0, d)]), f).expect("equivariant differential")
}

/// A random monodromy complex whose column-`p` blocks in degree `n` are pure
/// of weight `n − p`: a sum of shifted and twisted cofree truncations and
/// two-term complexes with equivariant differentials.
pub fn random_pure_column_complex<R: Rng>(rng: &mut R, f: &Field) -> MonodromyComplex {
    let mut out: Option<MonodromyComplex> = None;
    for _ in 0..rng.gen_range(1..=3) {
        let piece = if rng.gen_bool(0.5) {
            let dim = rng.gen_range(1..=2);
            let x = random_pure_module(rng, f, dim, 0);
            cofree_truncation(&x, rng.gen_range(1..=2), f).expect("n_max ≥ 1")
        } else {
            let w = rng.gen_range(-2..=2);
            let c = two_term(rng, f, w);
            let nu = c.degrees().into_iter().map(|n| (n, Matrix::zeros(c.dim(n), c.dim(n)))).collect();
            MonodromyComplex::new(c, nu, f).expect("zero monodromy")
        };
        let piece = piece.shift(rng.gen_range(-2..=2)).twist_shift(rng.gen_range(-1..=1), f);
        out = Some(match out {
            Some(acc) => acc.direct_sum(&piece),
            None => piece,
        });
    }
    let m = out.expect("at least one piece");
    let nu = m.complex().degrees().into_iter().map(|n| (n, m.nu(n))).collect();
    MonodromyComplex::new(m.complex().clone(), nu, f).expect("sum of valid pieces")
}
