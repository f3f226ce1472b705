//! Built-in special fibers.

use std::collections::BTreeMap;

use super::fiber::{validate_fiber, FiberSpec, PairingSpec, PieceSpec, RestrictionSpec, SemistableFiber, StratumSpec};
use crate::algebra::{Field, Matrix, Scalar};
use crate::error::{Error, Result};

pub const BUILTIN_NAMES: [&str; 4] = ["good-elliptic", "tate-2gon", "tate-ngon(n)", "two-component-surface"];

fn piece(weight: i64, dim: usize) -> PieceSpec {
    PieceSpec { weight, dim, phi: None }
}

fn labels(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

/// Cohomology of `P^k`: one class in each even degree.
fn projective_space(k: usize) -> BTreeMap<i64, Vec<PieceSpec>> {
    (0..=k as i64).map(|i| (2 * i, vec![piece(2 * i, 1)])).collect()
}

fn points(n: usize) -> BTreeMap<i64, Vec<PieceSpec>> {
    BTreeMap::from([(0, vec![piece(0, n)])])
}

fn restriction(from: &[&str], to: &[&str], degree: i64, matrix: Matrix) -> RestrictionSpec {
    RestrictionSpec { from: labels(from), to: labels(to), degree, matrix }
}

/// Good reduction: one smooth curve of genus 1 with Frobenius on `H¹`
/// having eigenvalues `±√p`.
pub fn good_elliptic(p: u64) -> FiberSpec {
    let p = p as i64;
    let h1 = PieceSpec { weight: 1, dim: 2, phi: Some(Matrix::from_ints(&[&[0, p], &[1, 0]])) };
    let cohomology = BTreeMap::from([(0, vec![piece(0, 1)]), (1, vec![h1]), (2, vec![piece(2, 1)])]);
    FiberSpec {
        prime: p as u64,
        relative_dimension: 1,
        components: labels(&["E"]),
        strata: vec![StratumSpec { components: labels(&["E"]), cohomology }],
        restrictions: Vec::new(),
        pairings: Vec::new(),
    }
}

/// A cycle of `n ≥ 2` projective lines; for `n = 2` the two lines meet in
/// two points.
pub fn tate_ngon(p: u64, n: usize) -> Result<FiberSpec> {
    if n < 2 {
        return Err(Error::UnknownExample(format!("tate-ngon({n}) needs n ≥ 2")));
    }
    let names: Vec<String> = (1..=n).map(|i| format!("C{i}")).collect();
    let mut strata: Vec<StratumSpec> =
        names.iter().map(|c| StratumSpec { components: vec![c.clone()], cohomology: projective_space(1) }).collect();
    let mut restrictions = Vec::new();
    let pairs: Vec<(usize, usize)> = if n == 2 { vec![(0, 1)] } else { (0..n).map(|i| (i.min((i + 1) % n), i.max((i + 1) % n))).collect() };
    let npts = if n == 2 { 2 } else { 1 };
    let ones = Matrix::from_fn(npts, 1, |_, _| Scalar::one());
    for (a, b) in pairs {
        let pair = vec![names[a].clone(), names[b].clone()];
        strata.push(StratumSpec { components: pair.clone(), cohomology: points(npts) });
        for c in [a, b] {
            restrictions.push(RestrictionSpec { from: vec![names[c].clone()], to: pair.clone(), degree: 0, matrix: ones.clone() });
        }
    }
    Ok(FiberSpec { prime: p, relative_dimension: 1, components: names, strata, restrictions, pairings: Vec::new() })
}

/// `P² ∪ F₁` glued along a line `ℓ ⊂ P²` identified with the exceptional
/// curve `e ⊂ F₁`; the generic fiber is `P²`. `H²(F₁)` has basis `(h, e)`
/// with `h² = 1`, `e² = −1`, `h·e = 0`.
pub fn two_component_surface(p: u64) -> FiberSpec {
    let f1 = BTreeMap::from([(0, vec![piece(0, 1)]), (2, vec![piece(2, 2)]), (4, vec![piece(4, 1)])]);
    FiberSpec {
        prime: p,
        relative_dimension: 2,
        components: labels(&["P2", "F1"]),
        strata: vec![
            StratumSpec { components: labels(&["P2"]), cohomology: projective_space(2) },
            StratumSpec { components: labels(&["F1"]), cohomology: f1 },
            StratumSpec { components: labels(&["P2", "F1"]), cohomology: projective_space(1) },
        ],
        restrictions: vec![
            restriction(&["P2"], &["P2", "F1"], 0, Matrix::from_ints(&[&[1]])),
            restriction(&["P2"], &["P2", "F1"], 2, Matrix::from_ints(&[&[1]])),
            restriction(&["F1"], &["P2", "F1"], 0, Matrix::from_ints(&[&[1]])),
            restriction(&["F1"], &["P2", "F1"], 2, Matrix::from_ints(&[&[0, -1]])),
        ],
        pairings: vec![PairingSpec { stratum: labels(&["F1"]), degree: 2, matrix: Matrix::from_ints(&[&[1, 0], &[0, -1]]) }],
    }
}

/// Parses `tate-ngon(3)`, `tate-ngon:3` and `tate-3gon`.
fn ngon_size(name: &str) -> Option<usize> {
    if let Some(rest) = name.strip_prefix("tate-ngon") {
        let inner = rest.trim_start_matches(['(', ':']).trim_end_matches(')');
        return inner.parse().ok();
    }
    name.strip_prefix("tate-")?.strip_suffix("gon")?.parse().ok()
}

pub fn builtin_spec(name: &str, p: u64) -> Result<FiberSpec> {
    Field::new(p)?;
    match name {
        "good-elliptic" => Ok(good_elliptic(p)),
        "two-component-surface" => Ok(two_component_surface(p)),
        _ => match ngon_size(name) {
            Some(n) => tate_ngon(p, n),
            None => Err(Error::UnknownExample(name.to_string())),
        },
    }
}

pub fn builtin_example(name: &str, p: u64) -> Result<SemistableFiber> {
    validate_fiber(&builtin_spec(name, p)?)
}
