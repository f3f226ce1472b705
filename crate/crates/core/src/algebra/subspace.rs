//! Subspaces as column-basis matrices, and subquotients `Z/B` with
//! representatives for computing induced maps.

use super::matrix::Matrix;
use super::scalar::Field;
use crate::error::{Error, Result};

/// Reduce a spanning set to a basis.
pub fn basis(span: &Matrix, f: &Field) -> Matrix {
    span.image(f)
}

pub fn dim(span: &Matrix, f: &Field) -> usize {
    span.rank(f)
}

pub fn sum(a: &Matrix, b: &Matrix, f: &Field) -> Result<Matrix> {
    Ok(basis(&Matrix::hstack(&[a, b])?, f))
}

pub fn intersect(a: &Matrix, b: &Matrix, f: &Field) -> Result<Matrix> {
    let a = basis(a, f);
    let b = basis(b, f);
    let k = Matrix::hstack(&[&a, &b.neg()])?.kernel(f);
    let coeffs = k.submatrix(0, a.cols(), 0, k.cols());
    Ok(basis(&a.mul(&coeffs, f)?, f))
}

/// Whether every column of `vecs` lies in the span of `space`.
pub fn contains(space: &Matrix, vecs: &Matrix, f: &Field) -> Result<bool> {
    if vecs.cols() == 0 {
        return Ok(true);
    }
    let r = space.rank(f);
    Ok(Matrix::hstack(&[space, vecs])?.rank(f) == r)
}

/// Preimage `{x : map·x ∈ target}`.
pub fn preimage(map: &Matrix, target: &Matrix, f: &Field) -> Result<Matrix> {
    let k = Matrix::hstack(&[map, &target.neg()])?.kernel(f);
    Ok(basis(&k.submatrix(0, map.cols(), 0, k.cols()), f))
}

/// Standard basis vectors of the given coordinates, as columns.
pub fn coordinate_subspace(ambient: usize, idx: &[usize]) -> Matrix {
    Matrix::identity(ambient).select_columns(idx)
}

/// A subquotient `Z/B` (with `B ⊆ Z`) of an ambient space.
#[derive(Clone, Debug)]
pub struct Subquotient {
    ambient: usize,
    boundaries: Matrix,
    reps: Matrix,
    // [B | R], full column rank, for coordinate solving
    frame: Matrix,
}

impl Subquotient {
    pub fn new(cycles: &Matrix, boundaries: &Matrix, f: &Field) -> Result<Self> {
        let ambient = cycles.rows();
        let b = basis(boundaries, f);
        let stacked = Matrix::hstack(&[&b, cycles])?;
        let (_, pivots) = stacked.rref(f);
        if pivots.iter().take(b.cols()).enumerate().any(|(i, &p)| i != p) {
            return Err(Error::DimensionMismatch("boundaries are not independent".into()));
        }
        let rep_cols: Vec<usize> = pivots.iter().filter(|&&p| p >= b.cols()).map(|&p| p - b.cols()).collect();
        let reps = cycles.select_columns(&rep_cols);
        if !contains(cycles, &b, f)? {
            return Err(Error::DimensionMismatch("boundaries not contained in cycles".into()));
        }
        let frame = Matrix::hstack(&[&b, &reps])?;
        Ok(Subquotient { ambient, boundaries: b, reps, frame })
    }

    pub fn dim(&self) -> usize {
        self.reps.cols()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// Representatives of a basis of the quotient.
    pub fn reps(&self) -> &Matrix {
        &self.reps
    }

    pub fn boundaries(&self) -> &Matrix {
        &self.boundaries
    }

    /// Coordinates of the classes of the columns of `v` (which must lie in `Z`).
    pub fn coords(&self, v: &Matrix, f: &Field) -> Result<Matrix> {
        let x = self
            .frame
            .solve(v, f)?
            .ok_or_else(|| Error::DimensionMismatch("vector does not lie in the cycle space".into()))?;
        let nb = self.boundaries.cols();
        Ok(x.submatrix(nb, self.dim(), 0, x.cols()))
    }

    /// Matrix of the map induced by `map` from `self` to `target`.
    pub fn induced(&self, map: &Matrix, target: &Subquotient, f: &Field) -> Result<Matrix> {
        if self.dim() == 0 || target.dim() == 0 {
            return Ok(Matrix::zeros(target.dim(), self.dim()));
        }
        let images = map.mul(&self.reps, f)?;
        target.coords(&images, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn intersection_and_sum() {
        let f = Field::new(3).unwrap();
        let a = Matrix::from_ints(&[&[1, 0], &[0, 1], &[0, 0]]);
        let b = Matrix::from_ints(&[&[0, 0], &[1, 0], &[0, 1]]);
        let i = intersect(&a, &b, &f).unwrap();
        assert_eq!(i.cols(), 1);
        assert!(contains(&Matrix::from_ints(&[&[0], &[1], &[0]]), &i, &f).unwrap());
        assert_eq!(sum(&a, &b, &f).unwrap().cols(), 3);
    }

    #[test]
    fn quotient_coordinates() {
        let f = Field::new(3).unwrap();
        let z = Matrix::identity(2);
        let b = Matrix::from_ints(&[&[1], &[1]]);
        let q = Subquotient::new(&z, &b, &f).unwrap();
        assert_eq!(q.dim(), 1);
        // e1 and e2 are the same class modulo e1 + e2, up to sign
        let c1 = q.coords(&Matrix::from_ints(&[&[1], &[0]]), &f).unwrap();
        let c2 = q.coords(&Matrix::from_ints(&[&[0], &[1]]), &f).unwrap();
        assert_eq!(c1, c2.neg());
    }
}
