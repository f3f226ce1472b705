//! Splitting a Frobenius matrix into generalized eigenspaces of the
//! restricted Weil numbers `±p^{m/2}`, grouped by weight `m`.

use std::collections::BTreeMap;

use super::matrix::Matrix;
use super::scalar::{Field, Scalar};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct WeightPiece {
    pub dim: usize,
    /// Columns span the generalized eigenspace(s) of weight `m`.
    pub basis: Matrix,
    /// `(eigenvalue, algebraic multiplicity)`; at most two entries (`±p^{m/2}`).
    pub eigenvalues: Vec<(Scalar, usize)>,
}

#[derive(Clone, Debug)]
pub struct WeightSplit {
    ambient: usize,
    pieces: BTreeMap<i64, WeightPiece>,
}

impl WeightSplit {
    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn pieces(&self) -> &BTreeMap<i64, WeightPiece> {
        &self.pieces
    }

    pub fn piece(&self, m: i64) -> Option<&WeightPiece> {
        self.pieces.get(&m)
    }

    pub fn dims(&self) -> BTreeMap<i64, usize> {
        self.pieces.iter().map(|(&m, p)| (m, p.dim)).collect()
    }

    /// Weights with multiplicity, ascending.
    pub fn weight_multiset(&self) -> Vec<i64> {
        self.pieces.iter().flat_map(|(&m, p)| std::iter::repeat_n(m, p.dim)).collect()
    }

    pub fn pure_weight(&self) -> Option<i64> {
        match self.pieces.len() {
            1 => self.pieces.keys().next().copied(),
            _ => None,
        }
    }

    /// Empty spaces count as pure of every weight.
    pub fn is_pure_of(&self, m: i64) -> bool {
        self.pieces.keys().all(|&k| k == m)
    }

    /// Concatenated piece bases in ascending weight order.
    pub fn change_of_basis(&self) -> Matrix {
        if self.pieces.is_empty() {
            return Matrix::zeros(self.ambient, 0);
        }
        let parts: Vec<&Matrix> = self.pieces.values().map(|p| &p.basis).collect();
        Matrix::hstack(&parts).expect("pieces share the ambient dimension")
    }

    /// Offset of each weight's block inside [`Self::change_of_basis`].
    pub fn offsets(&self) -> BTreeMap<i64, usize> {
        let mut off = 0;
        self.pieces
            .iter()
            .map(|(&m, p)| {
                let o = off;
                off += p.dim;
                (m, o)
            })
            .collect()
    }
}

fn min_double_valuation(m: &Matrix, f: &Field) -> Option<i64> {
    m.entries().filter_map(|e| f.double_valuation(e)).min()
}

/// Every eigenvalue `λ` has `v(λ) ≥ min v(Φ)` and `v(λ⁻¹) ≥ min v(Φ⁻¹)`, so
/// its weight (twice its valuation) lies in this window.
fn weight_window(phi: &Matrix, inv: &Matrix, f: &Field) -> (i64, i64) {
    let lo = min_double_valuation(phi, f).unwrap_or(0);
    let hi = -min_double_valuation(inv, f).unwrap_or(0);
    (lo, hi)
}

pub fn weil_split(phi: &Matrix, f: &Field) -> Result<WeightSplit> {
    if !phi.is_square() {
        return Err(Error::DimensionMismatch("Frobenius must be square".into()));
    }
    let n = phi.rows();
    if n == 0 {
        return Ok(WeightSplit { ambient: 0, pieces: BTreeMap::new() });
    }
    let inv = phi.inverse(f).map_err(|_| Error::NotInvertible("Frobenius has determinant 0".into()))?;
    let cp = phi.charpoly(f)?;
    let (lo, hi) = weight_window(phi, &inv, f);

    let mut rest = cp.clone();
    let mut found: BTreeMap<i64, Vec<(Scalar, usize)>> = BTreeMap::new();
    let mut total = 0;
    for m in lo..=hi {
        for negative in [false, true] {
            let lambda = f.weil_number(m, negative);
            let (mult, q) = rest.multiplicity(&lambda, f);
            if mult > 0 {
                rest = q;
                total += mult;
                found.entry(m).or_default().push((lambda, mult));
            }
        }
        if total == n {
            break;
        }
    }
    if total != n {
        return Err(Error::UnsupportedWeilNumber(cp.to_string()));
    }

    let mut pieces = BTreeMap::new();
    for (m, eigen) in found {
        let mut bases = Vec::new();
        for (lambda, mult) in &eigen {
            let shifted = phi.sub(&Matrix::scalar(n, lambda))?;
            // powers only when Φ is not semisimple at λ
            let mut power = shifted.clone();
            let mut kernel = power.kernel(f);
            while kernel.cols() < *mult {
                power = power.mul(&shifted, f)?;
                kernel = power.kernel(f);
            }
            bases.push(kernel);
        }
        let refs: Vec<&Matrix> = bases.iter().collect();
        let basis = Matrix::hstack(&refs)?;
        pieces.insert(m, WeightPiece { dim: basis.cols(), basis, eigenvalues: eigen });
    }
    Ok(WeightSplit { ambient: n, pieces })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> Field {
        Field::new(p).unwrap()
    }

    #[test]
    fn diagonal_p_powers() {
        let f = f(3);
        let s = weil_split(&Matrix::from_ints(&[&[1, 0], &[0, 3]]), &f).unwrap();
        assert_eq!(s.dims(), BTreeMap::from([(0, 1), (2, 1)]));
        assert_eq!(s.pure_weight(), None);
    }

    #[test]
    fn plus_minus_sqrt_p_is_pure_weight_one() {
        let f = f(5);
        let s = weil_split(&Matrix::from_ints(&[&[0, 5], &[1, 0]]), &f).unwrap();
        assert_eq!(s.dims(), BTreeMap::from([(1, 2)]));
        assert_eq!(s.pure_weight(), Some(1));
    }

    #[test]
    fn imaginary_weil_number_is_unsupported() {
        let f = f(5);
        let err = weil_split(&Matrix::from_ints(&[&[0, -5], &[1, 0]]), &f).unwrap_err();
        assert!(matches!(err, Error::UnsupportedWeilNumber(_)));
    }

    #[test]
    fn singular_frobenius() {
        let err = weil_split(&Matrix::from_ints(&[&[1, 0], &[0, 0]]), &f(3)).unwrap_err();
        assert!(matches!(err, Error::NotInvertible(_)));
    }

    #[test]
    fn non_semisimple_block() {
        let f = f(2);
        // Jordan block with eigenvalue 2: generalized eigenspace is everything
        let s = weil_split(&Matrix::from_ints(&[&[2, 1], &[0, 2]]), &f).unwrap();
        assert_eq!(s.dims(), BTreeMap::from([(2, 2)]));
    }
}
