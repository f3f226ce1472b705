use std::collections::BTreeMap;

use super::complex::{sign, Complex, Term};
use crate::algebra::{Field, Matrix};
use crate::error::{Error, Result};

/// Bounded double complex with cells `(h, v)`, horizontal maps
/// `∂′: (h, v) → (h+1, v)` and vertical maps `∂″: (h, v) → (h, v+1)`.
///
/// Squares commute; the totalization uses `d = ∂′ + (−1)^h ∂″`.
#[derive(Clone, Debug)]
pub struct DoubleComplex {
    cells: BTreeMap<(i64, i64), Term>,
    horizontal: BTreeMap<(i64, i64), Matrix>,
    vertical: BTreeMap<(i64, i64), Matrix>,
}

/// Where each cell sits inside the totalization.
#[derive(Clone, Debug, Default)]
pub struct TotalLayout {
    /// degree → list of `((h, v), offset, dim)` in block order
    pub cells: BTreeMap<i64, Vec<((i64, i64), usize, usize)>>,
}

impl TotalLayout {
    pub fn offset(&self, h: i64, v: i64) -> Option<usize> {
        self.cells.get(&(h + v))?.iter().find(|(c, _, _)| *c == (h, v)).map(|x| x.1)
    }
}

impl DoubleComplex {
    pub fn new(
        cells: BTreeMap<(i64, i64), Term>,
        horizontal: BTreeMap<(i64, i64), Matrix>,
        vertical: BTreeMap<(i64, i64), Matrix>,
        f: &Field,
    ) -> Result<Self> {
        let cells = cells.into_iter().filter(|(_, t)| t.dim() > 0).collect();
        let dc = DoubleComplex { cells, horizontal, vertical };
        dc.validate(f)?;
        Ok(dc)
    }

    pub fn cells(&self) -> &BTreeMap<(i64, i64), Term> {
        &self.cells
    }

    pub fn dim(&self, h: i64, v: i64) -> usize {
        self.cells.get(&(h, v)).map_or(0, Term::dim)
    }

    pub fn horizontal(&self, h: i64, v: i64) -> Matrix {
        self.horizontal.get(&(h, v)).cloned().unwrap_or_else(|| Matrix::zeros(self.dim(h + 1, v), self.dim(h, v)))
    }

    pub fn vertical(&self, h: i64, v: i64) -> Matrix {
        self.vertical.get(&(h, v)).cloned().unwrap_or_else(|| Matrix::zeros(self.dim(h, v + 1), self.dim(h, v)))
    }

    fn validate(&self, f: &Field) -> Result<()> {
        for (&(h, v), m) in &self.horizontal {
            if m.rows() != self.dim(h + 1, v) || m.cols() != self.dim(h, v) {
                return Err(Error::DimensionMismatch(format!("horizontal map at ({h},{v})")));
            }
        }
        for (&(h, v), m) in &self.vertical {
            if m.rows() != self.dim(h, v + 1) || m.cols() != self.dim(h, v) {
                return Err(Error::DimensionMismatch(format!("vertical map at ({h},{v})")));
            }
        }
        for &(h, v) in self.cells.keys() {
            if !self.horizontal(h + 1, v).mul(&self.horizontal(h, v), f)?.is_zero() {
                return Err(Error::SignViolation(format!("∂′∘∂′ ≠ 0 at ({h},{v})")));
            }
            if !self.vertical(h, v + 1).mul(&self.vertical(h, v), f)?.is_zero() {
                return Err(Error::SignViolation(format!("∂″∘∂″ ≠ 0 at ({h},{v})")));
            }
            let hv = self.horizontal(h, v + 1).mul(&self.vertical(h, v), f)?;
            let vh = self.vertical(h + 1, v).mul(&self.horizontal(h, v), f)?;
            if hv != vh {
                return Err(Error::SignViolation(format!("square at ({h},{v}) does not commute")));
            }
        }
        Ok(())
    }

    pub fn layout(&self) -> TotalLayout {
        let mut layout = TotalLayout::default();
        for (&(h, v), t) in &self.cells {
            let entry = layout.cells.entry(h + v).or_default();
            let off = entry.last().map_or(0, |&(_, o, d)| o + d);
            entry.push(((h, v), off, t.dim()));
        }
        layout
    }

    /// Direct-sum totalization; cells of a degree are ordered by `h`.
    pub fn total_complex(&self, f: &Field) -> Result<(Complex, TotalLayout)> {
        let layout = self.layout();
        let mut terms = BTreeMap::new();
        let mut diffs = BTreeMap::new();
        for (&n, entries) in &layout.cells {
            let parts: Vec<&Term> = entries.iter().map(|(c, _, _)| &self.cells[c]).collect();
            terms.insert(n, Term::sum(&parts));
        }
        let dim_of = |n: i64| layout.cells.get(&n).and_then(|e| e.last()).map_or(0, |&(_, o, d)| o + d);
        for (&n, entries) in &layout.cells {
            let mut d = Matrix::zeros(dim_of(n + 1), dim_of(n));
            for &((h, v), off, _) in entries {
                if let Some(t) = layout.offset(h + 1, v) {
                    d.set_block(t, off, &self.horizontal(h, v));
                }
                if let Some(t) = layout.offset(h, v + 1) {
                    let vert = self.vertical(h, v);
                    d.set_block(t, off, &if sign(h) > 0 { vert } else { vert.neg() });
                }
            }
            diffs.insert(n, d);
        }
        Ok((Complex::new(terms, diffs, f)?, layout))
    }
}

pub fn total_complex(d: &DoubleComplex, f: &Field) -> Result<Complex> {
    Ok(d.total_complex(f)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phimod::PhiNModule;

    fn unit_cell() -> Term {
        Term::plain(PhiNModule::unit())
    }

    #[test]
    fn single_cell() {
        let f = Field::new(3).unwrap();
        let d = DoubleComplex::new(BTreeMap::from([((0, 0), unit_cell())]), BTreeMap::new(), BTreeMap::new(), &f).unwrap();
        let t = total_complex(&d, &f).unwrap();
        assert_eq!(t.dims(), BTreeMap::from([(0, 1)]));
    }

    #[test]
    fn koszul_square_is_acyclic() {
        let f = Field::new(3).unwrap();
        let cells = [(0, 0), (1, 0), (0, 1), (1, 1)].into_iter().map(|c| (c, unit_cell())).collect();
        let id = Matrix::identity(1);
        let horizontal = BTreeMap::from([((0, 0), id.clone()), ((0, 1), id.clone())]);
        let vertical = BTreeMap::from([((0, 0), id.clone()), ((1, 0), id)]);
        let d = DoubleComplex::new(cells, horizontal, vertical, &f).unwrap();
        let t = total_complex(&d, &f).unwrap();
        assert_eq!(t.dims(), BTreeMap::from([(0, 1), (1, 2), (2, 1)]));
        assert!(t.homology_dims(&f).unwrap().is_empty());
    }

    #[test]
    fn anticommuting_square_is_rejected() {
        let f = Field::new(3).unwrap();
        let cells = [(0, 0), (1, 0), (0, 1), (1, 1)].into_iter().map(|c| (c, unit_cell())).collect();
        let id = Matrix::identity(1);
        let horizontal = BTreeMap::from([((0, 0), id.clone()), ((0, 1), id.neg())]);
        let vertical = BTreeMap::from([((0, 0), id.clone()), ((1, 0), id)]);
        assert!(matches!(DoubleComplex::new(cells, horizontal, vertical, &f), Err(Error::SignViolation(_))));
    }
}
