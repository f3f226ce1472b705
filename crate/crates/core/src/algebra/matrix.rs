//! Dense matrices over Q(√p) with exact Gaussian elimination.

use std::fmt;

use num_rational::BigRational;

use super::poly::Poly;
use super::scalar::{Field, Scalar};
use crate::error::{Error, Result};

/// Row-major dense matrix. Vectors are column matrices; subspaces are
/// represented by matrices whose columns form a basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// Output of [`Matrix::rank_kernel`].
#[derive(Clone, Debug)]
pub struct RankKernel {
    pub rank: usize,
    pub kernel: Matrix,
    pub image: Matrix,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged matrix rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Integer matrix literal; panics on ragged input, so only for fixed data.
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let c = rows.first().map_or(0, |r| r.len());
        Matrix::from_fn(rows.len(), c, |i, j| Scalar::from_int(rows[i][j]))
    }

    pub fn diag(entries: &[Scalar]) -> Self {
        let n = entries.len();
        let mut m = Matrix::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m.set(i, i, e.clone());
        }
        m
    }

    pub fn scalar(n: usize, s: &Scalar) -> Self {
        Matrix::diag(&vec![s.clone(); n])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> impl Iterator<Item = &Scalar> {
        self.data.iter()
    }

    pub fn row(&self, i: usize) -> Vec<Scalar> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn column(&self, j: usize) -> Matrix {
        Matrix::from_fn(self.rows, 1, |i, _| self.get(i, j).clone())
    }

    pub fn select_columns(&self, idx: &[usize]) -> Matrix {
        Matrix::from_fn(self.rows, idx.len(), |i, j| self.get(i, idx[j]).clone())
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        Matrix::from_fn(idx.len(), self.cols, |i, j| self.get(idx[i], j).clone())
    }

    pub fn submatrix(&self, r0: usize, nr: usize, c0: usize, nc: usize) -> Matrix {
        Matrix::from_fn(nr, nc, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    /// Writes `block` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j).clone());
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = self.get(i, j);
                    if i == j {
                        e.is_one()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    fn check_same_shape(&self, other: &Matrix, op: &str) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{op}: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_shape(other, "add")?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(x, y)| x.add(y)).collect(),
        })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_shape(other, "sub")?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(x, y)| x.sub(y)).collect(),
        })
    }

    pub fn neg(&self) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(Scalar::neg).collect() }
    }

    pub fn scale(&self, s: &Scalar, f: &Field) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| f.mul(x, s)).collect() }
    }

    pub fn scale_rational(&self, q: &BigRational) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x.scale(q)).collect() }
    }

    pub fn mul(&self, other: &Matrix, f: &Field) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "mul: {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = out.data[idx].add(&f.mul(a, b));
                }
            }
        }
        Ok(out)
    }

    /// Product of a chain of matrices, applied right to left (`ms[0]·ms[1]·…`).
    pub fn product(ms: &[&Matrix], f: &Field) -> Result<Matrix> {
        let mut iter = ms.iter();
        let mut acc = (*iter.next().expect("empty product")).clone();
        for m in iter {
            acc = acc.mul(m, f)?;
        }
        Ok(acc)
    }

    pub fn pow(&self, k: usize, f: &Field) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("pow of non-square matrix".into()));
        }
        let mut acc = Matrix::identity(self.rows);
        for _ in 0..k {
            acc = acc.mul(self, f)?;
        }
        Ok(acc)
    }

    /// Kronecker product; index `(i·r₂ + k, j·c₂ + l)` holds `self[i,j]·other[k,l]`.
    pub fn kron(&self, other: &Matrix, f: &Field) -> Matrix {
        let (r2, c2) = (other.rows, other.cols);
        Matrix::from_fn(self.rows * r2, self.cols * c2, |i, j| {
            f.mul(self.get(i / r2, j / c2), other.get(i % r2, j % c2))
        })
    }

    pub fn hstack(parts: &[&Matrix]) -> Result<Matrix> {
        let rows = parts.first().map_or(0, |m| m.rows);
        if parts.iter().any(|m| m.rows != rows) {
            return Err(Error::DimensionMismatch("hstack row counts differ".into()));
        }
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Matrix::zeros(rows, cols);
        let mut c0 = 0;
        for m in parts {
            out.set_block(0, c0, m);
            c0 += m.cols;
        }
        Ok(out)
    }

    pub fn vstack(parts: &[&Matrix]) -> Result<Matrix> {
        let cols = parts.first().map_or(0, |m| m.cols);
        if parts.iter().any(|m| m.cols != cols) {
            return Err(Error::DimensionMismatch("vstack column counts differ".into()));
        }
        let rows = parts.iter().map(|m| m.rows).sum();
        let mut out = Matrix::zeros(rows, cols);
        let mut r0 = 0;
        for m in parts {
            out.set_block(r0, 0, m);
            r0 += m.rows;
        }
        Ok(out)
    }

    pub fn block_diag(parts: &[&Matrix]) -> Matrix {
        let rows = parts.iter().map(|m| m.rows).sum();
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Matrix::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for m in parts {
            out.set_block(r0, c0, m);
            r0 += m.rows;
            c0 += m.cols;
        }
        out
    }

    pub fn trace(&self) -> Scalar {
        (0..self.rows.min(self.cols)).fold(Scalar::zero(), |acc, i| acc.add(self.get(i, i)))
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self, f: &Field) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(piv) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            if piv != row {
                for j in 0..m.cols {
                    m.data.swap(piv * m.cols + j, row * m.cols + j);
                }
            }
            let inv = f.inv(m.get(row, col)).expect("pivot is nonzero");
            for j in col..m.cols {
                let v = f.mul(m.get(row, j), &inv);
                m.set(row, j, v);
            }
            for r in 0..m.rows {
                if r == row || m.get(r, col).is_zero() {
                    continue;
                }
                let factor = m.get(r, col).clone();
                for j in col..m.cols {
                    let v = m.get(r, j).sub(&f.mul(&factor, m.get(row, j)));
                    m.set(r, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self, f: &Field) -> usize {
        self.rref(f).1.len()
    }

    /// Basis of the null space, one column per free variable.
    pub fn kernel(&self, f: &Field) -> Matrix {
        let (r, pivots) = self.rref(f);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Matrix::zeros(self.cols, free.len());
        for (idx, &fc) in free.iter().enumerate() {
            k.set(fc, idx, Scalar::one());
            for (prow, &pc) in pivots.iter().enumerate() {
                k.set(pc, idx, r.get(prow, fc).neg());
            }
        }
        k
    }

    /// Basis of the column space: the pivot columns of `self`.
    pub fn image(&self, f: &Field) -> Matrix {
        let (_, pivots) = self.rref(f);
        self.select_columns(&pivots)
    }

    pub fn rank_kernel(&self, f: &Field) -> RankKernel {
        let (r, pivots) = self.rref(f);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut kernel = Matrix::zeros(self.cols, free.len());
        for (idx, &fc) in free.iter().enumerate() {
            kernel.set(fc, idx, Scalar::one());
            for (prow, &pc) in pivots.iter().enumerate() {
                kernel.set(pc, idx, r.get(prow, fc).neg());
            }
        }
        RankKernel { rank: pivots.len(), kernel, image: self.select_columns(&pivots) }
    }

    pub fn inverse(&self, f: &Field) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::NotInvertible(format!("{}x{} is not square", self.rows, self.cols)));
        }
        let n = self.rows;
        let aug = Matrix::hstack(&[self, &Matrix::identity(n)])?;
        let (r, pivots) = aug.rref(f);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::NotInvertible("singular matrix".into()));
        }
        Ok(r.submatrix(0, n, n, n))
    }

    pub fn det(&self, f: &Field) -> Result<Scalar> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("det of non-square matrix".into()));
        }
        let mut m = self.clone();
        let n = self.rows;
        let mut det = Scalar::one();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !m.get(r, col).is_zero()) else {
                return Ok(Scalar::zero());
            };
            if piv != col {
                for j in 0..n {
                    m.data.swap(piv * n + j, col * n + j);
                }
                det = det.neg();
            }
            let p = m.get(col, col).clone();
            det = f.mul(&det, &p);
            let inv = f.inv(&p)?;
            for r in col + 1..n {
                if m.get(r, col).is_zero() {
                    continue;
                }
                let factor = f.mul(m.get(r, col), &inv);
                for j in col..n {
                    let v = m.get(r, j).sub(&f.mul(&factor, m.get(col, j)));
                    m.set(r, j, v);
                }
            }
        }
        Ok(det)
    }

    /// Some `X` with `self · X = rhs`, or `None` if the system is inconsistent.
    pub fn solve(&self, rhs: &Matrix, f: &Field) -> Result<Option<Matrix>> {
        if rhs.rows != self.rows {
            return Err(Error::DimensionMismatch("solve: row counts differ".into()));
        }
        let n = self.cols;
        let aug = Matrix::hstack(&[self, rhs])?;
        let (r, pivots) = aug.rref(f);
        if pivots.iter().any(|&p| p >= n) {
            return Ok(None);
        }
        let mut x = Matrix::zeros(n, rhs.cols);
        for (prow, &pc) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(pc, j, r.get(prow, n + j).clone());
            }
        }
        Ok(Some(x))
    }

    /// Characteristic polynomial `det(λI − A)`: reduce to upper Hessenberg
    /// form by similarity, then run the determinant recurrence on the
    /// leading principal minors.
    pub fn charpoly(&self, f: &Field) -> Result<Poly> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("charpoly of non-square matrix".into()));
        }
        let n = self.rows;
        let mut h = self.clone();
        for m in 1..n.saturating_sub(1) {
            let Some(piv) = (m..n).find(|&i| !h.get(i, m - 1).is_zero()) else {
                continue;
            };
            if piv != m {
                for j in 0..n {
                    let (a, b) = (h.get(piv, j).clone(), h.get(m, j).clone());
                    h.set(piv, j, b);
                    h.set(m, j, a);
                }
                for i in 0..n {
                    let (a, b) = (h.get(i, piv).clone(), h.get(i, m).clone());
                    h.set(i, piv, b);
                    h.set(i, m, a);
                }
            }
            let t = h.get(m, m - 1).clone();
            for i in (m + 1)..n {
                if h.get(i, m - 1).is_zero() {
                    continue;
                }
                let u = f.div(h.get(i, m - 1), &t)?;
                // row_i −= u·row_m, then col_m += u·col_i keeps the similarity
                for j in 0..n {
                    let v = h.get(i, j).sub(&f.mul(&u, h.get(m, j)));
                    h.set(i, j, v);
                }
                for r in 0..n {
                    let v = h.get(r, m).add(&f.mul(&u, h.get(r, i)));
                    h.set(r, m, v);
                }
            }
        }
        // p[k] = charpoly of the leading k×k block, coefficients by degree
        let mut p: Vec<Vec<Scalar>> = vec![vec![Scalar::one()]];
        for m in 1..=n {
            let prev = &p[m - 1];
            let mut next = vec![Scalar::zero(); m + 1];
            let diag = h.get(m - 1, m - 1);
            for (k, c) in prev.iter().enumerate() {
                next[k + 1] = next[k + 1].add(c);
                next[k] = next[k].sub(&f.mul(diag, c));
            }
            let mut t = Scalar::one();
            for i in (1..m).rev() {
                t = f.mul(&t, h.get(i, i - 1));
                let coeff = f.mul(h.get(i - 1, m - 1), &t);
                if coeff.is_zero() {
                    continue;
                }
                for (k, c) in p[i - 1].iter().enumerate() {
                    next[k] = next[k].sub(&f.mul(&coeff, c));
                }
            }
            p.push(next);
        }
        Ok(Poly::new(p.pop().expect("n + 1 entries")))
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(Scalar::to_string).collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn f3() -> Field {
        Field::new(3).unwrap()
    }

    #[test]
    fn nilpotent_jordan_block() {
        let f = f3();
        let rk = Matrix::from_ints(&[&[0, 1], &[0, 0]]).rank_kernel(&f);
        assert_eq!(rk.rank, 1);
        assert_eq!(rk.kernel, Matrix::from_ints(&[&[1], &[0]]));
        assert_eq!(rk.image, Matrix::from_ints(&[&[1], &[0]]));
    }

    #[test]
    fn identity_has_trivial_kernel() {
        let rk = Matrix::identity(3).rank_kernel(&f3());
        assert_eq!(rk.rank, 3);
        assert_eq!(rk.kernel.cols(), 0);
    }

    #[test]
    fn rank_over_sqrt_two() {
        let f = Field::new(2).unwrap();
        let m = Matrix::from_rows(vec![
            vec![Scalar::sqrt_p(), Scalar::from_int(2)],
            vec![Scalar::one(), Scalar::sqrt_p()],
        ])
        .unwrap();
        let rk = m.rank_kernel(&f);
        assert_eq!(rk.rank, 1);
        assert!(m.mul(&rk.kernel, &f).unwrap().is_zero());
        assert_eq!(m.det(&f).unwrap(), Scalar::zero());
    }

    #[test]
    fn inverse_and_det() {
        let f = f3();
        let m = Matrix::from_rows(vec![
            vec![Scalar::from_int(2), Scalar::sqrt_p()],
            vec![Scalar::one(), Scalar::from_int(5)],
        ])
        .unwrap();
        let inv = m.inverse(&f).unwrap();
        assert!(m.mul(&inv, &f).unwrap().is_identity());
        let expected = Scalar::new(BigRational::from_integer(10.into()), -BigRational::one());
        assert_eq!(m.det(&f).unwrap(), expected);
        assert!(Matrix::from_ints(&[&[1, 2], &[2, 4]]).inverse(&f).is_err());
    }

    #[test]
    fn solve_consistent_and_not() {
        let f = f3();
        let a = Matrix::from_ints(&[&[1, 0], &[0, 0]]);
        assert!(a.solve(&Matrix::from_ints(&[&[3], &[1]]), &f).unwrap().is_none());
        let x = a.solve(&Matrix::from_ints(&[&[3], &[0]]), &f).unwrap().unwrap();
        assert_eq!(a.mul(&x, &f).unwrap(), Matrix::from_ints(&[&[3], &[0]]));
    }

    #[test]
    fn charpoly_of_companion() {
        let f = f3();
        // [[0, p], [1, 0]] has char poly λ² − p
        let m = Matrix::from_ints(&[&[0, 3], &[1, 0]]);
        let cp = m.charpoly(&f).unwrap();
        assert_eq!(cp.coeffs(), &[Scalar::from_int(-3), Scalar::zero(), Scalar::one()]);
    }

    #[test]
    fn kron_shape_and_entries() {
        let f = f3();
        let a = Matrix::from_ints(&[&[1, 2]]);
        let b = Matrix::from_ints(&[&[0], &[1]]);
        assert_eq!(a.kron(&b, &f), Matrix::from_ints(&[&[0, 0], &[1, 2]]));
    }
}
