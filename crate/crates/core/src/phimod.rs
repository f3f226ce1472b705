//! φ-modules and (φ,N)-modules over K₀ with k = F_p, so that Frobenius is
//! linear and `q = p`.
//!
//! A (φ,N)-module is a finite-dimensional space with an invertible
//! Frobenius `Φ` and an endomorphism `N` satisfying `N·Φ = p·Φ·N`. The
//! relation shifts generalized eigenvalues by `1/p`, so `N` is nilpotent.

use std::collections::BTreeMap;

use crate::algebra::{subspace, weil_split, Field, Matrix, Scalar, Subquotient, WeightSplit};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct PhiModule {
    phi: Matrix,
}

impl PhiModule {
    pub fn new(phi: Matrix, f: &Field) -> Result<Self> {
        if !phi.is_square() {
            return Err(Error::DimensionMismatch("Frobenius must be square".into()));
        }
        if phi.rows() > 0 && phi.det(f)?.is_zero() {
            return Err(Error::NotInvertible("Frobenius has determinant 0".into()));
        }
        Ok(PhiModule { phi })
    }

    pub fn dim(&self) -> usize {
        self.phi.rows()
    }

    pub fn phi(&self) -> &Matrix {
        &self.phi
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhiNModule {
    base: PhiModule,
    n: Matrix,
}

impl PhiNModule {
    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn phi(&self) -> &Matrix {
        self.base.phi()
    }

    pub fn monodromy(&self) -> &Matrix {
        &self.n
    }

    pub fn base(&self) -> &PhiModule {
        &self.base
    }

    pub fn zero() -> Self {
        PhiNModule { base: PhiModule { phi: Matrix::zeros(0, 0) }, n: Matrix::zeros(0, 0) }
    }

    /// The unit object `K₀`.
    pub fn unit() -> Self {
        PhiNModule { base: PhiModule { phi: Matrix::identity(1) }, n: Matrix::zeros(1, 1) }
    }

    /// The Tate object `K₀(n)` with Frobenius `p^{−n}`.
    pub fn tate(n: i64, f: &Field) -> Self {
        PhiNModule { base: PhiModule { phi: Matrix::diag(&[f.p_power(-n)]) }, n: Matrix::zeros(1, 1) }
    }

    /// A module with `N = 0` whose Frobenius is `Φ`.
    pub fn from_phi(phi: Matrix, f: &Field) -> Result<Self> {
        let n = Matrix::zeros(phi.rows(), phi.cols());
        mk_phin(phi, Some(n), f)
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    /// Replaces the monodromy, re-validating the relation.
    pub fn with_monodromy(&self, n: Matrix, f: &Field) -> Result<Self> {
        mk_phin(self.phi().clone(), Some(n), f)
    }

    /// Construction without validation, for callers that have already
    /// established the relation (e.g. induced structures on subquotients).
    pub(crate) fn from_parts_unchecked(phi: Matrix, n: Matrix) -> Self {
        PhiNModule { base: PhiModule { phi }, n }
    }

    pub fn direct_sum(parts: &[&PhiNModule]) -> Self {
        let phis: Vec<&Matrix> = parts.iter().map(|m| m.phi()).collect();
        let ns: Vec<&Matrix> = parts.iter().map(|m| &m.n).collect();
        PhiNModule::from_parts_unchecked(Matrix::block_diag(&phis), Matrix::block_diag(&ns))
    }

    /// Change of basis by the invertible matrix `p` (columns: new basis in old coordinates).
    pub fn conjugate(&self, p: &Matrix, f: &Field) -> Result<Self> {
        let inv = p.inverse(f)?;
        let phi = Matrix::product(&[&inv, self.phi(), p], f)?;
        let n = Matrix::product(&[&inv, &self.n, p], f)?;
        Ok(PhiNModule::from_parts_unchecked(phi, n))
    }
}

/// Validating constructor for (φ,N)-modules; `n = None` means `N = 0`.
pub fn mk_phin(phi: Matrix, n: Option<Matrix>, f: &Field) -> Result<PhiNModule> {
    let base = PhiModule::new(phi, f)?;
    let d = base.dim();
    let n = n.unwrap_or_else(|| Matrix::zeros(d, d));
    if n.rows() != d || n.cols() != d {
        return Err(Error::DimensionMismatch(format!("N is {}x{}, module has dimension {d}", n.rows(), n.cols())));
    }
    let lhs = n.mul(base.phi(), f)?;
    let rhs = base.phi().mul(&n, f)?.scale(&Scalar::from_int(f.p() as i64), f);
    if lhs != rhs {
        return Err(Error::RelationViolated);
    }
    if d > 0 && !n.pow(d, f)?.is_zero() {
        return Err(Error::NotNilpotent);
    }
    Ok(PhiNModule { base, n })
}

/// A morphism of (φ,N)-modules: commutes with Frobenius and monodromy.
#[derive(Clone, Debug)]
pub struct PhiNMorphism {
    pub source: PhiNModule,
    pub target: PhiNModule,
    pub matrix: Matrix,
}

impl PhiNMorphism {
    pub fn new(source: PhiNModule, target: PhiNModule, matrix: Matrix, f: &Field) -> Result<Self> {
        if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
            return Err(Error::DimensionMismatch("morphism shape".into()));
        }
        if matrix.mul(source.phi(), f)? != target.phi().mul(&matrix, f)? {
            return Err(Error::NotAMorphism("does not commute with Frobenius".into()));
        }
        if matrix.mul(source.monodromy(), f)? != target.monodromy().mul(&matrix, f)? {
            return Err(Error::NotAMorphism("does not commute with N".into()));
        }
        Ok(PhiNMorphism { source, target, matrix })
    }
}

/// `D(n)`: Frobenius rescaled by `p^{−n}`, monodromy unchanged.
pub fn tate_twist(d: &PhiNModule, n: i64, f: &Field) -> PhiNModule {
    PhiNModule::from_parts_unchecked(d.phi().scale(&f.p_power(-n), f), d.monodromy().clone())
}

/// `D ⊗ E` with Kronecker Frobenius and Leibniz monodromy `N⊗1 + 1⊗N`.
pub fn tensor(d: &PhiNModule, e: &PhiNModule, f: &Field) -> PhiNModule {
    let id_d = Matrix::identity(d.dim());
    let id_e = Matrix::identity(e.dim());
    let phi = d.phi().kron(e.phi(), f);
    let n = d.monodromy().kron(&id_e, f).add(&id_d.kron(e.monodromy(), f)).expect("same shape");
    PhiNModule::from_parts_unchecked(phi, n)
}

/// Dual module: `Φ^∨ = (Φᵀ)^{−1}`, `N^∨ = −Nᵀ`.
pub fn dual(d: &PhiNModule, f: &Field) -> PhiNModule {
    let phi = d.phi().transpose().inverse(f).expect("Frobenius is invertible");
    PhiNModule::from_parts_unchecked(phi, d.monodromy().transpose().neg())
}

/// Evaluation `D^∨ ⊗ D → K₀`, as a validated morphism.
pub fn evaluation(d: &PhiNModule, f: &Field) -> Result<PhiNMorphism> {
    let n = d.dim();
    let ev = Matrix::from_fn(1, n * n, |_, j| if j / n == j % n { Scalar::one() } else { Scalar::zero() });
    PhiNMorphism::new(tensor(&dual(d, f), d, f), PhiNModule::unit(), ev, f)
}

/// Hom and Ext¹ in φ-modules, from `δ(ξ) = Φ_E·ξ − ξ·Φ_D`.
#[derive(Clone, Debug)]
pub struct PhiHomExt {
    pub hom_dim: usize,
    /// Each basis element is a `dim E × dim D` matrix.
    pub hom_basis: Vec<Matrix>,
    pub ext1_dim: usize,
}

/// `vec(A·ξ·B) = (Bᵀ ⊗ A)·vec(ξ)` with column-major `vec`.
fn sandwich(a: &Matrix, b: &Matrix, f: &Field) -> Matrix {
    b.transpose().kron(a, f)
}

fn unvec(v: &Matrix, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(rows, cols, |i, j| v.get(j * rows + i, 0).clone())
}

fn delta_phi(d: &PhiModule, e: &PhiModule, f: &Field) -> Matrix {
    let id_d = Matrix::identity(d.dim());
    let id_e = Matrix::identity(e.dim());
    sandwich(e.phi(), &id_d, f).sub(&sandwich(&id_e, d.phi(), f)).expect("same shape")
}

pub fn hom_ext_phi(d: &PhiModule, e: &PhiModule, f: &Field) -> PhiHomExt {
    let delta = delta_phi(d, e, f);
    let rk = delta.rank_kernel(f);
    let hom_basis = (0..rk.kernel.cols()).map(|c| unvec(&rk.kernel.column(c), e.dim(), d.dim())).collect();
    PhiHomExt { hom_dim: rk.kernel.cols(), hom_basis, ext1_dim: delta.rows() - rk.rank }
}

/// Ext groups in (φ,N)-modules, as cohomology in degrees 0..2 of the total
/// complex
///
/// ```text
///   Hom(D,E) --(δ, ν)--> Hom(D,E) ⊕ Hom(D,E(−1)) --(ν', −δ')--> Hom(D,E(−1))
/// ```
///
/// with `δ(ξ) = Φ_E ξ − ξ Φ_D`, `ν(ξ) = N_E ξ − ξ N_D`, and on the twisted
/// row `δ'(η) = pΦ_E η − η Φ_D`, `ν'(η) = N_E η − p η N_D` (the twisted row
/// is transported along `η ↦ η·Φ_D` so the square commutes on the nose).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiNExt {
    pub ext0_dim: usize,
    pub ext1_dim: usize,
    pub ext2_dim: usize,
}

pub fn hom_ext_phin(d: &PhiNModule, e: &PhiNModule, f: &Field) -> Result<PhiNExt> {
    let id_d = Matrix::identity(d.dim());
    let id_e = Matrix::identity(e.dim());
    let p = Scalar::from_int(f.p() as i64);
    let delta = delta_phi(d.base(), e.base(), f);
    let nu = sandwich(e.monodromy(), &id_d, f).sub(&sandwich(&id_e, d.monodromy(), f))?;
    let nu_tw = sandwich(e.monodromy(), &id_d, f).sub(&sandwich(&id_e, d.monodromy(), f).scale(&p, f))?;
    let delta_tw = sandwich(e.phi(), &id_d, f).scale(&p, f).sub(&sandwich(&id_e, d.phi(), f))?;
    let d0 = Matrix::vstack(&[&delta, &nu])?;
    let d1 = Matrix::hstack(&[&nu_tw, &delta_tw.neg()])?;
    if !d1.mul(&d0, f)?.is_zero() {
        return Err(Error::RelationViolated);
    }
    let v = delta.cols();
    let r0 = d0.rank(f);
    let r1 = d1.rank(f);
    Ok(PhiNExt { ext0_dim: v - r0, ext1_dim: 2 * v - r0 - r1, ext2_dim: v - r1 })
}

#[derive(Clone, Debug)]
pub struct WeightGrading {
    pub split: WeightSplit,
    pub is_pure: bool,
}

/// Weight decomposition of `Φ`, checking that `N` lowers weight by 2.
pub fn weight_grading(d: &PhiNModule, f: &Field) -> Result<WeightGrading> {
    let split = weil_split(d.phi(), f)?;
    for (&m, piece) in split.pieces() {
        let image = d.monodromy().mul(&piece.basis, f)?;
        if image.is_zero() {
            continue;
        }
        let target = split.piece(m - 2).map(|p| p.basis.clone()).unwrap_or_else(|| Matrix::zeros(d.dim(), 0));
        if !subspace::contains(&target, &image, f)? {
            return Err(Error::RelationViolated);
        }
    }
    let is_pure = split.pieces().len() <= 1;
    Ok(WeightGrading { split, is_pure })
}

/// Increasing filtration `M_k` centered at 0, stored for `−dim ≤ k ≤ dim`
/// (below the range it is 0, above it is everything).
#[derive(Clone, Debug)]
pub struct MonodromyFiltration {
    pub ambient: usize,
    pub steps: BTreeMap<i64, Matrix>,
}

impl MonodromyFiltration {
    pub fn step(&self, k: i64) -> Matrix {
        let lo = *self.steps.keys().next().unwrap_or(&0);
        let hi = *self.steps.keys().next_back().unwrap_or(&0);
        if k < lo {
            Matrix::zeros(self.ambient, 0)
        } else if k > hi {
            Matrix::identity(self.ambient)
        } else {
            self.steps[&k].clone()
        }
    }

    pub fn graded(&self, k: i64, f: &Field) -> Result<Subquotient> {
        Subquotient::new(&self.step(k), &self.step(k - 1), f)
    }

    /// Nonzero `dim gr_k`.
    pub fn graded_dims(&self, f: &Field) -> Result<BTreeMap<i64, usize>> {
        let mut out = BTreeMap::new();
        for &k in self.steps.keys() {
            let g = self.graded(k, f)?.dim();
            if g > 0 {
                out.insert(k, g);
            }
        }
        Ok(out)
    }

    /// Checks `N·M_k ⊆ M_{k−2}` and that `N^k: gr_k → gr_{−k}` is an isomorphism.
    pub fn verify(&self, n: &Matrix, f: &Field) -> Result<bool> {
        for &k in self.steps.keys() {
            let image = n.mul(&self.step(k), f)?;
            if !subspace::contains(&self.step(k - 2), &image, f)? {
                return Ok(false);
            }
        }
        let top = *self.steps.keys().next_back().unwrap_or(&0);
        for k in 0..=top {
            let src = self.graded(k, f)?;
            let tgt = self.graded(-k, f)?;
            if src.dim() != tgt.dim() {
                return Ok(false);
            }
            let nk = n.pow(k as usize, f)?;
            let induced = src.induced(&nk, &tgt, f)?;
            if induced.rank(f) != src.dim() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `M_k = Σ_{j ≥ max(0,−k)} ker N^{j+k+1} ∩ im N^j`.
pub fn monodromy_filtration(d: &PhiNModule, f: &Field) -> Result<MonodromyFiltration> {
    filtration_of_nilpotent(d.monodromy(), f)
}

pub fn filtration_of_nilpotent(n: &Matrix, f: &Field) -> Result<MonodromyFiltration> {
    let dim = n.rows();
    let top = dim as i64;
    let mut powers = vec![Matrix::identity(dim)];
    for i in 1..=(2 * dim + 2) {
        powers.push(powers[i - 1].mul(n, f)?);
    }
    if !powers[dim.max(1)].is_zero() && dim > 0 {
        return Err(Error::NotNilpotent);
    }
    let kernels: Vec<Matrix> = powers.iter().map(|m| m.kernel(f)).collect();
    let images: Vec<Matrix> = powers.iter().map(|m| m.image(f)).collect();
    let mut steps = BTreeMap::new();
    for k in -top..=top {
        let mut acc = Matrix::zeros(dim, 0);
        let j0 = (-k).max(0);
        for j in j0..=top {
            let ki = (j + k + 1) as usize;
            let piece = subspace::intersect(&kernels[ki.min(powers.len() - 1)], &images[j as usize], f)?;
            acc = subspace::sum(&acc, &piece, f)?;
        }
        steps.insert(k, acc);
    }
    Ok(MonodromyFiltration { ambient: dim, steps })
}

/// One `N^k: gr_{c+k} → gr_{c−k}` block of a weight-monodromy check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WmBlock {
    pub k: i64,
    pub source_dim: usize,
    pub target_dim: usize,
    pub rank: usize,
}

#[derive(Clone, Debug)]
pub struct WmReport {
    pub center: i64,
    pub weights: BTreeMap<i64, usize>,
    pub blocks: Vec<WmBlock>,
    pub symmetric: bool,
    pub pass: bool,
}

/// Matrix of `map` between weight pieces `from` and `to` of a split.
pub fn weight_block(split: &WeightSplit, map: &Matrix, from: i64, to: i64, f: &Field) -> Result<Matrix> {
    let (Some(src), Some(tgt)) = (split.piece(from), split.piece(to)) else {
        let rows = split.piece(to).map_or(0, |p| p.dim);
        let cols = split.piece(from).map_or(0, |p| p.dim);
        return Ok(Matrix::zeros(rows, cols));
    };
    let basis = split.change_of_basis();
    let coords = basis
        .solve(&map.mul(&src.basis, f)?, f)?
        .ok_or_else(|| Error::DimensionMismatch("weight basis does not span".into()))?;
    let off = split.offsets()[&to];
    Ok(coords.submatrix(off, tgt.dim, 0, coords.cols()))
}

pub fn wm_check(d: &PhiNModule, center: i64, f: &Field) -> Result<WmReport> {
    let grading = weight_grading(d, f)?;
    let weights = grading.split.dims();
    let reach = weights.keys().map(|w| (w - center).abs()).max().unwrap_or(0);
    let mut symmetric = true;
    let mut blocks = Vec::new();
    let mut pass = true;
    for k in 1..=reach {
        let up = weights.get(&(center + k)).copied().unwrap_or(0);
        let down = weights.get(&(center - k)).copied().unwrap_or(0);
        if up != down {
            symmetric = false;
        }
        if up == 0 && down == 0 {
            continue;
        }
        let nk = d.monodromy().pow(k as usize, f)?;
        let block = weight_block(&grading.split, &nk, center + k, center - k, f)?;
        let rank = block.rank(f);
        if up != down || rank != up {
            pass = false;
        }
        blocks.push(WmBlock { k, source_dim: up, target_dim: down, rank });
    }
    Ok(WmReport { center, weights, blocks, symmetric, pass: pass && symmetric })
}
