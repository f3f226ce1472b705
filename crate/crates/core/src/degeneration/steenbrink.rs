//! The Steenbrink double complex of a special fiber.
//!
//! Blocks are `B(m, j, t) = H^j(D^{(m)})(−t)` for `1 ≤ m ≤` depth and
//! `0 ≤ t ≤ m−1`, where `D^{(m)}` is the disjoint union of the strata with
//! `m` components. A block sits in total degree `n = j + m − 1` and column
//! `p = m − 1 − 2t`, and is pure of weight `j + 2t = n − p`.
//!
//! The differential is `ρ + γ`: restriction `B(m,j,t) → B(m+1,j,t)` and
//! Gysin `B(m,j,t) → B(m−1,j+2,t−1)`, each component signed by the position
//! of the added or removed index. Monodromy is the identity
//! `B(m,j,t) → B(m,j,t−1)` and vanishes on `t = 0`.

use std::collections::BTreeMap;

use super::fiber::{position_sign, SemistableFiber, StratumKey};
use crate::algebra::{Field, Matrix};
use crate::complexes::{Block, Complex, DoubleComplex, MonodromyComplex, Term};
use crate::error::Result;
use crate::phimod::PhiNModule;

/// Identifies `B(m, j, t)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlockKey {
    pub m: usize,
    pub j: i64,
    pub t: usize,
}

impl BlockKey {
    pub fn degree(&self) -> i64 {
        self.j + self.m as i64 - 1
    }

    pub fn column(&self) -> i64 {
        self.m as i64 - 1 - 2 * self.t as i64
    }

    pub fn weight(&self) -> i64 {
        self.j + 2 * self.t as i64
    }

    /// Cell of the double complex: `(j + t, m − 1 − t)`.
    pub fn cell(&self) -> (i64, i64) {
        (self.j + self.t as i64, self.m as i64 - 1 - self.t as i64)
    }

    pub fn label(&self) -> String {
        format!("H^{}(D^({}))(-{})", self.j, self.m, self.t)
    }
}

#[derive(Clone, Debug)]
pub struct SteenbrinkComplex {
    pub double: DoubleComplex,
    pub monodromy: MonodromyComplex,
    /// `B(m,j,t)` → (degree, offset in the total term, dim)
    pub index: BTreeMap<BlockKey, (i64, usize, usize)>,
    /// More than two components: the bicomplex normalization is used as a
    /// definition rather than a theorem.
    pub conjectural: bool,
    pub relative_dimension: usize,
}

impl SteenbrinkComplex {
    pub fn total(&self) -> &Complex {
        self.monodromy.complex()
    }

    /// Degree-`n` positions of the blocks selected by `keep`.
    pub fn positions(&self, n: i64, keep: impl Fn(&BlockKey) -> bool) -> Vec<usize> {
        let mut out = Vec::new();
        for (k, &(deg, off, dim)) in &self.index {
            if deg == n && keep(k) {
                out.extend(off..off + dim);
            }
        }
        out.sort_unstable();
        out
    }
}

/// `(stratum, offset, dim)` for the summands of `H^j(D^{(m)})`.
fn summands(fiber: &SemistableFiber, m: usize, j: i64) -> Vec<(StratumKey, usize, usize)> {
    let mut off = 0;
    let mut out = Vec::new();
    for key in fiber.strata_of_depth(m) {
        let d = fiber.dim(key, j);
        if d > 0 {
            out.push((key.clone(), off, d));
            off += d;
        }
    }
    out
}

fn total_dim(s: &[(StratumKey, usize, usize)]) -> usize {
    s.last().map_or(0, |(_, o, d)| o + d)
}

/// Frobenius of `H^j(D^{(m)})`.
fn stratum_phi(fiber: &SemistableFiber, m: usize, j: i64) -> Matrix {
    let phis: Vec<Matrix> = summands(fiber, m, j).iter().map(|(k, _, _)| fiber.phi(k, j)).collect();
    let refs: Vec<&Matrix> = phis.iter().collect();
    Matrix::block_diag(&refs)
}

/// Signed restriction `H^j(D^{(m)}) → H^j(D^{(m+1)})`.
pub fn rho(fiber: &SemistableFiber, m: usize, j: i64) -> Matrix {
    let src = summands(fiber, m, j);
    let tgt = summands(fiber, m + 1, j);
    let mut out = Matrix::zeros(total_dim(&tgt), total_dim(&src));
    for (big, toff, _) in &tgt {
        for (small, soff, _) in &src {
            if let Some(&i) = big.iter().find(|i| !small.contains(i)) {
                if small.iter().all(|x| big.contains(x)) {
                    let r = fiber.restriction(small, big, j).scale(&position_sign(big, i), fiber.field());
                    out.set_block(*toff, *soff, &r);
                }
            }
        }
    }
    out
}

/// Signed Gysin `H^j(D^{(m)}) → H^{j+2}(D^{(m−1)})`.
pub fn gamma(fiber: &SemistableFiber, m: usize, j: i64) -> Matrix {
    let src = summands(fiber, m, j);
    let tgt = if m >= 2 { summands(fiber, m - 1, j + 2) } else { Vec::new() };
    let mut out = Matrix::zeros(total_dim(&tgt), total_dim(&src));
    for (big, soff, _) in &src {
        for (small, toff, _) in &tgt {
            if let Some(&i) = big.iter().find(|i| !small.contains(i)) {
                if small.iter().all(|x| big.contains(x)) {
                    let g = fiber.gysin(big, small, j).scale(&position_sign(big, i), fiber.field());
                    out.set_block(*toff, *soff, &g);
                }
            }
        }
    }
    out
}

fn block_keys(fiber: &SemistableFiber) -> Vec<BlockKey> {
    let d = fiber.relative_dimension() as i64;
    let mut out = Vec::new();
    for m in 1..=fiber.max_depth() {
        for t in 0..m {
            for j in 0..=(2 * (d - m as i64 + 1)) {
                if total_dim(&summands(fiber, m, j)) > 0 {
                    out.push(BlockKey { m, j, t });
                }
            }
        }
    }
    out
}

pub fn steenbrink(fiber: &SemistableFiber) -> Result<SteenbrinkComplex> {
    let f = fiber.field();
    let keys = block_keys(fiber);

    // cell → blocks in increasing t, with offsets inside the cell
    let mut cell_blocks: BTreeMap<(i64, i64), Vec<(BlockKey, usize, usize)>> = BTreeMap::new();
    for k in &keys {
        let dim = total_dim(&summands(fiber, k.m, k.j));
        let entry = cell_blocks.entry(k.cell()).or_default();
        let off = entry.last().map_or(0, |&(_, o, d)| o + d);
        entry.push((*k, off, dim));
    }
    let find = |k: &BlockKey| -> Option<((i64, i64), usize)> {
        cell_blocks.get(&k.cell())?.iter().find(|(b, _, _)| b == k).map(|&(_, o, _)| (k.cell(), o))
    };

    let mut cells = BTreeMap::new();
    for (&cell, blocks) in &cell_blocks {
        let mut modules = Vec::new();
        let mut labels = Vec::new();
        for (k, _, dim) in blocks {
            let phi = stratum_phi(fiber, k.m, k.j).scale(&f.p_power(k.t as i64), f);
            modules.push(PhiNModule::from_parts_unchecked(phi, Matrix::zeros(*dim, *dim)));
            labels.push(Block { label: k.label(), dim: *dim, column: k.column() });
        }
        let refs: Vec<&PhiNModule> = modules.iter().collect();
        cells.insert(cell, Term::labeled(PhiNModule::direct_sum(&refs), labels)?);
    }
    let cell_dim = |c: (i64, i64)| cell_blocks.get(&c).and_then(|b| b.last()).map_or(0, |&(_, o, d)| o + d);

    let mut horizontal: BTreeMap<(i64, i64), Matrix> = BTreeMap::new();
    let mut vertical: BTreeMap<(i64, i64), Matrix> = BTreeMap::new();
    for k in &keys {
        let (src_cell, src_off) = find(k).expect("block was registered");
        let h = src_cell.0;
        if k.t >= 1 {
            let tk = BlockKey { m: k.m - 1, j: k.j + 2, t: k.t - 1 };
            if let Some((tc, toff)) = find(&tk) {
                let m = horizontal.entry(src_cell).or_insert_with(|| Matrix::zeros(cell_dim(tc), cell_dim(src_cell)));
                m.set_block(toff, src_off, &gamma(fiber, k.m, k.j));
            }
        }
        let tk = BlockKey { m: k.m + 1, j: k.j, t: k.t };
        if let Some((tc, toff)) = find(&tk) {
            let r = rho(fiber, k.m, k.j);
            let r = if h.rem_euclid(2) == 0 { r } else { r.neg() };
            let m = vertical.entry(src_cell).or_insert_with(|| Matrix::zeros(cell_dim(tc), cell_dim(src_cell)));
            m.set_block(toff, src_off, &r);
        }
    }

    let double = DoubleComplex::new(cells, horizontal, vertical, f)?;
    let (total, layout) = double.total_complex(f)?;

    let mut index = BTreeMap::new();
    for (&cell, blocks) in &cell_blocks {
        let base = layout.offset(cell.0, cell.1).expect("nonzero cell");
        for &(k, off, dim) in blocks {
            index.insert(k, (k.degree(), base + off, dim));
        }
    }

    let mut nu: BTreeMap<i64, Matrix> = BTreeMap::new();
    for (k, &(n, off, dim)) in &index {
        if k.t == 0 {
            continue;
        }
        let lower = BlockKey { t: k.t - 1, ..*k };
        let (_, toff, _) = index[&lower];
        let size = total.dim(n);
        let m = nu.entry(n).or_insert_with(|| Matrix::zeros(size, size));
        m.set_block(toff, off, &Matrix::identity(dim));
    }
    let monodromy = MonodromyComplex::new(total, nu, f)?;
    Ok(SteenbrinkComplex {
        double,
        monodromy,
        index,
        conjectural: fiber.components().len() > 2,
        relative_dimension: fiber.relative_dimension(),
    })
}

/// Restriction of the total complex to the positions chosen per degree;
/// `sub` must pick out a subcomplex or a quotient complex.
pub(crate) fn select(c: &Complex, pick: impl Fn(i64) -> Vec<usize>, twist: i64, f: &Field) -> Complex {
    let mut terms = BTreeMap::new();
    let mut diffs = BTreeMap::new();
    for n in c.degrees() {
        let idx = pick(n);
        let term = c.term(n);
        let phi = term.module.phi().select_rows(&idx).select_columns(&idx).scale(&f.p_power(-twist), f);
        let module = PhiNModule::from_parts_unchecked(phi, Matrix::zeros(idx.len(), idx.len()));
        let mut blocks = Vec::new();
        let mut off = 0;
        for b in &term.blocks {
            let kept = (off..off + b.dim).filter(|i| idx.contains(i)).count();
            if kept > 0 {
                blocks.push(Block { label: b.label.clone(), dim: kept, column: b.column + 2 * twist });
            }
            off += b.dim;
        }
        terms.insert(n, Term { module, blocks });
        let next = pick(n + 1);
        diffs.insert(n, c.differential(n).select_rows(&next).select_columns(&idx));
    }
    Complex::new(terms, diffs, f).expect("selection is a sub- or quotient complex")
}
