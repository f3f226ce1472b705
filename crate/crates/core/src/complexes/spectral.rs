//! Spectral sequence of a finitely filtered complex, used as the weight
//! spectral sequence of a weight-complex presentation.

use std::collections::{BTreeMap, HashMap};

use super::complex::{block_span, Complex};
use crate::algebra::{subspace, weil_split, Field, Matrix, Subquotient};
use crate::error::{Error, Result};

/// Decreasing filtration `F^p C^n`, all of `C^n` for `p ≤ lo` and zero for
/// `p > hi`.
#[derive(Clone, Debug)]
pub struct Filtration {
    lo: i64,
    hi: i64,
    ambient: BTreeMap<i64, usize>,
    steps: BTreeMap<(i64, i64), Matrix>,
}

impl Filtration {
    pub fn range(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    /// Basis of `F^p C^n`.
    pub fn step(&self, n: i64, p: i64) -> Matrix {
        let amb = self.ambient.get(&n).copied().unwrap_or(0);
        if p > self.hi {
            return Matrix::zeros(amb, 0);
        }
        if p <= self.lo {
            return Matrix::identity(amb);
        }
        self.steps.get(&(n, p)).cloned().unwrap_or_else(|| Matrix::zeros(amb, 0))
    }

    /// Column filtration from block labels when every term is labeled, and
    /// the filtration by Frobenius weight (`p = n − w`) otherwise.
    pub fn of(c: &Complex, f: &Field) -> Result<Filtration> {
        let mut ambient = BTreeMap::new();
        let mut columns: BTreeMap<i64, Vec<i64>> = BTreeMap::new();
        let mut weight_splits = BTreeMap::new();
        let labeled = c.is_labeled();
        for n in c.degrees() {
            let t = c.term(n);
            ambient.insert(n, t.dim());
            if labeled {
                columns.insert(n, t.blocks.iter().map(|b| b.column).collect());
            } else {
                let split = weil_split(t.module.phi(), f)?;
                columns.insert(n, split.pieces().keys().map(|w| n - w).collect());
                weight_splits.insert(n, split);
            }
        }
        let all: Vec<i64> = columns.values().flatten().copied().collect();
        let lo = all.iter().copied().min().unwrap_or(0);
        let hi = all.iter().copied().max().unwrap_or(-1);
        let mut steps = BTreeMap::new();
        for n in c.degrees() {
            let t = c.term(n);
            for p in lo..=hi {
                let basis = if labeled {
                    block_span(&t, |b| b.column >= p)
                } else {
                    let split = &weight_splits[&n];
                    let parts: Vec<&Matrix> =
                        split.pieces().iter().filter(|(&w, _)| n - w >= p).map(|(_, piece)| &piece.basis).collect();
                    if parts.is_empty() {
                        Matrix::zeros(t.dim(), 0)
                    } else {
                        Matrix::hstack(&parts)?
                    }
                };
                steps.insert((n, p), basis);
            }
        }
        let filt = Filtration { lo, hi, ambient, steps };
        filt.check(c, f)?;
        Ok(filt)
    }

    fn check(&self, c: &Complex, f: &Field) -> Result<()> {
        for n in c.degrees() {
            let phi = c.term(n).module.phi().clone();
            for p in self.lo..=self.hi {
                let fp = self.step(n, p);
                if !subspace::contains(&self.step(n + 1, p), &c.differential(n).mul(&fp, f)?, f)? {
                    return Err(Error::Invalid(format!("differential in degree {n} does not preserve F^{p}")));
                }
                if !subspace::contains(&fp, &phi.mul(&fp, f)?, f)? {
                    return Err(Error::Invalid(format!("Frobenius in degree {n} does not preserve F^{p}")));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SSCell {
    pub dim: usize,
    /// Frobenius weights of the cell, from its induced Frobenius.
    pub weights: BTreeMap<i64, usize>,
}

/// Pages are keyed by `(p, q)` with total degree `n = p + q`; for a weight
/// complex presentation `q` is the weight the cell should be pure of.
#[derive(Clone, Debug)]
pub struct SSResult {
    /// Dimensions of `E_r` for `r = 0, 1, …` up to the stable page.
    pub pages: Vec<BTreeMap<(i64, i64), usize>>,
    pub e1: BTreeMap<(i64, i64), SSCell>,
    pub e2: BTreeMap<(i64, i64), SSCell>,
    pub e_inf: BTreeMap<(i64, i64), SSCell>,
    /// `dim gr^W_w H^n`, degree → weight → dim.
    pub graded: BTreeMap<i64, BTreeMap<i64, usize>>,
    /// `dim W_w H^n`, cumulative in `w`.
    pub weight_filtration: BTreeMap<i64, BTreeMap<i64, usize>>,
    pub degenerates_at_e2: bool,
    /// Smallest `r ≥ 1` with `E_r = E_∞`.
    pub degeneration_page: usize,
    /// Every `gr^p C^n` is pure of weight `n − p`.
    pub columns_pure: bool,
}

impl SSResult {
    pub fn page_dims(cells: &BTreeMap<(i64, i64), SSCell>) -> BTreeMap<(i64, i64), usize> {
        cells.iter().map(|(&k, c)| (k, c.dim)).collect()
    }
}

struct Engine<'a> {
    c: &'a Complex,
    filt: &'a Filtration,
    f: &'a Field,
    z: HashMap<(i64, i64, i64), Matrix>,
}

impl Engine<'_> {
    /// `Z_r^{p,n} = {x ∈ F^p C^n : dx ∈ F^{p+r} C^{n+1}}`.
    fn z(&mut self, r: i64, p: i64, n: i64) -> Result<Matrix> {
        if let Some(m) = self.z.get(&(r, p, n)) {
            return Ok(m.clone());
        }
        let fp = self.filt.step(n, p);
        let image = self.c.differential(n).mul(&fp, self.f)?;
        let coeffs = subspace::preimage(&image, &self.filt.step(n + 1, p + r), self.f)?;
        let z = subspace::basis(&fp.mul(&coeffs, self.f)?, self.f);
        self.z.insert((r, p, n), z.clone());
        Ok(z)
    }

    /// `Z_{r−1}^{p+1} + d Z_{r−1}^{p−r+1}` inside `C^n`.
    fn denominator(&mut self, r: i64, p: i64, n: i64) -> Result<Matrix> {
        let a = self.z(r - 1, p + 1, n)?;
        let src = self.z(r - 1, p - r + 1, n - 1)?;
        let b = self.c.differential(n - 1).mul(&src, self.f)?;
        subspace::sum(&a, &b, self.f)
    }

    fn cell(&mut self, r: i64, p: i64, n: i64, with_weights: bool) -> Result<SSCell> {
        let z = self.z(r, p, n)?;
        let den = self.denominator(r, p, n)?;
        let dim = z.cols() - den.cols();
        let weights = if with_weights && dim > 0 {
            let sq = Subquotient::new(&z, &den, self.f)?;
            let phi = sq.induced(self.c.term(n).module.phi(), &sq, self.f)?;
            weil_split(&phi, self.f)?.dims()
        } else {
            BTreeMap::new()
        };
        Ok(SSCell { dim, weights })
    }
}

/// Basis of `W_w H^n` for each weight `w` occurring, in the coordinates of
/// the homology subquotient of `C^n`.
pub fn homology_filtration(c: &Complex, filt: &Filtration, n: i64, f: &Field) -> Result<BTreeMap<i64, Matrix>> {
    let h = c.homology_at(n, f)?;
    let cycles = c.differential(n).kernel(f);
    let (lo, hi) = filt.range();
    let mut out = BTreeMap::new();
    for p in lo..=(hi + 1) {
        let part = subspace::intersect(&filt.step(n, p), &cycles, f)?;
        let coords = if part.cols() == 0 { Matrix::zeros(h.space.dim(), 0) } else { h.space.coords(&part, f)? };
        out.insert(n - p, subspace::basis(&coords, f));
    }
    Ok(out)
}

pub fn weight_ss(c: &Complex, f: &Field) -> Result<SSResult> {
    let filt = Filtration::of(c, f)?;
    weight_ss_with(c, &filt, f)
}

pub fn weight_ss_with(c: &Complex, filt: &Filtration, f: &Field) -> Result<SSResult> {
    let (lo, hi) = filt.range();
    let degrees = c.degrees();
    let mut eng = Engine { c, filt, f, z: HashMap::new() };

    let last = (hi - lo + 2).max(2);
    let mut pages = Vec::new();
    let mut e1 = BTreeMap::new();
    let mut e2 = BTreeMap::new();
    let mut columns_pure = true;
    for r in 0..=last {
        let mut page = BTreeMap::new();
        for &n in &degrees {
            for p in lo..=hi {
                let want_weights = r == 0 || r == 1 || r == 2;
                let cell = eng.cell(r, p, n, want_weights)?;
                if cell.dim == 0 {
                    continue;
                }
                page.insert((p, n - p), cell.dim);
                match r {
                    0 => columns_pure &= cell.weights.keys().all(|&w| w == n - p),
                    1 => {
                        e1.insert((p, n - p), cell);
                    }
                    2 => {
                        e2.insert((p, n - p), cell);
                    }
                    _ => {}
                }
            }
        }
        pages.push(page);
    }

    let mut e_inf = BTreeMap::new();
    let mut graded = BTreeMap::new();
    let mut weight_filtration = BTreeMap::new();
    for &n in &degrees {
        let h = c.homology_at(n, f)?;
        if h.module.dim() == 0 {
            continue;
        }
        let w_steps = homology_filtration(c, filt, n, f)?;
        let mut gr = BTreeMap::new();
        let mut cumulative = BTreeMap::new();
        for p in lo..=hi {
            let big = &w_steps[&(n - p)];
            let small = &w_steps[&(n - p - 1)];
            let dim = big.cols() - small.cols();
            cumulative.insert(n - p, big.cols());
            if dim == 0 {
                continue;
            }
            let sq = Subquotient::new(big, small, f)?;
            let phi = sq.induced(h.module.phi(), &sq, f)?;
            e_inf.insert((p, n - p), SSCell { dim, weights: weil_split(&phi, f)?.dims() });
            gr.insert(n - p, dim);
        }
        graded.insert(n, gr);
        weight_filtration.insert(n, cumulative);
    }

    let inf_dims = SSResult::page_dims(&e_inf);
    let degenerates_at_e2 = pages[2] == inf_dims;
    let degeneration_page = (1..pages.len()).find(|&r| pages[r] == inf_dims).unwrap_or(pages.len());
    Ok(SSResult { pages, e1, e2, e_inf, graded, weight_filtration, degenerates_at_e2, degeneration_page, columns_pure })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::complex::{Block, Term};
    use crate::phimod::PhiNModule;

    fn f3() -> Field {
        Field::new(3).unwrap()
    }

    #[test]
    fn zero_differentials_degenerate_at_e1() {
        let f = f3();
        let t = PhiNModule::direct_sum(&[&PhiNModule::unit(), &PhiNModule::tate(-1, &f)]);
        let c = Complex::concentrated(1, Term::plain(t));
        let ss = weight_ss(&c, &f).unwrap();
        assert_eq!(SSResult::page_dims(&ss.e1), SSResult::page_dims(&ss.e_inf));
        assert_eq!(ss.degeneration_page, 1);
        assert_eq!(ss.graded[&1], BTreeMap::from([(0, 1), (2, 1)]));
        assert!(ss.columns_pure);
    }

    #[test]
    fn acyclic_two_term() {
        let f = f3();
        let u = PhiNModule::unit();
        let c = Complex::new(
            BTreeMap::from([(0, Term::single(u.clone(), "a", 0)), (1, Term::single(u, "b", 1))]),
            BTreeMap::from([(0, Matrix::identity(1))]),
            &f,
        )
        .unwrap();
        let ss = weight_ss(&c, &f).unwrap();
        assert!(ss.e2.is_empty());
        assert!(ss.e_inf.is_empty());
        assert!(ss.degenerates_at_e2);
        assert_eq!(ss.pages[1].len(), 2);
    }

    #[test]
    fn differential_across_two_columns_survives_to_e2() {
        // d maps column 0 straight into column 2: invisible on E₁, killed on E₂.
        let f = f3();
        let u = PhiNModule::unit();
        let blocks0 = vec![Block { label: "x".into(), dim: 1, column: 0 }];
        let blocks1 = vec![Block { label: "y".into(), dim: 1, column: 2 }];
        let c = Complex::new(
            BTreeMap::from([
                (0, Term::labeled(u.clone(), blocks0).unwrap()),
                (1, Term::labeled(u, blocks1).unwrap()),
            ]),
            BTreeMap::from([(0, Matrix::identity(1))]),
            &f,
        )
        .unwrap();
        let ss = weight_ss(&c, &f).unwrap();
        assert_eq!(ss.pages[1].len(), 2);
        assert_eq!(ss.pages[2].len(), 2);
        assert!(ss.pages[3].is_empty());
        assert!(!ss.degenerates_at_e2);
        assert_eq!(ss.degeneration_page, 3);
        assert!(!ss.columns_pure);
    }
}
