use std::collections::BTreeMap;

use crate::algebra::{subspace, weil_split, Field, Matrix, Subquotient};
use crate::error::{Error, Result};
use crate::phimod::{self, PhiNModule};

/// A labeled summand of a term. `column` is the index of the stupid
/// filtration the weight spectral sequence is taken for; a block in degree
/// `n` and column `p` is expected to be pure of weight `n − p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub label: String,
    pub dim: usize,
    pub column: i64,
}

/// One term of a complex. Terms without blocks get the filtration by
/// Frobenius weights instead of a column filtration.
#[derive(Clone, Debug)]
pub struct Term {
    pub module: PhiNModule,
    pub blocks: Vec<Block>,
}

impl Term {
    pub fn plain(module: PhiNModule) -> Self {
        Term { module, blocks: Vec::new() }
    }

    pub fn single(module: PhiNModule, label: impl Into<String>, column: i64) -> Self {
        let dim = module.dim();
        Term { module, blocks: vec![Block { label: label.into(), dim, column }] }
    }

    pub fn labeled(module: PhiNModule, blocks: Vec<Block>) -> Result<Self> {
        let total: usize = blocks.iter().map(|b| b.dim).sum();
        if total != module.dim() {
            return Err(Error::DimensionMismatch(format!("blocks cover {total} of {} dimensions", module.dim())));
        }
        Ok(Term { module, blocks })
    }

    pub fn zero() -> Self {
        Term { module: PhiNModule::zero(), blocks: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.module.dim()
    }

    pub fn is_labeled(&self) -> bool {
        self.dim() == 0 || !self.blocks.is_empty()
    }

    /// Direct sum, concatenating blocks (unlabeled if either side is).
    pub fn sum(parts: &[&Term]) -> Term {
        let modules: Vec<&PhiNModule> = parts.iter().map(|t| &t.module).collect();
        let module = PhiNModule::direct_sum(&modules);
        let blocks = if parts.iter().all(|t| t.is_labeled()) {
            parts.iter().flat_map(|t| t.blocks.iter().cloned()).collect()
        } else {
            Vec::new()
        };
        Term { module, blocks }
    }

    fn map_columns(&self, g: impl Fn(i64) -> i64) -> Vec<Block> {
        self.blocks.iter().map(|b| Block { column: g(b.column), ..b.clone() }).collect()
    }
}

/// Bounded cochain complex of (φ,N)-modules; `d_n: C^n → C^{n+1}`.
/// Missing terms are zero and missing differentials are zero maps.
#[derive(Clone, Debug)]
pub struct Complex {
    terms: BTreeMap<i64, Term>,
    diffs: BTreeMap<i64, Matrix>,
}

/// `H^n` with its induced structure and the subquotient of `C^n` it is.
#[derive(Clone, Debug)]
pub struct Homology {
    pub module: PhiNModule,
    pub space: Subquotient,
}

impl Complex {
    pub fn new(terms: BTreeMap<i64, Term>, diffs: BTreeMap<i64, Matrix>, f: &Field) -> Result<Self> {
        let c = Complex::new_unchecked(terms, diffs);
        c.validate(f)?;
        Ok(c)
    }

    pub(crate) fn new_unchecked(terms: BTreeMap<i64, Term>, diffs: BTreeMap<i64, Matrix>) -> Self {
        let terms = terms.into_iter().filter(|(_, t)| t.dim() > 0).collect();
        Complex { terms, diffs }
    }

    pub fn concentrated(n: i64, term: Term) -> Self {
        Complex::new_unchecked(BTreeMap::from([(n, term)]), BTreeMap::new())
    }

    fn validate(&self, f: &Field) -> Result<()> {
        for (&n, d) in &self.diffs {
            if d.rows() != self.dim(n + 1) || d.cols() != self.dim(n) {
                return Err(Error::DimensionMismatch(format!(
                    "d_{n} is {}x{}, expected {}x{}",
                    d.rows(),
                    d.cols(),
                    self.dim(n + 1),
                    self.dim(n)
                )));
            }
        }
        for n in self.degree_range() {
            let src = self.term(n);
            let tgt = self.term(n + 1);
            let d = self.differential(n);
            if d.mul(src.module.phi(), f)? != tgt.module.phi().mul(&d, f)? {
                return Err(Error::NotAMorphism(format!("d_{n} does not commute with Frobenius")));
            }
            if d.mul(src.module.monodromy(), f)? != tgt.module.monodromy().mul(&d, f)? {
                return Err(Error::NotAMorphism(format!("d_{n} does not commute with N")));
            }
            if !self.differential(n + 1).mul(&d, f)?.is_zero() {
                return Err(Error::Invalid(format!("d_{} ∘ d_{n} ≠ 0", n + 1)));
            }
        }
        Ok(())
    }

    /// Degrees of the nonzero terms, widened by one on each side so every
    /// differential touching them is covered.
    pub fn degree_range(&self) -> std::ops::RangeInclusive<i64> {
        match (self.terms.keys().next(), self.terms.keys().next_back()) {
            (Some(&lo), Some(&hi)) => (lo - 1)..=hi,
            _ => 0..=-1,
        }
    }

    /// Degrees carrying nonzero terms.
    pub fn degrees(&self) -> Vec<i64> {
        self.terms.keys().copied().collect()
    }

    pub fn bounds(&self) -> Option<(i64, i64)> {
        Some((*self.terms.keys().next()?, *self.terms.keys().next_back()?))
    }

    pub fn term(&self, n: i64) -> Term {
        self.terms.get(&n).cloned().unwrap_or_else(Term::zero)
    }

    pub fn term_ref(&self, n: i64) -> Option<&Term> {
        self.terms.get(&n)
    }

    pub fn dim(&self, n: i64) -> usize {
        self.terms.get(&n).map_or(0, Term::dim)
    }

    pub fn differential(&self, n: i64) -> Matrix {
        self.diffs.get(&n).cloned().unwrap_or_else(|| Matrix::zeros(self.dim(n + 1), self.dim(n)))
    }

    pub fn dims(&self) -> BTreeMap<i64, usize> {
        self.terms.iter().map(|(&n, t)| (n, t.dim())).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.terms.iter().map(|(&n, t)| sign(n) * t.dim() as i64).sum()
    }

    pub fn is_labeled(&self) -> bool {
        self.terms.values().all(Term::is_labeled)
    }

    pub fn homology_at(&self, n: i64, f: &Field) -> Result<Homology> {
        let cycles = self.differential(n).kernel(f);
        let boundaries = self.differential(n - 1).image(f);
        let space = Subquotient::new(&cycles, &boundaries, f)?;
        let term = self.term(n);
        let phi = space.induced(term.module.phi(), &space, f)?;
        let nmat = space.induced(term.module.monodromy(), &space, f)?;
        Ok(Homology { module: PhiNModule::from_parts_unchecked(phi, nmat), space })
    }

    /// All nonzero homology groups.
    pub fn homology(&self, f: &Field) -> Result<BTreeMap<i64, Homology>> {
        let mut out = BTreeMap::new();
        for n in self.degrees() {
            let h = self.homology_at(n, f)?;
            if h.module.dim() > 0 {
                out.insert(n, h);
            }
        }
        Ok(out)
    }

    pub fn homology_dims(&self, f: &Field) -> Result<BTreeMap<i64, usize>> {
        Ok(self.homology(f)?.into_iter().map(|(n, h)| (n, h.module.dim())).collect())
    }

    /// Termwise Tate twist `(k)`: Frobenius scaled by `p^{−k}`, weights and
    /// columns move by `−2k` and `+2k`.
    pub fn tate_twist(&self, k: i64, f: &Field) -> Complex {
        let terms = self
            .terms
            .iter()
            .map(|(&n, t)| (n, Term { module: phimod::tate_twist(&t.module, k, f), blocks: t.map_columns(|c| c + 2 * k) }))
            .collect();
        Complex { terms, diffs: self.diffs.clone() }
    }

    /// `C[k]^n = C^{n+k}` with differential `(−1)^k d`; columns move by `−k`.
    pub fn shift(&self, k: i64) -> Complex {
        let terms =
            self.terms.iter().map(|(&n, t)| (n - k, Term { module: t.module.clone(), blocks: t.map_columns(|c| c - k) })).collect();
        let diffs = self
            .diffs
            .iter()
            .map(|(&n, d)| (n - k, if k % 2 == 0 { d.clone() } else { d.neg() }))
            .collect();
        Complex { terms, diffs }
    }

    /// `Tw(C, s)^n = C^{n+2s}(s)`.
    pub fn twist_shift(&self, s: i64, f: &Field) -> Complex {
        self.shift(2 * s).tate_twist(s, f)
    }

    /// `(C^∨)^n = (C^{−n})^∨` with transposed differentials.
    pub fn dual(&self, f: &Field) -> Complex {
        let terms = self
            .terms
            .iter()
            .map(|(&n, t)| (-n, Term { module: phimod::dual(&t.module, f), blocks: t.map_columns(|c| -c) }))
            .collect();
        let diffs = self.diffs.iter().map(|(&n, d)| (-n - 1, d.transpose())).collect();
        Complex { terms, diffs }
    }

    pub fn direct_sum(&self, other: &Complex) -> Complex {
        let mut terms = BTreeMap::new();
        let mut diffs = BTreeMap::new();
        let lo = self.bounds().map_or(0, |b| b.0).min(other.bounds().map_or(0, |b| b.0));
        let hi = self.bounds().map_or(0, |b| b.1).max(other.bounds().map_or(0, |b| b.1));
        for n in lo..=hi {
            terms.insert(n, Term::sum(&[&self.term(n), &other.term(n)]));
            diffs.insert(n, Matrix::block_diag(&[&self.differential(n), &other.differential(n)]));
        }
        Complex::new_unchecked(terms, diffs)
    }

    /// Frobenius weight dimensions of each term: degree → weight → dim.
    pub fn profile(&self, f: &Field) -> Result<BTreeMap<i64, BTreeMap<i64, usize>>> {
        let mut out = BTreeMap::new();
        for (&n, t) in &self.terms {
            out.insert(n, weil_split(t.module.phi(), f)?.dims());
        }
        Ok(out)
    }

    /// Frobenius weight dimensions of each nonzero homology group.
    pub fn homology_profile(&self, f: &Field) -> Result<BTreeMap<i64, BTreeMap<i64, usize>>> {
        let mut out = BTreeMap::new();
        for (n, h) in self.homology(f)? {
            out.insert(n, weil_split(h.module.phi(), f)?.dims());
        }
        Ok(out)
    }
}

pub(crate) fn sign(n: i64) -> i64 {
    if n.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// A chain map `f: A → B`, one matrix per degree.
#[derive(Clone, Debug)]
pub struct ChainMap {
    pub source: Complex,
    pub target: Complex,
    maps: BTreeMap<i64, Matrix>,
}

impl ChainMap {
    pub fn new(source: Complex, target: Complex, maps: BTreeMap<i64, Matrix>, f: &Field) -> Result<Self> {
        let m = ChainMap { source, target, maps };
        let (lo, hi) = m.span();
        for n in lo..=hi {
            let fm = m.at(n);
            if fm.rows() != m.target.dim(n) || fm.cols() != m.source.dim(n) {
                return Err(Error::DimensionMismatch(format!("chain map in degree {n}")));
            }
            let left = m.target.differential(n).mul(&fm, f)?;
            let right = m.at(n + 1).mul(&m.source.differential(n), f)?;
            if left != right {
                return Err(Error::NotAMorphism(format!("not a chain map in degree {n}")));
            }
            let s = m.source.term(n);
            let t = m.target.term(n);
            if fm.mul(s.module.phi(), f)? != t.module.phi().mul(&fm, f)? {
                return Err(Error::NotAMorphism(format!("degree {n} does not commute with Frobenius")));
            }
        }
        Ok(m)
    }

    pub fn identity(c: &Complex) -> ChainMap {
        let maps = c.terms.iter().map(|(&n, t)| (n, Matrix::identity(t.dim()))).collect();
        ChainMap { source: c.clone(), target: c.clone(), maps }
    }

    pub fn zero(source: &Complex, target: &Complex) -> ChainMap {
        ChainMap { source: source.clone(), target: target.clone(), maps: BTreeMap::new() }
    }

    fn span(&self) -> (i64, i64) {
        let a = self.source.bounds();
        let b = self.target.bounds();
        let lo = [a, b].iter().flatten().map(|x| x.0).min().unwrap_or(0);
        let hi = [a, b].iter().flatten().map(|x| x.1).max().unwrap_or(-1);
        (lo - 1, hi)
    }

    pub fn at(&self, n: i64) -> Matrix {
        self.maps.get(&n).cloned().unwrap_or_else(|| Matrix::zeros(self.target.dim(n), self.source.dim(n)))
    }

    /// The map `H^n(A) → H^n(B)` in homology coordinates.
    pub fn induced(&self, n: i64, f: &Field) -> Result<Matrix> {
        let hs = self.source.homology_at(n, f)?;
        let ht = self.target.homology_at(n, f)?;
        hs.space.induced(&self.at(n), &ht.space, f)
    }

    /// `cone(f)^n = B^n ⊕ A^{n+1}`, `d(b, a) = (d b + f a, −d a)`.
    pub fn cone(&self) -> Complex {
        let a = self.source.shift(1);
        let (lo, hi) = self.span();
        let mut terms = BTreeMap::new();
        let mut diffs = BTreeMap::new();
        for n in (lo - 1)..=hi {
            terms.insert(n, Term::sum(&[&self.target.term(n), &a.term(n)]));
            let top = Matrix::hstack(&[&self.target.differential(n), &self.at(n + 1)]).expect("shapes");
            let bottom =
                Matrix::hstack(&[&Matrix::zeros(a.dim(n + 1), self.target.dim(n)), &a.differential(n)]).expect("shapes");
            diffs.insert(n, Matrix::vstack(&[&top, &bottom]).expect("shapes"));
        }
        Complex::new_unchecked(terms, diffs)
    }

    /// `fib(f)^n = A^n ⊕ B^{n−1}`, `d(a, b) = (d a, f a − d b)`.
    pub fn fiber(&self) -> Complex {
        let b = self.target.shift(-1);
        let (lo, hi) = self.span();
        let mut terms = BTreeMap::new();
        let mut diffs = BTreeMap::new();
        for n in lo..=(hi + 1) {
            terms.insert(n, Term::sum(&[&self.source.term(n), &b.term(n)]));
            let top =
                Matrix::hstack(&[&self.source.differential(n), &Matrix::zeros(self.source.dim(n + 1), b.dim(n))]).expect("shapes");
            let bottom = Matrix::hstack(&[&self.at(n), &b.differential(n)]).expect("shapes");
            diffs.insert(n, Matrix::vstack(&[&top, &bottom]).expect("shapes"));
        }
        Complex::new_unchecked(terms, diffs)
    }

    /// Rank bookkeeping of the long exact sequence of the cone: for every
    /// degree `n`, `dim H^n(cone) = dim coker H^n(f) + dim ker H^{n+1}(f)`.
    pub fn long_exact_sequence_holds(&self, f: &Field) -> Result<bool> {
        let cone = self.cone();
        let (lo, hi) = self.span();
        for n in (lo - 1)..=(hi + 1) {
            let hn = self.induced(n, f)?;
            let hn1 = self.induced(n + 1, f)?;
            let coker = hn.rows() - hn.rank(f);
            let ker = hn1.cols() - hn1.rank(f);
            if cone.homology_at(n, f)?.module.dim() != coker + ker {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub fn homology(c: &Complex, f: &Field) -> Result<BTreeMap<i64, Homology>> {
    c.homology(f)
}

pub fn cone(map: &ChainMap) -> Complex {
    map.cone()
}

pub fn twist_shift(c: &Complex, s: i64, f: &Field) -> Complex {
    c.twist_shift(s, f)
}

/// Basis of the span of the blocks of `term` satisfying `keep`.
pub(crate) fn block_span(term: &Term, keep: impl Fn(&Block) -> bool) -> Matrix {
    let mut idx = Vec::new();
    let mut off = 0;
    for b in &term.blocks {
        if keep(b) {
            idx.extend(off..off + b.dim);
        }
        off += b.dim;
    }
    subspace::coordinate_subspace(term.dim(), &idx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Scalar;

    fn f3() -> Field {
        Field::new(3).unwrap()
    }

    fn two_term(d: Matrix) -> Complex {
        let u = PhiNModule::unit();
        Complex::new(
            BTreeMap::from([(0, Term::single(u.clone(), "a", 0)), (1, Term::single(u, "b", 1))]),
            BTreeMap::from([(0, d)]),
            &f3(),
        )
        .unwrap()
    }

    #[test]
    fn zero_and_identity_differentials() {
        let f = f3();
        assert_eq!(two_term(Matrix::zeros(1, 1)).homology_dims(&f).unwrap(), BTreeMap::from([(0, 1), (1, 1)]));
        assert!(two_term(Matrix::identity(1)).homology_dims(&f).unwrap().is_empty());
    }

    #[test]
    fn non_complex_is_rejected() {
        let f = f3();
        let u = PhiNModule::unit();
        let terms = BTreeMap::from([(0, Term::plain(u.clone())), (1, Term::plain(u.clone())), (2, Term::plain(u))]);
        let diffs = BTreeMap::from([(0, Matrix::identity(1)), (1, Matrix::identity(1))]);
        assert!(matches!(Complex::new(terms, diffs, &f), Err(Error::Invalid(_))));
    }

    #[test]
    fn cones() {
        let f = f3();
        let c = two_term(Matrix::zeros(1, 1));
        assert!(ChainMap::identity(&c).cone().homology_dims(&f).unwrap().is_empty());
        let z = ChainMap::zero(&c, &c);
        let h = z.cone().homology_dims(&f).unwrap();
        assert_eq!(h, BTreeMap::from([(-1, 1), (0, 2), (1, 1)]));
        assert!(z.long_exact_sequence_holds(&f).unwrap());
    }

    #[test]
    fn twist_shift_conventions() {
        let f = f3();
        let unit = Complex::concentrated(0, Term::single(PhiNModule::unit(), "1", 0));
        let tw = unit.twist_shift(-1, &f);
        assert_eq!(tw.degrees(), vec![2]);
        assert_eq!(tw.term(2).module.phi(), &Matrix::from_ints(&[&[3]]));
        assert_eq!(tw.term(2).blocks[0].column, 0);
        let back = tw.twist_shift(1, &f);
        assert_eq!(back.term(0).module.phi(), &Matrix::identity(1));
        assert_eq!(back.degrees(), vec![0]);
    }

    #[test]
    fn dual_of_two_term() {
        let f = f3();
        let u = PhiNModule::unit();
        let t = PhiNModule::tate(-1, &f);
        let c = Complex::new(
            BTreeMap::from([(0, Term::single(u, "a", 0)), (2, Term::single(t, "b", 0))]),
            BTreeMap::new(),
            &f,
        )
        .unwrap();
        let d = c.dual(&f);
        assert_eq!(d.degrees(), vec![-2, 0]);
        assert_eq!(d.term(-2).module.phi(), &Matrix::diag(&[Scalar::from_ratio(1, 3)]));
        assert_eq!(c.euler_characteristic(), 2);
    }
}
