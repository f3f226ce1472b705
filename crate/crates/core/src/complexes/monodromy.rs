use std::collections::BTreeMap;

use super::complex::{Block, ChainMap, Complex, Homology, Term};
use crate::algebra::{weil_split, Field, Matrix, Scalar};
use crate::error::{Error, Result};
use crate::phimod::{self, PhiNModule};

/// A complex with a monodromy chain map `ν: C → C(−1)`.
///
/// In the realized total complex `ν` preserves cohomological degree; read
/// against `Tw(C, −1)` it lands two degrees higher, `Tw(C,−1)^{n+2} = C^n(−1)`.
#[derive(Clone, Debug)]
pub struct MonodromyComplex {
    complex: Complex,
    nu: BTreeMap<i64, Matrix>,
}

impl MonodromyComplex {
    pub fn new(complex: Complex, nu: BTreeMap<i64, Matrix>, f: &Field) -> Result<Self> {
        let m = MonodromyComplex { complex, nu };
        m.validate(f)?;
        Ok(m)
    }

    fn validate(&self, f: &Field) -> Result<()> {
        let p = Scalar::from_int(f.p() as i64);
        for n in self.complex.degree_range() {
            let nu = self.nu(n);
            let dim = self.complex.dim(n);
            if nu.rows() != dim || nu.cols() != dim {
                return Err(Error::DimensionMismatch(format!("ν in degree {n}")));
            }
            let phi = self.complex.term(n).module.phi().clone();
            if nu.mul(&phi, f)? != phi.mul(&nu, f)?.scale(&p, f) {
                return Err(Error::NotAMorphism(format!("ν in degree {n} violates ν·Φ = p·Φ·ν")));
            }
            let d = self.complex.differential(n);
            if d.mul(&nu, f)? != self.nu(n + 1).mul(&d, f)? {
                return Err(Error::NotAMorphism(format!("ν is not a chain map in degree {n}")));
            }
            if dim > 0 && !nu.pow(dim, f)?.is_zero() {
                return Err(Error::NotNilpotent);
            }
        }
        Ok(())
    }

    pub fn complex(&self) -> &Complex {
        &self.complex
    }

    pub fn nu(&self, n: i64) -> Matrix {
        self.nu.get(&n).cloned().unwrap_or_else(|| {
            let d = self.complex.dim(n);
            Matrix::zeros(d, d)
        })
    }

    /// `ν` as a chain map into the Tate twist `C(−1)`.
    pub fn chain_map(&self, f: &Field) -> ChainMap {
        let target = self.complex.tate_twist(-1, f);
        let maps = self.complex.degrees().into_iter().map(|n| (n, self.nu(n))).collect();
        ChainMap::new(self.complex.clone(), target, maps, f).expect("ν validated as a chain map")
    }

    /// `fib(ν)`; its homology is `χ`.
    pub fn fiber(&self, f: &Field) -> Complex {
        self.chain_map(f).fiber()
    }

    /// `C[k]` with `ν` carried along.
    pub fn shift(&self, k: i64) -> MonodromyComplex {
        let nu = self.nu.iter().map(|(&n, m)| (n - k, m.clone())).collect();
        MonodromyComplex { complex: self.complex.shift(k), nu }
    }

    /// `Tw(C, s)` with `ν` carried along.
    pub fn twist_shift(&self, s: i64, f: &Field) -> MonodromyComplex {
        let nu = self.nu.iter().map(|(&n, m)| (n - 2 * s, m.clone())).collect();
        MonodromyComplex { complex: self.complex.twist_shift(s, f), nu }
    }

    pub fn direct_sum(&self, other: &MonodromyComplex) -> MonodromyComplex {
        let complex = self.complex.direct_sum(&other.complex);
        let nu = complex.degrees().into_iter().map(|n| (n, Matrix::block_diag(&[&self.nu(n), &other.nu(n)]))).collect();
        MonodromyComplex { complex, nu }
    }

    /// Homology with `N` induced by `ν`.
    pub fn homology(&self, f: &Field) -> Result<BTreeMap<i64, Homology>> {
        let mut out = BTreeMap::new();
        for (n, mut h) in self.complex.homology(f)? {
            let nmat = h.space.induced(&self.nu(n), &h.space, f)?;
            h.module = PhiNModule::from_parts_unchecked(h.module.phi().clone(), nmat);
            out.insert(n, h);
        }
        Ok(out)
    }
}

/// Monodromy on the Frobenius-graded homology: `blocks[(n, i)]` is the map
/// `gr_i H^n → gr_{i−2} H^n` induced by `ν`.
#[derive(Clone, Debug)]
pub struct GradedMonodromy {
    pub blocks: BTreeMap<(i64, i64), Matrix>,
    /// All components `gr_i → gr_j` with `j ≠ i − 2` vanish.
    pub only_lowers_by_two: bool,
}

pub fn monodromy_on_graded(m: &MonodromyComplex, f: &Field) -> Result<GradedMonodromy> {
    let mut blocks = BTreeMap::new();
    let mut clean = true;
    for (n, h) in m.homology(f)? {
        let split = weil_split(h.module.phi(), f)?;
        let weights: Vec<i64> = split.pieces().keys().copied().collect();
        for &i in &weights {
            for &j in &weights {
                let b = phimod::weight_block(&split, h.module.monodromy(), i, j, f)?;
                if j == i - 2 {
                    blocks.insert((n, i), b);
                } else if !b.is_zero() {
                    clean = false;
                }
            }
        }
    }
    Ok(GradedMonodromy { blocks, only_lowers_by_two: clean })
}

/// The Kummer object: `K₀ ⊕ K₀(−1)` in degree 0 with `ν` sending the twist
/// summand identically onto the unit summand.
pub fn kummer_object(f: &Field) -> MonodromyComplex {
    let module = PhiNModule::direct_sum(&[&PhiNModule::unit(), &PhiNModule::tate(-1, f)]);
    let blocks = vec![
        Block { label: "1".into(), dim: 1, column: 0 },
        Block { label: "1(-1)".into(), dim: 1, column: -2 },
    ];
    let c = Complex::concentrated(0, Term::labeled(module, blocks).expect("dims"));
    let nu = Matrix::from_ints(&[&[0, 1], &[0, 0]]);
    MonodromyComplex::new(c, BTreeMap::from([(0, nu)]), f).expect("Kummer data is consistent")
}

/// `⊕_{0≤k≤n_max} X(−k)` in degree 0 with `ν` the identity from slot `k`
/// to slot `k−1` and zero on slot 0. The monodromy of `X` itself is ignored.
pub fn cofree_truncation(x: &PhiNModule, n_max: usize, f: &Field) -> Result<MonodromyComplex> {
    if n_max == 0 {
        return Err(Error::Invalid("cofree truncation needs n_max ≥ 1".into()));
    }
    let base = PhiNModule::from_parts_unchecked(x.phi().clone(), Matrix::zeros(x.dim(), x.dim()));
    let slots: Vec<PhiNModule> = (0..=n_max as i64).map(|k| phimod::tate_twist(&base, -k, f)).collect();
    let refs: Vec<&PhiNModule> = slots.iter().collect();
    let module = PhiNModule::direct_sum(&refs);
    let d = x.dim();
    let blocks = (0..=n_max as i64)
        .map(|k| Block { label: format!("X(-{k})"), dim: d, column: -2 * k })
        .collect();
    let mut nu = Matrix::zeros(module.dim(), module.dim());
    for k in 1..=n_max {
        nu.set_block((k - 1) * d, k * d, &Matrix::identity(d));
    }
    let c = Complex::concentrated(0, Term::labeled(module, blocks)?);
    MonodromyComplex::new(c, BTreeMap::from([(0, nu)]), f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> Field {
        Field::new(3).unwrap()
    }

    #[test]
    fn kummer() {
        let f = f3();
        let k = kummer_object(&f);
        assert_eq!(k.complex().term(0).module.phi(), &Matrix::from_ints(&[&[1, 0], &[0, 3]]));
        assert!(k.nu(0).pow(2, &f).unwrap().is_zero());
        let fib = k.fiber(&f);
        assert_eq!(fib.homology_dims(&f).unwrap(), BTreeMap::from([(0, 1), (1, 1)]));
        let g = monodromy_on_graded(&k, &f).unwrap();
        assert!(g.only_lowers_by_two);
        assert_eq!(g.blocks[&(0, 2)].rank(&f), 1);
    }

    #[test]
    fn cofree() {
        let f = f3();
        let c = cofree_truncation(&PhiNModule::unit(), 2, &f).unwrap();
        assert_eq!(c.complex().term(0).module.phi(), &Matrix::from_ints(&[&[1, 0, 0], &[0, 3, 0], &[0, 0, 9]]));
        assert_eq!(c.nu(0).rank(&f), 2);
        assert!(c.nu(0).pow(3, &f).unwrap().is_zero());
        let kernel = c.nu(0).kernel(&f);
        assert_eq!(kernel, Matrix::from_ints(&[&[1], &[0], &[0]]));
        assert_eq!(c.fiber(&f).homology_dims(&f).unwrap()[&0], 1);
    }

    #[test]
    fn wrong_direction_is_rejected() {
        let f = f3();
        let module = PhiNModule::direct_sum(&[&PhiNModule::unit(), &PhiNModule::tate(-1, &f)]);
        let c = Complex::concentrated(0, Term::plain(module));
        let nu = Matrix::from_ints(&[&[0, 0], &[1, 0]]);
        assert!(MonodromyComplex::new(c, BTreeMap::from([(0, nu)]), &f).is_err());
    }
}
