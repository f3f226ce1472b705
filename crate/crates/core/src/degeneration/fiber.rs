use std::collections::{BTreeMap, BTreeSet};

use crate::algebra::{weil_split, Field, Matrix, Scalar};
use crate::error::{Error, Result};

/// Stratum index set: sorted positions into the component ordering.
pub type StratumKey = Vec<usize>;

/// One pure summand of `H^j(D_J)`. Without `phi`, Frobenius defaults to
/// `p^{w/2}` (even weight) or blocks `[[0, p^w], [1, 0]]` (odd weight).
#[derive(Clone, Debug)]
pub struct PieceSpec {
    pub weight: i64,
    pub dim: usize,
    pub phi: Option<Matrix>,
}

#[derive(Clone, Debug)]
pub struct StratumSpec {
    pub components: Vec<String>,
    pub cohomology: BTreeMap<i64, Vec<PieceSpec>>,
}

/// `res(from → to)` in degree `degree`, where `to` adds one component.
#[derive(Clone, Debug)]
pub struct RestrictionSpec {
    pub from: Vec<String>,
    pub to: Vec<String>,
    pub degree: i64,
    pub matrix: Matrix,
}

/// Gram matrix of the Poincaré pairing `H^k(D_J) × H^{2e−k}(D_J) → K₀(−e)`.
#[derive(Clone, Debug)]
pub struct PairingSpec {
    pub stratum: Vec<String>,
    pub degree: i64,
    pub matrix: Matrix,
}

/// Unvalidated description of a strict semistable special fiber.
#[derive(Clone, Debug)]
pub struct FiberSpec {
    pub prime: u64,
    pub relative_dimension: usize,
    pub components: Vec<String>,
    pub strata: Vec<StratumSpec>,
    pub restrictions: Vec<RestrictionSpec>,
    pub pairings: Vec<PairingSpec>,
}

/// A validated special fiber: pure strata cohomology, restrictions that
/// commute with Frobenius and compose consistently, and Gysin maps
/// synthesized as Poincaré adjoints of restrictions.
#[derive(Clone, Debug)]
pub struct SemistableFiber {
    field: Field,
    d: usize,
    components: Vec<String>,
    /// stratum → degree → Frobenius of `H^j(D_J)`
    strata: BTreeMap<StratumKey, BTreeMap<i64, Matrix>>,
    restrictions: BTreeMap<(StratumKey, StratumKey, i64), Matrix>,
    /// `(larger, smaller, source degree j)`: `H^j(D_{J'}) → H^{j+2}(D_J)`
    gysin: BTreeMap<(StratumKey, StratumKey, i64), Matrix>,
}

impl SemistableFiber {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn prime(&self) -> u64 {
        self.field.p()
    }

    pub fn relative_dimension(&self) -> usize {
        self.d
    }

    pub fn components(&self) -> &[String] {
        &self.components
    }

    pub fn strata(&self) -> impl Iterator<Item = &StratumKey> {
        self.strata.keys()
    }

    pub fn stratum_count(&self) -> usize {
        self.strata.len()
    }

    pub fn max_depth(&self) -> usize {
        self.strata.keys().map(Vec::len).max().unwrap_or(0)
    }

    /// Strata with `m` components, in lexicographic order.
    pub fn strata_of_depth(&self, m: usize) -> Vec<&StratumKey> {
        self.strata.keys().filter(|k| k.len() == m).collect()
    }

    pub fn label(&self, key: &StratumKey) -> String {
        let names: Vec<&str> = key.iter().map(|&i| self.components[i].as_str()).collect();
        format!("{{{}}}", names.join(","))
    }

    /// Frobenius of `H^j(D_J)`, empty when absent.
    pub fn phi(&self, key: &StratumKey, j: i64) -> Matrix {
        self.strata.get(key).and_then(|c| c.get(&j)).cloned().unwrap_or_else(|| Matrix::zeros(0, 0))
    }

    pub fn dim(&self, key: &StratumKey, j: i64) -> usize {
        self.strata.get(key).and_then(|c| c.get(&j)).map_or(0, Matrix::rows)
    }

    /// Dimension of the stratum `D_J` as a variety.
    pub fn stratum_dimension(&self, key: &StratumKey) -> usize {
        self.d + 1 - key.len()
    }

    pub fn restriction(&self, from: &StratumKey, to: &StratumKey, j: i64) -> Matrix {
        self.restrictions
            .get(&(from.clone(), to.clone(), j))
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.dim(to, j), self.dim(from, j)))
    }

    pub fn gysin(&self, from: &StratumKey, to: &StratumKey, j: i64) -> Matrix {
        self.gysin
            .get(&(from.clone(), to.clone(), j))
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.dim(to, j + 2), self.dim(from, j)))
    }

    /// `H^j(D_J)` for `j` in `0..=2·dim D_J`.
    pub fn degrees(&self, key: &StratumKey) -> Vec<i64> {
        self.strata.get(key).map(|c| c.keys().copied().collect()).unwrap_or_default()
    }
}

/// Sign `(−1)^{position of i in the sorted set big}`.
pub fn position_sign(big: &StratumKey, i: usize) -> Scalar {
    let pos = big.iter().position(|&x| x == i).expect("index belongs to the set");
    if pos % 2 == 0 {
        Scalar::one()
    } else {
        Scalar::from_int(-1)
    }
}

fn default_phi(weight: i64, dim: usize, f: &Field) -> Result<Matrix> {
    if weight.rem_euclid(2) == 0 {
        return Ok(Matrix::scalar(dim, &f.p_power(weight / 2)));
    }
    if dim % 2 == 1 {
        return Err(Error::Invalid(format!("odd weight {weight} with odd dimension {dim} needs an explicit phi")));
    }
    let block = Matrix::from_rows(vec![vec![Scalar::zero(), f.p_power(weight)], vec![Scalar::one(), Scalar::zero()]])?;
    let blocks = vec![&block; dim / 2];
    Ok(Matrix::block_diag(&blocks))
}

struct Resolver<'a> {
    index: BTreeMap<&'a str, usize>,
}

impl Resolver<'_> {
    fn key(&self, labels: &[String]) -> Result<StratumKey> {
        let mut out = BTreeSet::new();
        for l in labels {
            let &i = self.index.get(l.as_str()).ok_or_else(|| Error::Invalid(format!("unknown component {l:?}")))?;
            if !out.insert(i) {
                return Err(Error::Invalid(format!("component {l:?} repeated in a stratum")));
            }
        }
        if out.is_empty() {
            return Err(Error::Invalid("empty stratum".into()));
        }
        Ok(out.into_iter().collect())
    }
}

pub fn validate_fiber(spec: &FiberSpec) -> Result<SemistableFiber> {
    let field = Field::new(spec.prime)?;
    let f = &field;
    let d = spec.relative_dimension;
    if spec.components.is_empty() {
        return Err(Error::Invalid("no components".into()));
    }
    let index: BTreeMap<&str, usize> = spec.components.iter().enumerate().map(|(i, c)| (c.as_str(), i)).collect();
    if index.len() != spec.components.len() {
        return Err(Error::Invalid("duplicate component labels".into()));
    }
    let res = Resolver { index };
    let mut fiber = SemistableFiber {
        field: field.clone(),
        d,
        components: spec.components.clone(),
        strata: BTreeMap::new(),
        restrictions: BTreeMap::new(),
        gysin: BTreeMap::new(),
    };

    for s in &spec.strata {
        let key = res.key(&s.components)?;
        if key.len() > d + 1 {
            return Err(Error::Invalid(format!("stratum {} has negative dimension", fiber.label(&key))));
        }
        if fiber.strata.contains_key(&key) {
            return Err(Error::Invalid(format!("stratum {} listed twice", fiber.label(&key))));
        }
        let top = 2 * (d + 1 - key.len()) as i64;
        let name = fiber.label(&key);
        let mut coh = BTreeMap::new();
        for (&j, pieces) in &s.cohomology {
            if j < 0 || j > top {
                return Err(Error::MissingDegree { stratum: name, degree: j });
            }
            let mut blocks = Vec::new();
            for piece in pieces {
                if piece.weight != j {
                    return Err(Error::ImpureStratum {
                        stratum: name,
                        degree: j,
                        detail: format!("declared weight {} in degree {j}", piece.weight),
                    });
                }
                let phi = match &piece.phi {
                    Some(m) => {
                        if m.rows() != piece.dim || m.cols() != piece.dim {
                            return Err(Error::DimensionMismatch(format!(
                                "stratum {name} degree {j}: phi is {}x{}, dim is {}",
                                m.rows(),
                                m.cols(),
                                piece.dim
                            )));
                        }
                        m.clone()
                    }
                    None => default_phi(piece.weight, piece.dim, f)?,
                };
                blocks.push(phi);
            }
            let refs: Vec<&Matrix> = blocks.iter().collect();
            let phi = Matrix::block_diag(&refs);
            if phi.rows() == 0 {
                continue;
            }
            let split = weil_split(&phi, f).map_err(|e| match e {
                Error::NotInvertible(m) => Error::NotInvertible(format!("stratum {name} degree {j}: {m}")),
                other => Error::ImpureStratum { stratum: name.clone(), degree: j, detail: other.to_string() },
            })?;
            if !split.is_pure_of(j) {
                return Err(Error::ImpureStratum {
                    stratum: name,
                    degree: j,
                    detail: format!("Frobenius weights {:?}", split.dims()),
                });
            }
            coh.insert(j, phi);
        }
        fiber.strata.insert(key, coh);
    }

    for r in &spec.restrictions {
        let from = res.key(&r.from)?;
        let to = res.key(&r.to)?;
        if to.len() != from.len() + 1 || !from.iter().all(|i| to.contains(i)) {
            return Err(Error::Invalid(format!(
                "restriction {} -> {} must add exactly one component",
                fiber.label(&from),
                fiber.label(&to)
            )));
        }
        for key in [&from, &to] {
            if !fiber.strata.contains_key(key) {
                return Err(Error::Invalid(format!("restriction mentions undeclared stratum {}", fiber.label(key))));
            }
        }
        let (rows, cols) = (fiber.dim(&to, r.degree), fiber.dim(&from, r.degree));
        if r.matrix.rows() != rows || r.matrix.cols() != cols {
            return Err(Error::DimensionMismatch(format!(
                "restriction {} -> {} degree {} is {}x{}, expected {rows}x{cols}",
                fiber.label(&from),
                fiber.label(&to),
                r.degree,
                r.matrix.rows(),
                r.matrix.cols()
            )));
        }
        let left = r.matrix.mul(&fiber.phi(&from, r.degree), f)?;
        let right = fiber.phi(&to, r.degree).mul(&r.matrix, f)?;
        if left != right {
            return Err(Error::FrobeniusMismatch {
                stratum: fiber.label(&from),
                degree: r.degree,
                detail: format!("restriction to {} does not commute with Frobenius", fiber.label(&to)),
            });
        }
        fiber.restrictions.insert((from, to, r.degree), r.matrix.clone());
    }

    // Every codimension-one pair of nonzero spaces needs an explicit map.
    let keys: Vec<StratumKey> = fiber.strata.keys().cloned().collect();
    for from in &keys {
        for to in keys.iter().filter(|t| t.len() == from.len() + 1 && from.iter().all(|i| t.contains(i))) {
            for j in fiber.degrees(from) {
                if fiber.dim(to, j) > 0 && !fiber.restrictions.contains_key(&(from.clone(), to.clone(), j)) {
                    return Err(Error::MissingRestriction { from: fiber.label(from), to: fiber.label(to), degree: j });
                }
            }
        }
    }

    check_compositions(&fiber)?;

    let mut pairings = BTreeMap::new();
    for pr in &spec.pairings {
        let key = res.key(&pr.stratum)?;
        pairings.insert((key, pr.degree), pr.matrix.clone());
    }
    synthesize_gysin(&mut fiber, &pairings)?;
    Ok(fiber)
}

/// Restrictions around each square `J ⊂ J∪a, J∪b ⊂ J∪ab` must agree.
fn check_compositions(fiber: &SemistableFiber) -> Result<()> {
    let f = &fiber.field;
    let keys: Vec<StratumKey> = fiber.strata.keys().cloned().collect();
    let n = fiber.components.len();
    for j_key in &keys {
        for a in 0..n {
            for b in (a + 1)..n {
                if j_key.contains(&a) || j_key.contains(&b) {
                    continue;
                }
                let with = |extra: &[usize]| {
                    let mut k = j_key.clone();
                    k.extend_from_slice(extra);
                    k.sort_unstable();
                    k
                };
                let (ja, jb, jab) = (with(&[a]), with(&[b]), with(&[a, b]));
                if !fiber.strata.contains_key(&jab) {
                    continue;
                }
                for deg in fiber.degrees(j_key) {
                    let via_a = fiber.restriction(&ja, &jab, deg).mul(&fiber.restriction(j_key, &ja, deg), f)?;
                    let via_b = fiber.restriction(&jb, &jab, deg).mul(&fiber.restriction(j_key, &jb, deg), f)?;
                    if via_a != via_b {
                        return Err(Error::CompositionMismatch {
                            stratum: fiber.label(j_key),
                            degree: deg,
                            detail: format!("paths to {} disagree", fiber.label(&jab)),
                        });
                    }
                }
            }
        }
    }
    Ok(())
}

fn pairing(
    fiber: &SemistableFiber,
    pairings: &BTreeMap<(StratumKey, i64), Matrix>,
    key: &StratumKey,
    k: i64,
) -> Result<Matrix> {
    let e = fiber.stratum_dimension(key) as i64;
    let (rows, cols) = (fiber.dim(key, k), fiber.dim(key, 2 * e - k));
    let g = match pairings.get(&(key.clone(), k)) {
        Some(g) => g.clone(),
        None if rows == cols => Matrix::identity(rows),
        None => {
            return Err(Error::Invalid(format!(
                "stratum {}: H^{k} and H^{} have different dimensions, no Poincaré pairing possible",
                fiber.label(key),
                2 * e - k
            )))
        }
    };
    if g.rows() != rows || g.cols() != cols {
        return Err(Error::DimensionMismatch(format!("pairing on {} degree {k}", fiber.label(key))));
    }
    Ok(g)
}

/// `γ = (G_J^{−1})ᵀ · Rᵀ · G_{J'}ᵀ`, the adjoint of `R = res(J → J')` in
/// degree `2e − j − 2` (`e = dim D_J`) under the pairings, so that
/// `⟨γx, y⟩_J = ⟨x, R y⟩_{J'}`.
fn synthesize_gysin(fiber: &mut SemistableFiber, pairings: &BTreeMap<(StratumKey, i64), Matrix>) -> Result<()> {
    let f = fiber.field.clone();
    let keys: Vec<StratumKey> = fiber.strata.keys().cloned().collect();
    for big in &keys {
        for &i in big {
            let small: StratumKey = big.iter().copied().filter(|&x| x != i).collect();
            if small.is_empty() || !fiber.strata.contains_key(&small) {
                continue;
            }
            let e = fiber.stratum_dimension(&small) as i64;
            for j in fiber.degrees(big) {
                let tgt_dim = fiber.dim(&small, j + 2);
                if tgt_dim == 0 {
                    continue;
                }
                let r = fiber.restriction(&small, big, 2 * e - j - 2);
                let g_big = pairing(fiber, pairings, big, j)?;
                let g_small = pairing(fiber, pairings, &small, j + 2)?;
                let g_inv = g_small.inverse(&f).map_err(|_| {
                    Error::NotInvertible(format!("pairing on {} degree {}", fiber.label(&small), j + 2))
                })?;
                let gamma = Matrix::product(&[&g_inv.transpose(), &r.transpose(), &g_big.transpose()], &f)?;
                let p = Scalar::from_int(f.p() as i64);
                let left = gamma.mul(&fiber.phi(big, j), &f)?.scale(&p, &f);
                let right = fiber.phi(&small, j + 2).mul(&gamma, &f)?;
                if left != right {
                    return Err(Error::FrobeniusMismatch {
                        stratum: fiber.label(big),
                        degree: j,
                        detail: format!(
                            "Gysin map to {} is not Frobenius-equivariant; check the declared pairings",
                            fiber.label(&small)
                        ),
                    });
                }
                fiber.gysin.insert((big.clone(), small.clone(), j), gamma);
            }
        }
    }
    Ok(())
}
