use std::collections::BTreeMap;

use super::fiber::SemistableFiber;
use super::steenbrink::{gamma, rho, select, steenbrink, BlockKey, SteenbrinkComplex};
use crate::algebra::{weil_split, Field, Matrix, Scalar};
use crate::complexes::{homology_filtration, monodromy_on_graded, weight_ss, ChainMap, Complex, Filtration, MonodromyComplex, SSResult};
use crate::error::{Error, Result};
use crate::phimod::{self, PhiNModule, WmReport};

pub type Profile = BTreeMap<i64, BTreeMap<i64, usize>>;

/// One degree of limit cohomology.
#[derive(Clone, Debug)]
pub struct LimitDegree {
    pub degree: i64,
    /// Frobenius and monodromy in homology coordinates.
    pub module: PhiNModule,
    pub weights: BTreeMap<i64, usize>,
    pub n_rank: usize,
    /// Frobenius and monodromy in a basis adapted to the weight splitting,
    /// weights ascending.
    pub phi_weight_basis: Matrix,
    pub n_weight_basis: Matrix,
    /// `gr_i → gr_{i−2}` blocks of `N`.
    pub graded_n: BTreeMap<i64, Matrix>,
}

impl LimitDegree {
    pub fn dim(&self) -> usize {
        self.module.dim()
    }

    /// `N` in the weight basis scaled so that its first nonzero entry is 1.
    pub fn normalized_n(&self, f: &Field) -> Matrix {
        let n = &self.n_weight_basis;
        match n.entries().find(|e| !e.is_zero()) {
            Some(c) => n.scale(&f.inv(c).expect("nonzero"), f),
            None => n.clone(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct LimitCohomology {
    pub degrees: BTreeMap<i64, LimitDegree>,
    pub weight_ss: SSResult,
    /// The weight filtration from the spectral sequence agrees with the
    /// filtration by Frobenius weights on every degree.
    pub filtration_matches_frobenius: bool,
    /// `N` maps `gr_i` into `gr_{i−2}` only.
    pub only_lowers_by_two: bool,
    pub conjectural: bool,
    pub rescale: Scalar,
}

fn rescaled(st: &SteenbrinkComplex, c: &Scalar, f: &Field) -> Result<MonodromyComplex> {
    let total = st.total().clone();
    let nu = total.degrees().into_iter().map(|n| (n, st.monodromy.nu(n).scale(c, f))).collect();
    MonodromyComplex::new(total, nu, f)
}

/// Limit cohomology with monodromy normalized for `ϖ = p`, optionally
/// multiplied by `rescale`.
pub fn limit_cohomology(fiber: &SemistableFiber, rescale: Option<&Scalar>) -> Result<LimitCohomology> {
    let f = fiber.field();
    let st = steenbrink(fiber)?;
    let scale = rescale.cloned().unwrap_or_else(Scalar::one);
    if scale.is_zero() {
        return Err(Error::Invalid("monodromy rescale factor must be nonzero".into()));
    }
    let mc = rescaled(&st, &scale, f)?;
    let ss = weight_ss(mc.complex(), f)?;
    let graded = monodromy_on_graded(&mc, f)?;
    let filt = Filtration::of(mc.complex(), f)?;

    let mut degrees = BTreeMap::new();
    let mut matches = true;
    for (n, h) in mc.homology(f)? {
        let split = weil_split(h.module.phi(), f)?;
        let basis = split.change_of_basis();
        let inv = basis.inverse(f)?;
        let phi_w = Matrix::product(&[&inv, h.module.phi(), &basis], f)?;
        let n_w = Matrix::product(&[&inv, h.module.monodromy(), &basis], f)?;
        let graded_n = graded.blocks.iter().filter(|((deg, _), _)| *deg == n).map(|((_, i), m)| (*i, m.clone())).collect();

        let w_steps = homology_filtration(mc.complex(), &filt, n, f)?;
        for (&w, sub) in &w_steps {
            let parts: Vec<&Matrix> = split.pieces().iter().filter(|(&k, _)| k <= w).map(|(_, p)| &p.basis).collect();
            let frob = if parts.is_empty() { Matrix::zeros(h.module.dim(), 0) } else { Matrix::hstack(&parts)? };
            let a = crate::algebra::subspace::basis(&frob, f);
            matches &= a.cols() == sub.cols() && crate::algebra::subspace::contains(&a, sub, f)?;
        }

        degrees.insert(
            n,
            LimitDegree {
                degree: n,
                n_rank: h.module.monodromy().rank(f),
                weights: split.dims(),
                module: h.module,
                phi_weight_basis: phi_w,
                n_weight_basis: n_w,
                graded_n,
            },
        );
    }
    Ok(LimitCohomology {
        degrees,
        weight_ss: ss,
        filtration_matches_frobenius: matches,
        only_lowers_by_two: graded.only_lowers_by_two,
        conjectural: st.conjectural,
        rescale: scale,
    })
}

/// The special-fiber weight complexes read off the Steenbrink complex.
#[derive(Clone, Debug)]
pub struct SpecialFiberComplexes {
    /// `H^n` of this complex is `H_{2d−n}(X_k)(−d−1)`: blocks
    /// `H^j(D^{(m)})(−m)` in degree `j + m − 1` with Gysin differentials.
    pub homological: Complex,
    /// `H^*(X_k)`: blocks `H^j(D^{(m)})` in degree `j + m − 1` with
    /// restriction differentials.
    pub cohomological: Complex,
    /// `dim H^n(homological) = dim H^{2d−n}(cohomological)` with weights
    /// `w ↔ 2d + 2 − w`.
    pub poincare_dual: bool,
}

struct Pieces {
    st: SteenbrinkComplex,
    p: Complex,
    q: Complex,
}

fn pieces(fiber: &SemistableFiber) -> Result<Pieces> {
    let f = fiber.field();
    let st = steenbrink(fiber)?;
    let total = st.total().clone();
    let p = select(&total, |n| st.positions(n, |k| k.t == 0), 0, f);
    let q = select(&total, |n| st.positions(n, |k| k.t + 1 == k.m), -1, f);
    Ok(Pieces { st, p, q })
}

pub fn special_fiber_complexes(fiber: &SemistableFiber) -> Result<SpecialFiberComplexes> {
    let f = fiber.field();
    let pc = pieces(fiber)?;
    let d = fiber.relative_dimension() as i64;
    let hp = pc.p.homology_profile(f)?;
    let hq = pc.q.homology_profile(f)?;
    let mirrored: Profile = hp
        .iter()
        .map(|(&n, ws)| (2 * d - n, ws.iter().map(|(&w, &k)| (2 * d + 2 - w, k)).collect()))
        .collect();
    Ok(SpecialFiberComplexes { homological: pc.q, cohomological: pc.p, poincare_dual: mirrored == hq })
}

/// Positions of `keep`-blocks of degree `n`, as offsets inside the
/// selected sub/quotient term.
fn local_offset(st: &SteenbrinkComplex, n: i64, keep: impl Fn(&BlockKey) -> bool + Copy, key: &BlockKey) -> usize {
    let all = st.positions(n, keep);
    let (_, off, _) = st.index[key];
    all.iter().position(|&x| x == off).expect("block is selected")
}

/// `cl: Q → P[2]`, the composite `γ∘ρ` from `H^j(D^{(1)})(−1)` to `H^{j+2}(D^{(1)})`.
fn cycle_class(fiber: &SemistableFiber, pc: &Pieces) -> Result<ChainMap> {
    let f = fiber.field();
    let target = pc.p.shift(2);
    let mut maps = BTreeMap::new();
    for n in pc.q.degrees() {
        let mut m = Matrix::zeros(target.dim(n), pc.q.dim(n));
        let key = BlockKey { m: 1, j: n, t: 0 };
        let tkey = BlockKey { m: 1, j: n + 2, t: 0 };
        if pc.st.index.contains_key(&key) && pc.st.index.contains_key(&tkey) {
            let block = gamma(fiber, 2, n).mul(&rho(fiber, 1, n), f)?;
            let src = local_offset(&pc.st, n, |k| k.t + 1 == k.m, &key);
            let tgt = local_offset(&pc.st, n + 2, |k| k.t == 0, &tkey);
            m.set_block(tgt, src, &block);
        }
        maps.insert(n, m);
    }
    ChainMap::new(pc.q.clone(), target, maps, f)
}

#[derive(Clone, Debug)]
pub struct ChiReport {
    /// Homology of the fiber of `N` on the Steenbrink complex.
    pub fiber_profile: Profile,
    /// Homology of the special-fiber complexes spliced along `cl`.
    pub splice_profile: Profile,
    pub first_mismatch: Option<i64>,
}

impl ChiReport {
    pub fn pass(&self) -> bool {
        self.first_mismatch.is_none()
    }

    pub fn dims(profile: &Profile) -> BTreeMap<i64, usize> {
        profile.iter().map(|(&n, w)| (n, w.values().sum())).collect()
    }
}

/// Both computations of `χ`, without failing on disagreement.
pub fn chi_report(fiber: &SemistableFiber) -> Result<ChiReport> {
    let f = fiber.field();
    let pc = pieces(fiber)?;
    let fib = pc.st.monodromy.fiber(f);
    let splice = cycle_class(fiber, &pc)?.cone().shift(-2);
    let a = fib.homology_profile(f)?;
    let b = splice.homology_profile(f)?;
    let degrees: std::collections::BTreeSet<i64> = a.keys().chain(b.keys()).copied().collect();
    let first_mismatch = degrees.into_iter().find(|n| a.get(n) != b.get(n));
    Ok(ChiReport { fiber_profile: a, splice_profile: b, first_mismatch })
}

pub fn chi_compare(fiber: &SemistableFiber) -> Result<ChiReport> {
    let r = chi_report(fiber)?;
    if let Some(n) = r.first_mismatch {
        return Err(Error::Mismatch {
            degree: n,
            detail: format!("fiber of N gives {:?}, splice gives {:?}", r.fiber_profile.get(&n), r.splice_profile.get(&n)),
        });
    }
    Ok(r)
}

#[derive(Clone, Debug)]
pub struct CsNode {
    pub label: String,
    pub degree: i64,
    pub dim: usize,
    /// rank of the incoming map
    pub image: usize,
    /// dimension of the kernel of the outgoing map
    pub kernel: usize,
}

impl CsNode {
    pub fn exact(&self) -> bool {
        self.image == self.kernel
    }
}

/// One thread `H^n(X_k) → Ĥ^n → Ĥ^n(−1) → H_{2d−n}(X_k)(−d−1) → H^{n+2}(X_k) → ⋯`
/// for `n` of fixed parity.
#[derive(Clone, Debug)]
pub struct CsThread {
    pub parity: i64,
    pub nodes: Vec<CsNode>,
    /// `maps[i]: nodes[i] → nodes[i+1]`, in homology coordinates.
    pub maps: Vec<Matrix>,
}

impl CsThread {
    pub fn exact(&self) -> bool {
        self.nodes.iter().all(CsNode::exact)
    }
}

#[derive(Clone, Debug)]
pub struct CSReport {
    pub threads: Vec<CsThread>,
    pub wm: BTreeMap<i64, WmReport>,
    pub monodromy_zero: bool,
    /// `sp` and the map to homology are isomorphisms and `cl` vanishes, as
    /// for good reduction.
    pub duality_isomorphisms: bool,
    pub conjectural: bool,
}

impl CSReport {
    pub fn all_exact(&self) -> bool {
        self.threads.iter().all(CsThread::exact)
    }

    pub fn wm_pass(&self) -> bool {
        self.wm.values().all(|r| r.pass)
    }
}

pub fn clemens_schmid(fiber: &SemistableFiber) -> Result<CSReport> {
    let f = fiber.field();
    let pc = pieces(fiber)?;
    let c = pc.st.total().clone();
    let d = fiber.relative_dimension() as i64;
    let twisted = c.tate_twist(-1, f);

    let sp_maps = c
        .degrees()
        .into_iter()
        .map(|n| (n, Matrix::identity(c.dim(n)).select_columns(&pc.st.positions(n, |k| k.t == 0))))
        .collect();
    let sp = ChainMap::new(pc.p.clone(), c.clone(), sp_maps, f)?;
    let nu = pc.st.monodromy.chain_map(f);
    let delta_maps = c
        .degrees()
        .into_iter()
        .map(|n| (n, Matrix::identity(c.dim(n)).select_rows(&pc.st.positions(n, |k| k.t + 1 == k.m))))
        .collect();
    let delta = ChainMap::new(twisted, pc.q.clone(), delta_maps, f)?;
    let cl = cycle_class(fiber, &pc)?;

    let mut threads = Vec::new();
    for parity in 0..2 {
        let mut nodes = Vec::new();
        let mut maps = Vec::new();
        let mut n = parity - 2;
        while n <= 2 * d + 2 {
            let hp = pc.p.homology_at(n, f)?.module.dim();
            let hc = c.homology_at(n, f)?.module.dim();
            let hq = pc.q.homology_at(n, f)?.module.dim();
            nodes.push(CsNode { label: format!("H^{n}(X_k)"), degree: n, dim: hp, image: 0, kernel: 0 });
            nodes.push(CsNode { label: format!("Ĥ^{n}"), degree: n, dim: hc, image: 0, kernel: 0 });
            nodes.push(CsNode { label: format!("Ĥ^{n}(-1)"), degree: n, dim: hc, image: 0, kernel: 0 });
            nodes.push(CsNode { label: format!("H_{}(X_k)(-{})", 2 * d - n, d + 1), degree: n, dim: hq, image: 0, kernel: 0 });
            maps.push(sp.induced(n, f)?);
            maps.push(nu.induced(n, f)?);
            maps.push(delta.induced(n, f)?);
            maps.push(cl.induced(n, f)?);
            n += 2;
        }
        let thread_name = if parity == 0 { "even" } else { "odd" };
        for i in 0..maps.len().saturating_sub(1) {
            if !maps[i + 1].mul(&maps[i], f)?.is_zero() {
                return Err(Error::NotAComplex { thread: thread_name.into(), position: i + 1 });
            }
        }
        for i in 0..nodes.len() {
            let image = if i == 0 { 0 } else { maps[i - 1].rank(f) };
            let out = &maps[i];
            let kernel = nodes[i].dim - out.rank(f);
            nodes[i].image = image;
            nodes[i].kernel = kernel;
        }
        threads.push(CsThread { parity, nodes, maps });
    }

    let mut wm = BTreeMap::new();
    let mut monodromy_zero = true;
    for (n, h) in pc.st.monodromy.homology(f)? {
        monodromy_zero &= h.module.monodromy().is_zero();
        wm.insert(n, phimod::wm_check(&h.module, n, f)?);
    }
    let mut isos = monodromy_zero;
    for t in &threads {
        for (i, m) in t.maps.iter().enumerate() {
            let square_iso = m.rows() == m.cols() && m.rank(f) == m.rows();
            match i % 4 {
                0 | 2 => isos &= square_iso,
                3 => isos &= m.is_zero(),
                _ => {}
            }
        }
    }
    Ok(CSReport { threads, wm, monodromy_zero, duality_isomorphisms: isos, conjectural: pc.st.conjectural })
}

#[derive(Clone, Debug)]
pub struct SelfDuality {
    pub terms: Profile,
    pub dual_terms: Profile,
    pub homology: Profile,
    pub dual_homology: Profile,
}

impl SelfDuality {
    pub fn terms_match(&self) -> bool {
        self.terms == self.dual_terms
    }

    pub fn homology_match(&self) -> bool {
        self.homology == self.dual_homology
    }
}

/// Compares the totalization with `Tw(C^∨, −d)`.
pub fn self_duality(fiber: &SemistableFiber) -> Result<SelfDuality> {
    let f = fiber.field();
    let st = steenbrink(fiber)?;
    let c = st.total();
    let dual = c.dual(f).twist_shift(-(fiber.relative_dimension() as i64), f);
    Ok(SelfDuality {
        terms: c.profile(f)?,
        dual_terms: dual.profile(f)?,
        homology: c.homology_profile(f)?,
        dual_homology: dual.homology_profile(f)?,
    })
}
