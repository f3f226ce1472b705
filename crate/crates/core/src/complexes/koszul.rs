//! Finite truncations of the Koszul-duality identities: projection formula
//! binomials, the Bar algebra on one generator, the derivation law for its
//! monodromy and the tensor rule for lax fixed points.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::monodromy::kummer_object;
use crate::algebra::{Field, Matrix, Scalar};
use crate::error::Result;
use crate::phimod::{self, PhiNModule};

pub const DEFAULT_NMAX: usize = 4;

fn int_scalar(n: &BigInt) -> Scalar {
    Scalar::rational(BigRational::from_integer(n.clone()))
}

/// Pascal table `C(m, k)` for `0 ≤ k ≤ m ≤ n`.
fn pascal(n: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = vec![vec![BigInt::from(1)]];
    for m in 1..=n {
        let prev = &rows[m - 1];
        let mut row = vec![BigInt::from(1); m + 1];
        for k in 1..m {
            row[k] = &prev[k - 1] + &prev[k];
        }
        rows.push(row);
    }
    rows
}

/// Block matrix `B_{m,n} = C(m, m−n)·f^{m−n} ⊗ id_Y` for `0 ≤ n ≤ m ≤ n_max`.
/// Rows index the slot `m`, columns the slot `n`.
pub fn projection_formula_matrix(y: &PhiNModule, fx: &Matrix, n_max: usize, f: &Field) -> Result<Matrix> {
    let dx = fx.rows();
    let idy = Matrix::identity(y.dim());
    let block = dx * y.dim();
    let binom = pascal(n_max);
    let mut powers = vec![Matrix::identity(dx)];
    for k in 1..=n_max {
        powers.push(powers[k - 1].mul(fx, f)?);
    }
    let mut out = Matrix::zeros(block * (n_max + 1), block * (n_max + 1));
    for m in 0..=n_max {
        for n in 0..=m {
            let coeff = int_scalar(&binom[m][m - n]);
            let b = powers[m - n].kron(&idy, f).scale(&coeff, f);
            out.set_block(m * block, n * block, &b);
        }
    }
    Ok(out)
}

/// Multiplication coefficients `t^{⊗a}·t^{⊗b} = c_{a,b} t^{⊗(a+b)}` of the
/// shuffle product, from the recursion on the first letter.
#[derive(Clone, Debug)]
pub struct BarTable {
    pub n_max: usize,
    coeffs: Vec<Vec<BigInt>>,
}

impl BarTable {
    /// `c_{a,b}` for `a + b ≤ n_max`.
    pub fn coeff(&self, a: usize, b: usize) -> &BigInt {
        &self.coeffs[a][b]
    }

    pub fn coeff_scalar(&self, a: usize, b: usize) -> Scalar {
        int_scalar(self.coeff(a, b))
    }

    /// The `n`-fold product of `t` with itself, as a multiple of `t^{⊗n}`.
    pub fn mu(&self, n: usize) -> BigInt {
        (1..n).fold(BigInt::from(1), |acc, k| acc * self.coeff(1, k))
    }
}

pub fn bar_mult_table(n_max: usize) -> BarTable {
    let mut coeffs = vec![vec![BigInt::from(0); n_max + 1]; n_max + 1];
    for a in 0..=n_max {
        for b in 0..=(n_max - a) {
            coeffs[a][b] = if a == 0 || b == 0 {
                BigInt::from(1)
            } else {
                &coeffs[a - 1][b] + &coeffs[a][b - 1]
            };
        }
    }
    BarTable { n_max, coeffs }
}

/// Product `μ: H ⊗ H → H` of the truncated Bar algebra, restricted to the
/// components `e_a ⊗ e_b` with `a + b ≤ n_max`; columns are those
/// components in lexicographic order.
fn bar_product(table: &BarTable) -> (Matrix, Vec<(usize, usize)>) {
    let n = table.n_max;
    let comps: Vec<(usize, usize)> = (0..=n).flat_map(|a| (0..=(n - a)).map(move |b| (a, b))).collect();
    let mut mu = Matrix::zeros(n + 1, comps.len());
    for (j, &(a, b)) in comps.iter().enumerate() {
        mu.set(a + b, j, table.coeff_scalar(a, b));
    }
    (mu, comps)
}

/// The projection monodromy `e_k ↦ e_{k−1}` on `H`.
fn bar_monodromy(n: usize) -> Matrix {
    Matrix::from_fn(n + 1, n + 1, |i, j| if j == i + 1 { Scalar::one() } else { Scalar::zero() })
}

/// Checks `ν∘μ = μ∘(ν⊗1 + 1⊗ν)` on all components of total degree `≤ n_max`.
pub fn derivation_check(n_max: usize, f: &Field) -> Result<bool> {
    let table = bar_mult_table(n_max);
    let (mu, comps) = bar_product(&table);
    let nu = bar_monodromy(n_max);
    let lhs = nu.mul(&mu, f)?;
    let mut rhs = Matrix::zeros(n_max + 1, comps.len());
    for (j, &(a, b)) in comps.iter().enumerate() {
        let mut v = Scalar::zero();
        if a > 0 {
            v = v.add(&table.coeff_scalar(a - 1, b));
        }
        if b > 0 {
            v = v.add(&table.coeff_scalar(a, b - 1));
        }
        if a + b > 0 {
            rhs.set(a + b - 1, j, v);
        }
    }
    Ok(lhs == rhs)
}

/// Monodromy of `(X, f) ⊠ (Y, g)`: `f ⊗ id + id ⊗ g`.
pub fn lax_tensor(fx: &Matrix, gy: &Matrix, f: &Field) -> Result<Matrix> {
    let ix = Matrix::identity(fx.rows());
    let iy = Matrix::identity(gy.rows());
    fx.kron(&iy, f).add(&ix.kron(gy, f))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, pass: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), pass, detail: detail.into() }
    }
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::from(1), |acc, k| acc * BigInt::from(k))
}

fn is_unitriangular(b: &Matrix) -> bool {
    (0..b.rows()).all(|i| b.get(i, i).is_one() && (i + 1..b.cols()).all(|j| b.get(i, j).is_zero()))
}

fn projection_checks(n_max: usize, f: &Field) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let unit = PhiNModule::unit();
    let kummer_n = kummer_object(f).nu(0);
    let samples: Vec<(&str, Matrix)> = vec![
        ("f=0", Matrix::zeros(2, 2)),
        ("f=[1]", Matrix::identity(1)),
        ("f=kummer", kummer_n.clone()),
        ("f=jordan3", Matrix::from_ints(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]])),
    ];
    for (name, fx) in samples {
        let b = projection_formula_matrix(&unit, &fx, n_max, f)?;
        let d = fx.rows();
        // Pascal: B_{m,n} = f·B_{m−1,n} + B_{m−1,n−1}
        let mut pascal_ok = true;
        for m in 1..=n_max {
            for n in 0..=m {
                let blk = |mm: usize, nn: usize| b.submatrix(mm * d, d, nn * d, d);
                let mut expect = fx.mul(&blk(m - 1, n), f)?;
                if n > 0 {
                    expect = expect.add(&blk(m - 1, n - 1))?;
                }
                pascal_ok &= blk(m, n) == expect;
            }
        }
        let det_one = b.det(f)?.is_one();
        out.push(Check::new(
            &format!("projection formula {name}"),
            pascal_ok && det_one && is_unitriangular(&b),
            format!("{}x{} block matrix, det 1, unitriangular", b.rows(), b.cols()),
        ));
    }
    let identity = projection_formula_matrix(&unit, &Matrix::zeros(2, 2), n_max, f)?.is_identity();
    out.push(Check::new("projection formula f=0 is the identity", identity, ""));
    let y = PhiNModule::direct_sum(&[&unit, &PhiNModule::tate(-1, f)]);
    let with_y = projection_formula_matrix(&y, &kummer_n, n_max, f)?;
    out.push(Check::new(
        "projection formula with Y = 1 ⊕ 1(-1)",
        with_y.det(f)?.is_one() && is_unitriangular(&with_y),
        format!("{}x{}", with_y.rows(), with_y.cols()),
    ));
    Ok(out)
}

fn bar_checks(n_max: usize) -> Vec<Check> {
    let t = bar_mult_table(n_max);
    let mut closed = true;
    let mut symmetric = true;
    let mut unit = true;
    for a in 0..=n_max {
        for b in 0..=(n_max - a) {
            closed &= *t.coeff(a, b) == factorial(a + b) / (factorial(a) * factorial(b));
            symmetric &= t.coeff(a, b) == t.coeff(b, a);
            unit &= *t.coeff(0, b) == BigInt::from(1);
        }
    }
    let mut assoc = true;
    for a in 0..=n_max {
        for b in 0..=(n_max - a) {
            for c in 0..=(n_max - a - b) {
                assoc &= t.coeff(a, b) * t.coeff(a + b, c) == t.coeff(b, c) * t.coeff(a, b + c);
            }
        }
    }
    let mu_ok = (0..=n_max).all(|n| t.mu(n) == factorial(n));
    vec![
        Check::new("bar c_{a,b} = binom(a+b, a)", closed, format!("a + b ≤ {n_max}")),
        Check::new("bar symmetry", symmetric, ""),
        Check::new("bar unit", unit, ""),
        Check::new("bar associativity", assoc, ""),
        Check::new("bar μ_n = n!", mu_ok, format!("μ_{n_max} = {}", t.mu(n_max))),
    ]
}

fn tensor_checks(f: &Field) -> Result<Vec<Check>> {
    let k = kummer_object(f);
    let kn = k.nu(0);
    let kk = lax_tensor(&kn, &kn, f)?;
    let kmod = phimod::mk_phin(k.complex().term(0).module.phi().clone(), Some(kn.clone()), f)?;
    let agrees = phimod::tensor(&kmod, &kmod, f).monodromy() == &kk;
    let shape = kk.rank(f) == 2 && !kk.pow(2, f)?.is_zero() && kk.pow(3, f)?.is_zero();
    let zero = lax_tensor(&Matrix::zeros(2, 2), &Matrix::zeros(3, 3), f)?.is_zero();
    let unit_law = lax_tensor(&kn, &Matrix::zeros(1, 1), f)? == kn;
    Ok(vec![
        Check::new("lax tensor agrees with (φ,N) tensor", agrees, ""),
        Check::new("Kummer ⊠ Kummer: rank 2, cube zero", shape, ""),
        Check::new("lax tensor of zero monodromies", zero, ""),
        Check::new("lax tensor unit law", unit_law, ""),
    ])
}

/// All identity checks at truncation level `n_max`.
pub fn koszul_selftest(n_max: usize, f: &Field) -> Result<Vec<Check>> {
    let mut out = projection_checks(n_max, f)?;
    out.extend(bar_checks(n_max));
    out.push(Check::new("derivation N(ab) = N(a)b + aN(b)", derivation_check(n_max, f)?, format!("components of degree ≤ {n_max}")));
    out.extend(tensor_checks(f)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> Field {
        Field::new(3).unwrap()
    }

    #[test]
    fn formal_projection_matrix() {
        let f = f3();
        let b = projection_formula_matrix(&PhiNModule::unit(), &Matrix::identity(1), 2, &f).unwrap();
        assert_eq!(b, Matrix::from_ints(&[&[1, 0, 0], &[1, 1, 0], &[1, 2, 1]]));
    }

    #[test]
    fn bar_examples() {
        let t = bar_mult_table(4);
        assert_eq!(*t.coeff(1, 1), BigInt::from(2));
        assert_eq!(t.mu(3), BigInt::from(6));
        assert!((0..=4).all(|b| *t.coeff(0, b) == BigInt::from(1)));
    }

    #[test]
    fn selftest_passes() {
        let checks = koszul_selftest(DEFAULT_NMAX, &f3()).unwrap();
        for c in &checks {
            assert!(c.pass, "{}", c.name);
        }
    }
}
