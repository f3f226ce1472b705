use std::fmt;

use super::scalar::{Field, Scalar};

/// Dense univariate polynomial over Q(√p); `coeffs[k]` multiplies `λ^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, x: &Scalar, f: &Field) -> Scalar {
        self.coeffs.iter().rev().fold(Scalar::zero(), |acc, c| f.mul(&acc, x).add(c))
    }

    /// Synthetic division by `(λ − root)`; returns quotient and remainder.
    pub fn div_linear(&self, root: &Scalar, f: &Field) -> (Poly, Scalar) {
        let n = self.coeffs.len();
        if n <= 1 {
            return (Poly::new(vec![Scalar::zero()]), self.coeffs.first().cloned().unwrap_or_else(Scalar::zero));
        }
        let mut q = vec![Scalar::zero(); n - 1];
        let mut carry = Scalar::zero();
        for k in (0..n).rev() {
            let v = self.coeffs[k].add(&f.mul(&carry, root));
            if k == 0 {
                return (Poly::new(q), v);
            }
            q[k - 1] = v.clone();
            carry = v;
        }
        unreachable!()
    }

    /// Multiplicity of `root` as a zero.
    pub fn multiplicity(&self, root: &Scalar, f: &Field) -> (usize, Poly) {
        let mut p = self.clone();
        let mut mult = 0;
        while p.degree() > 0 {
            let (q, r) = p.div_linear(root, f);
            if !r.is_zero() {
                break;
            }
            p = q;
            mult += 1;
        }
        (mult, p)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("({c})"),
                1 => format!("({c})λ"),
                _ => format!("({c})λ^{k}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplicity_of_double_root() {
        let f = Field::new(5).unwrap();
        // (λ − 1)²(λ + 5) = λ³ + 3λ² − 9λ + 5
        let p = Poly::new([5, -9, 3, 1].iter().map(|&c| Scalar::from_int(c)).collect());
        let (m, rest) = p.multiplicity(&Scalar::one(), &f);
        assert_eq!(m, 2);
        assert_eq!(rest.coeffs(), &[Scalar::from_int(5), Scalar::one()]);
        assert!(p.eval(&Scalar::from_int(-5), &f).is_zero());
    }
}
