//! Exact arithmetic in the quadratic field Q(√p).
//!
//! A [`Scalar`] is a pair of rationals `(a, b)` standing for `a + b·√p`. The
//! prime itself is not stored in the value; it lives in a [`Field`] context
//! that every operation needing it (multiplication, inversion, valuations)
//! takes explicitly.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Element `a + b·√p` of Q(√p).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Scalar {
    pub a: BigRational,
    pub b: BigRational,
}

/// Session context carrying the prime `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Field {
    p: u64,
    p_big: BigInt,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Field { p, p_big: BigInt::from(p) })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn p_big(&self) -> &BigInt {
        &self.p_big
    }

    pub fn add(&self, x: &Scalar, y: &Scalar) -> Scalar {
        x.add(y)
    }

    pub fn neg(&self, x: &Scalar) -> Scalar {
        x.neg()
    }

    /// `(a+b√p)(c+d√p) = (ac + bdp) + (ad + bc)√p`
    pub fn mul(&self, x: &Scalar, y: &Scalar) -> Scalar {
        if x.is_zero() || y.is_zero() {
            return Scalar::zero();
        }
        if x.b.is_zero() && y.b.is_zero() {
            return Scalar::rational(&x.a * &y.a);
        }
        let p = BigRational::from_integer(self.p_big.clone());
        Scalar {
            a: &x.a * &y.a + &x.b * &y.b * p,
            b: &x.a * &y.b + &x.b * &y.a,
        }
    }

    /// Inverse via the conjugate: `1/(a+b√p) = (a−b√p)/(a²−pb²)`.
    pub fn inv(&self, x: &Scalar) -> Result<Scalar> {
        if x.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if x.b.is_zero() {
            return Ok(Scalar::rational(x.a.recip()));
        }
        let p = BigRational::from_integer(self.p_big.clone());
        let norm = &x.a * &x.a - &x.b * &x.b * p;
        // p is prime, so √p is irrational and the norm of a nonzero element is nonzero.
        Ok(Scalar { a: &x.a / &norm, b: -&x.b / &norm })
    }

    pub fn div(&self, x: &Scalar, y: &Scalar) -> Result<Scalar> {
        Ok(self.mul(x, &self.inv(y)?))
    }

    /// `±p^{m/2}`, the candidate Weil eigenvalues of weight `m`.
    pub fn weil_number(&self, m: i64, negative: bool) -> Scalar {
        let half = m.div_euclid(2);
        let mut v = self.p_power(half);
        if m.rem_euclid(2) == 1 {
            v = Scalar { a: BigRational::zero(), b: v.a };
        }
        if negative {
            v.neg()
        } else {
            v
        }
    }

    /// `p^k` for any integer `k`.
    pub fn p_power(&self, k: i64) -> Scalar {
        let pk = num_traits::pow(self.p_big.clone(), k.unsigned_abs() as usize);
        if k >= 0 {
            Scalar::rational(BigRational::from_integer(pk))
        } else {
            Scalar::rational(BigRational::new(BigInt::one(), pk))
        }
    }

    fn rational_valuation(&self, q: &BigRational) -> Option<i64> {
        if q.is_zero() {
            return None;
        }
        let mut v = 0i64;
        let mut n = q.numer().abs();
        while n.is_multiple_of(&self.p_big) {
            n /= &self.p_big;
            v += 1;
        }
        let mut d = q.denom().clone();
        while d.is_multiple_of(&self.p_big) {
            d /= &self.p_big;
            v -= 1;
        }
        Some(v)
    }

    /// Twice the p-adic valuation of `x` (so that √p has value 1); `None` at zero.
    pub fn double_valuation(&self, x: &Scalar) -> Option<i64> {
        let va = self.rational_valuation(&x.a).map(|v| 2 * v);
        let vb = self.rational_valuation(&x.b).map(|v| 2 * v + 1);
        match (va, vb) {
            (None, None) => None,
            (Some(a), None) => Some(a),
            (None, Some(b)) => Some(b),
            (Some(a), Some(b)) => Some(a.min(b)),
        }
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { a: BigRational::zero(), b: BigRational::zero() }
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Scalar::rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn rational(a: BigRational) -> Self {
        Scalar { a, b: BigRational::zero() }
    }

    pub fn new(a: BigRational, b: BigRational) -> Self {
        Scalar { a, b }
    }

    /// The element `√p`.
    pub fn sqrt_p() -> Self {
        Scalar { a: BigRational::zero(), b: BigRational::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn add(&self, y: &Scalar) -> Scalar {
        Scalar { a: &self.a + &y.a, b: &self.b + &y.b }
    }

    pub fn sub(&self, y: &Scalar) -> Scalar {
        Scalar { a: &self.a - &y.a, b: &self.b - &y.b }
    }

    pub fn neg(&self) -> Scalar {
        Scalar { a: -&self.a, b: -&self.b }
    }

    /// Multiplication by a rational; needs no field context.
    pub fn scale(&self, q: &BigRational) -> Scalar {
        Scalar { a: &self.a * q, b: &self.b * q }
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rational(&self.a)),
            (true, false) => {
                if self.b.is_one() {
                    write!(f, "√p")
                } else {
                    write!(f, "{}√p", fmt_rational(&self.b))
                }
            }
            (false, false) => {
                let sign = if self.b.is_negative() { "-" } else { "+" };
                let b = self.b.abs();
                if b.is_one() {
                    write!(f, "{}{}√p", fmt_rational(&self.a), sign)
                } else {
                    write!(f, "{}{}{}√p", fmt_rational(&self.a), sign, fmt_rational(&b))
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn difference_of_squares() {
        let f = Field::new(3).unwrap();
        let x = Scalar::new(BigRational::one(), BigRational::one());
        let y = Scalar::new(BigRational::one(), -BigRational::one());
        assert_eq!(f.mul(&x, &y), Scalar::from_int(-2));
    }

    #[test]
    fn inverse_of_sqrt_p() {
        let f = Field::new(5).unwrap();
        let inv = f.inv(&Scalar::sqrt_p()).unwrap();
        assert_eq!(inv, Scalar::new(BigRational::zero(), BigRational::new(1.into(), 5.into())));
    }

    #[test]
    fn additive_identity() {
        let x = Scalar::new(BigRational::from_integer(2.into()), BigRational::one());
        assert_eq!(x.add(&Scalar::from_int(-2)), Scalar::sqrt_p());
    }

    #[test]
    fn inverse_of_zero_fails() {
        let f = Field::new(7).unwrap();
        assert!(matches!(f.inv(&Scalar::zero()), Err(Error::DivisionByZero)));
    }

    #[test]
    fn rejects_composite() {
        assert!(matches!(Field::new(9), Err(Error::NotPrime(9))));
        assert!(Field::new(1).is_err());
    }

    #[test]
    fn weil_numbers_and_valuations() {
        let f = Field::new(3).unwrap();
        assert_eq!(f.weil_number(2, false), Scalar::from_int(3));
        assert_eq!(f.weil_number(1, true), Scalar::sqrt_p().neg());
        assert_eq!(f.weil_number(-1, false), Scalar::new(BigRational::zero(), BigRational::new(1.into(), 3.into())));
        assert_eq!(f.weil_number(-2, false), Scalar::from_ratio(1, 3));
        for m in -5..=5 {
            assert_eq!(f.double_valuation(&f.weil_number(m, m % 2 == 0)), Some(m));
        }
        assert_eq!(f.double_valuation(&Scalar::zero()), None);
    }

    #[test]
    fn display() {
        assert_eq!(Scalar::from_ratio(-3, 4).to_string(), "-3/4");
        assert_eq!(Scalar::new(BigRational::one(), -BigRational::one()).to_string(), "1-√p");
    }
}
