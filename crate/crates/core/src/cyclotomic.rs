//! Exact arithmetic in cyclotomic fields.
//!
//! An element of Q(zeta_m) is stored as a rational vector in the power basis
//! 1, z, ..., z^(phi(m)-1) of a fixed primitive m-th root z, reduced modulo the
//! m-th cyclotomic polynomial. The reduced form is unique, so equality at a fixed
//! conductor is coefficient-wise. Operands of different conductors are embedded
//! into the field of the lcm conductor first.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::solve_rational;

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Integer coefficients of the m-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic_poly(m: u64) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&m) {
        return p.clone();
    }
    assert!(m >= 1, "conductor must be positive");
    let mut p: Vec<i128> = vec![0; m as usize + 1];
    p[0] = -1;
    p[m as usize] = 1;
    for d in 1..m {
        if m % d == 0 {
            let q = cyclotomic_poly(d);
            p = div_monic(&p, &q);
        }
    }
    let p = Arc::new(p.into_iter().map(|c| c as i64).collect::<Vec<_>>());
    cache.lock().unwrap().insert(m, p.clone());
    p
}

fn div_monic(p: &[i128], q: &[i64]) -> Vec<i128> {
    let dq = q.len() - 1;
    let mut r = p.to_vec();
    let mut out = vec![0i128; p.len() - dq];
    for i in (dq..p.len()).rev() {
        let c = r[i];
        out[i - dq] = c;
        if c != 0 {
            for (j, &qj) in q.iter().enumerate() {
                r[i - dq + j] -= c * qj as i128;
            }
        }
    }
    debug_assert!(r.iter().all(|&c| c == 0));
    out
}

pub fn euler_phi(m: u64) -> u64 {
    cyclotomic_poly(m).len() as u64 - 1
}

/// An element of Q(zeta_m) in canonical reduced form.
#[derive(Clone, Debug)]
pub struct CycloNumber {
    conductor: u64,
    coeffs: Vec<Rational>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

fn reduce(mut p: Vec<Rational>, m: u64) -> Vec<Rational> {
    let phi = cyclotomic_poly(m);
    let d = phi.len() - 1;
    if p.len() > d {
        for i in (d..p.len()).rev() {
            if p[i].is_zero() {
                continue;
            }
            let c = std::mem::replace(&mut p[i], Rational::zero());
            for (j, &pj) in phi.iter().enumerate().take(d) {
                if pj != 0 {
                    p[i - d + j] -= &c * Rational::from_integer(BigInt::from(pj));
                }
            }
        }
    }
    p.resize(d, Rational::zero());
    p
}

impl CycloNumber {
    /// Builds an element from a polynomial in z (any length), reducing it.
    pub fn from_poly(conductor: u64, poly: Vec<Rational>) -> Self {
        assert!(conductor >= 1, "conductor must be positive");
        CycloNumber { conductor, coeffs: reduce(poly, conductor) }
    }

    pub fn from_rational(q: Rational) -> Self {
        CycloNumber { conductor: 1, coeffs: vec![q] }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.to_rational().is_some_and(|q| q.is_one())
    }

    /// The rational value, if the element is rational.
    pub fn to_rational(&self) -> Option<Rational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Re-expresses the element at a conductor divisible by the current one.
    pub fn embed(&self, m: u64) -> Self {
        assert!(m % self.conductor == 0, "conductor {} does not divide {}", self.conductor, m);
        if m == self.conductor {
            return self.clone();
        }
        let k = (m / self.conductor) as usize;
        let mut p = vec![Rational::zero(); (self.coeffs.len() - 1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            p[i * k] = c.clone();
        }
        Self::from_poly(m, p)
    }

    fn common(&self, other: &Self) -> (Self, Self) {
        let m = self.conductor.lcm(&other.conductor);
        (self.embed(m), other.embed(m))
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.conductor == other.conductor {
            let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
            return CycloNumber { conductor: self.conductor, coeffs };
        }
        let (a, b) = self.common(other);
        a.add(&b)
    }

    pub fn neg(&self) -> Self {
        CycloNumber { conductor: self.conductor, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.conductor != other.conductor {
            let (a, b) = self.common(other);
            return a.mul(&b);
        }
        if let Some(q) = other.to_rational() {
            return self.scale(&q);
        }
        if let Some(q) = self.to_rational() {
            return other.scale(&q);
        }
        let n = self.coeffs.len();
        let mut p = vec![Rational::zero(); 2 * n - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    p[i + j] += a * b;
                }
            }
        }
        Self::from_poly(self.conductor, p)
    }

    pub fn scale(&self, q: &Rational) -> Self {
        CycloNumber { conductor: self.conductor, coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(q) = self.to_rational() {
            return Ok(Self::from_rational(q.recip()).embed(self.conductor));
        }
        // columns are self * z^j; solve for the combination giving 1
        let d = self.coeffs.len();
        let cols: Vec<Vec<Rational>> = (0..d)
            .map(|j| {
                let mut p = vec![Rational::zero(); j];
                p.extend(self.coeffs.iter().cloned());
                reduce(p, self.conductor)
            })
            .collect();
        let rows: Vec<Vec<Rational>> = (0..d).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
        let mut b = vec![Rational::zero(); d];
        b[0] = Rational::one();
        let x = solve_rational(&rows, &b).ok_or(Error::DivisionByZero)?;
        Ok(CycloNumber { conductor: self.conductor, coeffs: x })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Self::one().embed(self.conductor);
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        Ok(acc)
    }

    /// Image under the Galois automorphism z -> z^j (j coprime to the conductor).
    pub fn galois(&self, j: i64) -> Self {
        let m = self.conductor as i64;
        let mut p = vec![Rational::zero(); self.conductor as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            let idx = (k as i64 * j).rem_euclid(m) as usize;
            p[idx] += c;
        }
        Self::from_poly(self.conductor, p)
    }

    /// Complex conjugate.
    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    /// Multiplicative order if the element is a root of unity of order dividing `bound`.
    pub fn root_order(&self, bound: u64) -> Option<u64> {
        let one = Self::one();
        let mut x = self.clone();
        for k in 1..=bound {
            if x == one {
                return Some(k);
            }
            x = x.mul(self);
        }
        None
    }

    /// Stable hash key; only meaningful between elements of equal conductor.
    pub fn key(&self) -> (u64, Vec<Rational>) {
        (self.conductor, self.coeffs.clone())
    }
}

/// zeta_m^k in canonical form.
pub fn root_of_unity(m: u64, k: i64) -> CycloNumber {
    let k = k.rem_euclid(m as i64) as usize;
    let mut p = vec![Rational::zero(); k + 1];
    p[k] = Rational::one();
    CycloNumber::from_poly(m, p)
}

pub fn arith(a: &CycloNumber, b: &CycloNumber, op: ArithOp) -> Result<CycloNumber> {
    Ok(match op {
        ArithOp::Add => a.add(b),
        ArithOp::Sub => a.sub(b),
        ArithOp::Mul => a.mul(b),
        ArithOp::Div => a.div(b)?,
    })
}

/// The same element at the smallest conductor containing it. Conductors are
/// never 2 mod 4 after minimization; rationals land at conductor 1.
pub fn minimize_conductor(a: &CycloNumber) -> CycloNumber {
    if let Some(q) = a.to_rational() {
        return CycloNumber::from_rational(q);
    }
    let m = a.conductor;
    for d in 3..m {
        if m % d != 0 || d % 4 == 2 {
            continue;
        }
        let phi_d = euler_phi(d) as usize;
        let basis: Vec<Vec<Rational>> = (0..phi_d)
            .map(|k| root_of_unity(m, (k as u64 * (m / d)) as i64).coeffs)
            .collect();
        let rows: Vec<Vec<Rational>> =
            (0..a.coeffs.len()).map(|i| basis.iter().map(|b| b[i].clone()).collect()).collect();
        if let Some(x) = solve_rational(&rows, &a.coeffs) {
            return CycloNumber { conductor: d, coeffs: x };
        }
    }
    a.clone()
}

impl PartialEq for CycloNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = self.common(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for CycloNumber {}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&CycloNumber> for &CycloNumber {
            type Output = CycloNumber;
            fn $m(self, rhs: &CycloNumber) -> CycloNumber {
                CycloNumber::$m(self, rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for &CycloNumber {
    type Output = CycloNumber;
    fn neg(self) -> CycloNumber {
        CycloNumber::neg(self)
    }
}

impl From<i64> for CycloNumber {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

/// GAP-style notation: `E(m)^k` for zeta_m^k.
impl fmt::Display for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = minimize_conductor(self);
        if let Some(q) = a.to_rational() {
            return write!(f, "{q}");
        }
        let mut first = true;
        for (k, c) in a.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let unit = abs.is_one();
            match k {
                0 => write!(f, "{abs}")?,
                _ => {
                    if !unit {
                        write!(f, "{abs}*")?;
                    }
                    write!(f, "E({})", a.conductor)?;
                    if k > 1 {
                        write!(f, "^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(*cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(euler_phi(60), 16);
    }

    #[test]
    fn roots_of_unity() {
        assert!(root_of_unity(1, 0).is_one());
        assert_eq!(root_of_unity(4, 2), CycloNumber::from_int(-1));
        let z = root_of_unity(3, 1);
        assert!((&(&CycloNumber::one() + &z) + &z.mul(&z)).is_zero());
        for m in 1..=24u64 {
            for k in 0..m as i64 {
                let z = root_of_unity(m, k);
                assert!(z.pow(m as i64).unwrap().is_one());
                let ord = m / (k as u64).gcd(&m);
                assert_eq!(z.root_order(m), Some(ord));
            }
        }
    }

    #[test]
    fn arith_examples() {
        let a = &root_of_unity(6, 1) * &root_of_unity(6, 5);
        assert!(a.is_one());
        assert_eq!(&root_of_unity(8, 1) + &CycloNumber::zero(), root_of_unity(8, 1));
        let s = (0..5).fold(CycloNumber::zero(), |acc, k| &acc + &root_of_unity(5, k));
        assert!(s.is_zero());
        assert_eq!(arith(&CycloNumber::one(), &CycloNumber::zero(), ArithOp::Div), Err(Error::DivisionByZero));
    }

    #[test]
    fn minimize_examples() {
        let a = root_of_unity(6, 2);
        let m = minimize_conductor(&a);
        assert_eq!(m.conductor(), 3);
        assert_eq!(m.coeffs(), root_of_unity(3, 1).coeffs());
        let b = minimize_conductor(&root_of_unity(8, 4));
        assert_eq!(b.conductor(), 1);
        assert_eq!(b, CycloNumber::from_int(-1));
        let c = minimize_conductor(&root_of_unity(5, 1));
        assert_eq!(c.conductor(), 5);
        assert_eq!(minimize_conductor(&root_of_unity(6, 1)).conductor(), 3);
        assert_eq!(minimize_conductor(&root_of_unity(10, 1)).conductor(), 5);
        // i = zeta_12^3 lives at conductor 4
        assert_eq!(minimize_conductor(&root_of_unity(12, 3)).conductor(), 4);
        // sqrt(2) = z8 + z8^7 lives at conductor 8
        let r2 = &root_of_unity(8, 1) + &root_of_unity(8, 7);
        assert_eq!(minimize_conductor(&r2.embed(24)).conductor(), 8);
    }

    #[test]
    fn display() {
        assert_eq!(CycloNumber::from_int(-3).to_string(), "-3");
        assert_eq!(root_of_unity(8, 3).to_string(), "E(8)^3");
        let h = &root_of_unity(4, 1).scale(&rat(1, 2)) + &CycloNumber::from_rational(rat(1, 2));
        assert_eq!(h.to_string(), "1/2 + 1/2*E(4)");
    }
}
