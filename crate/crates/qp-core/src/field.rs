//! Exact coefficient fields: the rationals and prime fields `F_p`.
//!
//! A [`Field`] is a small context value describing the field; elements are an
//! associated type.  Rational elements are arbitrary-precision fractions in
//! lowest terms, prime-field elements are reduced residues, so equality of
//! elements is always exact.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// A field of coefficients, exact by construction.
pub trait Field: Clone + PartialEq + fmt::Debug {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn from_i64(&self, n: i64) -> Self::Elem;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let bi = self.inv(b).expect("division by zero");
        self.mul(a, &bi)
    }
    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
}

/// The field of rational numbers with arbitrary-precision integers.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
}

/// Convenience constructor for rational elements.
pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// The prime field `F_p`.  Elements are residues in `0..p`.
///
/// Only prime moduli are accepted: polynomial interpolation of counting
/// functions needs finitely many distinct field sizes and primes suffice.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Fp {
    p: u64,
}

impl Fp {
    /// Builds `F_p`, checking primality by trial division (moduli here are
    /// small interpolation primes, never cryptographic sizes).
    pub fn new(p: u64) -> Option<Fp> {
        if !is_prime(p) {
            return None;
        }
        Some(Fp { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn reduce_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }

    /// Reduces a rational `a/b` mod p.  `None` when `p` divides `b`.
    pub fn reduce_rational(&self, x: &BigRational) -> Option<u64> {
        let p = BigInt::from(self.p);
        let den = x.denom().mod_floor_big(&p);
        if den == 0 {
            return None;
        }
        let num = x.numer().mod_floor_big(&p);
        let den_inv = self.inv(&den)?;
        Some(self.mul(&num, &den_inv))
    }

    /// All dim-`k` subspaces of `F_p^n` given by reduced column echelon bases.
    /// The number of results is the Gaussian binomial `[n choose k]_p`.
    pub fn subspace_bases(&self, n: usize, k: usize) -> Vec<crate::matrix::Matrix<Fp>> {
        crate::matrix::enumerate_subspaces(*self, n, k)
    }
}

trait ModFloorBig {
    fn mod_floor_big(&self, m: &BigInt) -> u64;
}

impl ModFloorBig for BigInt {
    fn mod_floor_big(&self, m: &BigInt) -> u64 {
        use num_integer::Integer;
        let r = self.mod_floor(m);
        // r is in [0, m); m fits in u64 here.
        let (_, digits) = r.to_u64_digits();
        if digits.is_empty() {
            0
        } else {
            digits[0]
        }
    }
}

impl Field for Fp {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        // Extended Euclid on signed 128-bit, p is small.
        let (mut r0, mut r1) = (self.p as i128, *a as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1, "modulus must be prime");
        Some(t0.rem_euclid(self.p as i128) as u64)
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn from_i64(&self, n: i64) -> u64 {
        self.reduce_i64(n)
    }
}

fn is_prime(n: u64) -> bool {
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

/// The first `count` primes starting from `from` (inclusive).
pub fn primes_from(from: u64, count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut n = from.max(2);
    while out.len() < count {
        if is_prime(n) {
            out.push(n);
        }
        n += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fp_arithmetic() {
        let f = Fp::new(7).unwrap();
        assert_eq!(f.add(&5, &4), 2);
        assert_eq!(f.mul(&3, &5), 1);
        assert_eq!(f.inv(&3), Some(5));
        assert_eq!(f.inv(&0), None);
        assert_eq!(f.neg(&0), 0);
        assert!(Fp::new(6).is_none());
        assert!(Fp::new(2).is_some());
    }

    #[test]
    fn rational_reduction_mod_p() {
        let f = Fp::new(5).unwrap();
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        // 1/2 = 3 mod 5
        assert_eq!(f.reduce_rational(&half), Some(3));
        let fifth = BigRational::new(BigInt::from(1), BigInt::from(5));
        assert_eq!(f.reduce_rational(&fifth), None);
        let neg = BigRational::new(BigInt::from(-3), BigInt::from(4));
        // -3/4 = 2 * inv(4) = 2*4 = 3 mod 5
        assert_eq!(f.reduce_rational(&neg), Some(3));
    }

    #[test]
    fn prime_listing() {
        assert_eq!(primes_from(2, 5), alloc::vec![2, 3, 5, 7, 11]);
        assert_eq!(primes_from(4, 2), alloc::vec![5, 7]);
    }
}
