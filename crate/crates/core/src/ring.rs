//! Coefficient rings: prime fields 𝔽_p and the integers.
//!
//! Both rings share one trait so that polynomials, ideals and graded linear
//! algebra are written once. The two rings differ in how a row is cleared
//! during elimination: over 𝔽_p pivots are made monic, over ℤ rows are kept
//! primitive and combined fraction-free.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub trait Ring: Clone + fmt::Debug + PartialEq + Eq + Send + Sync + 'static {
    type Elem: Clone + fmt::Debug + PartialEq + Eq + std::hash::Hash + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    /// Image of an integer.
    fn from_int(&self, n: &BigInt) -> Self::Elem;
    /// Canonical integer representative (residues land in `[0, p)`).
    fn to_int(&self, a: &Self::Elem) -> BigInt;

    /// 0 for ℤ, p for 𝔽_p.
    fn characteristic(&self) -> u64;

    fn describe(&self) -> String;

    /// Coefficients `(s, t)` such that `s * target_lead - t * pivot_lead = 0`.
    fn clearing_factors(
        &self,
        target_lead: &Self::Elem,
        pivot_lead: &Self::Elem,
    ) -> (Self::Elem, Self::Elem);

    /// Rescale a nonzero row (given by its coefficients, leading first) to the
    /// ring's canonical representative of its span.
    fn normalize_row(&self, coeffs: &mut [Self::Elem]);

    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_int(&BigInt::from(n))
    }

    fn pow(&self, a: &Self::Elem, mut n: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            n >>= 1;
        }
        acc
    }
}

/// The prime field 𝔽_p with `p < 2^32`, so products of residues fit a `u64`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p > u32::MAX as u64 {
            return Err(Error::OutOfRange(format!(
                "modulus {p} exceeds the supported word size"
            )));
        }
        if !is_prime(p) {
            return Err(Error::invalid(format!("{p} is not prime")));
        }
        Ok(PrimeField { p })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn reduce(&self, a: u64) -> u64 {
        a % self.p
    }

    #[inline]
    pub fn mul_mod(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        if a % self.p == 0 {
            return None;
        }
        Some(self.pow(&(a % self.p), self.p - 2))
    }
}

impl fmt::Debug for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.p)
    }
}

impl Ring for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1 % self.p
    }

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }

    fn from_int(&self, n: &BigInt) -> u64 {
        n.mod_floor(&BigInt::from(self.p))
            .to_u64()
            .expect("residue fits in u64")
    }

    fn to_int(&self, a: &u64) -> BigInt {
        BigInt::from(*a)
    }

    fn characteristic(&self) -> u64 {
        self.p
    }

    fn describe(&self) -> String {
        format!("GF({})", self.p)
    }

    fn clearing_factors(&self, target_lead: &u64, pivot_lead: &u64) -> (u64, u64) {
        let inv = self.inv(*pivot_lead).expect("pivot is nonzero");
        (1, self.mul(target_lead, &inv))
    }

    fn normalize_row(&self, coeffs: &mut [u64]) {
        if let Some(lead) = coeffs.first().copied() {
            let inv = self.inv(lead).expect("row is nonzero");
            for c in coeffs.iter_mut() {
                *c = self.mul(c, &inv);
            }
        }
    }
}

/// The integers, used for characteristic-zero models.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Integers;

impl Ring for Integers {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }

    fn one(&self) -> BigInt {
        BigInt::one()
    }

    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }

    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }

    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }

    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }

    fn from_int(&self, n: &BigInt) -> BigInt {
        n.clone()
    }

    fn to_int(&self, a: &BigInt) -> BigInt {
        a.clone()
    }

    fn characteristic(&self) -> u64 {
        0
    }

    fn describe(&self) -> String {
        "ZZ".to_string()
    }

    fn clearing_factors(&self, target_lead: &BigInt, pivot_lead: &BigInt) -> (BigInt, BigInt) {
        let g = target_lead.gcd(pivot_lead);
        (pivot_lead / &g, target_lead / &g)
    }

    fn normalize_row(&self, coeffs: &mut [BigInt]) {
        let g = coeffs
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if g.is_zero() {
            return;
        }
        let flip = coeffs.first().is_some_and(|c| c.is_negative());
        for c in coeffs.iter_mut() {
            *c = &*c / &g;
            if flip {
                *c = -&*c;
            }
        }
    }
}

/// Deterministic trial division; moduli are bounded by `u32::MAX`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// All primes in `[lo, hi]`, ascending.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    (lo.max(2)..=hi).filter(|&n| is_prime(n)).collect()
}

/// Content (gcd of a list of integers); zero for an empty or all-zero list.
pub fn content<'a>(values: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::zero(), |acc, c| acc.gcd(c))
        .abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        let small: Vec<u64> = primes_in(0, 30);
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(PrimeField::new(4).is_err());
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(4_294_967_311).is_err());
    }

    #[test]
    fn field_arithmetic() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.add(&5, &4), 2);
        assert_eq!(f.sub(&2, &5), 4);
        assert_eq!(f.neg(&3), 4);
        assert_eq!(f.mul(&3, &5), 1);
        assert_eq!(f.inv(3), Some(5));
        assert_eq!(f.inv(0), None);
        assert_eq!(f.from_i64(-1), 6);
        assert_eq!(f.from_i64(90), 6);
        // Fermat: c^p = c, the reason Frobenius-twisted maps are linear.
        for c in 0..7 {
            assert_eq!(f.pow(&c, 7), c);
        }
    }

    #[test]
    fn integer_rows_are_primitive() {
        let z = Integers;
        let mut row = vec![BigInt::from(-4), BigInt::from(6), BigInt::from(10)];
        z.normalize_row(&mut row);
        assert_eq!(row, vec![BigInt::from(2), BigInt::from(-3), BigInt::from(-5)]);
        let (s, t) = z.clearing_factors(&BigInt::from(6), &BigInt::from(4));
        assert_eq!(&s * BigInt::from(6) - &t * BigInt::from(4), BigInt::zero());
    }
}
