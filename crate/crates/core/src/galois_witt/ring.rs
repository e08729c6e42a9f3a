//! A minimal commutative-ring interface used to evaluate universal Witt polynomials.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::field::FqElem;
use super::galois::GaloisRingElem;

/// Constructors take `&self` so that ring parameters travel with the values.
pub trait CommRing: Clone + PartialEq + Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_bigint_like(&self, k: &BigInt) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn is_zero(&self) -> bool;
    /// `Some(p)` when the ring is an `F_p`-algebra.
    fn char_p(&self) -> Option<u64>;

    fn neg(&self) -> Self {
        self.zero_like().sub(self)
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

impl CommRing for BigInt {
    fn zero_like(&self) -> Self {
        BigInt::zero()
    }
    fn one_like(&self) -> Self {
        BigInt::one()
    }
    fn from_bigint_like(&self, k: &BigInt) -> Self {
        k.clone()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn char_p(&self) -> Option<u64> {
        None
    }
}

fn bigint_mod(k: &BigInt, q: u64) -> u64 {
    let r = k % BigInt::from(q);
    let r = if r.is_negative() { r + BigInt::from(q) } else { r };
    r.to_u64().unwrap()
}

impl CommRing for FqElem {
    fn zero_like(&self) -> Self {
        self.field.zero()
    }
    fn one_like(&self) -> Self {
        self.field.one()
    }
    fn from_bigint_like(&self, k: &BigInt) -> Self {
        self.field.from_int(bigint_mod(k, self.p()) as i64)
    }
    fn add(&self, other: &Self) -> Self {
        FqElem::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        FqElem::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        FqElem::mul(self, other)
    }
    fn is_zero(&self) -> bool {
        FqElem::is_zero(self)
    }
    fn char_p(&self) -> Option<u64> {
        Some(self.p())
    }
}

impl CommRing for GaloisRingElem {
    fn zero_like(&self) -> Self {
        self.ring.zero()
    }
    fn one_like(&self) -> Self {
        self.ring.one()
    }
    fn from_bigint_like(&self, k: &BigInt) -> Self {
        let mut e = self.ring.zero();
        e.c[0] = bigint_mod(k, self.ring.modulus);
        e
    }
    fn add(&self, other: &Self) -> Self {
        GaloisRingElem::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        GaloisRingElem::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        GaloisRingElem::mul(self, other)
    }
    fn is_zero(&self) -> bool {
        GaloisRingElem::is_zero(self)
    }
    fn char_p(&self) -> Option<u64> {
        (self.ring.n == 1).then_some(self.p())
    }
}
