//! Finite fields `F_{p^m} = F_p[x]/(f)` with `f` monic irreducible.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{add_mod, inv_mod_prime, is_prime, mul_mod, pow_u64, prime_factors, sub_mod};
use crate::error::{Error, Result};

/// Conway-style defining polynomials, coefficients low to high.
const BUILTIN: &[(u64, &[u64])] = &[
    (2, &[1, 1]),
    (2, &[1, 1, 1]),
    (2, &[1, 1, 0, 1]),
    (2, &[1, 1, 0, 0, 1]),
    (2, &[1, 0, 1, 0, 0, 1]),
    (2, &[1, 1, 0, 1, 1, 0, 1]),
    (2, &[1, 1, 0, 0, 0, 0, 0, 1]),
    (2, &[1, 0, 1, 1, 1, 0, 0, 0, 1]),
    (3, &[1, 1]),
    (3, &[2, 2, 1]),
    (3, &[1, 2, 0, 1]),
    (3, &[2, 0, 0, 2, 1]),
    (5, &[3, 1]),
    (5, &[2, 4, 1]),
    (5, &[3, 3, 0, 1]),
    (7, &[4, 1]),
    (7, &[3, 6, 1]),
];

/// Field descriptor: characteristic, degree and defining polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldDesc {
    pub p: u64,
    pub m: usize,
    /// Monic defining polynomial, `m + 1` coefficients, low degree first.
    pub modulus: Vec<u64>,
}

impl FieldDesc {
    /// The field `F_{p^m}` with the built-in defining polynomial.
    pub fn new(p: u64, m: usize) -> Result<Arc<Self>> {
        if !is_prime(p) {
            return Err(Error::InvalidParameter(format!("{p} is not prime")));
        }
        if m == 0 {
            return Err(Error::InvalidParameter("extension degree must be >= 1".into()));
        }
        let modulus = BUILTIN
            .iter()
            .find(|(q, f)| *q == p && f.len() == m + 1)
            .map(|(_, f)| f.to_vec())
            .unwrap_or_else(|| first_irreducible(p, m));
        Self::with_modulus(p, modulus)
    }

    /// A field with a caller-supplied defining polynomial (checked for irreducibility).
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<Arc<Self>> {
        if !is_prime(p) {
            return Err(Error::InvalidParameter(format!("{p} is not prime")));
        }
        let modulus: Vec<u64> = modulus.into_iter().map(|c| c % p).collect();
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 {
            return Err(Error::InvalidParameter("defining polynomial must be monic of degree >= 1".into()));
        }
        let m = modulus.len() - 1;
        if !is_irreducible(&modulus, p) {
            return Err(Error::NotIrreducible { p, degree: m });
        }
        Ok(Arc::new(FieldDesc { p, m, modulus }))
    }

    pub fn order(&self) -> u64 {
        pow_u64(self.p, self.m as u32)
    }

    pub fn zero(self: &Arc<Self>) -> FqElem {
        FqElem { field: self.clone(), c: vec![0; self.m] }
    }

    pub fn one(self: &Arc<Self>) -> FqElem {
        self.from_int(1)
    }

    pub fn from_int(self: &Arc<Self>, x: i64) -> FqElem {
        let mut e = self.zero();
        e.c[0] = x.rem_euclid(self.p as i64) as u64;
        e
    }

    pub fn from_coeffs(self: &Arc<Self>, coeffs: &[u64]) -> FqElem {
        let mut e = self.zero();
        for (i, &c) in coeffs.iter().enumerate() {
            if i < self.m {
                e.c[i] = c % self.p;
            } else {
                // reduce higher powers through the modulus
                let mut t = self.zero();
                t.c[0] = c % self.p;
                e = e.add(&t.mul(&self.gen_pow(i as u64)));
            }
        }
        e
    }

    /// The class of `x`, i.e. the root of the defining polynomial.
    pub fn generator(self: &Arc<Self>) -> FqElem {
        if self.m == 1 {
            // x = -f_0 in F_p
            return self.from_int(-(self.modulus[0] as i64));
        }
        let mut e = self.zero();
        e.c[1] = 1;
        e
    }

    fn gen_pow(self: &Arc<Self>, k: u64) -> FqElem {
        self.generator().pow(k)
    }

    /// Element with index `i` in the enumeration `0..p^m` (base-p digits as coefficients).
    pub fn element(self: &Arc<Self>, mut i: u64) -> FqElem {
        let mut e = self.zero();
        for j in 0..self.m {
            e.c[j] = i % self.p;
            i /= self.p;
        }
        e
    }

    pub fn elements(self: &Arc<Self>) -> impl Iterator<Item = FqElem> + '_ {
        (0..self.order()).map(move |i| self.element(i))
    }

    pub fn random<R: Rng + ?Sized>(self: &Arc<Self>, rng: &mut R) -> FqElem {
        let mut e = self.zero();
        for c in e.c.iter_mut() {
            *c = rng.gen_range(0..self.p);
        }
        e
    }
}

/// An element of `F_{p^m}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FqElem {
    pub field: Arc<FieldDesc>,
    /// Coefficients in the power basis, low degree first, each in `0..p`.
    pub c: Vec<u64>,
}

impl fmt::Debug for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fq{:?}", self.c)
    }
}

impl fmt::Display for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.m == 1 {
            write!(f, "{}", self.c[0])
        } else {
            write!(f, "{:?}", self.c)
        }
    }
}

impl FqElem {
    pub fn p(&self) -> u64 {
        self.field.p
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.c[0] == 1 && self.c[1..].iter().all(|&c| c == 0)
    }

    fn same_field(&self, other: &Self) {
        debug_assert!(
            Arc::ptr_eq(&self.field, &other.field) || self.field == other.field,
            "field mismatch"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_field(other);
        let p = self.p();
        let c = self.c.iter().zip(&other.c).map(|(&a, &b)| add_mod(a, b, p)).collect();
        FqElem { field: self.field.clone(), c }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.same_field(other);
        let p = self.p();
        let c = self.c.iter().zip(&other.c).map(|(&a, &b)| sub_mod(a, b, p)).collect();
        FqElem { field: self.field.clone(), c }
    }

    pub fn neg(&self) -> Self {
        let p = self.p();
        let c = self.c.iter().map(|&a| if a == 0 { 0 } else { p - a }).collect();
        FqElem { field: self.field.clone(), c }
    }

    pub fn scale(&self, k: u64) -> Self {
        let p = self.p();
        let c = self.c.iter().map(|&a| mul_mod(a, k % p, p)).collect();
        FqElem { field: self.field.clone(), c }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.same_field(other);
        let p = self.p();
        let m = self.field.m;
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.c.iter().enumerate() {
                prod[i + j] = add_mod(prod[i + j], mul_mod(a, b, p), p);
            }
        }
        reduce_monic(&mut prod, &self.field.modulus, p);
        prod.resize(m, 0);
        FqElem { field: self.field.clone(), c: prod }
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = FqElem { field: self.field.clone(), c: vec![0; self.field.m] };
        acc.c[0] = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.square();
            e >>= 1;
        }
        acc
    }

    /// Absolute Frobenius `a -> a^p`.
    pub fn frobenius(&self) -> Self {
        self.pow(self.p())
    }

    /// Inverse of the absolute Frobenius, `a -> a^{p^{m-1}}`.
    pub fn frobenius_inv(&self) -> Self {
        self.pow(pow_u64(self.p(), self.field.m as u32 - 1))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::NotUnit);
        }
        Ok(self.pow(self.field.order() - 2))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    /// Index of this element in [`FieldDesc::element`] enumeration order.
    pub fn index(&self) -> u64 {
        self.c.iter().rev().fold(0, |acc, &c| acc * self.p() + c)
    }
}

/// Reduce `a` (low first) modulo a monic polynomial in place; result has length < deg(f) meaningful entries.
pub(crate) fn reduce_monic(a: &mut Vec<u64>, f: &[u64], p: u64) {
    let m = f.len() - 1;
    while a.len() > m {
        let lead = a.pop().unwrap();
        if lead == 0 {
            continue;
        }
        let shift = a.len() - m;
        for j in 0..m {
            a[shift + j] = sub_mod(a[shift + j], mul_mod(lead, f[j], p), p);
        }
    }
}

fn trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = add_mod(prod[i + j], mul_mod(x, y, p), p);
        }
    }
    reduce_monic(&mut prod, f, p);
    trim(&mut prod);
    prod
}

/// `x^(p^k) mod f`.
fn x_pow_pk(f: &[u64], p: u64, k: usize) -> Vec<u64> {
    let mut r = vec![0, 1];
    reduce_monic(&mut r, f, p);
    trim(&mut r);
    for _ in 0..k {
        // raise to the p-th power by repeated multiplication
        let base = r.clone();
        let mut acc = vec![1u64];
        let mut e = p;
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = poly_mulmod(&acc, &b, f, p);
            }
            b = poly_mulmod(&b, &b, f, p);
            e >>= 1;
        }
        r = acc;
    }
    r
}

fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    trim(&mut a);
    let db = b.len() - 1;
    let inv_lead = inv_mod_prime(b[db], p);
    while a.len() > db {
        let lead = mul_mod(*a.last().unwrap(), inv_lead, p);
        let shift = a.len() - 1 - db;
        for j in 0..=db {
            a[shift + j] = sub_mod(a[shift + j], mul_mod(lead, b[j], p), p);
        }
        trim(&mut a);
    }
    a
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Rabin's irreducibility test for a monic polynomial over F_p.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let m = f.len() - 1;
    if m == 1 {
        return true;
    }
    let x = vec![0, 1];
    // x^(p^m) == x mod f
    let full = x_pow_pk(f, p, m);
    if full != x {
        return false;
    }
    for q in prime_factors(m as u64) {
        let mut h = x_pow_pk(f, p, m / q as usize);
        h.resize(h.len().max(2), 0);
        h[1] = sub_mod(h[1], 1, p);
        trim(&mut h);
        if h.is_empty() {
            return false;
        }
        let g = poly_gcd(f, &h, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

fn first_irreducible(p: u64, m: usize) -> Vec<u64> {
    let total = pow_u64(p, m as u32);
    for i in 0..total {
        let mut f = Vec::with_capacity(m + 1);
        let mut k = i;
        for _ in 0..m {
            f.push(k % p);
            k /= p;
        }
        f.push(1);
        if f[0] != 0 && is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_table_is_irreducible() {
        for (p, f) in BUILTIN {
            assert!(is_irreducible(f, *p), "p={p} f={f:?}");
        }
    }

    #[test]
    fn reducible_rejected() {
        // x^2 + 1 = (x+1)^2 over F_2
        assert!(matches!(FieldDesc::with_modulus(2, vec![1, 0, 1]), Err(Error::NotIrreducible { .. })));
        assert!(FieldDesc::with_modulus(4, vec![1, 1]).is_err());
    }

    #[test]
    fn multiplicative_group_order() {
        for (p, m) in [(2, 1), (2, 2), (2, 4), (3, 2), (5, 2), (11, 1), (2, 9)] {
            let k = FieldDesc::new(p, m).unwrap();
            let g = k.generator();
            assert!(g.pow(k.order() - 1).is_one());
            for e in k.elements().take(50).filter(|e| !e.is_zero()) {
                assert!(e.mul(&e.inv().unwrap()).is_one());
                assert_eq!(e.frobenius().frobenius_inv(), e);
            }
        }
    }

    #[test]
    fn prime_field_generator_is_a_root() {
        let k = FieldDesc::new(5, 1).unwrap();
        // modulus x + 3 has root 2
        assert_eq!(k.generator(), k.from_int(2));
    }
}
