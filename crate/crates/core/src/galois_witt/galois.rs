//! Galois rings `W_n(F_{p^m}) = Z/p^n[x]/(h)`.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::field::{FieldDesc, FqElem};
use crate::arith::{add_mod, mul_mod, pow_u64, sub_mod, val_mod};
use crate::error::{Error, Result};

/// Descriptor for `W_n(F_{p^m})`. `h` is the defining polynomial of the residue field
/// read as a monic polynomial over `Z/p^n`.
#[derive(Debug, Clone)]
pub struct RingDesc {
    pub field: Arc<FieldDesc>,
    pub n: u32,
    /// `p^n`
    pub modulus: u64,
    pub h: Vec<u64>,
    /// Coefficients of `σ(x)`, the root of `h` congruent to `x^p`.
    sigma_x: Vec<u64>,
}

impl PartialEq for RingDesc {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.field == other.field
    }
}
impl Eq for RingDesc {}

#[derive(Serialize, Deserialize)]
struct RingJson {
    p: u64,
    m: usize,
    n: u32,
    h: Vec<u64>,
}

impl Serialize for RingDesc {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RingJson { p: self.field.p, m: self.field.m, n: self.n, h: self.h.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RingDesc {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = RingJson::deserialize(d)?;
        let field = FieldDesc::with_modulus(j.p, j.h).map_err(serde::de::Error::custom)?;
        if field.m != j.m {
            return Err(serde::de::Error::custom("degree does not match h"));
        }
        let r = RingDesc::new(field, j.n).map_err(serde::de::Error::custom)?;
        Ok(Arc::try_unwrap(r).unwrap_or_else(|a| (*a).clone()))
    }
}

impl RingDesc {
    pub fn new(field: Arc<FieldDesc>, n: u32) -> Result<Arc<Self>> {
        if n == 0 {
            return Err(Error::InvalidParameter("precision must be >= 1".into()));
        }
        let p = field.p;
        if (n as f64) * (p as f64).log2() >= 62.0 {
            return Err(Error::InvalidParameter(format!("p^n = {p}^{n} exceeds 2^62")));
        }
        let modulus = pow_u64(p, n);
        let h = field.modulus.clone();
        let m = field.m;
        let mut ring = RingDesc { field, n, modulus, h, sigma_x: vec![0; m] };
        ring.sigma_x = ring.hensel_sigma_x();
        Ok(Arc::new(ring))
    }

    /// Shortcut for the built-in field `F_{p^m}` at precision `n`.
    pub fn standard(p: u64, m: usize, n: u32) -> Result<Arc<Self>> {
        Self::new(FieldDesc::new(p, m)?, n)
    }

    pub fn p(&self) -> u64 {
        self.field.p
    }

    pub fn m(&self) -> usize {
        self.field.m
    }

    /// Same residue field, different precision.
    pub fn at_precision(&self, n: u32) -> Result<Arc<Self>> {
        RingDesc::new(self.field.clone(), n)
    }

    fn hensel_sigma_x(&self) -> Vec<u64> {
        let m = self.m();
        let tmp = Arc::new(RingDesc {
            field: self.field.clone(),
            n: self.n,
            modulus: self.modulus,
            h: self.h.clone(),
            sigma_x: vec![0; m],
        });
        let x = tmp.x();
        // Newton iteration y <- y - h(y)/h'(y) starting at x^p
        let mut y = x.pow(self.p());
        let dh: Vec<u64> = (1..self.h.len())
            .map(|i| mul_mod(self.h[i], i as u64, self.modulus))
            .collect();
        for _ in 0..=self.n {
            let hy = eval_poly(&tmp, &self.h, &y);
            if hy.is_zero() {
                break;
            }
            let dhy = eval_poly(&tmp, &dh, &y);
            let inv = dhy.inv().expect("separable residue polynomial");
            y = y.sub(&hy.mul(&inv));
        }
        y.c
    }

    pub fn zero(self: &Arc<Self>) -> GaloisRingElem {
        GaloisRingElem { ring: self.clone(), c: vec![0; self.m()] }
    }

    pub fn one(self: &Arc<Self>) -> GaloisRingElem {
        self.from_int(1)
    }

    pub fn from_int(self: &Arc<Self>, k: i64) -> GaloisRingElem {
        let mut e = self.zero();
        e.c[0] = (k as i128).rem_euclid(self.modulus as i128) as u64;
        e
    }

    pub fn from_coeffs(self: &Arc<Self>, coeffs: &[i64]) -> GaloisRingElem {
        let mut e = self.zero();
        for (i, &k) in coeffs.iter().enumerate().take(self.m()) {
            e.c[i] = (k as i128).rem_euclid(self.modulus as i128) as u64;
        }
        e
    }

    /// `p^k` (zero if `k >= n`).
    pub fn p_pow(self: &Arc<Self>, k: u32) -> GaloisRingElem {
        if k >= self.n {
            self.zero()
        } else {
            self.from_int(pow_u64(self.p(), k) as i64)
        }
    }

    /// The class of `x`.
    pub fn x(self: &Arc<Self>) -> GaloisRingElem {
        let mut e = self.zero();
        if self.m() == 1 {
            e.c[0] = sub_mod(0, self.h[0] % self.modulus, self.modulus);
        } else {
            e.c[1] = 1;
        }
        e
    }

    /// Naive coefficientwise lift of a residue-field element.
    pub fn lift(self: &Arc<Self>, a: &FqElem) -> GaloisRingElem {
        GaloisRingElem { ring: self.clone(), c: a.c.clone() }
    }

    pub fn random<R: Rng + ?Sized>(self: &Arc<Self>, rng: &mut R) -> GaloisRingElem {
        let c = (0..self.m()).map(|_| rng.gen_range(0..self.modulus)).collect();
        GaloisRingElem { ring: self.clone(), c }
    }

    pub fn random_unit<R: Rng + ?Sized>(self: &Arc<Self>, rng: &mut R) -> GaloisRingElem {
        loop {
            let e = self.random(rng);
            if e.is_unit() {
                return e;
            }
        }
    }
}

fn eval_poly(ring: &Arc<RingDesc>, coeffs: &[u64], y: &GaloisRingElem) -> GaloisRingElem {
    let mut acc = ring.zero();
    for &c in coeffs.iter().rev() {
        acc = acc.mul(y);
        acc.c[0] = add_mod(acc.c[0], c % ring.modulus, ring.modulus);
    }
    acc
}

/// An element of `W_n(F_{p^m})`, stored in the power basis of `x`.
#[derive(Clone)]
pub struct GaloisRingElem {
    pub ring: Arc<RingDesc>,
    pub c: Vec<u64>,
}

impl PartialEq for GaloisRingElem {
    fn eq(&self, other: &Self) -> bool {
        self.c == other.c && (Arc::ptr_eq(&self.ring, &other.ring) || *self.ring == *other.ring)
    }
}
impl Eq for GaloisRingElem {}

impl std::hash::Hash for GaloisRingElem {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.c.hash(state);
    }
}

impl fmt::Debug for GaloisRingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "W{:?}", self.c)
    }
}

impl fmt::Display for GaloisRingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.len() == 1 {
            write!(f, "{}", self.c[0])
        } else {
            write!(f, "{:?}", self.c)
        }
    }
}

impl Serialize for GaloisRingElem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.c.serialize(s)
    }
}

impl GaloisRingElem {
    pub fn p(&self) -> u64 {
        self.ring.p()
    }

    pub fn precision(&self) -> u32 {
        self.ring.n
    }

    fn check(&self, other: &Self) {
        debug_assert!(
            Arc::ptr_eq(&self.ring, &other.ring) || *self.ring == *other.ring,
            "ring mismatch: n={} vs n={}",
            self.ring.n,
            other.ring.n
        );
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }

    pub fn is_one(&self) -> bool {
        self.c[0] == 1 && self.c[1..].iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        let q = self.ring.modulus;
        let c = self.c.iter().zip(&other.c).map(|(&a, &b)| add_mod(a, b, q)).collect();
        GaloisRingElem { ring: self.ring.clone(), c }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check(other);
        let q = self.ring.modulus;
        let c = self.c.iter().zip(&other.c).map(|(&a, &b)| sub_mod(a, b, q)).collect();
        GaloisRingElem { ring: self.ring.clone(), c }
    }

    pub fn neg(&self) -> Self {
        let q = self.ring.modulus;
        let c = self.c.iter().map(|&a| sub_mod(0, a, q)).collect();
        GaloisRingElem { ring: self.ring.clone(), c }
    }

    /// Multiply by an ordinary integer.
    pub fn scale(&self, k: i64) -> Self {
        let q = self.ring.modulus;
        let k = (k as i128).rem_euclid(q as i128) as u64;
        let c = self.c.iter().map(|&a| mul_mod(a, k, q)).collect();
        GaloisRingElem { ring: self.ring.clone(), c }
    }

    /// Multiply by `p^k`.
    pub fn mul_p_pow(&self, k: u32) -> Self {
        if k >= self.ring.n {
            return self.ring.zero();
        }
        self.scale(pow_u64(self.p(), k) as i64)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        let q = self.ring.modulus;
        let m = self.c.len();
        if m == 1 {
            return GaloisRingElem { ring: self.ring.clone(), c: vec![mul_mod(self.c[0], other.c[0], q)] };
        }
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.c.iter().enumerate() {
                prod[i + j] = add_mod(prod[i + j], mul_mod(a, b, q), q);
            }
        }
        let h = &self.ring.h;
        for top in (m..prod.len()).rev() {
            let lead = prod[top];
            if lead == 0 {
                continue;
            }
            let shift = top - m;
            for j in 0..m {
                prod[shift + j] = sub_mod(prod[shift + j], mul_mod(lead, h[j], q), q);
            }
        }
        prod.truncate(m);
        GaloisRingElem { ring: self.ring.clone(), c: prod }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.ring.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// p-adic valuation; `n` for zero.
    pub fn valuation(&self) -> u32 {
        self.c.iter().map(|&a| val_mod(a, self.p(), self.ring.n)).min().unwrap_or(self.ring.n)
    }

    pub fn is_unit(&self) -> bool {
        self.c.iter().any(|&a| a % self.p() != 0)
    }

    pub fn reduce(&self) -> FqElem {
        let p = self.p();
        FqElem { field: self.ring.field.clone(), c: self.c.iter().map(|&a| a % p).collect() }
    }

    pub fn inv(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::NotUnit);
        }
        let mut y = self.ring.lift(&self.reduce().inv()?);
        let two = self.ring.from_int(2);
        let mut prec = 1;
        while prec < self.ring.n {
            y = y.mul(&two.sub(&self.mul(&y)));
            prec *= 2;
        }
        Ok(y)
    }

    /// Exact division by `p^k`, returning an element at precision `n - k`.
    pub fn div_p_pow(&self, k: u32) -> Result<Self> {
        if k == 0 {
            return Ok(self.clone());
        }
        let v = self.valuation();
        if v < k {
            return Err(Error::NotDivisible { needed: k, valuation: v });
        }
        if k >= self.ring.n {
            return Err(Error::InsufficientPrecision(format!(
                "dividing by p^{k} at precision {}",
                self.ring.n
            )));
        }
        let ring = self.ring.at_precision(self.ring.n - k)?;
        let d = pow_u64(self.p(), k);
        let c = self.c.iter().map(|&a| (a / d) % ring.modulus).collect();
        Ok(GaloisRingElem { ring, c })
    }

    /// Reduce to (or lift by representatives into) another precision.
    pub fn to_ring(&self, ring: &Arc<RingDesc>) -> Self {
        debug_assert_eq!(ring.field, self.ring.field);
        let q = ring.modulus;
        GaloisRingElem { ring: ring.clone(), c: self.c.iter().map(|&a| a % q).collect() }
    }

    /// Frobenius lift, determined by `x -> σ(x)`.
    pub fn sigma(&self) -> Self {
        if self.c.len() == 1 {
            return self.clone();
        }
        let sx = GaloisRingElem { ring: self.ring.clone(), c: self.ring.sigma_x.clone() };
        eval_poly(&self.ring, &self.c, &sx)
    }

    /// `σ^k` for any integer `k` (negative allowed).
    pub fn sigma_pow(&self, k: i64) -> Self {
        let m = self.ring.m() as i64;
        let k = k.rem_euclid(m);
        let mut r = self.clone();
        for _ in 0..k {
            r = r.sigma();
        }
        r
    }

    pub fn sigma_inv(&self) -> Self {
        self.sigma_pow(-1)
    }
}

/// Teichmüller lift of `a` into `W_n(F_{p^m})`.
pub fn teichmuller(ring: &Arc<RingDesc>, a: &FqElem) -> GaloisRingElem {
    let q = ring.field.order();
    let mut g = ring.lift(a);
    for _ in 1..ring.n {
        g = g.pow(q);
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sigma_is_frobenius_lift() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (p, m, n) in [(2, 2, 5), (2, 3, 4), (3, 2, 3), (5, 2, 3)] {
            let r = RingDesc::standard(p, m, n).unwrap();
            let hx = eval_poly(&r, &r.h, &GaloisRingElem { ring: r.clone(), c: r.sigma_x.clone() });
            assert!(hx.is_zero());
            for _ in 0..20 {
                let a = r.random(&mut rng);
                let b = r.random(&mut rng);
                assert_eq!(a.sigma().reduce(), a.reduce().frobenius());
                assert_eq!(a.mul(&b).sigma(), a.sigma().mul(&b.sigma()));
                assert_eq!(a.sigma_pow(m as i64), a);
                assert_eq!(a.sigma().sigma_inv(), a);
            }
        }
    }

    #[test]
    fn cube_root_of_unity_in_w3_f4() {
        let r = RingDesc::standard(2, 2, 3).unwrap();
        let g = r.field.generator();
        let t = teichmuller(&r, &g);
        assert_eq!(t.reduce(), g);
        assert!(t.pow(3).is_one());
        assert!(!t.is_one());
    }

    #[test]
    fn inverse_and_division() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let r = RingDesc::standard(3, 2, 4).unwrap();
        for _ in 0..30 {
            let u = r.random_unit(&mut rng);
            assert!(u.mul(&u.inv().unwrap()).is_one());
            let a = u.mul_p_pow(2);
            assert_eq!(a.valuation(), 2);
            let q = a.div_p_pow(2).unwrap();
            assert_eq!(q.precision(), 2);
            assert_eq!(q, u.to_ring(&q.ring));
        }
        assert!(r.p_pow(1).inv().is_err());
    }
}
