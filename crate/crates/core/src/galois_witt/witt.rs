//! Generic p-typical Witt vectors of finite length over any [`CommRing`].

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::galois::{teichmuller, GaloisRingElem};
use super::field::FqElem;
use super::ring::CommRing;
use crate::error::{Error, Result};

/// Multivariate polynomial over Z, exponent vectors as keys.
#[derive(Debug, Clone, PartialEq)]
struct ZPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl ZPoly {
    fn zero(nvars: usize) -> Self {
        ZPoly { nvars, terms: BTreeMap::new() }
    }

    fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut t = BTreeMap::new();
        t.insert(e, BigInt::one());
        ZPoly { nvars, terms: t }
    }

    fn constant(nvars: usize, c: BigInt) -> Self {
        let mut p = Self::zero(nvars);
        if !Zero::is_zero(&c) {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigInt) {
        let entry = self.terms.entry(e).or_insert_with(BigInt::zero);
        *entry += c;
        if Zero::is_zero(entry) {
            self.terms.retain(|_, v| !Zero::is_zero(v));
        }
    }

    fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), c.clone());
        }
        r
    }

    fn scale(&self, k: &BigInt) -> Self {
        let mut r = Self::zero(self.nvars);
        if Zero::is_zero(k) {
            return r;
        }
        for (e, c) in &self.terms {
            r.terms.insert(e.clone(), c * k);
        }
        r
    }

    fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&BigInt::from(-1)))
    }

    fn mul(&self, o: &Self) -> Self {
        let mut acc: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                *acc.entry(e).or_insert_with(BigInt::zero) += c1 * c2;
            }
        }
        acc.retain(|_, v| !Zero::is_zero(v));
        ZPoly { nvars: self.nvars, terms: acc }
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::constant(self.nvars, BigInt::one());
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

    fn div_exact(&self, d: &BigInt) -> Self {
        let mut r = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let (q, rem) = c.div_rem(d);
            assert!(Zero::is_zero(&rem), "universal Witt polynomial not integral");
            r.terms.insert(e.clone(), q);
        }
        r
    }

    fn max_degrees(&self) -> Vec<u32> {
        let mut m = vec![0; self.nvars];
        for e in self.terms.keys() {
            for (a, &b) in m.iter_mut().zip(e) {
                *a = (*a).max(b);
            }
        }
        m
    }

    /// Evaluate at `vals`, using precomputed power tables.
    fn eval<R: CommRing>(&self, powers: &[Vec<R>], sample: &R) -> R {
        let mut acc = sample.zero_like();
        for (e, c) in &self.terms {
            let mut t = sample.from_bigint_like(c);
            if t.is_zero() {
                continue;
            }
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = t.mul(&powers[i][k as usize]);
                    if t.is_zero() {
                        break;
                    }
                }
            }
            acc = acc.add(&t);
        }
        acc
    }
}

fn ipow(p: u64, k: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), k as usize)
}

/// Ghost polynomial `w_k` in variables `offset..offset + k + 1`.
fn ghost_poly(p: u64, k: usize, nvars: usize, offset: usize) -> ZPoly {
    let mut w = ZPoly::zero(nvars);
    for j in 0..=k {
        let coeff = ipow(p, j as u32);
        let term = ZPoly::var(nvars, offset + j).pow(p.pow((k - j) as u32));
        w = w.add(&term.scale(&coeff));
    }
    w
}

/// Solve `w_k(S) = target_k` recursively for the universal polynomials `S_k`.
fn solve_ghost(p: u64, targets: &[ZPoly]) -> Vec<ZPoly> {
    let mut out: Vec<ZPoly> = Vec::with_capacity(targets.len());
    for (k, t) in targets.iter().enumerate() {
        let mut r = t.clone();
        for (j, s) in out.iter().enumerate() {
            let coeff = ipow(p, j as u32);
            r = r.sub(&s.pow(p.pow((k - j) as u32)).scale(&coeff));
        }
        out.push(r.div_exact(&ipow(p, k as u32)));
    }
    out
}

/// A length-`n` Witt vector over the ring of `R`.
#[derive(Debug, Clone, PartialEq)]
pub struct WittVector<R> {
    pub comps: Vec<R>,
}

impl<R: CommRing> WittVector<R> {
    pub fn new(comps: Vec<R>) -> Self {
        WittVector { comps }
    }

    pub fn len(&self) -> usize {
        self.comps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    pub fn zero_like(&self) -> Self {
        WittVector { comps: self.comps.iter().map(|c| c.zero_like()).collect() }
    }

    pub fn one_like(&self) -> Self {
        let mut z = self.zero_like();
        if let Some(c) = z.comps.first_mut() {
            *c = c.one_like();
        }
        z
    }

    /// Teichmüller representative `[t]` of length `n`.
    pub fn teichmuller(t: &R, n: usize) -> Self {
        let mut comps = vec![t.zero_like(); n];
        if n > 0 {
            comps[0] = t.clone();
        }
        WittVector { comps }
    }

    /// Ghost components `w_i = Σ_{j≤i} p^j a_j^{p^{i-j}}`.
    pub fn ghost(&self, p: u64) -> Vec<R> {
        let Some(first) = self.comps.first() else { return Vec::new() };
        (0..self.len())
            .map(|i| {
                let mut w = first.zero_like();
                for j in 0..=i {
                    let pj = first.from_bigint_like(&ipow(p, j as u32));
                    w = w.add(&pj.mul(&self.comps[j].pow(p.pow((i - j) as u32))));
                }
                w
            })
            .collect()
    }

    /// Verschiebung at fixed length: `(0, a_0, ..., a_{n-2})`.
    pub fn verschiebung(&self) -> Self {
        let mut comps = Vec::with_capacity(self.len());
        if let Some(first) = self.comps.first() {
            comps.push(first.zero_like());
            comps.extend(self.comps[..self.len() - 1].iter().cloned());
        }
        WittVector { comps }
    }

    /// Verschiebung `W_n -> W_{n+1}`.
    pub fn verschiebung_extend(&self) -> Self {
        let mut comps = Vec::with_capacity(self.len() + 1);
        if let Some(first) = self.comps.first() {
            comps.push(first.zero_like());
        }
        comps.extend(self.comps.iter().cloned());
        WittVector { comps }
    }

    pub fn truncate(&self, n: usize) -> Self {
        WittVector { comps: self.comps[..n.min(self.len())].to_vec() }
    }
}

/// Universal addition, multiplication, negation and Frobenius polynomials for a fixed `(p, n)`.
#[derive(Debug, Clone)]
pub struct WittArith {
    pub p: u64,
    pub n: usize,
    add: Vec<ZPoly>,
    mul: Vec<ZPoly>,
    neg: Vec<ZPoly>,
    frob: Vec<ZPoly>,
}

impl WittArith {
    pub fn new(p: u64, n: usize) -> Arc<Self> {
        let nv = 2 * n;
        let gx: Vec<ZPoly> = (0..n).map(|k| ghost_poly(p, k, nv, 0)).collect();
        let gy: Vec<ZPoly> = (0..n).map(|k| ghost_poly(p, k, nv, n)).collect();
        let add = solve_ghost(p, &gx.iter().zip(&gy).map(|(a, b)| a.add(b)).collect::<Vec<_>>());
        let mul = solve_ghost(p, &gx.iter().zip(&gy).map(|(a, b)| a.mul(b)).collect::<Vec<_>>());
        let neg = solve_ghost(p, &gx.iter().map(|a| a.scale(&BigInt::from(-1))).collect::<Vec<_>>());
        // F: ghost_k(F a) = ghost_{k+1}(a); only defined up to length n - 1
        let gx_long: Vec<ZPoly> = (1..n).map(|k| ghost_poly(p, k, nv, 0)).collect();
        let frob = solve_ghost(p, &gx_long);
        Arc::new(WittArith { p, n, add, mul, neg, frob })
    }

    fn check_pair<R: CommRing>(&self, a: &WittVector<R>, b: &WittVector<R>) -> Result<()> {
        if a.len() != b.len() {
            return Err(Error::LengthMismatch { left: a.len(), right: b.len() });
        }
        if a.len() > self.n {
            return Err(Error::InvalidParameter(format!(
                "Witt length {} exceeds precomputed length {}",
                a.len(),
                self.n
            )));
        }
        Ok(())
    }

    fn powers<R: CommRing>(vals: &[R], maxdeg: &[u32]) -> Vec<Vec<R>> {
        vals.iter()
            .zip(maxdeg)
            .map(|(v, &d)| {
                let mut t = Vec::with_capacity(d as usize + 1);
                t.push(v.one_like());
                for k in 1..=d as usize {
                    let next = t[k - 1].mul(v);
                    t.push(next);
                }
                t
            })
            .collect()
    }

    fn eval_binary<R: CommRing>(&self, polys: &[ZPoly], a: &WittVector<R>, b: &WittVector<R>) -> WittVector<R> {
        let len = a.len();
        if len == 0 {
            return a.clone();
        }
        let sample = &a.comps[0];
        let mut vals: Vec<R> = vec![sample.zero_like(); 2 * self.n];
        for i in 0..len {
            vals[i] = a.comps[i].clone();
            vals[self.n + i] = b.comps[i].clone();
        }
        let count = len.min(polys.len());
        let mut maxdeg = vec![0u32; 2 * self.n];
        for s in &polys[..count] {
            for (m, d) in maxdeg.iter_mut().zip(s.max_degrees()) {
                *m = (*m).max(d);
            }
        }
        let pw = Self::powers(&vals, &maxdeg);
        WittVector { comps: polys[..count].iter().map(|s| s.eval(&pw, sample)).collect() }
    }

    pub fn add<R: CommRing>(&self, a: &WittVector<R>, b: &WittVector<R>) -> Result<WittVector<R>> {
        self.check_pair(a, b)?;
        Ok(self.eval_binary(&self.add, a, b))
    }

    pub fn mul<R: CommRing>(&self, a: &WittVector<R>, b: &WittVector<R>) -> Result<WittVector<R>> {
        self.check_pair(a, b)?;
        Ok(self.eval_binary(&self.mul, a, b))
    }

    pub fn neg<R: CommRing>(&self, a: &WittVector<R>) -> Result<WittVector<R>> {
        self.check_pair(a, a)?;
        if a.is_empty() {
            return Ok(a.clone());
        }
        Ok(self.eval_binary(&self.neg, a, &a.zero_like()))
    }

    pub fn sub<R: CommRing>(&self, a: &WittVector<R>, b: &WittVector<R>) -> Result<WittVector<R>> {
        self.add(a, &self.neg(b)?)
    }

    /// `k · a` for a nonnegative integer `k`, by repeated doubling.
    pub fn scale<R: CommRing>(&self, a: &WittVector<R>, mut k: u64) -> Result<WittVector<R>> {
        let mut acc = a.zero_like();
        let mut base = a.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base)?;
            }
            k >>= 1;
            if k > 0 {
                base = self.add(&base, &base)?;
            }
        }
        Ok(acc)
    }

    /// Witt Frobenius. Over an `F_p`-algebra this is the componentwise `p`-th power at the same
    /// length; otherwise the universal polynomials give a vector one shorter.
    pub fn frobenius<R: CommRing>(&self, a: &WittVector<R>) -> Result<WittVector<R>> {
        self.check_pair(a, a)?;
        if a.is_empty() {
            return Ok(a.clone());
        }
        if a.comps[0].char_p() == Some(self.p) {
            return Ok(WittVector { comps: a.comps.iter().map(|c| c.pow(self.p)).collect() });
        }
        let short = a.len() - 1;
        if short == 0 {
            return Ok(WittVector { comps: Vec::new() });
        }
        let w = self.eval_binary(&self.frob, a, &a.zero_like());
        Ok(w.truncate(short))
    }
}

/// Witt coordinates `(c_0, c_1, ...)` of an element of `W_n(F_q)`, so that
/// `b = Σ p^i [c_i^{1/p^i}]`.
pub fn witt_coordinates(b: &GaloisRingElem, len: usize) -> Vec<FqElem> {
    let ring = &b.ring;
    let p = ring.p();
    let mut out = Vec::with_capacity(len);
    let mut r = b.clone();
    for i in 0..len {
        if i as u32 >= ring.n {
            out.push(ring.field.zero());
            continue;
        }
        let d = r.reduce();
        out.push(d.pow(p.pow(i as u32)));
        let t = teichmuller(ring, &d);
        // exact division by p, kept at full precision (top digit becomes irrelevant)
        let diff = r.sub(&t);
        let q = ring.modulus;
        r = GaloisRingElem { ring: ring.clone(), c: diff.c.iter().map(|&x| (x / p) % q).collect() };
    }
    out
}
