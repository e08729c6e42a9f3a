//! Truncated divided-power series `Σ b_α x^{<α>}` modelling `A_cris(C)`.
//!
//! Exponents are stored as integers `α p^N`. Monomials with `α > D` span an ideal stable
//! under `F` and `f_C`, and the model is the quotient by it; dropped terms raise
//! [`DPSeries::truncated`].

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::ser::SerializeStruct;
use serde::Serialize;

use super::exponent::PExponent;
use crate::arith::{legendre, pow_u64};
use crate::error::{Error, Result};
use crate::galois_witt::{GaloisRingElem, RingDesc};

/// Truncation profile: denominator depth `N`, degree cap `D`, and the coefficient ring
/// (which carries `p`, `m` and the precision `n`).
#[derive(Debug, Clone)]
pub struct Profile {
    pub ring: Arc<RingDesc>,
    pub depth: u32,
    pub cap: u64,
    scale: u64,
}

impl PartialEq for Profile {
    fn eq(&self, other: &Self) -> bool {
        self.depth == other.depth && self.cap == other.cap && *self.ring == *other.ring
    }
}
impl Eq for Profile {}

impl Profile {
    pub fn new(ring: Arc<RingDesc>, depth: u32, cap: u64) -> Result<Self> {
        let p = ring.p();
        let scale = (p as u128).pow(depth);
        if cap == 0 || scale * (cap as u128 + 1) * p as u128 >= 1u128 << 62 {
            return Err(Error::InvalidParameter(format!("profile N={depth}, D={cap} out of range")));
        }
        Ok(Profile { ring, depth, cap, scale: scale as u64 })
    }

    pub fn p(&self) -> u64 {
        self.ring.p()
    }

    pub fn precision(&self) -> u32 {
        self.ring.n
    }

    /// `p^N`.
    pub fn scale(&self) -> u64 {
        self.scale
    }

    /// Largest admissible scaled exponent, `D p^N`.
    pub fn limit(&self) -> u64 {
        self.cap * self.scale
    }

    pub fn key_of(&self, alpha: &PExponent) -> Option<u64> {
        alpha.scaled(self.depth)
    }

    pub fn exponent(&self, key: u64) -> PExponent {
        PExponent::from_scaled(key, self.depth, self.p())
    }

    pub fn floor(&self, key: u64) -> u64 {
        key / self.scale
    }

    pub fn with_ring(&self, ring: Arc<RingDesc>) -> Self {
        Profile { ring, ..self.clone() }
    }

    pub fn with_precision(&self, n: u32) -> Result<Self> {
        Ok(self.with_ring(self.ring.at_precision(n)?))
    }

    pub fn with_depth_cap(&self, depth: u32, cap: u64) -> Result<Self> {
        Profile::new(self.ring.clone(), depth, cap)
    }
}

/// An element of the truncated model of `A_cris(C)`.
#[derive(Debug, Clone)]
pub struct DPSeries {
    pub profile: Profile,
    pub terms: BTreeMap<u64, GaloisRingElem>,
    /// Set when an operation dropped a nonzero monomial beyond the cap.
    pub truncated: bool,
}

impl PartialEq for DPSeries {
    fn eq(&self, other: &Self) -> bool {
        self.profile == other.profile && self.terms == other.terms
    }
}

impl DPSeries {
    pub fn zero(profile: &Profile) -> Self {
        DPSeries { profile: profile.clone(), terms: BTreeMap::new(), truncated: false }
    }

    pub fn constant(profile: &Profile, b: GaloisRingElem) -> Self {
        let mut s = Self::zero(profile);
        s.push(0, b);
        s
    }

    pub fn one(profile: &Profile) -> Self {
        Self::constant(profile, profile.ring.one())
    }

    /// `b x^{<α>}`; an exponent above the cap gives zero with the truncation flag set.
    pub fn monomial(profile: &Profile, alpha: PExponent, b: GaloisRingElem) -> Result<Self> {
        let key = profile.key_of(&alpha).ok_or_else(|| Error::TruncationExhausted {
            exponent: alpha.to_string(),
            needed_depth: alpha.v,
        })?;
        let mut s = Self::zero(profile);
        if key > profile.limit() {
            s.truncated = !b.is_zero();
        } else {
            s.push(key, b);
        }
        Ok(s)
    }

    pub fn monomial_key(profile: &Profile, key: u64, b: GaloisRingElem) -> Self {
        let mut s = Self::zero(profile);
        if key > profile.limit() {
            s.truncated = !b.is_zero();
        } else {
            s.push(key, b);
        }
        s
    }

    pub fn ring(&self) -> &Arc<RingDesc> {
        &self.profile.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Add `b` to the coefficient at `key`, pruning zeros. Keys beyond the cap are dropped.
    pub fn push(&mut self, key: u64, b: GaloisRingElem) {
        if b.is_zero() {
            return;
        }
        if key > self.profile.limit() {
            self.truncated = true;
            return;
        }
        match self.terms.get_mut(&key) {
            Some(c) => {
                *c = c.add(&b);
                if c.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, b);
            }
        }
    }

    pub fn coefficient(&self, alpha: &PExponent) -> GaloisRingElem {
        self.profile
            .key_of(alpha)
            .and_then(|k| self.terms.get(&k).cloned())
            .unwrap_or_else(|| self.ring().zero())
    }

    pub fn constant_term(&self) -> GaloisRingElem {
        self.terms.get(&0).cloned().unwrap_or_else(|| self.ring().zero())
    }

    pub fn iter(&self) -> impl Iterator<Item = (PExponent, &GaloisRingElem)> + '_ {
        self.terms.iter().map(|(&k, b)| (self.profile.exponent(k), b))
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.profile != other.profile {
            return Err(Error::ProfileMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut r = self.clone();
        r.truncated |= other.truncated;
        for (&k, b) in &other.terms {
            r.push(k, b.clone());
        }
        Ok(r)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|b| b.neg())
    }

    pub fn map_coeffs(&self, f: impl Fn(&GaloisRingElem) -> GaloisRingElem) -> Self {
        let mut r = Self::zero(&self.profile);
        r.truncated = self.truncated;
        for (&k, b) in &self.terms {
            r.push(k, f(b));
        }
        r
    }

    pub fn scale(&self, c: &GaloisRingElem) -> Self {
        self.map_coeffs(|b| b.mul(c))
    }

    pub fn mul_p_pow(&self, k: u32) -> Self {
        self.map_coeffs(|b| b.mul_p_pow(k))
    }

    pub fn sigma_pow(&self, k: i64) -> Self {
        self.map_coeffs(|b| b.sigma_pow(k))
    }

    /// Minimum coefficient valuation (`n` for zero).
    pub fn valuation(&self) -> u32 {
        self.terms.values().map(|b| b.valuation()).min().unwrap_or(self.profile.precision())
    }

    /// Product, using `x^{<α>} x^{<β>} = p^w x^{<α+β>}`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let p = self.profile.p();
        let mut r = Self::zero(&self.profile);
        r.truncated = self.truncated || other.truncated;
        for (&k1, b1) in &self.terms {
            let f1 = legendre(self.profile.floor(k1), p);
            for (&k2, b2) in &other.terms {
                let k = k1 + k2;
                if k > self.profile.limit() {
                    r.truncated = true;
                    continue;
                }
                let f2 = legendre(self.profile.floor(k2), p);
                let w = legendre(self.profile.floor(k), p) - f1 - f2;
                let c = if w >= self.profile.precision() as u64 {
                    continue;
                } else {
                    b1.mul(b2).mul_p_pow(w as u32)
                };
                r.push(k, c);
            }
        }
        Ok(r)
    }

    fn frobenius_impl(&self, twist: bool) -> Self {
        let p = self.profile.p();
        let n = self.profile.precision();
        let mut r = Self::zero(&self.profile);
        r.truncated = self.truncated;
        for (&k, b) in &self.terms {
            let fl = self.profile.floor(k);
            let c = if twist { b.sigma() } else { b.clone() };
            if fl >= n as u64 {
                continue;
            }
            r.push(k * p, c.mul_p_pow(fl as u32));
        }
        r
    }

    /// `F(Σ b_α x^{<α>}) = Σ σ(b_α) p^{⌊α⌋} x^{<pα>}`.
    pub fn frobenius(&self) -> Self {
        self.frobenius_impl(true)
    }

    /// `f_C`: as [`frobenius`](Self::frobenius) without twisting coefficients.
    pub fn fc(&self) -> Self {
        self.frobenius_impl(false)
    }

    pub fn frobenius_pow(&self, s: u32) -> Self {
        (0..s).fold(self.clone(), |a, _| a.frobenius())
    }

    pub fn fc_pow(&self, s: u32) -> Self {
        (0..s).fold(self.clone(), |a, _| a.fc())
    }

    /// Exact division by `p^k`; the result lives at precision `n - k`.
    pub fn div_p_pow(&self, k: u32) -> Result<Self> {
        if k == 0 {
            return Ok(self.clone());
        }
        let n = self.profile.precision();
        if k >= n {
            return Err(Error::InsufficientPrecision(format!("division by p^{k} at precision {n}")));
        }
        let profile = self.profile.with_precision(n - k)?;
        let mut r = Self::zero(&profile);
        r.truncated = self.truncated;
        for (&key, b) in &self.terms {
            r.push(key, b.div_p_pow(k)?.to_ring(&profile.ring));
        }
        Ok(r)
    }

    /// Change coefficient precision (reduction, or lifting by representatives).
    pub fn to_precision(&self, n: u32) -> Result<Self> {
        let profile = self.profile.with_precision(n)?;
        let mut r = Self::zero(&profile);
        r.truncated = self.truncated;
        for (&k, b) in &self.terms {
            r.push(k, b.to_ring(&profile.ring));
        }
        Ok(r)
    }

    /// Move to another depth/cap. Deeper denominators rescale keys; a shallower depth fails
    /// if some exponent needs it. Terms above a smaller cap are dropped.
    pub fn reprofile(&self, profile: &Profile) -> Result<Self> {
        if *profile.ring != **self.ring() {
            return Err(Error::ProfileMismatch);
        }
        let mut r = Self::zero(profile);
        r.truncated = self.truncated;
        for (&k, b) in &self.terms {
            let alpha = self.profile.exponent(k);
            let nk = profile.key_of(&alpha).ok_or_else(|| Error::TruncationExhausted {
                exponent: alpha.to_string(),
                needed_depth: alpha.v,
            })?;
            r.push(nk, b.to_ring(&profile.ring));
        }
        Ok(r)
    }

    /// Random element with up to `nterms` monomials, exponents with denominators at most
    /// `p^max_v`, coefficients uniform.
    pub fn random<R: Rng + ?Sized>(profile: &Profile, nterms: usize, max_v: u32, rng: &mut R) -> Self {
        let max_v = max_v.min(profile.depth);
        let step = pow_u64(profile.p(), profile.depth - max_v);
        let slots = profile.limit() / step;
        let mut s = Self::zero(profile);
        for _ in 0..nterms {
            let key = rng.gen_range(0..=slots) * step;
            s.push(key, profile.ring.random(rng));
        }
        s
    }
}

impl fmt::Display for DPSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (alpha, b) in self.iter() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if alpha.is_zero() {
                write!(f, "{b}")?;
            } else {
                write!(f, "{b}*x^<{alpha}>")?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct TermJson<'a> {
    u: u64,
    v: u32,
    coeff: &'a [u64],
}

#[derive(Serialize)]
struct ProfileJson {
    #[serde(rename = "N")]
    depth: u32,
    #[serde(rename = "D")]
    cap: u64,
    n: u32,
    p: u64,
    m: usize,
}

impl Serialize for DPSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pr = &self.profile;
        let terms: Vec<TermJson> = self
            .terms
            .iter()
            .map(|(&k, b)| {
                let a = pr.exponent(k);
                TermJson { u: a.u, v: a.v, coeff: &b.c }
            })
            .collect();
        let mut st = s.serialize_struct("DPSeries", 2)?;
        st.serialize_field(
            "profile",
            &ProfileJson { depth: pr.depth, cap: pr.cap, n: pr.precision(), p: pr.p(), m: pr.ring.m() },
        )?;
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}
