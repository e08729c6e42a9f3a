//! Elements of `Nyg H(X_C)` in the form `i_{X,C}(Σ a_α ⊗ x^{<α>}) + i_{C,X}(Σ_{α≥1} b_α ⊗ x^{<α>})`.

use std::collections::BTreeMap;

use serde::ser::SerializeStruct;
use serde::Serialize;

use super::datum::{reduce_orders, FCrystalDatum};
use crate::acris::{nygaard_contains, DPSeries, PExponent, Profile};
use crate::error::{Error, Result};
use crate::galois_witt::{teichmuller, GaloisRingElem};
use crate::linalg::{relation_rows, solve, solve_fq, vec_add, vec_is_zero, vec_scale, vec_sub, Howell, Vector};

#[derive(Debug, Clone, PartialEq)]
pub struct ProductElem {
    pub profile: Profile,
    /// `Nyg H`-coefficients, every exponent.
    pub a: BTreeMap<u64, Vector>,
    /// `H`-coefficients, exponents `α ≥ 1` only.
    pub b: BTreeMap<u64, Vector>,
    pub truncated: bool,
}

fn accumulate(map: &mut BTreeMap<u64, Vector>, key: u64, v: Vector, orders: &[Option<u32>]) {
    let sum = match map.remove(&key) {
        Some(old) => vec_add(&old, &v),
        None => v,
    };
    let sum = reduce_orders(&sum, orders);
    if !vec_is_zero(&sum) {
        map.insert(key, sum);
    }
}

impl ProductElem {
    pub fn zero(profile: &Profile) -> Self {
        ProductElem { profile: profile.clone(), a: BTreeMap::new(), b: BTreeMap::new(), truncated: false }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_empty() && self.b.is_empty()
    }

    pub fn add_a(&mut self, d: &FCrystalDatum, key: u64, v: Vector) {
        if key > self.profile.limit() {
            self.truncated |= !vec_is_zero(&v);
            return;
        }
        accumulate(&mut self.a, key, v, &d.nyg_orders);
    }

    pub fn add_b(&mut self, d: &FCrystalDatum, key: u64, v: Vector) -> Result<()> {
        if key < self.profile.scale() {
            return Err(Error::InvalidParameter("H-coefficients need exponent ≥ 1".into()));
        }
        if key > self.profile.limit() {
            self.truncated |= !vec_is_zero(&v);
            return Ok(());
        }
        accumulate(&mut self.b, key, v, &d.h_orders);
        Ok(())
    }

    /// `i_{X,C}(n ⊗ s)`.
    pub fn i_xc(d: &FCrystalDatum, n: &[GaloisRingElem], s: &DPSeries) -> Self {
        let mut e = Self::zero(&s.profile);
        e.truncated = s.truncated;
        for (&key, c) in &s.terms {
            e.add_a(d, key, vec_scale(n, c));
        }
        e
    }

    /// `i_{C,X}(h ⊗ s)` for `s ∈ Nyg A_cris`. Below exponent 1 the coefficient is `p c'` and
    /// `p h = ι(n)` moves the term to the first summand.
    pub fn i_cx(d: &FCrystalDatum, h: &[GaloisRingElem], s: &DPSeries) -> Result<Self> {
        if !nygaard_contains(s) {
            return Err(Error::InvalidParameter("second factor is not in the Nygaard ideal".into()));
        }
        let mut e = Self::zero(&s.profile);
        e.truncated = s.truncated;
        let ph: Vector = h.iter().map(|x| x.mul_p_pow(1)).collect();
        let mut lift: Option<Vector> = None;
        for (&key, c) in &s.terms {
            if key >= s.profile.scale() {
                e.add_b(d, key, vec_scale(h, c))?;
                continue;
            }
            if lift.is_none() {
                let n0 = solve(&d.iota, d.dim_n(), &d.ring, &d.h_orders, &reduce_orders(&ph, &d.h_orders))
                    .ok_or_else(|| Error::Malformed("p·H is not contained in ι(Nyg H)".into()))?;
                lift = Some(n0);
            }
            let c1 = c.div_p_pow(1)?.to_ring(&d.ring);
            e.add_a(d, key, vec_scale(lift.as_ref().unwrap(), &c1));
        }
        Ok(e)
    }

    pub fn add(&self, d: &FCrystalDatum, other: &Self) -> Result<Self> {
        if self.profile != other.profile {
            return Err(Error::ProfileMismatch);
        }
        let mut r = self.clone();
        r.truncated |= other.truncated;
        for (&k, v) in &other.a {
            r.add_a(d, k, v.clone());
        }
        for (&k, v) in &other.b {
            r.add_b(d, k, v.clone())?;
        }
        Ok(r)
    }

    pub fn scale(&self, d: &FCrystalDatum, c: &GaloisRingElem) -> Self {
        let mut r = Self::zero(&self.profile);
        r.truncated = self.truncated;
        for (&k, v) in &self.a {
            r.add_a(d, k, vec_scale(v, c));
        }
        for (&k, v) in &self.b {
            accumulate(&mut r.b, k, vec_scale(v, c), &d.h_orders);
        }
        r
    }

    pub fn is_torsion(&self, d: &FCrystalDatum) -> bool {
        self.a.values().all(|v| d.is_n_torsion(v)) && self.b.values().all(|v| d.is_h_torsion(v))
    }
}

impl ProductElem {
    /// `p^k` as a ring element.
    fn pk(d: &FCrystalDatum, k: u64) -> GaloisRingElem {
        d.ring.p_pow(k.min(d.ring.n as u64) as u32)
    }

    /// Canonical form: `b_α = Σ [λ_j] s_j` and `a_α` reduced modulo `V` for `α ≥ 1`.
    pub fn normal_form(&self, d: &FCrystalDatum) -> Result<Self> {
        let scale = self.profile.scale();
        let mut r = Self::zero(&self.profile);
        r.truncated = self.truncated;
        for (&k, v) in self.a.range(..scale) {
            r.add_a(d, k, v.clone());
        }
        let mut keys: Vec<u64> = self.a.range(scale..).map(|(k, _)| *k).collect();
        keys.extend(self.b.keys());
        keys.sort_unstable();
        keys.dedup();
        let qs: Vec<Vec<_>> = d.s_lifts.iter().map(|s| d.apply_quot(s)).collect();
        let qmat: Vec<Vec<_>> = (0..d.quot.len()).map(|i| qs.iter().map(|c| c[i].clone()).collect()).collect();
        let mut amb = d.v_gens.clone();
        amb.extend(relation_rows(&d.ring, &d.nyg_orders));
        let v_mod = Howell::new(&d.ring, d.dim_n(), &amb);
        for k in keys {
            let mut h = self.b.get(&k).cloned().unwrap_or_else(|| crate::linalg::zero_vec(&d.ring, d.dim_h()));
            if let Some(a) = self.a.get(&k) {
                h = vec_add(&h, &d.apply_iota(a));
            }
            let h = reduce_orders(&h, &d.h_orders);
            let mut bpart = crate::linalg::zero_vec(&d.ring, d.dim_h());
            if !qs.is_empty() {
                let lam = solve_fq(&qmat, qs.len(), &d.apply_quot(&h))
                    .ok_or_else(|| Error::Malformed("H(O)-image outside the span of the S lifts".into()))?;
                for (l, s) in lam.iter().zip(&d.s_lifts) {
                    bpart = vec_add(&bpart, &vec_scale(s, &teichmuller(&d.ring, l)));
                }
                bpart = reduce_orders(&bpart, &d.h_orders);
            }
            let rest = reduce_orders(&vec_sub(&h, &bpart), &d.h_orders);
            let n0 = solve(&d.iota, d.dim_n(), &d.ring, &d.h_orders, &rest)
                .ok_or_else(|| Error::Malformed("coefficient is not in ι(Nyg H) + span(S)".into()))?;
            r.add_a(d, k, v_mod.reduce(&n0));
            if !vec_is_zero(&bpart) {
                r.add_b(d, k, bpart)?;
            }
        }
        Ok(r)
    }

    /// `F/p` of the element, in `H ⊗ A_cris`, keyed by scaled exponent.
    pub fn apply_fp(&self, d: &FCrystalDatum) -> BTreeMap<u64, Vector> {
        let p = self.profile.p();
        let limit = self.profile.limit();
        let mut out = BTreeMap::new();
        for (&k, v) in &self.a {
            let k2 = k * p;
            if k2 <= limit {
                let w = vec_scale(&d.apply_fp(v), &Self::pk(d, self.profile.floor(k)));
                accumulate(&mut out, k2, w, &d.h_orders);
            }
        }
        for (&k, v) in &self.b {
            let k2 = k * p;
            if k2 <= limit {
                let w = vec_scale(&d.apply_frob(v), &Self::pk(d, self.profile.floor(k) - 1));
                accumulate(&mut out, k2, w, &d.h_orders);
            }
        }
        out
    }

    /// Image in `H ⊗ A_cris` under `ι ⊗ 1 + 1`.
    pub fn iota_image(&self, d: &FCrystalDatum) -> BTreeMap<u64, Vector> {
        let mut out = BTreeMap::new();
        for (&k, v) in &self.a {
            accumulate(&mut out, k, d.apply_iota(v), &d.h_orders);
        }
        for (&k, v) in &self.b {
            accumulate(&mut out, k, v.clone(), &d.h_orders);
        }
        out
    }

    /// `(id × f_C)`: `x^{<α>} ↦ p^{⌊α⌋} x^{<pα>}` on both summands.
    pub fn apply_fc(&self, d: &FCrystalDatum) -> Self {
        let p = self.profile.p();
        let mut r = Self::zero(&self.profile);
        r.truncated = self.truncated;
        for (&k, v) in &self.a {
            r.add_a(d, k * p, vec_scale(v, &Self::pk(d, self.profile.floor(k))));
        }
        for (&k, v) in &self.b {
            r.add_b(d, k * p, vec_scale(v, &Self::pk(d, self.profile.floor(k)))).expect("exponent stays ≥ 1");
        }
        r
    }

    /// Torsion and in the kernel of `F/p - 1` (exponents up to the cap).
    pub fn kernel_tors_check(&self, d: &FCrystalDatum) -> bool {
        self.is_torsion(d) && self.apply_fp(d) == self.iota_image(d)
    }
}

/// `θ = Σ_{i<m} p^{w_i} a_{i+1} ⊗ x^{<p^i ᾱ>}` with `w_i = Σ_{j<i} ⌊p^j ᾱ⌋`, for a chain
/// `a_1 ∈ V`, `(F/p)(a_j) = ι(a_{j+1})` of torsion elements.
pub fn theta_generator(d: &FCrystalDatum, profile: &Profile, chain: &[Vector], alphabar: &PExponent) -> Result<ProductElem> {
    let m = chain.len();
    if m == 0 {
        return Err(Error::InvalidParameter("empty chain".into()));
    }
    let e = d.torsion_exponent() as u64;
    let mut top = *alphabar;
    for _ in 1..m {
        top = top.mul_p();
    }
    if top.floor() < e {
        return Err(Error::InvalidParameter(format!("p^(m-1)·ᾱ = {top} is below the torsion exponent {e}")));
    }
    if !d.is_n_torsion(&chain[0]) || !vec_is_zero(&d.apply_iota(&chain[0])) {
        return Err(Error::InvalidParameter("a_1 is not in V".into()));
    }
    for (j, w) in chain.windows(2).enumerate() {
        if !d.is_n_torsion(&w[1]) || d.apply_fp(&w[0]) != d.apply_iota(&w[1]) {
            return Err(Error::InvalidParameter(format!("chain relation fails at step {}", j + 1)));
        }
    }
    let mut key = profile
        .key_of(alphabar)
        .ok_or_else(|| Error::TruncationExhausted { exponent: alphabar.to_string(), needed_depth: alphabar.v })?;
    let mut theta = ProductElem::zero(profile);
    let mut w = 0u64;
    for a in chain {
        theta.add_a(d, key, vec_scale(a, &ProductElem::pk(d, w)));
        w += profile.floor(key);
        key = key.saturating_mul(profile.p());
    }
    Ok(theta)
}

impl Serialize for ProductElem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let side = |m: &BTreeMap<u64, Vector>| -> Vec<(String, Vec<Vec<u64>>)> {
            m.iter()
                .map(|(&k, v)| (self.profile.exponent(k).to_string(), v.iter().map(|x| x.c.clone()).collect()))
                .collect()
        };
        let mut st = s.serialize_struct("ProductElem", 3)?;
        st.serialize_field("a", &side(&self.a))?;
        st.serialize_field("b", &side(&self.b))?;
        st.serialize_field("truncated", &self.truncated)?;
        st.end()
    }
}
