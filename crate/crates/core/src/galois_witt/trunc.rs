//! `F_q[x^{1/p^N}]/(x^D)`: the perfection-truncated ring used as a Witt-vector base.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;

use super::field::{FieldDesc, FqElem};
use super::ring::CommRing;
use crate::arith::pow_u64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncDesc {
    pub field: Arc<FieldDesc>,
    /// Exponents are stored as `u / p^depth`.
    pub depth: u32,
    /// Monomials with exponent `>= cap` vanish.
    pub cap: u64,
}

impl TruncDesc {
    pub fn new(field: Arc<FieldDesc>, depth: u32, cap: u64) -> Arc<Self> {
        Arc::new(TruncDesc { field, depth, cap })
    }

    /// `u / p^depth` bound, exclusive.
    pub fn limit(&self) -> u64 {
        self.cap * pow_u64(self.field.p, self.depth)
    }

    pub fn zero(self: &Arc<Self>) -> TruncC {
        TruncC { desc: self.clone(), terms: BTreeMap::new() }
    }

    /// `b * x^{u/p^depth}`.
    pub fn monomial(self: &Arc<Self>, u: u64, b: FqElem) -> TruncC {
        let mut t = self.zero();
        if u < self.limit() && !b.is_zero() {
            t.terms.insert(u, b);
        }
        t
    }
}

/// Element of [`TruncDesc`]'s ring: map from scaled exponent to coefficient, no zeros stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncC {
    pub desc: Arc<TruncDesc>,
    pub terms: BTreeMap<u64, FqElem>,
}

impl TruncC {
    fn insert_add(terms: &mut BTreeMap<u64, FqElem>, u: u64, b: FqElem) {
        match terms.get_mut(&u) {
            Some(c) => {
                *c = c.add(&b);
                if c.is_zero() {
                    terms.remove(&u);
                }
            }
            None => {
                if !b.is_zero() {
                    terms.insert(u, b);
                }
            }
        }
    }
}

impl CommRing for TruncC {
    fn zero_like(&self) -> Self {
        self.desc.zero()
    }
    fn one_like(&self) -> Self {
        self.desc.monomial(0, self.desc.field.one())
    }
    fn from_bigint_like(&self, k: &BigInt) -> Self {
        let p = BigInt::from(self.desc.field.p);
        let r = ((k % &p) + &p) % &p;
        let r: i64 = r.try_into().unwrap();
        self.desc.monomial(0, self.desc.field.from_int(r))
    }
    fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (&u, b) in &other.terms {
            Self::insert_add(&mut terms, u, b.clone());
        }
        TruncC { desc: self.desc.clone(), terms }
    }
    fn sub(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (&u, b) in &other.terms {
            Self::insert_add(&mut terms, u, b.neg());
        }
        TruncC { desc: self.desc.clone(), terms }
    }
    fn mul(&self, other: &Self) -> Self {
        let limit = self.desc.limit();
        let mut terms = BTreeMap::new();
        for (&u, a) in &self.terms {
            for (&w, b) in &other.terms {
                if u + w < limit {
                    Self::insert_add(&mut terms, u + w, a.mul(b));
                }
            }
        }
        TruncC { desc: self.desc.clone(), terms }
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn char_p(&self) -> Option<u64> {
        Some(self.desc.field.p)
    }
}
