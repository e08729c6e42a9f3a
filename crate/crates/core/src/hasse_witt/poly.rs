use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::galois_witt::{FieldDesc, FqElem};

/// Homogeneous polynomial in `x_0, …, x_n` over `F_{p^m}`, stored sparsely.
#[derive(Clone, PartialEq, Eq)]
pub struct HomogPoly {
    pub field: Arc<FieldDesc>,
    pub nvars: usize,
    pub degree: u32,
    terms: BTreeMap<Vec<u32>, FqElem>,
}

impl HomogPoly {
    pub fn zero(field: &Arc<FieldDesc>, nvars: usize, degree: u32) -> Self {
        Self { field: field.clone(), nvars, degree, terms: BTreeMap::new() }
    }

    pub fn one(field: &Arc<FieldDesc>, nvars: usize) -> Self {
        Self::monomial(field, vec![0; nvars], field.one())
    }

    pub fn monomial(field: &Arc<FieldDesc>, exps: Vec<u32>, c: FqElem) -> Self {
        let mut f = Self::zero(field, exps.len(), exps.iter().sum());
        f.add_term(exps, c);
        f
    }

    /// The coordinate `x_i`.
    pub fn var(field: &Arc<FieldDesc>, nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(field, e, field.one())
    }

    /// Linear form `Σ c_i x_i`.
    pub fn linear(field: &Arc<FieldDesc>, coeffs: &[FqElem]) -> Self {
        let mut f = Self::zero(field, coeffs.len(), 1);
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; coeffs.len()];
            e[i] = 1;
            f.add_term(e, c.clone());
        }
        f
    }

    pub fn from_terms(field: &Arc<FieldDesc>, nvars: usize, degree: u32, terms: Vec<(Vec<u32>, FqElem)>) -> Result<Self> {
        let mut f = Self::zero(field, nvars, degree);
        for (e, c) in terms {
            if e.len() != nvars || e.iter().sum::<u32>() != degree {
                return Err(Error::Malformed(format!("monomial {e:?} is not of degree {degree} in {nvars} variables")));
            }
            f.add_term(e, c);
        }
        Ok(f)
    }

    fn add_term(&mut self, e: Vec<u32>, c: FqElem) {
        debug_assert_eq!(e.iter().sum::<u32>(), self.degree);
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &FqElem)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: &[u32]) -> FqElem {
        self.terms.get(e).cloned().unwrap_or_else(|| self.field.zero())
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars || *self.field != *other.field {
            return Err(Error::RingMismatch("polynomials over different rings".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.degree != other.degree {
            return Err(Error::InvalidParameter(format!("adding forms of degrees {} and {}", self.degree, other.degree)));
        }
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &FqElem) -> Self {
        let mut out = Self::zero(&self.field, self.nvars, self.degree);
        for (e, x) in &self.terms {
            out.add_term(e.clone(), x.mul(c));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(&self.field, self.nvars, self.degree + other.degree);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1.mul(c2));
            }
        }
        Ok(out)
    }

    /// `f^e` by repeated squaring.
    pub fn pow(&self, mut e: u64) -> Self {
        let mut result = Self::one(&self.field, self.nvars);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base).expect("same ring");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same ring");
            }
        }
        result
    }

    pub fn eval(&self, x: &[FqElem]) -> FqElem {
        let mut acc = self.field.zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &k) in x.iter().zip(e) {
                if k > 0 {
                    t = t.mul(&xi.pow(u64::from(k)));
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// `∂f/∂x_i`.
    pub fn partial(&self, i: usize) -> Self {
        let mut out = Self::zero(&self.field, self.nvars, self.degree.saturating_sub(1));
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut d = e.clone();
            d[i] -= 1;
            out.add_term(d, c.scale(u64::from(e[i]) % self.field.p));
        }
        out
    }

    /// Permute coordinates: `x_i ↦ x_{perm[i]}`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        let mut out = Self::zero(&self.field, self.nvars, self.degree);
        for (e, c) in &self.terms {
            let mut d = vec![0; self.nvars];
            for (i, &k) in e.iter().enumerate() {
                d[perm[i]] = k;
            }
            out.add_term(d, c.clone());
        }
        out
    }

    /// Exchange `x_0` and `x_1`.
    pub fn tau_swap(&self) -> Self {
        let mut perm: Vec<usize> = (0..self.nvars).collect();
        perm.swap(0, 1);
        self.permute(&perm)
    }

    /// Same form over an extension, given the image of the generator of the base field.
    pub fn map_coefficients(&self, target: &Arc<FieldDesc>, image: impl Fn(&FqElem) -> FqElem) -> Self {
        let mut out = Self::zero(target, self.nvars, self.degree);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), image(c));
        }
        out
    }
}

impl fmt::Debug for HomogPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for HomogPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut factors = Vec::new();
            if !c.is_one() {
                factors.push(if self.field.m == 1 { c.to_string() } else { format!("({})", coeff_text(c)) });
            }
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => factors.push(format!("x{i}")),
                    k => factors.push(format!("x{i}^{k}")),
                }
            }
            if factors.is_empty() {
                factors.push("1".into());
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

/// Coefficient in the generator `a`, e.g. `a^2 + 1`.
fn coeff_text(c: &FqElem) -> String {
    let parts: Vec<String> = c
        .c
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &v)| v != 0)
        .map(|(i, &v)| {
            let mono = match i {
                0 => String::new(),
                1 => "a".into(),
                i => format!("a^{i}"),
            };
            match (v, i) {
                (v, 0) => v.to_string(),
                (1, _) => mono,
                (v, _) => format!("{v}*{mono}"),
            }
        })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exps: Vec<u32>,
    coeff: Vec<u64>,
}

/// Wire form `{p, m, n, d, terms: [{exps, coeff}]}`, `n` the projective dimension.
#[derive(Serialize, Deserialize)]
struct PolyJson {
    p: u64,
    m: usize,
    n: usize,
    d: u32,
    terms: Vec<TermJson>,
}

impl Serialize for HomogPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyJson {
            p: self.field.p,
            m: self.field.m,
            n: self.nvars - 1,
            d: self.degree,
            terms: self.terms.iter().map(|(e, c)| TermJson { exps: e.clone(), coeff: c.c.clone() }).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for HomogPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = PolyJson::deserialize(d)?;
        let field = FieldDesc::new(j.p, j.m).map_err(D::Error::custom)?;
        let terms = j.terms.into_iter().map(|t| (t.exps, field.from_coeffs(&t.coeff))).collect();
        HomogPoly::from_terms(&field, j.n + 1, j.d, terms).map_err(D::Error::custom)
    }
}
