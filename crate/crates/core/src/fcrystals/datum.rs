//! Crystal data: `Nyg H → H` with `ι`, `F/p`, the Frobenius on `H`, the submodule `V ⊂ Nyg H`,
//! lifts of a basis of `S ⊂ H(O)` and the quotient map `H → H(O)`.
//!
//! Modules are presented as `⊕ W_n/p^{e_j}`, with `None` for a free summand.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::sigma_module::SigmaModule;
use crate::error::{Error, Result};
use crate::galois_witt::{FqElem, GaloisRingElem, RingDesc};
use crate::linalg::{kernel, mat_vec, rank_fq, relation_rows, vec_is_zero, zero_vec, Howell, Mat, Vector};

/// A matrix or vector entry: an integer, or coefficients in the power basis of `W_n(F_q)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Int(i64),
    Coeffs(Vec<i64>),
}

/// On-disk form of a [`FCrystalDatum`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatumFile {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub p: u64,
    #[serde(default = "one")]
    pub m: usize,
    pub n: u32,
    pub h_orders: Vec<Option<u32>>,
    pub nyg_orders: Vec<Option<u32>>,
    /// `F(v) = A σ(v)` on `H`.
    pub frob_h: Vec<Vec<Entry>>,
    /// `ι: Nyg H → H`, linear.
    pub iota: Vec<Vec<Entry>>,
    /// `F/p: Nyg H → H`, σ-semilinear.
    pub fp: Vec<Vec<Entry>>,
    #[serde(default)]
    pub v_gens: Vec<Vec<Entry>>,
    #[serde(default)]
    pub s_lifts: Vec<Vec<Entry>>,
    /// `H → H(O)`, reduced mod `p`.
    #[serde(default)]
    pub quot: Vec<Vec<Entry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<String>,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone)]
pub struct FCrystalDatum {
    pub file: DatumFile,
    pub ring: Arc<RingDesc>,
    pub h_orders: Vec<Option<u32>>,
    pub nyg_orders: Vec<Option<u32>>,
    pub frob: SigmaModule,
    pub iota: Mat,
    pub fp: Mat,
    pub v_gens: Vec<Vector>,
    pub s_lifts: Vec<Vector>,
    pub quot: Vec<Vec<FqElem>>,
}

fn entry(ring: &Arc<RingDesc>, e: &Entry) -> GaloisRingElem {
    match e {
        Entry::Int(k) => ring.from_int(*k),
        Entry::Coeffs(c) => ring.from_coeffs(c),
    }
}

fn matrix(ring: &Arc<RingDesc>, rows: &[Vec<Entry>], r: usize, c: usize, what: &str) -> Result<Mat> {
    if rows.len() != r || rows.iter().any(|row| row.len() != c) {
        return Err(Error::Malformed(format!("{what} must be {r}×{c}")));
    }
    Ok(rows.iter().map(|row| row.iter().map(|e| entry(ring, e)).collect()).collect())
}

fn vectors(ring: &Arc<RingDesc>, vs: &[Vec<Entry>], dim: usize, what: &str) -> Result<Vec<Vector>> {
    vs.iter()
        .map(|v| {
            if v.len() != dim {
                return Err(Error::Malformed(format!("{what} vectors must have length {dim}")));
            }
            Ok(v.iter().map(|e| entry(ring, e)).collect())
        })
        .collect()
}

/// Reduce each coordinate modulo its order.
pub fn reduce_orders(v: &[GaloisRingElem], orders: &[Option<u32>]) -> Vector {
    v.iter()
        .zip(orders)
        .map(|(x, o)| match o {
            Some(e) if *e < x.ring.n => {
                let q = x.ring.p().pow(*e);
                GaloisRingElem { ring: x.ring.clone(), c: x.c.iter().map(|a| a % q).collect() }
            }
            _ => x.clone(),
        })
        .collect()
}

fn unit_vec(ring: &Arc<RingDesc>, dim: usize, i: usize, scale: &GaloisRingElem) -> Vector {
    let mut v = zero_vec(ring, dim);
    v[i] = scale.clone();
    v
}

impl FCrystalDatum {
    pub fn from_file(file: DatumFile) -> Result<Self> {
        let ring = RingDesc::standard(file.p, file.m, file.n)?;
        let dh = file.h_orders.len();
        let dn = file.nyg_orders.len();
        for e in file.h_orders.iter().chain(&file.nyg_orders).flatten() {
            if *e == 0 || *e >= file.n {
                return Err(Error::Malformed(format!("torsion order p^{e} needs 0 < e < n = {}", file.n)));
            }
        }
        let a = matrix(&ring, &file.frob_h, dh, dh, "frob_h")?;
        let iota = matrix(&ring, &file.iota, dh, dn, "iota")?;
        let fp = matrix(&ring, &file.fp, dh, dn, "fp")?;
        let v_gens = vectors(&ring, &file.v_gens, dn, "v_gens")?;
        let s_lifts = vectors(&ring, &file.s_lifts, dh, "s_lifts")?;
        let quot = file
            .quot
            .iter()
            .map(|row| {
                if row.len() != dh {
                    return Err(Error::Malformed(format!("quot rows must have length {dh}")));
                }
                Ok(row.iter().map(|e| entry(&ring, e).reduce()).collect())
            })
            .collect::<Result<Vec<Vec<FqElem>>>>()?;
        let d = FCrystalDatum {
            h_orders: file.h_orders.clone(),
            nyg_orders: file.nyg_orders.clone(),
            frob: SigmaModule::new(ring.clone(), a)?,
            ring,
            iota,
            fp,
            v_gens,
            s_lifts,
            quot,
            file,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: DatumFile = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        Self::from_file(file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.file).expect("datum serializes")
    }

    pub fn name(&self) -> &str {
        &self.file.name
    }

    pub fn dim_h(&self) -> usize {
        self.h_orders.len()
    }

    pub fn dim_n(&self) -> usize {
        self.nyg_orders.len()
    }

    pub fn apply_iota(&self, v: &[GaloisRingElem]) -> Vector {
        reduce_orders(&mat_vec(&self.iota, v, &self.ring), &self.h_orders)
    }

    pub fn apply_fp(&self, v: &[GaloisRingElem]) -> Vector {
        let sv: Vector = v.iter().map(|x| x.sigma()).collect();
        reduce_orders(&mat_vec(&self.fp, &sv, &self.ring), &self.h_orders)
    }

    pub fn apply_frob(&self, v: &[GaloisRingElem]) -> Vector {
        reduce_orders(&self.frob.apply(v), &self.h_orders)
    }

    /// `q: H → H(O) ⊗ F_q`.
    pub fn apply_quot(&self, v: &[GaloisRingElem]) -> Vec<FqElem> {
        let f = self.ring.field.clone();
        self.quot
            .iter()
            .map(|row| row.iter().zip(v).fold(f.zero(), |acc, (q, x)| acc.add(&q.mul(&x.reduce()))))
            .collect()
    }

    /// Coordinates of the torsion summands.
    pub fn h_torsion(&self) -> Vec<usize> {
        (0..self.dim_h()).filter(|&i| self.h_orders[i].is_some()).collect()
    }

    pub fn n_torsion(&self) -> Vec<usize> {
        (0..self.dim_n()).filter(|&i| self.nyg_orders[i].is_some()).collect()
    }

    pub fn is_h_torsion(&self, v: &[GaloisRingElem]) -> bool {
        v.iter().zip(&self.h_orders).all(|(x, o)| o.is_some() || x.is_zero())
    }

    pub fn is_n_torsion(&self, v: &[GaloisRingElem]) -> bool {
        v.iter().zip(&self.nyg_orders).all(|(x, o)| o.is_some() || x.is_zero())
    }

    /// Largest torsion exponent of `H` and `Nyg H`.
    pub fn torsion_exponent(&self) -> u32 {
        self.h_orders.iter().chain(&self.nyg_orders).flatten().copied().max().unwrap_or(0)
    }

    fn validate(&self) -> Result<()> {
        let ring = &self.ring;
        let (dh, dn) = (self.dim_h(), self.dim_n());
        let bad = |msg: String| Err(Error::Malformed(format!("{}: {msg}", self.file.name)));
        for j in 0..dn {
            let e = unit_vec(ring, dn, j, &ring.one());
            let lhs = self.apply_frob(&self.apply_iota(&e));
            let rhs = reduce_orders(&self.apply_fp(&e).iter().map(|x| x.mul_p_pow(1)).collect::<Vector>(), &self.h_orders);
            if lhs != rhs {
                return bad(format!("F∘ι ≠ p·(F/p) on generator {j}"));
            }
            if let Some(f) = self.nyg_orders[j] {
                let t = unit_vec(ring, dn, j, &ring.p_pow(f));
                if !vec_is_zero(&self.apply_iota(&t)) || !vec_is_zero(&self.apply_fp(&t)) {
                    return bad(format!("maps are not defined on the relation of generator {j}"));
                }
                if !self.is_h_torsion(&self.apply_iota(&e)) || !self.is_h_torsion(&self.apply_fp(&e)) {
                    return bad(format!("torsion generator {j} maps outside the torsion"));
                }
            }
        }
        for i in 0..dh {
            if let Some(e) = self.h_orders[i] {
                let t = unit_vec(ring, dh, i, &ring.p_pow(e));
                if !vec_is_zero(&self.apply_frob(&t)) {
                    return bad(format!("F is not defined on the relation of generator {i}"));
                }
                if !self.is_h_torsion(&self.apply_frob(&unit_vec(ring, dh, i, &ring.one()))) {
                    return bad(format!("F maps torsion generator {i} outside the torsion"));
                }
            }
        }
        for (k, v) in self.v_gens.iter().enumerate() {
            if !self.is_n_torsion(v) || !vec_is_zero(&self.apply_iota(v)) {
                return bad(format!("V generator {k} is not a torsion element of ker ι"));
            }
        }
        let nt = self.n_torsion();
        let iota_t: Mat = self.iota.iter().map(|r| nt.iter().map(|&j| r[j].clone()).collect()).collect();
        let nt_orders: Vec<Option<u32>> = nt.iter().map(|&j| self.nyg_orders[j]).collect();
        let ker = kernel(&iota_t, nt.len(), ring, &self.h_orders);
        let mut vs: Vec<Vector> = self.v_gens.iter().map(|v| nt.iter().map(|&j| v[j].clone()).collect()).collect();
        vs.extend(relation_rows(ring, &nt_orders));
        if !Howell::new(ring, nt.len(), &vs).contains_module(&ker) {
            return bad("V is smaller than the torsion of ker ι".into());
        }
        if !self.quot.is_empty() {
            for j in 0..dn {
                let e = unit_vec(ring, dn, j, &ring.one());
                if self.apply_quot(&self.apply_iota(&e)).iter().any(|x| !x.is_zero()) {
                    return bad(format!("quot∘ι is nonzero on generator {j}"));
                }
            }
        }
        // exactness at H: ker(H → H(O)) = ι(Nyg H), and p H ⊂ ι(Nyg H)
        let mut img: Vec<Vector> = (0..dn).map(|j| self.iota.iter().map(|r| r[j].clone()).collect()).collect();
        img.extend(relation_rows(ring, &self.h_orders));
        let img = Howell::new(ring, dh, &img);
        for i in 0..dh {
            if !img.contains(&unit_vec(ring, dh, i, &ring.p_pow(1))) {
                return bad(format!("p·(generator {i} of H) is not in ι(Nyg H)"));
            }
        }
        let coker = dh as u32 * ring.n - img.length();
        let qs: Vec<Vec<FqElem>> = self.s_lifts.iter().map(|s| self.apply_quot(s)).collect();
        if !qs.is_empty() && rank_fq(&qs) != qs.len() {
            return bad("images of the S lifts are dependent".into());
        }
        let q_rank = if self.quot.is_empty() { 0 } else { rank_fq(&self.quot) };
        if coker as usize != q_rank {
            return bad(format!("H/ι(Nyg H) has dimension {coker} but quot has rank {q_rank}"));
        }
        if q_rank != qs.len() {
            return bad(format!("quot has rank {q_rank} but {} S lifts are given", qs.len()));
        }
        Ok(())
    }
}
