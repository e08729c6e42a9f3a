//! Surjectivity of `id × f_C` on `ker(F/p - 1)_tors`, and lifting chains in `Nyg H_tors`.
//!
//! An element of the kernel is determined by its torsion coefficients: an `Nyg H`-vector at
//! each exponent `α < 1` and an `H`-vector `h_α = b_α + ι(a_α)` at each `α ≥ 1`. The kernel
//! conditions and `f_C` both move along orbits `{u p^j}`, so the check runs orbit by orbit.

use std::collections::HashSet;
use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use super::datum::{reduce_orders, FCrystalDatum};
use super::product::ProductElem;
use crate::acris::Profile;
use crate::error::{Error, Result};
use crate::galois_witt::{GaloisRingElem, RingDesc};
use crate::linalg::{
    flatten, flatten_orders, kernel, linearize, mat_vec, relation_rows, solve, unflatten, vec_is_zero, vec_scale,
    vec_sub, zero_vec, Howell, Mat, Vector,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Smooth,
    NotSmooth,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct SmoothnessReport {
    pub verdict: Verdict,
    /// A kernel element with no `f_C`-preimage, when `verdict` is `NotSmooth`.
    pub witness: Option<ProductElem>,
    pub orbits_checked: usize,
    pub reason: String,
}

/// The datum restricted to torsion coordinates.
struct Tors {
    ring: Arc<RingDesc>,
    prime: Arc<RingDesc>,
    nt: Vec<usize>,
    ht: Vec<usize>,
    on: Vec<Option<u32>>,
    oh: Vec<Option<u32>>,
    iota: Mat,
    fp: Mat,
    frob: Mat,
}

fn sub_matrix(a: &Mat, rows: &[usize], cols: &[usize]) -> Mat {
    rows.iter().map(|&i| cols.iter().map(|&j| a[i][j].clone()).collect()).collect()
}

impl Tors {
    fn new(d: &FCrystalDatum) -> Self {
        let nt = d.n_torsion();
        let ht = d.h_torsion();
        Tors {
            ring: d.ring.clone(),
            prime: RingDesc::standard(d.ring.p(), 1, d.ring.n).expect("prime ring"),
            on: nt.iter().map(|&i| d.nyg_orders[i]).collect(),
            oh: ht.iter().map(|&i| d.h_orders[i]).collect(),
            iota: sub_matrix(&d.iota, &ht, &nt),
            fp: sub_matrix(&d.fp, &ht, &nt),
            frob: sub_matrix(&d.frob.matrix, &ht, &ht),
            nt,
            ht,
        }
    }

    fn lin(&self, a: &Mat, v: &[GaloisRingElem]) -> Vector {
        if a.is_empty() {
            return Vec::new();
        }
        reduce_orders(&mat_vec(a, v, &self.ring), &self.oh)
    }

    fn semi(&self, a: &Mat, v: &[GaloisRingElem]) -> Vector {
        let sv: Vector = v.iter().map(|x| x.sigma()).collect();
        self.lin(a, &sv)
    }

    fn embed(&self, v: &[GaloisRingElem], idx: &[usize], dim: usize) -> Vector {
        let mut out = zero_vec(&self.ring, dim);
        for (x, &i) in v.iter().zip(idx) {
            out[i] = x.clone();
        }
        out
    }
}

/// One exponent orbit `u p^j / p^{N_z}`, `j = 0..=J`, recorded by its floors.
struct Orbit<'a> {
    t: &'a Tors,
    floors: Vec<u64>,
}

impl Orbit<'_> {
    fn is_low(&self, j: usize) -> bool {
        self.floors[j] == 0
    }

    fn dim(&self, j: usize) -> usize {
        if self.is_low(j) {
            self.t.nt.len()
        } else {
            self.t.ht.len()
        }
    }

    fn dims(&self, start: usize) -> Vec<usize> {
        (start..self.floors.len()).map(|j| self.dim(j)).collect()
    }

    fn orders(&self, start: usize) -> Vec<Option<u32>> {
        (start..self.floors.len())
            .flat_map(|j| if self.is_low(j) { self.t.on.clone() } else { self.t.oh.clone() })
            .collect()
    }

    fn split<'v>(&self, x: &'v [GaloisRingElem], start: usize) -> Vec<&'v [GaloisRingElem]> {
        let mut parts = Vec::new();
        let mut off = 0;
        for d in self.dims(start) {
            parts.push(&x[off..off + d]);
            off += d;
        }
        parts
    }

    /// `(F/p)(x) - x` position by position, with positions below `start` set to zero.
    fn conditions(&self, x: &[GaloisRingElem], start: usize) -> Vector {
        let t = self.t;
        let parts = self.split(x, start);
        let mut out = Vec::new();
        for (i, xj) in parts.iter().enumerate() {
            let j = start + i;
            let prev = if i > 0 { Some(parts[i - 1]) } else { None };
            let from_prev = match prev {
                None => zero_vec(&t.ring, t.ht.len()),
                Some(y) if self.is_low(j - 1) => t.semi(&t.fp, y),
                Some(y) => {
                    let f = t.semi(&t.frob, y);
                    let k = (self.floors[j - 1] - 1).min(t.ring.n as u64) as u32;
                    reduce_orders(&vec_scale(&f, &t.ring.p_pow(k)), &t.oh)
                }
            };
            let here = if self.is_low(j) { t.lin(&t.iota, xj) } else { xj.to_vec() };
            out.extend(reduce_orders(&vec_sub(&here, &from_prev), &t.oh));
        }
        out
    }

    /// `f_C` on the full window: position `j` moves to `j + 1` with factor `p^{⌊α⌋}`.
    fn fc(&self, x: &[GaloisRingElem]) -> Vector {
        let t = self.t;
        let parts = self.split(x, 0);
        let mut out: Vector = zero_vec(&t.ring, parts[0].len());
        for (j, xj) in parts.iter().enumerate().take(parts.len() - 1) {
            let v = if !self.is_low(j) {
                let k = self.floors[j].min(t.ring.n as u64) as u32;
                reduce_orders(&vec_scale(xj, &t.ring.p_pow(k)), &t.oh)
            } else if self.is_low(j + 1) {
                xj.to_vec()
            } else {
                t.lin(&t.iota, xj)
            };
            out.extend(v);
        }
        out
    }

    /// Generators (flattened over `Z/p^n`) of the kernel supported on positions `≥ start`.
    fn kernel(&self, start: usize) -> Vec<Vector> {
        let t = self.t;
        let dim_in: usize = self.dims(start).iter().sum();
        let dim_out = (self.floors.len() - start) * t.ht.len();
        let lin = linearize(|x| self.conditions(x, start), dim_in, dim_out, &t.ring, &t.prime);
        let m = t.ring.m();
        let out_orders = flatten_orders(&vec![t.oh.clone(); self.floors.len() - start].concat(), m);
        kernel(&lin, dim_in * m, &t.prime, &out_orders).generators()
    }
}

fn witness_elem(d: &FCrystalDatum, t: &Tors, orbit: &Orbit, u: u128, start: usize, y: &[GaloisRingElem], profile: &Profile) -> ProductElem {
    let p = profile.p() as u128;
    let mut e = ProductElem::zero(profile);
    for (i, xj) in orbit.split(y, start).into_iter().enumerate() {
        if vec_is_zero(xj) {
            continue;
        }
        let key = (u * p.pow(i as u32)) as u64;
        if orbit.is_low(start + i) {
            e.add_a(d, key, t.embed(xj, &t.nt, d.dim_n()));
        } else {
            e.add_b(d, key, t.embed(xj, &t.ht, d.dim_h())).expect("exponent ≥ 1");
        }
    }
    e
}

/// Decide whether `id × f_C` is surjective on `ker(F/p - 1)_tors`, for kernel elements with
/// exponent denominators up to `p^depth` and exponents up to `cap`. Preimages are searched
/// with `depth + 1` extra digits of denominator.
pub fn smoothness_predicate(d: &FCrystalDatum, depth: u32, cap: u64) -> Result<SmoothnessReport> {
    let p = d.ring.p();
    let e = d.torsion_exponent() as u64;
    let profile = Profile::new(d.ring.clone(), depth, cap)?;
    let t = Tors::new(d);
    let extra = depth + 1;
    let zdepth = depth + extra;
    let zlimit = cap as u128 * (p as u128).pow(zdepth);
    if zlimit >= 1u128 << 62 {
        return Err(Error::InvalidParameter(format!("window N={depth}, D={cap} is too large")));
    }
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let mut checked = 0;
    let ulimit = cap as u128 * (p as u128).pow(depth);
    for u in 1..=ulimit {
        if u % p as u128 == 0 {
            continue;
        }
        let mut floors = Vec::new();
        let mut k = u;
        while k <= zlimit {
            floors.push((k / (p as u128).pow(zdepth)) as u64);
            k *= p as u128;
        }
        if floors.len() <= extra as usize || !seen.insert(floors.clone()) {
            continue;
        }
        checked += 1;
        let orbit = Orbit { t: &t, floors };
        let ky = orbit.kernel(extra as usize);
        if ky.is_empty() {
            continue;
        }
        let kz = orbit.kernel(0);
        let mut images: Vec<Vector> = kz
            .iter()
            .map(|g| flatten(&orbit.fc(&unflatten(g, &t.ring)), &t.prime))
            .collect();
        images.extend(relation_rows(&t.prime, &flatten_orders(&orbit.orders(0), t.ring.m())));
        let width: usize = orbit.dims(0).iter().sum::<usize>() * t.ring.m();
        let span = Howell::new(&t.prime, width, &images);
        let pad: usize = orbit.dims(0)[..extra as usize].iter().sum::<usize>() * t.ring.m();
        for y in &ky {
            let mut full = zero_vec(&t.prime, pad);
            full.extend(y.iter().cloned());
            if !span.contains(&full) {
                let w = witness_elem(d, &t, &orbit, u, extra as usize, &unflatten(y, &t.ring), &profile);
                return Ok(SmoothnessReport {
                    verdict: Verdict::NotSmooth,
                    witness: Some(w),
                    orbits_checked: checked,
                    reason: format!("kernel element on the orbit of {u}/p^{depth} has no f_C-preimage"),
                });
            }
        }
    }
    if cap < p * (e + 1) || depth < 2 {
        return Ok(SmoothnessReport {
            verdict: Verdict::Inconclusive,
            witness: None,
            orbits_checked: checked,
            reason: format!("no obstruction found, but the window needs D ≥ {} and N ≥ 2", p * (e + 1)),
        });
    }
    Ok(SmoothnessReport {
        verdict: Verdict::Smooth,
        witness: None,
        orbits_checked: checked,
        reason: "every kernel generator has an f_C-preimage".into(),
    })
}

/// Solution sets `S_j = x_j + G_j` of the chain relations, each a coset of a `W`-submodule of
/// `Nyg H_tors`.
struct ChainSets {
    cosets: Vec<(Vector, Vec<Vector>)>,
}

fn restrict(v: &[GaloisRingElem], idx: &[usize]) -> Vector {
    idx.iter().map(|&i| v[i].clone()).collect()
}

fn propagate(t: &Tors, a: &[GaloisRingElem], len: usize) -> Option<ChainSets> {
    let nn = t.nt.len();
    let rel = relation_rows(&t.ring, &t.on);
    let mut cosets = vec![(a.to_vec(), rel.clone())];
    for _ in 1..len {
        let (x, g) = cosets.last().unwrap();
        let mut cols: Vec<Vector> = (0..nn).map(|j| t.iota.iter().map(|r| r[j].clone()).collect()).collect();
        cols.extend(g.iter().map(|gi| t.semi(&t.fp, gi).iter().map(|c| c.neg()).collect::<Vector>()));
        let ncols = cols.len();
        let m: Mat = (0..t.ht.len()).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
        let y0 = t.semi(&t.fp, x);
        let sol = if t.ht.is_empty() {
            zero_vec(&t.ring, ncols)
        } else {
            solve(&m, ncols, &t.ring, &t.oh, &y0)?
        };
        let mut gens: Vec<Vector> = if t.ht.is_empty() {
            (0..nn).map(|j| { let mut v = zero_vec(&t.ring, nn); v[j] = t.ring.one(); v }).collect()
        } else {
            kernel(&m, ncols, &t.ring, &t.oh).generators().iter().map(|k| k[..nn].to_vec()).collect()
        };
        gens.extend(rel.iter().cloned());
        gens.retain(|v| !vec_is_zero(v));
        cosets.push((reduce_orders(&sol[..nn], &t.on), gens));
    }
    Some(ChainSets { cosets })
}

fn check_chain_input(d: &FCrystalDatum, a: &[GaloisRingElem]) -> Result<()> {
    if a.len() != d.dim_n() || !d.is_n_torsion(a) || !vec_is_zero(&d.apply_iota(a)) {
        return Err(Error::InvalidParameter("chain start must be a torsion element of V".into()));
    }
    Ok(())
}

/// Whether `a` starts a chain `a = a_1, …, a_len` in `Nyg H_tors` with `(F/p)(a_j) = ι(a_{j+1})`.
pub fn lifting_chain_exists(d: &FCrystalDatum, a: &[GaloisRingElem], len: usize) -> Result<bool> {
    check_chain_input(d, a)?;
    if len <= 1 {
        return Ok(true);
    }
    let t = Tors::new(d);
    Ok(propagate(&t, &restrict(a, &t.nt), len).is_some())
}

/// An explicit chain of length `len` starting at `a`, with the last element drawn at random
/// from its solution set.
pub fn lifting_chain<R: Rng + ?Sized>(d: &FCrystalDatum, a: &[GaloisRingElem], len: usize, rng: &mut R) -> Result<Option<Vec<Vector>>> {
    check_chain_input(d, a)?;
    if len == 0 {
        return Ok(Some(Vec::new()));
    }
    let t = Tors::new(d);
    let Some(sets) = propagate(&t, &restrict(a, &t.nt), len) else { return Ok(None) };
    let (x, g) = sets.cosets.last().unwrap();
    let mut cur = x.clone();
    for gi in g {
        cur = crate::linalg::vec_add(&cur, &vec_scale(gi, &t.ring.random(rng)));
    }
    let mut chain = vec![reduce_orders(&cur, &t.on)];
    for j in (0..len - 1).rev() {
        let (x, g) = &sets.cosets[j];
        let target = vec_sub(&t.lin(&t.iota, chain.last().unwrap()), &t.semi(&t.fp, x));
        let cols: Vec<Vector> = g.iter().map(|gi| t.semi(&t.fp, gi)).collect();
        let m: Mat = (0..t.ht.len()).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
        let nu = if t.ht.is_empty() || cols.is_empty() {
            zero_vec(&t.ring, cols.len())
        } else {
            solve(&m, cols.len(), &t.ring, &t.oh, &target).ok_or_else(|| Error::Malformed("chain backtracking failed".into()))?
        };
        let mut prev = x.clone();
        for (gi, c) in g.iter().zip(&nu) {
            prev = crate::linalg::vec_add(&prev, &vec_scale(gi, &c.sigma_inv()));
        }
        chain.push(reduce_orders(&prev, &t.on));
    }
    chain.reverse();
    Ok(Some(chain.iter().map(|v| t.embed(v, &t.nt, d.dim_n())).collect()))
}

