use std::sync::Arc;

use serde::Serialize;

use super::poly::HomogPoly;
use crate::galois_witt::{FieldDesc, FqElem};
use crate::linalg::{det_fq, mat_mul_fq, rank_fq};

/// Hasse–Witt matrix on the monomial basis of `H^{n-1}(O)` of a hypersurface in `P^n`.
/// It acts semilinearly: `F(v) = M · v^{(p)}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HWMatrix {
    pub field: Arc<FieldDesc>,
    /// Exponent tuples `A` with every `A_i ≥ 1` and `Σ A_i = d`.
    pub basis: Vec<Vec<u32>>,
    pub matrix: Vec<Vec<FqElem>>,
}

#[derive(Serialize)]
struct HWJson<'a> {
    p: u64,
    m: usize,
    basis: &'a [Vec<u32>],
    matrix: Vec<Vec<Vec<u64>>>,
    semilinear: &'static str,
}

impl Serialize for HWMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        HWJson {
            p: self.field.p,
            m: self.field.m,
            basis: &self.basis,
            matrix: self.matrix.iter().map(|r| r.iter().map(|c| c.c.clone()).collect()).collect(),
            semilinear: "p-linear",
        }
        .serialize(s)
    }
}

/// All `e ∈ N^k` with `e_i ≥ low` and `Σ e_i = total`, in lexicographic order.
pub fn compositions(k: usize, total: u32, low: u32) -> Vec<Vec<u32>> {
    fn go(k: usize, total: u32, low: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k == 1 {
            if total >= low {
                prefix.push(total);
                out.push(prefix.clone());
                prefix.pop();
            }
            return;
        }
        let rest_min = low * (k as u32 - 1);
        if total < rest_min {
            return;
        }
        for first in low..=total - rest_min {
            prefix.push(first);
            go(k - 1, total - first, low, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if k > 0 {
        go(k, total, low, &mut Vec::new(), &mut out);
    }
    out
}

/// Entry `(A, B)` is the coefficient of `x^{pB - A}` in `f^{p-1}`.
pub fn hw_matrix(f: &HomogPoly) -> HWMatrix {
    let p = f.field.p;
    let basis = compositions(f.nvars, f.degree, 1);
    if basis.is_empty() {
        return HWMatrix { field: f.field.clone(), basis, matrix: vec![] };
    }
    let g = f.pow(p - 1);
    let matrix = basis
        .iter()
        .map(|a| {
            basis
                .iter()
                .map(|b| {
                    let e: Option<Vec<u32>> =
                        a.iter().zip(b).map(|(&ai, &bi)| (p as u32 * bi).checked_sub(ai)).collect();
                    e.map_or_else(|| f.field.zero(), |e| g.coeff(&e))
                })
                .collect()
        })
        .collect();
    HWMatrix { field: f.field.clone(), basis, matrix }
}

impl HWMatrix {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn frobenius_entries(m: &[Vec<FqElem>]) -> Vec<Vec<FqElem>> {
        m.iter().map(|r| r.iter().map(FqElem::frobenius).collect()).collect()
    }

    /// Linear part of `F^k`: `M σ(M) ⋯ σ^{k-1}(M)`.
    pub fn iterate(&self, k: usize) -> Vec<Vec<FqElem>> {
        let s = self.dim();
        let mut acc: Vec<Vec<FqElem>> =
            (0..s).map(|i| (0..s).map(|j| if i == j { self.field.one() } else { self.field.zero() }).collect()).collect();
        let mut twist = self.matrix.clone();
        for _ in 0..k {
            acc = mat_mul_fq(&acc, &twist);
            twist = Self::frobenius_entries(&twist);
        }
        acc
    }
}

pub fn hw_invertible(h: &HWMatrix) -> bool {
    h.dim() == 0 || det_fq(&h.matrix).is_some_and(|d| !d.is_zero())
}

/// Dimension of the part on which Frobenius is bijective.
pub fn hw_stable_rank(h: &HWMatrix) -> usize {
    if h.dim() == 0 {
        return 0;
    }
    rank_fq(&h.iterate(h.dim() * h.field.m))
}
