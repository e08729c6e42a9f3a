use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use super::hw::compositions;
use super::poly::HomogPoly;
use crate::error::{Error, Result};
use crate::galois_witt::{FieldDesc, FqElem};
use crate::linalg::rank_fq;

/// The τ-invariant form of even degree `d1` in `P^n` over `F_2`:
/// `x0^{d1/2} x1^{d1/2} + ε + x2^{d1} + Σ_{i=2}^{n-1} x_i x_{i+1}^{d1-1} + x_n (x0^{d1-1} + x1^{d1-1})`,
/// with `ε = 0` when `d1/2` is odd and `ε = x2^{d1-2m} (x0 x1)^m` when `d1 = 2^s m`, `m` odd, `s ≥ 2`.
pub fn paper_hypersurface(d1: u32, n: usize) -> Result<HomogPoly> {
    if d1 % 2 == 1 {
        return Err(Error::InvalidParameter(format!("degree {d1} is odd: use the Fermat hypersurface instead")));
    }
    if d1 < 2 || n < 3 {
        return Err(Error::InvalidParameter(format!("need even d1 ≥ 2 and n ≥ 3, got d1 = {d1}, n = {n}")));
    }
    let k = FieldDesc::new(2, 1)?;
    let nv = n + 1;
    let mono = |pairs: &[(usize, u32)]| {
        let mut e = vec![0; nv];
        for &(i, k) in pairs {
            e[i] += k;
        }
        (e, FieldDesc::one(&k))
    };
    let h = d1 / 2;
    let mut terms = vec![mono(&[(0, h), (1, h)]), mono(&[(2, d1)])];
    if h.is_multiple_of(2) {
        let m = d1 >> d1.trailing_zeros();
        terms.push(mono(&[(2, d1 - 2 * m), (0, m), (1, m)]));
    }
    for i in 2..n {
        terms.push(mono(&[(i, 1), (i + 1, d1 - 1)]));
    }
    terms.push(mono(&[(n, 1), (0, d1 - 1)]));
    terms.push(mono(&[(n, 1), (1, d1 - 1)]));
    HomogPoly::from_terms(&k, nv, d1, terms)
}

/// `Σ x_i^d`.
pub fn fermat(field: &Arc<FieldDesc>, n: usize, d: u32) -> HomogPoly {
    let terms = (0..=n)
        .map(|i| {
            let mut e = vec![0; n + 1];
            e[i] = d;
            (e, field.one())
        })
        .collect();
    HomogPoly::from_terms(field, n + 1, d, terms).expect("monomials of degree d")
}

/// Random form fixed by `x0 ↔ x1`.
pub fn sample_tau_invariant<R: Rng + ?Sized>(field: &Arc<FieldDesc>, n: usize, d: u32, rng: &mut R) -> HomogPoly {
    let mut f = HomogPoly::zero(field, n + 1, d);
    for e in compositions(n + 1, d, 0) {
        if e[0] < e[1] {
            continue;
        }
        let c = field.random(rng);
        let mut orbit = HomogPoly::monomial(field, e.clone(), c.clone());
        if e[0] != e[1] {
            let mut s = e.clone();
            s.swap(0, 1);
            orbit = orbit.add(&HomogPoly::monomial(field, s, c)).expect("same ring");
        }
        f = f.add(&orbit).expect("same degree");
    }
    f
}

/// Every `min(#forms, n+1)` of the linear forms are independent.
pub fn general_position(forms: &[Vec<FqElem>], nvars: usize) -> bool {
    let k = forms.len().min(nvars);
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        let rows: Vec<Vec<FqElem>> = idx.iter().map(|&i| forms[i].clone()).collect();
        if rank_fq(&rows) < k {
            return false;
        }
        // next k-subset
        let mut i = k;
        loop {
            if i == 0 {
                return true;
            }
            i -= 1;
            if idx[i] < forms.len() - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Union of hyperplanes and the field it was found over.
#[derive(Debug, Clone, Serialize)]
pub struct HyperplaneUnion {
    pub m: usize,
    pub forms: Vec<Vec<Vec<u64>>>,
    pub poly: HomogPoly,
}

fn product_of(field: &Arc<FieldDesc>, forms: &[Vec<FqElem>], nvars: usize) -> HomogPoly {
    forms.iter().fold(HomogPoly::one(field, nvars), |acc, l| acc.mul(&HomogPoly::linear(field, l)).expect("same ring"))
}

fn build_union<R: Rng + ?Sized>(
    p: u64,
    n: usize,
    d: u32,
    rng: &mut R,
    tries_per_field: usize,
    max_m: usize,
    draw: impl Fn(&Arc<FieldDesc>, &mut R) -> Vec<Vec<FqElem>>,
) -> Result<HyperplaneUnion> {
    for m in 1..=max_m {
        let field = FieldDesc::new(p, m)?;
        for _ in 0..tries_per_field {
            let forms = draw(&field, rng);
            if general_position(&forms, n + 1) {
                return Ok(HyperplaneUnion {
                    m,
                    forms: forms.iter().map(|l| l.iter().map(|c| c.c.clone()).collect()).collect(),
                    poly: product_of(&field, &forms, n + 1),
                });
            }
        }
    }
    Err(Error::BudgetExceeded(format!("no {d} hyperplanes in general position in P^{n} over F_{p}^m, m ≤ {max_m}")))
}

/// Product of `d` random linear forms in general position, enlarging `F_{p^m}` when needed.
pub fn union_of_hyperplanes<R: Rng + ?Sized>(p: u64, n: usize, d: u32, rng: &mut R) -> Result<HyperplaneUnion> {
    build_union(p, n, d, rng, 200, 6, |field, rng| {
        (0..d).map(|_| (0..=n).map(|_| field.random(rng)).collect()).collect()
    })
}

/// As [`union_of_hyperplanes`], with the set of hyperplanes stable under `x0 ↔ x1`: one
/// swapped pair and `d - 2` fixed forms (a single fixed form when `d = 1`).
///
/// In characteristic 2, `L + τL` is a multiple of `x0 + x1`, so two swapped pairs are always
/// dependent and fixed forms span only `n` dimensions; general position then forces `d ≤ n + 2`.
pub fn tau_invariant_union<R: Rng + ?Sized>(p: u64, n: usize, d: u32, rng: &mut R) -> Result<HyperplaneUnion> {
    if p == 2 && d as usize > n + 2 {
        return Err(Error::InvalidParameter(format!(
            "no τ-stable set of {d} hyperplanes in general position in P^{n} in characteristic 2 (need d ≤ n + 2)"
        )));
    }
    build_union(p, n, d, rng, 200, 6, |field, rng| {
        let mut forms = Vec::new();
        if d >= 2 {
            let l: Vec<FqElem> = (0..=n).map(|_| field.random(rng)).collect();
            let mut s = l.clone();
            s.swap(0, 1);
            forms.push(l);
            forms.push(s);
        }
        while forms.len() < d as usize {
            let mut l: Vec<FqElem> = (0..=n).map(|_| field.random(rng)).collect();
            l[1] = l[0].clone();
            forms.push(l);
        }
        forms
    })
}

/// Image of a root of the defining polynomial of `base` in `target`.
pub fn embedding(base: &Arc<FieldDesc>, target: &Arc<FieldDesc>) -> Result<impl Fn(&FqElem) -> FqElem> {
    if base.p != target.p || !target.m.is_multiple_of(base.m) {
        return Err(Error::InvalidParameter(format!(
            "F_{}^{} does not embed in F_{}^{}",
            base.p, base.m, target.p, target.m
        )));
    }
    let eval = |x: &FqElem| {
        base.modulus.iter().rev().fold(target.zero(), |acc, &c| acc.mul(x).add(&target.from_int(c as i64)))
    };
    let root = if base.m == 1 {
        target.zero()
    } else {
        target.elements().find(|x| eval(x).is_zero()).expect("finite fields of the same characteristic embed")
    };
    let target = target.clone();
    Ok(move |c: &FqElem| {
        let mut acc = target.zero();
        let mut pw = target.one();
        for &k in &c.c {
            acc = acc.add(&pw.mul(&target.from_int(k as i64)));
            pw = pw.mul(&root);
        }
        acc
    })
}

/// Points of `P^n(F_{p^m})` where `f` and every partial derivative vanish.
#[derive(Debug, Clone, Serialize)]
pub struct SingularScan {
    /// `(m, coordinates)`, coordinates normalised so the first nonzero one is 1.
    pub points: Vec<(usize, Vec<Vec<u64>>)>,
    /// Largest `m` whose field was scanned completely.
    pub scanned_up_to: usize,
    pub complete: bool,
    pub points_checked: u64,
}

/// Exhaustive Jacobian scan over `F_{p^m}` for `m ≤ m_max` divisible by the degree of the
/// coefficient field, stopping once `budget` points have been tested. An empty result only
/// rules out singular points with coordinates in these fields.
pub fn singular_point_search(f: &HomogPoly, m_max: usize, budget: u64) -> Result<SingularScan> {
    let base = f.field.clone();
    let n1 = f.nvars;
    let mut scan = SingularScan { points: vec![], scanned_up_to: 0, complete: true, points_checked: 0 };
    for m in (base.m..=m_max).filter(|m| m % base.m == 0) {
        let target = FieldDesc::new(base.p, m)?;
        let phi = embedding(&base, &target)?;
        let g = f.map_coefficients(&target, &phi);
        let mut system = vec![g.clone()];
        system.extend((0..n1).map(|i| g.partial(i)).filter(|h| !h.is_zero()));
        let q = target.order();
        for lead in 0..n1 {
            let free = (n1 - lead - 1) as u32;
            let count = q.checked_pow(free).ok_or_else(|| Error::BudgetExceeded("point count overflows".into()))?;
            for idx in 0..count {
                if scan.points_checked >= budget {
                    scan.complete = false;
                    return Ok(scan);
                }
                scan.points_checked += 1;
                let mut x = vec![target.zero(); n1];
                x[lead] = target.one();
                let mut r = idx;
                for slot in x.iter_mut().skip(lead + 1) {
                    *slot = target.element(r % q);
                    r /= q;
                }
                if system.iter().all(|h| h.eval(&x).is_zero()) {
                    scan.points.push((m, x.iter().map(|c| c.c.clone()).collect()));
                }
            }
        }
        scan.scanned_up_to = m;
    }
    Ok(scan)
}
