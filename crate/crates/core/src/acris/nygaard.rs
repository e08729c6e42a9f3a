//! Nygaard filtration membership tests.

use super::conucleo::RSPair;
use super::series::{DPSeries, Profile};
use crate::arith::pow_u64;
use crate::error::{Error, Result};
use crate::galois_witt::{witt_coordinates, CommRing, TruncC, TruncDesc, WittArith, WittVector};

/// `p | b_α` for every `α < 1`.
pub fn nygaard_contains(a: &DPSeries) -> bool {
    let scale = a.profile.scale();
    a.terms.iter().filter(|(&k, _)| k < scale).all(|(_, b)| b.valuation() >= 1)
}

/// Profile wide enough that `F^level` drops nothing.
fn widened(a: &DPSeries, level: u32) -> Result<DPSeries> {
    let pr = &a.profile;
    let cap = pr
        .cap
        .checked_mul(pow_u64(pr.p(), level))
        .ok_or_else(|| Error::InsufficientPrecision(format!("cap {} too large for level {level}", pr.cap)))?;
    let wide = Profile::new(pr.ring.clone(), pr.depth, cap).map_err(|_| {
        Error::InsufficientPrecision(format!(
            "level {level} needs degree cap {} at depth {}",
            cap, pr.depth
        ))
    })?;
    a.reprofile(&wide)
}

fn check_level(a: &DPSeries, level: u32) -> Result<()> {
    if level == 0 {
        return Err(Error::InvalidParameter("level must be positive".into()));
    }
    let n = a.profile.precision();
    if n <= level {
        return Err(Error::InsufficientPrecision(format!(
            "level {level} needs coefficient precision at least {}, have {n}",
            level + 1
        )));
    }
    Ok(())
}

/// Modified Nygaard membership via `p^i | F^i(a)` for `1 ≤ i ≤ level`.
pub fn nygaard_modified_contains(a: &DPSeries, level: u32) -> Result<bool> {
    check_level(a, level)?;
    let mut f = widened(a, level)?;
    for i in 1..=level {
        f = f.frobenius();
        if f.valuation() < i {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Image of `a` in `W_level(C)` with `C = F_q[x^{1/p^N}]/(x)`.
pub fn witt_image(a: &DPSeries, level: u32, arith: &WittArith) -> Result<WittVector<TruncC>> {
    let pr = &a.profile;
    let p = pr.p();
    if arith.p != p || arith.n < level as usize {
        return Err(Error::InvalidParameter("Witt arithmetic does not match p/level".into()));
    }
    let desc = TruncDesc::new(pr.ring.field.clone(), pr.depth, 1);
    let zero = desc.zero();
    let mut acc = WittVector::new(vec![zero.clone(); level as usize]);
    for (&key, b) in &a.terms {
        // x^{<α>} with α ≥ 1 maps to 0
        if key >= pr.scale() {
            continue;
        }
        let coords = witt_coordinates(b, level as usize);
        let comps: Vec<TruncC> = coords
            .into_iter()
            .enumerate()
            .map(|(i, c)| desc.monomial(key.saturating_mul(pow_u64(p, i as u32)), c))
            .collect();
        let w = WittVector::new(comps);
        if !w.is_zero() {
            acc = arith.add(&acc, &w)?;
        }
    }
    debug_assert!(acc.comps.iter().all(|c| c.char_p() == Some(p)));
    Ok(acc)
}

/// Modified Nygaard membership as the kernel of `A_cris(C) → W_level(C)`.
pub fn nygaard_modified_kernel(a: &DPSeries, level: u32, arith: &WittArith) -> Result<bool> {
    check_level(a, level)?;
    Ok(witt_image(a, level, arith)?.is_zero())
}

/// `p^{r-s} F^s(a)` has no negative powers of `p`.
pub fn ars_contains(a: &DPSeries, rs: RSPair) -> Result<bool> {
    if rs.r >= rs.s {
        return Ok(true);
    }
    let need = rs.s - rs.r;
    if a.profile.precision() <= need {
        return Err(Error::InsufficientPrecision(format!(
            "checking divisibility by p^{need} at precision {}",
            a.profile.precision()
        )));
    }
    let f = widened(a, rs.s)?.frobenius_pow(rs.s);
    Ok(f.valuation() >= need)
}
