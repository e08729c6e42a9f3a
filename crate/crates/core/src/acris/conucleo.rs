//! Solvers for `p^{r-s}F^s(a) - a = b` and `a - f_C(a) = b`.

use serde::{Deserialize, Serialize};

use super::exponent::PExponent;
use super::series::DPSeries;
use crate::arith::{gcd, pow_u64};
use crate::error::{Error, Result};
use crate::galois_witt::GaloisRingElem;

/// Coprime `(r, s)` with `s > 0`: the slope `r/s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RSPair {
    pub r: u32,
    pub s: u32,
}

impl RSPair {
    pub fn new(r: u32, s: u32) -> Result<Self> {
        if s == 0 || gcd(r as u64, s as u64) != 1 {
            return Err(Error::InvalidParameter(format!("({r}, {s}) is not a coprime pair with s > 0")));
        }
        Ok(RSPair { r, s })
    }

    /// `s - r` as a signed integer.
    pub fn gap(&self) -> i64 {
        self.s as i64 - self.r as i64
    }
}

/// `Σ_{i<s} ⌊α p^i⌋` for a scaled exponent.
fn weight(key: u64, s: u32, p: u64, scale: u64) -> i64 {
    let mut k = key as u128;
    let mut t = 0i64;
    for _ in 0..s {
        t += (k / scale as u128) as i64;
        k *= p as u128;
    }
    t
}

/// `M(a) = p^{r-s} F^s(a) - a`. When `s > r` the result loses `s - r` digits of precision;
/// fails if `a` is not in `A^{r,s}`.
pub fn apply_m(a: &DPSeries, rs: RSPair) -> Result<DPSeries> {
    let f = a.frobenius_pow(rs.s);
    if rs.r >= rs.s {
        return f.mul_p_pow(rs.r - rs.s).sub(a);
    }
    let k = rs.s - rs.r;
    let q = f.div_p_pow(k)?;
    q.sub(&a.to_precision(q.profile.precision())?)
}

/// A preimage `a ∈ A^{r,s}` with `M(a) ≡ b (mod p A_cris)`, built monomial by monomial.
pub fn conucleo_solve(b: &DPSeries, rs: RSPair) -> Result<DPSeries> {
    let pr = &b.profile;
    let p = pr.p();
    let ps = pow_u64(p, rs.s);
    let gap = rs.gap();
    let mut out = DPSeries::zero(pr);
    for (&key0, coeff) in &b.terms {
        let residue = coeff.reduce();
        if residue.is_zero() {
            continue;
        }
        let mut key = key0;
        let mut beta: GaloisRingElem = pr.ring.lift(&residue);
        loop {
            let t = weight(key, rs.s, p, pr.scale());
            if t > gap {
                out.push(key, beta.neg());
                break;
            }
            if t == gap {
                if key == 0 {
                    return Err(Error::ConstantTerm(format!(
                        "F^{} - 1 on constants of W(F_q) is not surjective",
                        rs.s
                    )));
                }
                out.push(key, beta.neg());
                key = key.saturating_mul(ps);
                if key > pr.limit() {
                    break;
                }
                beta = beta.sigma_pow(rs.s as i64);
                continue;
            }
            if key % ps != 0 {
                let target = PExponent::new(key, pr.depth + rs.s, p);
                return Err(Error::TruncationExhausted { exponent: target.to_string(), needed_depth: target.v });
            }
            let low = key / ps;
            let ell = gap - weight(low, rs.s, p, pr.scale());
            debug_assert!(ell >= 1);
            out.push(low, beta.sigma_pow(-(rs.s as i64)).mul_p_pow(ell as u32));
            break;
        }
    }
    Ok(out)
}

/// `x` with `x - f_C(x) = b`, as the finite sum `b + f_C(b) + f_C^2(b) + …`.
/// Only the augmentation ideal is handled: a constant term is refused.
pub fn fc_minus_one_solve(b: &DPSeries) -> Result<DPSeries> {
    if !b.constant_term().is_zero() {
        return Err(Error::ConstantTerm(
            "1 - F on constants needs an algebraically closed residue field".into(),
        ));
    }
    let mut x = b.clone();
    let mut term = b.clone();
    loop {
        term = term.fc();
        if term.is_zero() {
            break;
        }
        x = x.add(&term)?;
    }
    x.truncated = b.truncated;
    Ok(x)
}
