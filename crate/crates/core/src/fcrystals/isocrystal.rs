//! `(F ⊗ F)/p - 1` on `M ⊗ A_cris[1/p]` for the simple isocrystal of slope `r/s`.
//!
//! The basis is `x_1, …, x_s` with `F(x_k) = x_{k+1}` and `F(x_s) = p^r x_1`; an element is
//! `Σ x_k ⊗ a_k`.

use std::fmt;

use crate::acris::{apply_m, conucleo_solve, DPSeries, RSPair};
use crate::error::{Error, Result};

/// `p^shift · body`, known modulo `p^{shift + n}` where `n` is the body precision.
#[derive(Debug, Clone, PartialEq)]
pub struct QSeries {
    pub shift: i32,
    pub body: DPSeries,
}

impl QSeries {
    pub fn integral(body: DPSeries) -> Self {
        QSeries { shift: 0, body }
    }

    pub fn abs_precision(&self) -> i32 {
        self.shift + self.body.profile.precision() as i32
    }

    pub fn is_zero(&self) -> bool {
        self.body.is_zero()
    }

    pub fn mul_p_pow(&self, k: i32) -> Self {
        QSeries { shift: self.shift + k, body: self.body.clone() }
    }

    pub fn frobenius(&self) -> Self {
        QSeries { shift: self.shift, body: self.body.frobenius() }
    }

    /// The same element written as `p^shift · body'`, for `shift <= self.shift`, at absolute
    /// precision `abs`.
    fn at(&self, shift: i32, abs: i32) -> Result<DPSeries> {
        let n = abs - shift;
        if n <= 0 {
            return Err(Error::InsufficientPrecision(format!("absolute precision {abs} below p^{shift}")));
        }
        let d = (self.shift - shift) as u32;
        let lifted = self.body.to_precision(n as u32)?;
        Ok(lifted.mul_p_pow(d))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let shift = self.shift.min(other.shift);
        let abs = self.abs_precision().min(other.abs_precision());
        let body = self.at(shift, abs)?.sub(&other.at(shift, abs)?)?;
        Ok(QSeries { shift, body })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let shift = self.shift.min(other.shift);
        let abs = self.abs_precision().min(other.abs_precision());
        let body = self.at(shift, abs)?.add(&other.at(shift, abs)?)?;
        Ok(QSeries { shift, body })
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p^{}·({}) mod p^{}", self.shift, self.body, self.abs_precision())
    }
}

/// `((F ⊗ F)/p - 1)(Σ x_k ⊗ a_k)` in the cyclic basis.
pub fn isocrystal_apply(rs: RSPair, a: &[QSeries]) -> Result<Vec<QSeries>> {
    let s = rs.s as usize;
    if a.len() != s {
        return Err(Error::LengthMismatch { left: a.len(), right: s });
    }
    let mut out = Vec::with_capacity(s);
    out.push(a[s - 1].frobenius().mul_p_pow(rs.r as i32 - 1).sub(&a[0])?);
    for k in 1..s {
        out.push(a[k - 1].frobenius().mul_p_pow(-1).sub(&a[k])?);
    }
    Ok(out)
}

/// `((F ⊗ F)/p - 1)(a) - b`, at the profile of `a`.
pub fn isocrystal_residual(rs: RSPair, a: &[QSeries], b: &[DPSeries]) -> Result<Vec<QSeries>> {
    isocrystal_apply(rs, a)?
        .iter()
        .zip(b)
        .map(|(x, y)| {
            let target = x.body.profile.with_ring(y.profile.ring.clone());
            x.sub(&QSeries::integral(y.reprofile(&target)?))
        })
        .collect()
}

/// Exact solution of `p^{r-s} F^s(y) - y = c` by successive approximation with
/// [`conucleo_solve`]. `c` must live at a profile deep enough for the descent.
fn solve_m_exact(c: &DPSeries, rs: RSPair, n: u32) -> Result<DPSeries> {
    let work = c.profile.precision();
    let mut y = DPSeries::zero(&c.profile);
    let mut res = c.to_precision(n)?;
    for k in 0..n {
        if res.is_zero() {
            break;
        }
        if res.valuation() < k {
            return Err(Error::InsufficientPrecision("approximation failed to gain a digit".into()));
        }
        let digit = res.div_p_pow(k)?.to_precision(1)?.to_precision(work)?;
        let yk = conucleo_solve(&digit, rs)?;
        y = y.add(&yk.mul_p_pow(k))?;
        res = c.to_precision(n)?.sub(&apply_m(&y, rs)?.to_precision(n)?)?;
    }
    if !res.is_zero() {
        return Err(Error::InsufficientPrecision("residual did not vanish".into()));
    }
    y.truncated |= c.truncated;
    Ok(y)
}

/// `a` with `((F ⊗ F)/p - 1)(a) = b`. The answer is exact at absolute precision `n - s + 1`
/// and lives at a deeper profile (`N + s(n + 1)` denominators).
pub fn isocrystal_solve(rs: RSPair, b: &[DPSeries]) -> Result<Vec<QSeries>> {
    let s = rs.s as usize;
    if b.len() != s {
        return Err(Error::LengthMismatch { left: b.len(), right: s });
    }
    let pr = &b[0].profile;
    if b.iter().any(|x| x.profile != *pr) {
        return Err(Error::ProfileMismatch);
    }
    let n = pr.precision();
    if n < rs.s {
        return Err(Error::InsufficientPrecision(format!("precision {n} below the period {}", rs.s)));
    }
    let g = rs.s.saturating_sub(rs.r);
    let deep = pr.with_depth_cap(pr.depth + rs.s * (n + 1), pr.cap)?;
    let work = deep.with_precision(n + g)?;
    // c = Σ_j p^{j-1} F^{s-j}(b_j)
    let mut c = DPSeries::zero(&work);
    for (j, bj) in b.iter().enumerate() {
        let t = bj.reprofile(&deep)?.to_precision(n + g)?;
        c = c.add(&t.frobenius_pow((s - 1 - j) as u32).mul_p_pow(j as u32))?;
    }
    let y = solve_m_exact(&c, rs, n)?;
    let bq: Vec<QSeries> = b
        .iter()
        .map(|x| x.reprofile(&deep).map(QSeries::integral))
        .collect::<Result<_>>()?;
    let a_s = QSeries { shift: 1 - rs.s as i32, body: y };
    if s == 1 {
        return Ok(vec![a_s]);
    }
    let mut a = Vec::with_capacity(s);
    a.push(a_s.frobenius().mul_p_pow(rs.r as i32 - 1).sub(&bq[0])?);
    for k in 1..s - 1 {
        let next = a[k - 1].frobenius().mul_p_pow(-1).sub(&bq[k])?;
        a.push(next);
    }
    a.push(a_s);
    Ok(a)
}
