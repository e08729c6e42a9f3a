//! Exponents `α = u / p^v` in `Z_+[1/p]`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{legendre, pow_u64};

/// A normalized nonnegative element of `Z[1/p]`: `p ∤ u` or `v = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PExponent {
    pub u: u64,
    pub v: u32,
    pub p: u64,
}

impl PExponent {
    pub fn new(u: u64, v: u32, p: u64) -> Self {
        let (mut u, mut v) = (u, v);
        if u == 0 {
            v = 0;
        }
        while v > 0 && u % p == 0 {
            u /= p;
            v -= 1;
        }
        PExponent { u, v, p }
    }

    pub fn integer(k: u64, p: u64) -> Self {
        PExponent { u: k, v: 0, p }
    }

    /// From an integer numerator over `p^depth`.
    pub fn from_scaled(key: u64, depth: u32, p: u64) -> Self {
        Self::new(key, depth, p)
    }

    /// Numerator over `p^depth`; `None` if the denominator is deeper.
    pub fn scaled(&self, depth: u32) -> Option<u64> {
        if self.v > depth {
            return None;
        }
        self.u.checked_mul(pow_u64(self.p, depth - self.v))
    }

    pub fn floor(&self) -> u64 {
        self.u / pow_u64(self.p, self.v)
    }

    pub fn is_zero(&self) -> bool {
        self.u == 0
    }

    pub fn mul_p(&self) -> Self {
        Self::new(self.u * if self.v == 0 { self.p } else { 1 }, self.v.saturating_sub(1), self.p)
    }

    pub fn div_p(&self) -> Self {
        if self.u == 0 {
            return *self;
        }
        Self::new(self.u, self.v + 1, self.p)
    }

    pub fn add(&self, other: &Self) -> Self {
        let v = self.v.max(other.v);
        let a = self.u * pow_u64(self.p, v - self.v);
        let b = other.u * pow_u64(self.p, v - other.v);
        Self::new(a + b, v, self.p)
    }

    pub fn as_f64(&self) -> f64 {
        self.u as f64 / pow_u64(self.p, self.v) as f64
    }
}

impl PartialOrd for PExponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PExponent {
    fn cmp(&self, other: &Self) -> Ordering {
        let a = self.u as u128 * pow_u64(self.p, other.v) as u128;
        let b = other.u as u128 * pow_u64(self.p, self.v) as u128;
        a.cmp(&b)
    }
}

impl fmt::Display for PExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.v == 0 {
            write!(f, "{}", self.u)
        } else {
            write!(f, "{}/{}", self.u, pow_u64(self.p, self.v))
        }
    }
}

/// `v_p((α!)_p) = v_p(⌊α⌋!)`.
pub fn dp_factorial_val(alpha: &PExponent) -> u64 {
    legendre(alpha.floor(), alpha.p)
}

/// Carry exponent `w` in `x^{<α>} x^{<β>} = p^w x^{<α+β>}`.
pub fn dp_carry(alpha: &PExponent, beta: &PExponent) -> u64 {
    let s = alpha.add(beta);
    dp_factorial_val(&s) - dp_factorial_val(alpha) - dp_factorial_val(beta)
}

/// `Σ_{i<s} ⌊α p^i⌋`, the total `p`-power picked up by `F^s` on `x^{<α>}`.
pub fn frobenius_weight(alpha: &PExponent, s: u32) -> u64 {
    let mut a = *alpha;
    let mut t = 0;
    for _ in 0..s {
        t += a.floor();
        a = a.mul_p();
    }
    t
}
