//! Small integer helpers shared by the ring implementations.

/// `p^e` as u64, panicking on overflow.
pub fn pow_u64(p: u64, e: u32) -> u64 {
    p.checked_pow(e).expect("p^e overflows u64")
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + b as u128) % m as u128) as u64
}

pub fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
}

pub fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    r
}

/// Inverse of `a` modulo the prime `p`.
pub fn inv_mod_prime(a: u64, p: u64) -> u64 {
    assert!(!a.is_multiple_of(p), "zero has no inverse");
    pow_mod(a, p - 2, p)
}

/// p-adic valuation of a nonzero integer; `None` for zero.
pub fn val_p(mut x: u64, p: u64) -> Option<u32> {
    if x == 0 {
        return None;
    }
    let mut v = 0;
    while x.is_multiple_of(p) {
        x /= p;
        v += 1;
    }
    Some(v)
}

/// Valuation of a residue modulo `p^n`, with zero mapped to `n`.
pub fn val_mod(x: u64, p: u64, n: u32) -> u32 {
    val_p(x, p).map_or(n, |v| v.min(n))
}

/// Legendre's formula: the exponent of `p` in `k!`.
pub fn legendre(k: u64, p: u64) -> u64 {
    let mut total = 0;
    let mut q = k / p;
    while q > 0 {
        total += q;
        q /= p;
    }
    total
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_matches_factorials() {
        // 5! = 120 = 2^3 * 15, 3! = 6
        assert_eq!(legendre(5, 2), 3);
        assert_eq!(legendre(3, 3), 1);
        assert_eq!(legendre(0, 2), 0);
        let mut f: u128 = 1;
        for k in 1..30u64 {
            f *= k as u128;
            let mut v = 0;
            let mut g = f;
            while g % 3 == 0 {
                g /= 3;
                v += 1;
            }
            assert_eq!(legendre(k, 3), v);
        }
    }

    #[test]
    fn valuations() {
        assert_eq!(val_p(12, 2), Some(2));
        assert_eq!(val_p(0, 2), None);
        assert_eq!(val_mod(0, 2, 5), 5);
    }
}
