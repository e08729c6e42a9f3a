use serde::{Deserialize, Serialize};

use super::zlat::{self, ZMat};
use crate::error::{Error, Result};

/// Isomorphism type of a finitely generated `Z_(p)`-module, possibly as an explicit
/// submodule `⊕ p^{s_i} W` of a free module.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct ModDesc {
    pub rank: u32,
    /// p-exponents of the free summands; empty means all zero.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub scaled: Vec<u32>,
    /// Exponents `e` of the cyclic summands `W/p^e`.
    #[serde(default)]
    pub torsion: Vec<u32>,
}

impl ModDesc {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn free(rank: u32) -> Self {
        Self { rank, ..Self::default() }
    }

    pub fn elementary(count: u32) -> Self {
        Self { torsion: vec![1; count as usize], ..Self::default() }
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    /// Length of the torsion part.
    pub fn torsion_length(&self) -> u32 {
        self.torsion.iter().sum()
    }

    pub fn is_elementary(&self) -> bool {
        self.torsion.iter().all(|&e| e == 1)
    }

    pub fn scaling(&self) -> Vec<u32> {
        if self.scaled.is_empty() {
            vec![0; self.rank as usize]
        } else {
            self.scaled.clone()
        }
    }

    pub(crate) fn normalized(mut self) -> Self {
        self.torsion.sort_unstable();
        self.scaled.sort_unstable();
        if self.scaled.iter().all(|&s| s == 0) {
            self.scaled.clear();
        }
        self
    }
}

/// A finitely generated `Z_(p)`-module `Z_(p)^rank ⊕ ⊕ Z/p^{e_i}` with an involution `τ`
/// given on generators (free generators first). A `divisible` module is a `Q_p`-vector
/// space of dimension `rank` and carries no torsion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FgInvModule {
    pub p: u64,
    pub rank: u32,
    #[serde(default)]
    pub torsion: Vec<u32>,
    pub tau: Vec<Vec<i64>>,
    #[serde(default)]
    pub divisible: bool,
}

impl FgInvModule {
    pub fn new(p: u64, rank: u32, torsion: Vec<u32>, tau: Vec<Vec<i64>>, divisible: bool) -> Result<Self> {
        let m = Self { p, rank, torsion, tau, divisible };
        m.validate()?;
        Ok(m)
    }

    /// Free module with trivial involution.
    pub fn trivial_free(p: u64, rank: u32) -> Self {
        let tau = (0..rank as usize).map(|i| (0..rank as usize).map(|j| i64::from(i == j)).collect()).collect();
        Self { p, rank, torsion: vec![], tau, divisible: false }
    }

    /// `(W/p)^count` with trivial involution.
    pub fn trivial_elementary(p: u64, count: u32) -> Self {
        let n = count as usize;
        let tau = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        Self { p, rank: 0, torsion: vec![1; n], tau, divisible: false }
    }

    pub fn zero(p: u64) -> Self {
        Self { p, rank: 0, torsion: vec![], tau: vec![], divisible: false }
    }

    pub fn generators(&self) -> usize {
        self.rank as usize + self.torsion.len()
    }

    fn modulus(&self, i: usize) -> i128 {
        if i < self.rank as usize {
            0
        } else {
            (self.p as i128).pow(self.torsion[i - self.rank as usize])
        }
    }

    /// Is `v` zero in the module?
    fn vanishes(&self, v: &[i128]) -> bool {
        v.iter().enumerate().all(|(i, &x)| match self.modulus(i) {
            0 => x == 0,
            q => x % q == 0,
        })
    }

    fn tau_z(&self) -> ZMat {
        self.tau.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect()
    }

    pub fn validate(&self) -> Result<()> {
        let g = self.generators();
        if self.p < 2 || !crate::arith::is_prime(self.p) {
            return Err(Error::InvalidParameter(format!("p = {} is not prime", self.p)));
        }
        if self.tau.len() != g || self.tau.iter().any(|r| r.len() != g) {
            return Err(Error::Malformed(format!("involution must be {g}x{g}")));
        }
        if self.torsion.contains(&0) {
            return Err(Error::Malformed("torsion exponents must be positive".into()));
        }
        if self.divisible && !self.torsion.is_empty() {
            return Err(Error::Malformed("a divisible module has no torsion".into()));
        }
        let t = self.tau_z();
        // τ must preserve relations and square to the identity.
        for j in self.rank as usize..g {
            let q = self.modulus(j);
            let col: Vec<i128> = t.iter().map(|r| r[j] * q).collect();
            if !self.vanishes(&col) {
                return Err(Error::Malformed("involution does not preserve torsion relations".into()));
            }
        }
        let t2 = zlat::mul(&t, &t, g, g);
        for j in 0..g {
            let col: Vec<i128> = (0..g).map(|i| t2[i][j] - i128::from(i == j)).collect();
            if !self.vanishes(&col) {
                return Err(Error::Malformed("involution does not square to the identity".into()));
            }
        }
        Ok(())
    }

    fn shifted(&self, sign: i128) -> ZMat {
        let g = self.generators();
        let t = self.tau_z();
        (0..g).map(|i| (0..g).map(|j| t[i][j] + sign * i128::from(i == j)).collect()).collect()
    }

    /// Relation columns `p^{e_i} e_i`.
    fn relations(&self) -> Vec<Vec<i128>> {
        let g = self.generators();
        (self.rank as usize..g)
            .map(|j| (0..g).map(|i| if i == j { self.modulus(j) } else { 0 }).collect())
            .collect()
    }

    /// `ker(f) / im(h)` for endomorphisms `f, h` with `f h = 0`.
    fn homology(&self, f: &ZMat, h: &ZMat) -> Result<ModDesc> {
        let g = self.generators();
        let rel = self.relations();
        // K = {x : f x ∈ span(rel)}
        let mut big: ZMat = f.clone();
        for (i, row) in big.iter_mut().enumerate() {
            row.extend(rel.iter().map(|r| -r[i]));
        }
        let lifts = zlat::kernel(&big, g + rel.len());
        let kgens: Vec<Vec<i128>> = lifts.iter().map(|v| v[..g].to_vec()).collect();
        let (kb, _, kr) = zlat::column_echelon(&zlat::from_columns(&kgens, g), kgens.len());
        let basis: Vec<Vec<i128>> = kb.into_iter().take(kr).collect();
        // S = im(h) + span(rel), expressed in the basis of K.
        let mut sub: Vec<Vec<i128>> = zlat::columns(h, g);
        sub.extend(rel);
        let mut coords = Vec::new();
        for s in &sub {
            let c = zlat::solve_echelon(&basis, s)
                .ok_or_else(|| Error::Malformed("boundary not contained in cycles; is τ an involution?".into()))?;
            coords.push(c);
        }
        let cm = zlat::from_columns(&coords, kr);
        let d = if kr == 0 { vec![] } else { zlat::diagonal(&cm, coords.len()) };
        let mut out = ModDesc::free((kr - d.len()) as u32);
        for x in d {
            let e = p_valuation(x, self.p);
            if e > 0 {
                out.torsion.push(e);
            }
        }
        Ok(out.normalized())
    }
}

fn p_valuation(mut x: i128, p: u64) -> u32 {
    let p = p as i128;
    let mut v = 0;
    while x != 0 && x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

/// `H^i(Z/2, M)`: `ker(τ-1)` in degree 0, `ker(τ-1)/im(τ+1)` in positive even degrees and
/// `ker(τ+1)/im(τ-1)` in odd degrees.
pub fn z2_cohomology(m: &FgInvModule, i: u32) -> Result<ModDesc> {
    m.validate()?;
    let minus = m.shifted(-1);
    let plus = m.shifted(1);
    if m.divisible {
        let g = m.generators();
        return Ok(match i {
            0 => ModDesc::free((g - zlat::rank(&minus, g)) as u32),
            _ => ModDesc::zero(),
        });
    }
    let zero = zlat::zero(m.generators(), m.generators());
    match i {
        0 => m.homology(&minus, &zero),
        _ if i.is_multiple_of(2) => m.homology(&minus, &plus),
        _ => m.homology(&plus, &minus),
    }
}

fn block_diag(blocks: &[Vec<Vec<i64>>]) -> Vec<Vec<i64>> {
    let n: usize = blocks.iter().map(Vec::len).sum();
    let mut out = vec![vec![0; n]; n];
    let mut off = 0;
    for b in blocks {
        for (i, row) in b.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                out[off + i][off + j] = x;
            }
        }
        off += b.len();
    }
    out
}

fn kron(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let (n, m) = (a.len(), b.len());
    (0..n * m).map(|i| (0..n * m).map(|j| a[i / m][j / m] * b[i % m][j % m]).collect()).collect()
}

/// `H^n(X × Y) = ⊕_{i+j=n} H^i(X) ⊗ H^j(Y)` with the diagonal involution.
/// Only torsion-free inputs are supported.
pub fn kunneth_assemble(left: &[FgInvModule], right: &[FgInvModule]) -> Result<Vec<FgInvModule>> {
    let all = left.iter().chain(right);
    let p = match all.clone().next() {
        Some(m) => m.p,
        None => return Ok(vec![]),
    };
    for m in all {
        m.validate()?;
        if m.p != p {
            return Err(Error::InvalidParameter("modules over different primes".into()));
        }
        if !m.torsion.is_empty() {
            return Err(Error::Unsupported("Künneth assembly with torsion needs Tor terms".into()));
        }
    }
    if left.is_empty() || right.is_empty() {
        return Ok(vec![]);
    }
    let top = left.len() + right.len() - 2;
    let mut out = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let mut blocks = Vec::new();
        let mut kinds = Vec::new();
        for (i, l) in left.iter().enumerate() {
            let Some(r) = n.checked_sub(i).and_then(|j| right.get(j)) else { continue };
            if l.rank > 0 && r.rank > 0 {
                blocks.push(kron(&l.tau, &r.tau));
                kinds.push(l.divisible || r.divisible);
            }
        }
        if kinds.iter().any(|&d| d != kinds[0]) {
            return Err(Error::Unsupported(format!("degree {n} mixes divisible and lattice summands")));
        }
        let divisible = kinds.first().copied().unwrap_or(false);
        let tau = block_diag(&blocks);
        out.push(FgInvModule { p, rank: tau.len() as u32, torsion: vec![], tau, divisible });
    }
    Ok(out)
}
