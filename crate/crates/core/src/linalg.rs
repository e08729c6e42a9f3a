//! Linear algebra over Galois rings (chain rings with uniformizer `p`) and over `F_q`.
//!
//! Matrices act on column vectors. Submodules of `R^c` are kept in Howell form, which
//! gives canonical remainders and hence exact membership tests and kernels.

use std::sync::Arc;

use crate::arith::pow_u64;
use crate::galois_witt::{FieldDesc, FqElem, GaloisRingElem, RingDesc};

pub type Mat = Vec<Vec<GaloisRingElem>>;
pub type Vector = Vec<GaloisRingElem>;

pub fn zero_vec(ring: &Arc<RingDesc>, n: usize) -> Vector {
    vec![ring.zero(); n]
}

pub fn zero_mat(ring: &Arc<RingDesc>, rows: usize, cols: usize) -> Mat {
    vec![zero_vec(ring, cols); rows]
}

pub fn identity(ring: &Arc<RingDesc>, n: usize) -> Mat {
    let mut m = zero_mat(ring, n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = ring.one();
    }
    m
}

pub fn mat_mul(a: &Mat, b: &Mat, ring: &Arc<RingDesc>) -> Mat {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = ring.zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            acc = acc.add(&row[k].mul(&b[k][j]));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &Mat, v: &[GaloisRingElem], ring: &Arc<RingDesc>) -> Vector {
    a.iter()
        .map(|row| row.iter().zip(v).fold(ring.zero(), |acc, (x, y)| acc.add(&x.mul(y))))
        .collect()
}

pub fn vec_add(a: &[GaloisRingElem], b: &[GaloisRingElem]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

pub fn vec_sub(a: &[GaloisRingElem], b: &[GaloisRingElem]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
}

pub fn vec_scale(a: &[GaloisRingElem], s: &GaloisRingElem) -> Vector {
    a.iter().map(|x| x.mul(s)).collect()
}

pub fn vec_is_zero(a: &[GaloisRingElem]) -> bool {
    a.iter().all(|x| x.is_zero())
}

pub fn transpose(a: &Mat) -> Mat {
    let cols = a.first().map_or(0, |r| r.len());
    (0..cols).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn mat_sigma(a: &Mat) -> Mat {
    a.iter().map(|r| r.iter().map(|x| x.sigma()).collect()).collect()
}

pub fn mat_sigma_pow(a: &Mat, k: i64) -> Mat {
    a.iter().map(|r| r.iter().map(|x| x.sigma_pow(k)).collect()).collect()
}

/// Quotient by `p^v` with the canonical remainder: returns `(rem, quo)` with
/// `x = rem + p^v quo` and every coefficient of `rem` in `0..p^v`.
fn split_p_pow(x: &GaloisRingElem, v: u32) -> (GaloisRingElem, GaloisRingElem) {
    let d = pow_u64(x.p(), v);
    let rem = x.c.iter().map(|&c| c % d).collect();
    let quo = x.c.iter().map(|&c| c / d).collect();
    (
        GaloisRingElem { ring: x.ring.clone(), c: rem },
        GaloisRingElem { ring: x.ring.clone(), c: quo },
    )
}

/// Howell form of a submodule of `R^cols`.
#[derive(Debug, Clone)]
pub struct Howell {
    pub ring: Arc<RingDesc>,
    pub cols: usize,
    /// Rows with `(pivot column, pivot valuation)`; pivot entries are exactly `p^v`.
    pub rows: Vec<(usize, u32, Vector)>,
}

impl Howell {
    pub fn new(ring: &Arc<RingDesc>, cols: usize, gens: &[Vector]) -> Self {
        let n = ring.n;
        let mut pending: Vec<Vector> = gens.iter().filter(|g| !vec_is_zero(g)).cloned().collect();
        let mut rows: Vec<(usize, u32, Vector)> = Vec::new();
        for col in 0..cols {
            // pivot of minimal valuation in this column
            let best = pending
                .iter()
                .enumerate()
                .filter(|(_, r)| !r[col].is_zero())
                .min_by_key(|(_, r)| r[col].valuation())
                .map(|(i, _)| i);
            let Some(bi) = best else { continue };
            let mut piv = pending.swap_remove(bi);
            let v = piv[col].valuation();
            // normalize pivot to p^v
            let (_, unit_part) = split_p_pow(&piv[col], v);
            let unit_inv = unit_part.to_ring(ring).inv().expect("unit after removing p-power");
            piv = vec_scale(&piv, &unit_inv);
            debug_assert_eq!(piv[col], ring.p_pow(v));
            let mut next = Vec::with_capacity(pending.len() + 1);
            for r in pending.drain(..) {
                let r = if r[col].is_zero() {
                    r
                } else {
                    let (_, q) = split_p_pow(&r[col], v);
                    vec_sub(&r, &vec_scale(&piv, &q))
                };
                if !vec_is_zero(&r) {
                    next.push(r);
                }
            }
            if v > 0 {
                let sat = vec_scale(&piv, &ring.p_pow(n - v));
                if !vec_is_zero(&sat) {
                    next.push(sat);
                }
            }
            pending = next;
            // reduce earlier rows at this column
            for (_, _, r) in rows.iter_mut() {
                if !r[col].is_zero() {
                    let (_, q) = split_p_pow(&r[col], v);
                    *r = vec_sub(r, &vec_scale(&piv, &q));
                }
            }
            rows.push((col, v, piv));
        }
        debug_assert!(pending.is_empty());
        Howell { ring: ring.clone(), cols, rows }
    }

    /// Canonical remainder of `x` modulo the submodule.
    pub fn reduce(&self, x: &[GaloisRingElem]) -> Vector {
        let mut r = x.to_vec();
        for (col, v, row) in &self.rows {
            if !r[*col].is_zero() {
                let (_, q) = split_p_pow(&r[*col], *v);
                r = vec_sub(&r, &vec_scale(row, &q));
            }
        }
        r
    }

    pub fn contains(&self, x: &[GaloisRingElem]) -> bool {
        vec_is_zero(&self.reduce(x))
    }

    pub fn generators(&self) -> Vec<Vector> {
        self.rows.iter().map(|(_, _, r)| r.clone()).collect()
    }

    /// `log_p` of the cardinality of the submodule, in units of `m`.
    pub fn length(&self) -> u32 {
        self.rows.iter().map(|(_, v, _)| self.ring.n - v).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn contains_module(&self, other: &Howell) -> bool {
        other.rows.iter().all(|(_, _, r)| self.contains(r))
    }
}

/// Kernel of `x -> A x` on `R^cols`, where target coordinate `i` lives in `R / p^{orders[i]}`
/// (`None` = free).
pub fn kernel(a: &Mat, cols: usize, ring: &Arc<RingDesc>, orders: &[Option<u32>]) -> Howell {
    let n = ring.n;
    let rows = a.len();
    let at = transpose_with_cols(a, cols, ring);
    let mut gens = Vec::with_capacity(cols);
    for (j, col) in at.iter().enumerate() {
        let mut g = Vec::with_capacity(rows + cols);
        for (i, x) in col.iter().enumerate() {
            let e = orders.get(i).copied().flatten().unwrap_or(n).min(n);
            g.push(x.mul_p_pow(n - e));
        }
        for k in 0..cols {
            g.push(if k == j { ring.one() } else { ring.zero() });
        }
        gens.push(g);
    }
    let h = Howell::new(ring, rows + cols, &gens);
    let ker: Vec<Vector> = h
        .rows
        .iter()
        .filter(|(_, _, r)| vec_is_zero(&r[..rows]))
        .map(|(_, _, r)| r[rows..].to_vec())
        .collect();
    Howell::new(ring, cols, &ker)
}

fn transpose_with_cols(a: &Mat, cols: usize, ring: &Arc<RingDesc>) -> Mat {
    (0..cols)
        .map(|j| a.iter().map(|r| r.get(j).cloned().unwrap_or_else(|| ring.zero())).collect())
        .collect()
}

/// Image of `x -> A x`, with target coordinates reduced mod their orders.
pub fn image(a: &Mat, cols: usize, ring: &Arc<RingDesc>, orders: &[Option<u32>]) -> Howell {
    let gens: Vec<Vector> = transpose_with_cols(a, cols, ring);
    let mut all = gens;
    all.extend(relation_rows(ring, orders));
    Howell::new(ring, a.len(), &all)
}

/// Some `x` with `A x = y` in `⊕ R/p^{orders[i]}`, or `None` if `y` is not in the image.
pub fn solve(a: &Mat, cols: usize, ring: &Arc<RingDesc>, orders: &[Option<u32>], y: &[GaloisRingElem]) -> Option<Vector> {
    let rows = a.len();
    let mut gens: Vec<Vector> = Vec::with_capacity(cols + rows);
    for (j, col) in transpose_with_cols(a, cols, ring).into_iter().enumerate() {
        let mut g = col;
        g.extend((0..cols).map(|k| if k == j { ring.one() } else { ring.zero() }));
        gens.push(g);
    }
    for mut r in relation_rows(ring, orders) {
        r.extend(zero_vec(ring, cols));
        gens.push(r);
    }
    let h = Howell::new(ring, rows + cols, &gens);
    let mut target = y.to_vec();
    target.extend(zero_vec(ring, cols));
    let red = h.reduce(&target);
    if !vec_is_zero(&red[..rows]) {
        return None;
    }
    Some(red[rows..].iter().map(|x| x.neg()).collect())
}

/// Inverse of a square matrix, if it exists.
pub fn inverse(a: &Mat, ring: &Arc<RingDesc>) -> Option<Mat> {
    let n = a.len();
    let free = vec![None; n];
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let mut e = zero_vec(ring, n);
        e[j] = ring.one();
        cols.push(solve(a, n, ring, &free, &e)?);
    }
    Some(transpose(&cols))
}

/// Z/p^n-coordinates of a vector over `W_n(F_{p^m})`: entry `i`, power `k` goes to `i m + k`.
pub fn flatten(v: &[GaloisRingElem], prime: &Arc<RingDesc>) -> Vector {
    let mut out = Vec::with_capacity(v.len() * v.first().map_or(1, |x| x.c.len()));
    for x in v {
        for &c in &x.c {
            out.push(prime.from_int(c as i64));
        }
    }
    out
}

/// Inverse of [`flatten`].
pub fn unflatten(v: &[GaloisRingElem], ring: &Arc<RingDesc>) -> Vector {
    let m = ring.m();
    v.chunks(m)
        .map(|ch| GaloisRingElem { ring: ring.clone(), c: ch.iter().map(|x| x.c[0] % ring.modulus).collect() })
        .collect()
}

/// Matrix over `Z/p^n` of an additive map `W_n(F_q)^dim_in -> W_n(F_q)^dim_out` that is linear
/// over `Z/p^n` (e.g. σ-semilinear maps), in [`flatten`] coordinates.
pub fn linearize(
    f: impl Fn(&[GaloisRingElem]) -> Vector,
    dim_in: usize,
    dim_out: usize,
    ring: &Arc<RingDesc>,
    prime: &Arc<RingDesc>,
) -> Mat {
    let m = ring.m();
    let mut cols: Vec<Vector> = Vec::with_capacity(dim_in * m);
    for i in 0..dim_in {
        for k in 0..m {
            let mut e = zero_vec(ring, dim_in);
            e[i].c[k] = 1;
            let img = f(&e);
            debug_assert_eq!(img.len(), dim_out);
            cols.push(flatten(&img, prime));
        }
    }
    if cols.is_empty() {
        return zero_mat(prime, dim_out * m, 0);
    }
    transpose(&cols)
}

/// Orders of the flattened coordinates.
pub fn flatten_orders(orders: &[Option<u32>], m: usize) -> Vec<Option<u32>> {
    orders.iter().flat_map(|&o| std::iter::repeat_n(o, m)).collect()
}

/// Generators `p^{e_i} e_i` of the relations of `⊕ R/p^{e_i}`.
pub fn relation_rows(ring: &Arc<RingDesc>, orders: &[Option<u32>]) -> Vec<Vector> {
    let k = orders.len();
    orders
        .iter()
        .enumerate()
        .filter_map(|(i, o)| {
            o.filter(|&e| e < ring.n).map(|e| {
                let mut r = zero_vec(ring, k);
                r[i] = ring.p_pow(e);
                r
            })
        })
        .collect()
}

/// Characteristic polynomial `det(t I - A)` by Berkowitz's division-free algorithm,
/// coefficients low degree first.
pub fn char_poly(a: &Mat, ring: &Arc<RingDesc>) -> Vector {
    let n = a.len();
    let mut v: Vector = vec![ring.one()]; // high degree first
    for k in 0..n {
        let s: Mat = (0..k).map(|i| a[i][..k].to_vec()).collect();
        let r: Vector = a[k][..k].to_vec();
        let c: Vector = (0..k).map(|i| a[i][k].clone()).collect();
        let mut t: Vector = Vec::with_capacity(k + 2);
        t.push(ring.one());
        t.push(a[k][k].neg());
        let mut sc = c.clone();
        for _ in 0..k {
            let rc = r.iter().zip(&sc).fold(ring.zero(), |acc, (x, y)| acc.add(&x.mul(y)));
            t.push(rc.neg());
            sc = mat_vec(&s, &sc, ring);
        }
        let mut nv = zero_vec(ring, k + 2);
        for (i, slot) in nv.iter_mut().enumerate() {
            let mut acc = ring.zero();
            for (j, vj) in v.iter().enumerate() {
                if i >= j {
                    acc = acc.add(&t[i - j].mul(vj));
                }
            }
            *slot = acc;
        }
        v = nv;
    }
    v.reverse();
    v
}

pub fn det(a: &Mat, ring: &Arc<RingDesc>) -> GaloisRingElem {
    let cp = char_poly(a, ring);
    if a.len().is_multiple_of(2) {
        cp[0].clone()
    } else {
        cp[0].neg()
    }
}

/// Rank of a matrix over `F_q` by Gaussian elimination.
pub fn rank_fq(a: &[Vec<FqElem>]) -> usize {
    let mut m: Vec<Vec<FqElem>> = a.to_vec();
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..rows).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(rank, piv);
        let inv = m[rank][col].inv().expect("nonzero");
        let prow: Vec<FqElem> = m[rank].iter().map(|x| x.mul(&inv)).collect();
        for i in 0..rows {
            if i != rank && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in 0..cols {
                    m[i][j] = m[i][j].sub(&f.mul(&prow[j]));
                }
            }
        }
        m[rank] = prow;
        rank += 1;
    }
    rank
}

/// Reduced row echelon form over `F_q`; returns the pivot columns.
fn rref_fq(m: &mut [Vec<FqElem>], cols: usize) -> Vec<usize> {
    let rows = m.len();
    let mut pivots = Vec::new();
    for col in 0..cols {
        let r = pivots.len();
        let Some(piv) = (r..rows).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(r, piv);
        let inv = m[r][col].inv().expect("nonzero");
        let prow: Vec<FqElem> = m[r].iter().map(|x| x.mul(&inv)).collect();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&prow) {
                    *x = x.sub(&f.mul(y));
                }
            }
        }
        m[r] = prow;
        pivots.push(col);
    }
    pivots
}

/// Some `x` with `A x = y` over `F_q`.
pub fn solve_fq(a: &[Vec<FqElem>], cols: usize, y: &[FqElem]) -> Option<Vec<FqElem>> {
    let field = y.first().or_else(|| a.first().and_then(|r| r.first()))?.field.clone();
    let mut m: Vec<Vec<FqElem>> = a.iter().zip(y).map(|(r, b)| r.iter().chain([b]).cloned().collect()).collect();
    let pivots = rref_fq(&mut m, cols + 1);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![field.zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r][cols].clone();
    }
    Some(x)
}

/// Basis of the null space of `A` over `F_q`.
pub fn kernel_fq(a: &[Vec<FqElem>], cols: usize, field: &Arc<FieldDesc>) -> Vec<Vec<FqElem>> {
    let mut m = a.to_vec();
    let pivots = rref_fq(&mut m, cols);
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![field.zero(); cols];
            v[free] = field.one();
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = m[r][free].neg();
            }
            v
        })
        .collect()
}

pub fn det_fq(a: &[Vec<FqElem>]) -> Option<FqElem> {
    let n = a.len();
    let first = a.first()?.first()?.clone();
    let mut m: Vec<Vec<FqElem>> = a.to_vec();
    let mut d = first.field.one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&i| !m[i][col].is_zero()) else {
            return Some(first.field.zero());
        };
        if piv != col {
            m.swap(piv, col);
            d = d.neg();
        }
        d = d.mul(&m[col][col]);
        let inv = m[col][col].inv().expect("nonzero");
        for i in col + 1..n {
            if !m[i][col].is_zero() {
                let f = m[i][col].mul(&inv);
                for j in col..n {
                    let t = f.mul(&m[col][j]);
                    m[i][j] = m[i][j].sub(&t);
                }
            }
        }
    }
    Some(d)
}

pub fn mat_mul_fq(a: &[Vec<FqElem>], b: &[Vec<FqElem>]) -> Vec<Vec<FqElem>> {
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .fold(row[0].field.zero(), |acc, (x, brow)| acc.add(&x.mul(&brow[j])))
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_mat(ring: &Arc<RingDesc>, rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Mat {
        (0..rows)
            .map(|_| {
                (0..cols)
                    .map(|_| {
                        // bias toward non-units so valuations vary
                        let k = rng.gen_range(0..ring.n + 1);
                        ring.random(rng).mul_p_pow(k)
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn rank_nullity_by_length() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for (p, m, n) in [(2, 1, 4), (2, 2, 3), (3, 1, 3), (3, 2, 2)] {
            let ring = RingDesc::standard(p, m, n).unwrap();
            for _ in 0..25 {
                let rows = rng.gen_range(1..4);
                let cols = rng.gen_range(1..4);
                let a = random_mat(&ring, rows, cols, &mut rng);
                let free = vec![None; rows];
                let ker = kernel(&a, cols, &ring, &free);
                for g in ker.generators() {
                    assert!(vec_is_zero(&mat_vec(&a, &g, &ring)));
                }
                let im = image(&a, cols, &ring, &free);
                assert_eq!(ker.length() + im.length(), n * cols as u32);
                // every image column is a member
                for j in 0..cols {
                    let col: Vector = a.iter().map(|r| r[j].clone()).collect();
                    assert!(im.contains(&col));
                }
            }
        }
    }

    #[test]
    fn reduction_is_canonical() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let ring = RingDesc::standard(2, 2, 3).unwrap();
        for _ in 0..25 {
            let gens: Vec<Vector> = random_mat(&ring, 2, 3, &mut rng);
            let h = Howell::new(&ring, 3, &gens);
            let x: Vector = (0..3).map(|_| ring.random(&mut rng)).collect();
            let shift = vec_add(&vec_scale(&gens[0], &ring.random(&mut rng)), &vec_scale(&gens[1], &ring.random(&mut rng)));
            assert_eq!(h.reduce(&x), h.reduce(&vec_add(&x, &shift)));
            assert_eq!(h.reduce(&h.reduce(&x)), h.reduce(&x));
        }
    }

    #[test]
    fn cayley_hamilton() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let ring = RingDesc::standard(3, 2, 3).unwrap();
        for size in 1..5 {
            let a = random_mat(&ring, size, size, &mut rng);
            let cp = char_poly(&a, &ring);
            assert_eq!(cp.len(), size + 1);
            assert!(cp[size].is_one());
            let mut acc = zero_mat(&ring, size, size);
            let mut pw = identity(&ring, size);
            for c in &cp {
                for i in 0..size {
                    for j in 0..size {
                        acc[i][j] = acc[i][j].add(&pw[i][j].mul(c));
                    }
                }
                pw = mat_mul(&pw, &a, &ring);
            }
            assert!(acc.iter().all(|r| vec_is_zero(r)));
        }
    }

    #[test]
    fn torsion_target() {
        // x -> x into Z/2 : kernel of Z/8 -> Z/2 is 2Z/8
        let ring = RingDesc::standard(2, 1, 3).unwrap();
        let a = vec![vec![ring.one()]];
        let ker = kernel(&a, 1, &ring, &[Some(1)]);
        assert_eq!(ker.rows.len(), 1);
        assert_eq!(ker.rows[0].1, 1);
    }
}
