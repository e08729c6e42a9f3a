//! Free `W_n(F_q)`-modules with a σ-semilinear operator `F(v) = A σ(v)`.

use std::sync::Arc;

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::galois_witt::{GaloisRingElem, RingDesc};
use crate::linalg::{
    char_poly, flatten, identity, image, kernel, linearize, mat_mul, mat_sigma_pow, mat_vec, unflatten, vec_sub,
    Howell, Mat, Vector,
};

#[derive(Debug, Clone, PartialEq)]
pub struct SigmaModule {
    pub ring: Arc<RingDesc>,
    /// `r × r`, acting on column vectors.
    pub matrix: Mat,
}

/// Generators of a finite `Z/p^n`-module with their orders `p^{e}`.
#[derive(Debug, Clone, Serialize)]
pub struct FixedPoints {
    pub gens: Vec<Vector>,
    pub orders: Vec<u32>,
}

/// The unit-root sub-crystal: an embedding basis and the induced operator.
#[derive(Debug, Clone)]
pub struct UnitRootPart {
    pub basis: Vec<Vector>,
    pub module: SigmaModule,
}

impl SigmaModule {
    pub fn new(ring: Arc<RingDesc>, matrix: Mat) -> Result<Self> {
        let r = matrix.len();
        if matrix.iter().any(|row| row.len() != r) {
            return Err(Error::Malformed("F-matrix must be square".into()));
        }
        Ok(SigmaModule { ring, matrix })
    }

    pub fn from_ints(ring: &Arc<RingDesc>, rows: &[&[i64]]) -> Result<Self> {
        let m = rows.iter().map(|r| r.iter().map(|&x| ring.from_int(x)).collect()).collect();
        Self::new(ring.clone(), m)
    }

    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    pub fn apply(&self, v: &[GaloisRingElem]) -> Vector {
        let sv: Vector = v.iter().map(|x| x.sigma()).collect();
        mat_vec(&self.matrix, &sv, &self.ring)
    }

    /// `F^m = A σ(A) ⋯ σ^{m-1}(A)`, an honest linear map.
    pub fn linearized(&self) -> Mat {
        let m = self.ring.m();
        let mut acc = identity(&self.ring, self.rank());
        for k in 0..m {
            acc = mat_mul(&acc, &mat_sigma_pow(&self.matrix, k as i64), &self.ring);
        }
        acc
    }

    /// Change of basis `v = P w`: the new matrix is `P^{-1} A σ(P)`.
    pub fn conjugate(&self, p: &Mat, p_inv: &Mat) -> Self {
        let a = mat_mul(&mat_mul(p_inv, &self.matrix, &self.ring), &mat_sigma_pow(p, 1), &self.ring);
        SigmaModule { ring: self.ring.clone(), matrix: a }
    }

    /// Newton slopes with multiplicity, ascending.
    pub fn newton_slopes(&self) -> Result<Vec<Ratio<u64>>> {
        let r = self.rank();
        if r == 0 {
            return Ok(Vec::new());
        }
        let n = self.ring.n;
        let cp = char_poly(&self.linearized(), &self.ring);
        let vals: Vec<u32> = cp.iter().map(|c| c.valuation()).collect();
        if vals[0] >= n {
            return Err(Error::InsufficientPrecision(format!(
                "determinant vanishes mod p^{n}; F is not injective at this precision"
            )));
        }
        let pts: Vec<(usize, u32)> = vals.iter().enumerate().filter(|(_, &v)| v < n).map(|(i, &v)| (i, v)).collect();
        let hull = lower_hull(&pts);
        // unknown coefficients must not be able to dip below the hull
        for (i, &v) in vals.iter().enumerate() {
            if v >= n && hull_value(&hull, i) > Ratio::from_integer(n as u64) {
                return Err(Error::InsufficientPrecision(format!(
                    "coefficient of t^{i} vanishes mod p^{n} above the Newton polygon; raise the precision"
                )));
            }
        }
        let m = self.ring.m() as u64;
        let mut slopes = Vec::with_capacity(r);
        for w in hull.windows(2) {
            let (i, vi) = w[0];
            let (j, vj) = w[1];
            let s = Ratio::new((vi - vj) as u64, (j - i) as u64 * m);
            slopes.extend(std::iter::repeat_n(s, j - i));
        }
        slopes.sort();
        Ok(slopes)
    }

    /// Solutions of `A σ(v) = v` over the prime subring `Z/p^n`.
    pub fn fixed_points_f1(&self) -> FixedPoints {
        let prime = RingDesc::standard(self.ring.p(), 1, self.ring.n).expect("prime ring");
        let r = self.rank();
        let lin = linearize(|v| vec_sub(&self.apply(v), v), r, r, &self.ring, &prime);
        let ker = kernel(&lin, r * self.ring.m(), &prime, &[]);
        let n = self.ring.n;
        let gens: Vec<Vector> = ker.generators();
        let orders = gens.iter().map(|g| n - g.iter().map(|x| x.valuation()).min().unwrap_or(n)).collect();
        FixedPoints { gens: gens.iter().map(|g| unflatten(g, &self.ring)).collect(), orders }
    }

    /// Maximal sub-crystal on which `F` is bijective, as the stable image of `F^{r n}`.
    pub fn unit_root_part(&self) -> Result<UnitRootPart> {
        let r = self.rank();
        let phi = self.linearized();
        let mut pw = identity(&self.ring, r);
        let mut base = phi;
        let mut e = r as u64 * self.ring.n as u64;
        while e > 0 {
            if e & 1 == 1 {
                pw = mat_mul(&pw, &base, &self.ring);
            }
            base = mat_mul(&base, &base, &self.ring);
            e >>= 1;
        }
        let img = image(&pw, r, &self.ring, &[]);
        let (units, rest): (Vec<_>, Vec<_>) = img.rows.iter().partition(|(_, v, _)| *v == 0);
        if !rest.is_empty() {
            return Err(Error::InsufficientPrecision(
                "image of F^{rn} is not a direct summand at this precision".into(),
            ));
        }
        let pivots: Vec<usize> = units.iter().map(|(c, _, _)| *c).collect();
        let basis: Vec<Vector> = units.iter().map(|(_, _, row)| row.clone()).collect();
        let span = Howell::new(&self.ring, r, &basis);
        let d = basis.len();
        let mut a = vec![vec![self.ring.zero(); d]; d];
        for (i, u) in basis.iter().enumerate() {
            let fu = self.apply(u);
            if !span.contains(&fu) {
                return Err(Error::InsufficientPrecision("unit-root span is not F-stable".into()));
            }
            for (j, &pc) in pivots.iter().enumerate() {
                a[j][i] = fu[pc].clone();
            }
        }
        Ok(UnitRootPart { basis, module: SigmaModule { ring: self.ring.clone(), matrix: a } })
    }
}

/// Lower convex hull through the given points (sorted by abscissa).
fn lower_hull(pts: &[(usize, u32)]) -> Vec<(usize, u32)> {
    let mut hull: Vec<(usize, u32)> = Vec::new();
    for &pt in pts {
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            // drop the middle point if it lies on or above the chord
            let lhs = (y2 as i64 - y1 as i64) * (pt.0 as i64 - x1 as i64);
            let rhs = (pt.1 as i64 - y1 as i64) * (x2 as i64 - x1 as i64);
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    hull
}

fn hull_value(hull: &[(usize, u32)], x: usize) -> Ratio<u64> {
    for w in hull.windows(2) {
        let (x1, y1) = w[0];
        let (x2, y2) = w[1];
        if x1 <= x && x <= x2 {
            // y1 + (y2 - y1) (x - x1) / (x2 - x1), with y decreasing
            let drop = Ratio::new((y1 - y2) as u64 * (x - x1) as u64, (x2 - x1) as u64);
            return Ratio::from_integer(y1 as u64) - drop;
        }
    }
    Ratio::from_integer(0)
}

/// Flattened coordinates helper for callers that want to inspect fixed points over `Z/p^n`.
pub fn fixed_point_coordinates(v: &[GaloisRingElem]) -> Vector {
    let prime = RingDesc::standard(v[0].p(), 1, v[0].precision()).expect("prime ring");
    flatten(v, &prime)
}
