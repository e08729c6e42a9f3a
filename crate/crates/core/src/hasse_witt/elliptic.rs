use serde::Serialize;

use super::poly::HomogPoly;
use crate::error::{Error, Result};
use crate::galois_witt::FqElem;

/// `y² + a1 xy + a3 y = x³ + a2 x² + a4 x + a6`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Weierstrass {
    pub a: [FqElem; 5],
}

/// Affine point, `None` is the point at infinity.
pub type Point = Option<(FqElem, FqElem)>;

#[derive(Debug, Clone, Serialize)]
pub struct OrdinaryReport {
    pub ordinary: bool,
    /// Coefficient vectors of `(x, y)` for the nonzero 2-torsion point.
    pub two_torsion: Option<(Vec<u64>, Vec<u64>)>,
}

impl Weierstrass {
    pub fn new(a1: FqElem, a2: FqElem, a3: FqElem, a4: FqElem, a6: FqElem) -> Result<Self> {
        let e = Self { a: [a1, a2, a3, a4, a6] };
        if e.discriminant().is_zero() {
            return Err(Error::SingularCurve);
        }
        Ok(e)
    }

    fn k(&self, n: i64) -> FqElem {
        self.a[0].field.from_int(n)
    }

    pub fn discriminant(&self) -> FqElem {
        let [a1, a2, a3, a4, a6] = &self.a;
        let b2 = a1.mul(a1).add(&self.k(4).mul(a2));
        let b4 = a1.mul(a3).add(&self.k(2).mul(a4));
        let b6 = a3.mul(a3).add(&self.k(4).mul(a6));
        let b8 = a1
            .mul(a1)
            .mul(a6)
            .add(&self.k(4).mul(a2).mul(a6))
            .sub(&a1.mul(a3).mul(a4))
            .add(&a2.mul(a3).mul(a3))
            .sub(&a4.mul(a4));
        b2.mul(&b2)
            .mul(&b8)
            .neg()
            .sub(&self.k(8).mul(&b4.mul(&b4).mul(&b4)))
            .sub(&self.k(27).mul(&b6.mul(&b6)))
            .add(&self.k(9).mul(&b2).mul(&b4).mul(&b6))
    }

    pub fn on_curve(&self, pt: &Point) -> bool {
        let Some((x, y)) = pt else { return true };
        let [a1, a2, a3, a4, a6] = &self.a;
        let lhs = y.mul(y).add(&a1.mul(x).mul(y)).add(&a3.mul(y));
        let rhs = x.mul(x).mul(x).add(&a2.mul(x).mul(x)).add(&a4.mul(x)).add(a6);
        lhs == rhs
    }

    pub fn neg(&self, pt: &Point) -> Point {
        let (x, y) = pt.as_ref()?;
        Some((x.clone(), y.neg().sub(&self.a[0].mul(x)).sub(&self.a[2])))
    }

    pub fn add(&self, p: &Point, q: &Point) -> Point {
        let [a1, a2, a3, a4, _] = &self.a;
        let (Some((x1, y1)), Some((x2, y2))) = (p, q) else {
            return p.clone().or_else(|| q.clone());
        };
        let lambda = if x1 != x2 {
            y2.sub(y1).div(&x2.sub(x1)).expect("distinct x")
        } else {
            let den = self.k(2).mul(y1).add(&a1.mul(x1)).add(a3);
            if y1 != y2 || den.is_zero() {
                return None;
            }
            let num = self.k(3).mul(x1).mul(x1).add(&self.k(2).mul(a2).mul(x1)).add(a4).sub(&a1.mul(y1));
            num.div(&den).expect("nonzero denominator")
        };
        let x3 = lambda.mul(&lambda).add(&a1.mul(&lambda)).sub(a2).sub(x1).sub(x2);
        let y3 = lambda.mul(&x1.sub(&x3)).sub(y1).sub(&a1.mul(&x3)).sub(a3);
        Some((x3, y3))
    }

    /// Projective cubic `y²z + a1 xyz + a3 yz² - x³ - a2 x²z - a4 xz² - a6 z³` in `(x, y, z)`.
    pub fn cubic(&self) -> HomogPoly {
        let k = self.a[0].field.clone();
        let [a1, a2, a3, a4, a6] = &self.a;
        let one = k.one();
        let terms = vec![
            (vec![0, 2, 1], one.clone()),
            (vec![1, 1, 1], a1.clone()),
            (vec![0, 1, 2], a3.clone()),
            (vec![3, 0, 0], one.neg()),
            (vec![2, 0, 1], a2.neg()),
            (vec![1, 0, 2], a4.neg()),
            (vec![0, 0, 3], a6.neg()),
        ];
        HomogPoly::from_terms(&k, 3, 3, terms).expect("cubic monomials")
    }
}

/// In characteristic 2 a smooth curve is ordinary iff `a1 ≠ 0`; then its unique nonzero
/// 2-torsion point has `x = a3/a1` and `y² = x³ + a2 x² + a4 x + a6`.
pub fn elliptic_ordinary(a1: FqElem, a2: FqElem, a3: FqElem, a4: FqElem, a6: FqElem) -> Result<OrdinaryReport> {
    if a1.p() != 2 {
        return Err(Error::InvalidParameter("ordinarity helper is for characteristic 2".into()));
    }
    let e = Weierstrass::new(a1, a2, a3, a4, a6)?;
    let pt = two_torsion(&e);
    Ok(OrdinaryReport { ordinary: pt.is_some(), two_torsion: pt.map(|(x, y)| (x.c, y.c)) })
}

/// The nonzero 2-torsion point of an ordinary curve in characteristic 2.
pub fn two_torsion(e: &Weierstrass) -> Option<(FqElem, FqElem)> {
    let [a1, a2, a3, a4, a6] = &e.a;
    if a1.is_zero() {
        return None;
    }
    let x = a3.div(a1).ok()?;
    let rhs = x.mul(&x).mul(&x).add(&a2.mul(&x).mul(&x)).add(&a4.mul(&x)).add(a6);
    Some((x, rhs.frobenius_inv()))
}
