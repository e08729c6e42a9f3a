//! Integer lattices: column Hermite reduction, kernels and diagonal forms over `Z`.

pub type ZMat = Vec<Vec<i128>>;

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

pub fn zero(rows: usize, cols: usize) -> ZMat {
    vec![vec![0; cols]; rows]
}

pub fn identity(n: usize) -> ZMat {
    (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect()
}

pub fn mul(a: &ZMat, b: &ZMat, inner: usize, cols: usize) -> ZMat {
    a.iter()
        .map(|row| (0..cols).map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum()).collect())
        .collect()
}

pub fn columns(a: &ZMat, cols: usize) -> Vec<Vec<i128>> {
    (0..cols).map(|j| a.iter().map(|r| r[j]).collect()).collect()
}

pub fn from_columns(cols: &[Vec<i128>], rows: usize) -> ZMat {
    (0..rows).map(|i| cols.iter().map(|c| c[i]).collect()).collect()
}

/// Column reduction `A U = [B | 0]` with `U` unimodular and `B` in column echelon form.
/// Returns `(B columns, U, rank)`.
pub fn column_echelon(a: &ZMat, cols: usize) -> (Vec<Vec<i128>>, ZMat, usize) {
    let rows = a.len();
    let mut c = columns(a, cols);
    let mut u = columns(&identity(cols), cols);
    let mut r = 0;
    for i in 0..rows {
        if r == cols {
            break;
        }
        for j in r + 1..cols {
            if c[j][i] == 0 {
                continue;
            }
            let (g, x, y) = ext_gcd(c[r][i], c[j][i]);
            let (a1, b1) = (c[r][i] / g, c[j][i] / g);
            let combine = |v: &mut Vec<Vec<i128>>| {
                let (cr, cj) = (v[r].clone(), v[j].clone());
                v[r] = cr.iter().zip(&cj).map(|(p, q)| x * p + y * q).collect();
                v[j] = cr.iter().zip(&cj).map(|(p, q)| -b1 * p + a1 * q).collect();
            };
            combine(&mut c);
            combine(&mut u);
        }
        if c[r][i] != 0 {
            if c[r][i] < 0 {
                c[r] = c[r].iter().map(|x| -x).collect();
                u[r] = u[r].iter().map(|x| -x).collect();
            }
            r += 1;
        }
    }
    (c, from_columns(&u, cols), r)
}

/// Basis of `{x ∈ Z^cols : A x = 0}`, as columns.
pub fn kernel(a: &ZMat, cols: usize) -> Vec<Vec<i128>> {
    let (_, u, r) = column_echelon(a, cols);
    columns(&u, cols).into_iter().skip(r).collect()
}

/// Rank over `Q`.
pub fn rank(a: &ZMat, cols: usize) -> usize {
    column_echelon(a, cols).2
}

/// Integer `c` with `Σ c_j basis_j = v`, for a basis in column echelon form.
pub fn solve_echelon(basis: &[Vec<i128>], v: &[i128]) -> Option<Vec<i128>> {
    let mut rest = v.to_vec();
    let mut c = vec![0; basis.len()];
    for (j, b) in basis.iter().enumerate() {
        let Some(piv) = b.iter().position(|&x| x != 0) else { continue };
        if rest[piv] % b[piv] != 0 {
            return None;
        }
        let q = rest[piv] / b[piv];
        c[j] = q;
        for (x, y) in rest.iter_mut().zip(b) {
            *x -= q * y;
        }
    }
    rest.iter().all(|&x| x == 0).then_some(c)
}

/// Nonzero diagonal entries of a diagonal form of `A` (so `Z^rows / A Z^cols ≅ ⊕ Z/d_i ⊕ Z^{rows - #d}`).
pub fn diagonal(a: &ZMat, cols: usize) -> Vec<i128> {
    let mut m = a.clone();
    let rows = m.len();
    let mut out = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if m[i][j] != 0 && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        m.swap(t, bi);
        for row in m.iter_mut() {
            row.swap(t, bj);
        }
        let mut clean = true;
        for i in t + 1..rows {
            let q = m[i][t] / m[t][t];
            if q != 0 {
                let pivot_row = m[t].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                    *x -= q * y;
                }
            }
            clean &= m[i][t] == 0;
        }
        for j in t + 1..cols {
            let q = m[t][j] / m[t][t];
            if q != 0 {
                for row in m.iter_mut() {
                    row[j] -= q * row[t];
                }
            }
            clean &= m[t][j] == 0;
        }
        if clean {
            out.push(m[t][t].abs());
            t += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_and_diagonal() {
        let a: ZMat = vec![vec![2, 4, 6], vec![1, 2, 3]];
        let k = kernel(&a, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(a.iter().all(|r| r.iter().zip(v).map(|(x, y)| x * y).sum::<i128>() == 0));
        }
        let d = diagonal(&vec![vec![2, 0], vec![0, 3]], 2);
        assert_eq!(d.iter().product::<i128>(), 6);
        let d = diagonal(&vec![vec![4, 6], vec![6, 4]], 2);
        assert_eq!(d.iter().product::<i128>(), 20);
    }

    #[test]
    fn echelon_solves() {
        let (b, _, r) = column_echelon(&vec![vec![2, 0], vec![1, 3]], 2);
        let basis: Vec<Vec<i128>> = b.into_iter().take(r).collect();
        assert!(solve_echelon(&basis, &[4, 5]).is_some());
        assert!(solve_echelon(&basis, &[1, 0]).is_none());
    }
}
