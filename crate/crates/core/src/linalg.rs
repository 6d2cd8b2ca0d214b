//! Exact integer and rational matrix algebra: Bareiss determinants, Smith
//! normal form with unimodular bookkeeping, column Hermite normal form and
//! Gauss-Jordan elimination over Q.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::Rational;

pub type IntMatrix = Vec<Vec<i64>>;
pub type RatMatrix = Vec<Vec<Rational>>;

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> Result<IntMatrix> {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    let mut out = vec![vec![0i64; m]; n];
    for i in 0..n {
        for j in 0..m {
            let mut acc: i128 = 0;
            for (k, row) in b.iter().enumerate() {
                acc += i128::from(a[i][k]) * i128::from(row[j]);
            }
            out[i][j] = i64::try_from(acc).map_err(|_| Error::Overflow("matrix product"))?;
        }
    }
    Ok(out)
}

/// Determinant of an integer matrix by fraction-free Bareiss elimination.
pub fn determinant(m: &IntMatrix) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Leading principal minors `det(M[..k, ..k])` for `k = 1..=n`.
pub fn leading_minors(m: &IntMatrix) -> Vec<BigInt> {
    (1..=m.len())
        .map(|k| {
            let sub: IntMatrix = m[..k].iter().map(|r| r[..k].to_vec()).collect();
            determinant(&sub)
        })
        .collect()
}

/// `S · M · T = diag(d_1, ..., d_r)` with `S`, `T` unimodular and
/// `d_1 | d_2 | ... | d_r`, all `d_i > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SmithDecomposition {
    pub s: IntMatrix,
    pub t: IntMatrix,
    pub diag: Vec<i64>,
}

impl SmithDecomposition {
    pub fn rank(&self) -> usize {
        self.diag.len()
    }

    /// Column `i` of `T`.
    pub fn t_column(&self, i: usize) -> Vec<i64> {
        self.t.iter().map(|row| row[i]).collect()
    }

    pub fn diag_matrix(&self) -> IntMatrix {
        let n = self.diag.len();
        let mut out = vec![vec![0; n]; n];
        for (i, &d) in self.diag.iter().enumerate() {
            out[i][i] = d;
        }
        out
    }
}

fn checked(x: Option<i128>) -> Result<i128> {
    x.ok_or(Error::Overflow("Smith normal form"))
}

/// Smith normal form of a nonsingular square integer matrix by elementary
/// row/column reduction, always pivoting on the entry of least absolute
/// value in the trailing block.
pub fn smith_normal_form(m: &IntMatrix) -> Result<SmithDecomposition> {
    let n = m.len();
    if n == 0 {
        return Err(Error::Empty);
    }
    for (row, r) in m.iter().enumerate() {
        if r.len() != n {
            return Err(Error::NotSquare { row, len: r.len(), expected: n });
        }
    }
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&x| i128::from(x)).collect())
        .collect();
    let mut s: Vec<Vec<i128>> = (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect();
    let mut t = s.clone();

    for k in 0..n {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in k..n {
                for j in k..n {
                    if a[i][j] != 0
                        && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let (pi, pj) = best.ok_or(Error::Singular)?;
            a.swap(k, pi);
            s.swap(k, pi);
            for row in a.iter_mut().chain(t.iter_mut()) {
                row.swap(k, pj);
            }

            let p = a[k][k];
            let mut clean = true;
            for i in k + 1..n {
                let q = a[i][k] / p;
                if q != 0 {
                    for j in 0..n {
                        a[i][j] = checked(a[i][j].checked_sub(checked(q.checked_mul(a[k][j]))?))?;
                        s[i][j] = checked(s[i][j].checked_sub(checked(q.checked_mul(s[k][j]))?))?;
                    }
                }
                clean &= a[i][k] == 0;
            }
            for j in k + 1..n {
                let q = a[k][j] / p;
                if q != 0 {
                    for row in a.iter_mut().chain(t.iter_mut()) {
                        row[j] = checked(row[j].checked_sub(checked(q.checked_mul(row[k]))?))?;
                    }
                }
                clean &= a[k][j] == 0;
            }
            if !clean {
                continue;
            }
            // Divisor chain: fold a row with a non-multiple into row k.
            let offender = (k + 1..n)
                .flat_map(|i| (k + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| a[i][j] % p != 0);
            match offender {
                Some((i, _)) => {
                    for j in 0..n {
                        a[k][j] = checked(a[k][j].checked_add(a[i][j]))?;
                        s[k][j] = checked(s[k][j].checked_add(s[i][j]))?;
                    }
                }
                None => break,
            }
        }
        if a[k][k] < 0 {
            for j in 0..n {
                a[k][j] = -a[k][j];
                s[k][j] = -s[k][j];
            }
        }
    }

    let narrow = |x: &Vec<Vec<i128>>| -> Result<IntMatrix> {
        x.iter()
            .map(|r| {
                r.iter()
                    .map(|&v| i64::try_from(v).map_err(|_| Error::Overflow("Smith normal form")))
                    .collect()
            })
            .collect()
    };
    let diag = (0..n)
        .map(|i| i64::try_from(a[i][i]).map_err(|_| Error::Overflow("Smith normal form")))
        .collect::<Result<Vec<_>>>()?;
    Ok(SmithDecomposition { s: narrow(&s)?, t: narrow(&t)?, diag })
}

/// Column-style Hermite reduction `C · U = H` with `U` unimodular and `H`
/// lower echelon. `pivots[i]` is the pivot column of row `i`, if any.
#[derive(Debug, Clone)]
pub struct ColumnHermite {
    pub h: Vec<Vec<BigInt>>,
    pub u: Vec<Vec<BigInt>>,
    pub pivots: Vec<Option<usize>>,
}

fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    (e.gcd, e.x, e.y)
}

pub fn column_hermite(c: &[Vec<BigInt>]) -> ColumnHermite {
    let p = c.len();
    let k = c.first().map_or(0, Vec::len);
    let mut h: Vec<Vec<BigInt>> = c.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..k)
        .map(|i| (0..k).map(|j| BigInt::from(u8::from(i == j))).collect())
        .collect();
    let mut pivots = vec![None; p];
    let mut col = 0;

    // Applies the unimodular map (x, y) -> (a x + b y, c x + d y) to columns i, j.
    let combine = |mat: &mut Vec<Vec<BigInt>>, i: usize, j: usize, coef: [&BigInt; 4]| {
        for row in mat.iter_mut() {
            let x = row[i].clone();
            let y = row[j].clone();
            row[i] = coef[0] * &x + coef[1] * &y;
            row[j] = coef[2] * &x + coef[3] * &y;
        }
    };

    for (i, pivot) in pivots.iter_mut().enumerate() {
        if col >= k {
            break;
        }
        for j in col + 1..k {
            if h[i][j].is_zero() {
                continue;
            }
            let (g, x, y) = ext_gcd(&h[i][col], &h[i][j]);
            let a = &h[i][col] / &g;
            let b = &h[i][j] / &g;
            let nb = -b;
            combine(&mut h, col, j, [&x, &y, &nb, &a]);
            combine(&mut u, col, j, [&x, &y, &nb, &a]);
        }
        if h[i][col].is_zero() {
            continue;
        }
        if h[i][col].is_negative() {
            for row in h.iter_mut().chain(u.iter_mut()) {
                row[col] = -&row[col];
            }
        }
        *pivot = Some(col);
        col += 1;
    }
    ColumnHermite { h, u, pivots }
}

impl ColumnHermite {
    /// Integer solution `z` of `C z = v`, if one exists.
    pub fn solve(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let k = self.u.len();
        let mut w = vec![BigInt::zero(); k];
        for (i, row) in self.h.iter().enumerate() {
            let partial: BigInt = row.iter().zip(&w).map(|(a, b)| a * b).sum();
            match self.pivots[i] {
                Some(c) => {
                    // w[c] is still zero, so `partial` excludes it.
                    let (q, r) = (&v[i] - &partial).div_rem(&row[c]);
                    if !r.is_zero() {
                        return None;
                    }
                    w[c] = q;
                }
                None => {
                    if partial != v[i] {
                        return None;
                    }
                }
            }
        }
        Some(
            self.u
                .iter()
                .map(|row| row.iter().zip(&w).map(|(a, b)| a * b).sum())
                .collect(),
        )
    }
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut RatMatrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let delta = &f * &m[r][j];
                    m[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of `{x : M x = 0}` as row vectors.
pub fn nullspace(m: &RatMatrix, cols: usize) -> RatMatrix {
    let mut a = m.clone();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[r][f].clone();
            }
            v
        })
        .collect()
}

/// Some solution of `A x = b`, or `None` if inconsistent.
pub fn solve_rational(a: &RatMatrix, b: &[Rational], cols: usize) -> Option<Vec<Rational>> {
    let mut aug: RatMatrix = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![Rational::zero(); cols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[r][cols].clone();
    }
    Some(x)
}

/// Exact inverse of a nonsingular integer matrix.
pub fn inverse(m: &IntMatrix) -> Result<RatMatrix> {
    let n = m.len();
    let mut aug: RatMatrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .map(|&x| Rational::from_integer(x.into()))
                .chain((0..n).map(|j| Rational::from_integer(BigInt::from(u8::from(i == j)))))
                .collect()
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return Err(Error::Singular);
    }
    Ok(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn to_i64(x: &BigInt, what: &'static str) -> Result<i64> {
    x.to_i64().ok_or(Error::Overflow(what))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn check_snf(m: &IntMatrix, expected: &[i64]) {
        let snf = smith_normal_form(m).unwrap();
        assert_eq!(snf.diag, expected);
        let prod = mat_mul(&mat_mul(&snf.s, m).unwrap(), &snf.t).unwrap();
        assert_eq!(prod, snf.diag_matrix());
        assert_eq!(determinant(&snf.s).abs(), BigInt::one());
        assert_eq!(determinant(&snf.t).abs(), BigInt::one());
    }

    #[test]
    fn snf_small_cases() {
        check_snf(&vec![vec![2, 1], vec![1, 2]], &[1, 3]);
        check_snf(&identity(3), &[1, 1, 1]);
        check_snf(&vec![vec![2, 0], vec![0, 4]], &[2, 4]);
        check_snf(&vec![vec![4, 0], vec![0, 6]], &[2, 12]);
        check_snf(&vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]], &[1, 1, 4]);
    }

    #[test]
    fn snf_identity_keeps_identity() {
        let snf = smith_normal_form(&identity(4)).unwrap();
        assert_eq!(snf.s, identity(4));
        assert_eq!(snf.t, identity(4));
    }

    #[test]
    fn snf_rejects_singular() {
        assert_eq!(
            smith_normal_form(&vec![vec![2, 4], vec![1, 2]]).unwrap_err(),
            Error::Singular
        );
    }

    #[test]
    fn bareiss_determinant() {
        assert_eq!(determinant(&vec![vec![2, 1], vec![1, 2]]), BigInt::from(3));
        assert_eq!(
            determinant(&vec![vec![0, 1, 2], vec![1, 0, 3], vec![4, -3, 8]]),
            BigInt::from(-2)
        );
        assert_eq!(determinant(&vec![vec![1, 2], vec![2, 4]]), BigInt::zero());
    }

    #[test]
    fn rational_inverse() {
        let inv = inverse(&vec![vec![2, 1], vec![1, 2]]).unwrap();
        assert_eq!(inv, vec![vec![rat(2, 3), rat(-1, 3)], vec![rat(-1, 3), rat(2, 3)]]);
    }

    #[test]
    fn hermite_solves_integer_systems() {
        let c: Vec<Vec<BigInt>> = vec![vec![2, 4, 6], vec![0, 3, 9]]
            .into_iter()
            .map(|r| r.into_iter().map(BigInt::from).collect())
            .collect();
        let hnf = column_hermite(&c);
        let v = vec![BigInt::from(2), BigInt::from(3)];
        let z = hnf.solve(&v).unwrap();
        for (row, vi) in c.iter().zip(&v) {
            let s: BigInt = row.iter().zip(&z).map(|(a, b)| a * b).sum();
            assert_eq!(&s, vi);
        }
        assert!(hnf.solve(&[BigInt::from(1), BigInt::from(0)]).is_none());
        assert!(hnf.solve(&[BigInt::from(0), BigInt::from(1)]).is_none());
    }

    #[test]
    fn nullspace_is_annihilated() {
        let m = vec![vec![rat(1, 1), rat(2, 1), rat(3, 1)], vec![rat(2, 1), rat(4, 1), rat(7, 1)]];
        let ns = nullspace(&m, 3);
        assert_eq!(ns.len(), 1);
        for row in &m {
            let dot: Rational = row.iter().zip(&ns[0]).map(|(a, b)| a * b).sum();
            assert!(dot.is_zero());
        }
    }
}
