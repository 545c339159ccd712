//! Exact integer and rational matrix routines: Smith diagonal,
//! determinants, column lattice bases and rational solves.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<i64>>;

pub(crate) fn to_big(m: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

/// Diagonal of the Smith normal form, `min(rows, cols)` entries, all
/// nonnegative, each dividing the next (zeros last).
pub(crate) fn smith_diagonal(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        loop {
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !a[i][j].is_zero()
                        && pivot.is_none_or(|(pi, pj)| a[i][j].abs() < a[pi][pj].abs())
                    {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                diag.resize(rows.min(cols), BigInt::zero());
                return diag;
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            let mut clean = true;
            for i in t + 1..rows {
                let q = &a[i][t] / &a[t][t];
                if !q.is_zero() {
                    for j in t..cols {
                        let d = &q * &a[t][j];
                        a[i][j] -= d;
                    }
                }
                clean &= a[i][t].is_zero();
            }
            for j in t + 1..cols {
                let q = &a[t][j] / &a[t][t];
                if !q.is_zero() {
                    for i in t..rows {
                        let d = &q * &a[i][t];
                        a[i][j] -= d;
                    }
                }
                clean &= a[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !a[i][j].is_multiple_of(&a[t][t])));
            match bad {
                Some(i) => {
                    for j in t..cols {
                        let x = a[i][j].clone();
                        a[t][j] += x;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
    }
    diag
}

/// Fraction-free (Bareiss) determinant.
pub(crate) fn det_int(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

pub(crate) fn det_rational(m: &[Vec<BigRational>]) -> BigRational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = BigRational::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return BigRational::zero();
        };
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        det *= a[k][k].clone();
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &a[k][k];
            for j in k..n {
                let d = &f * &a[k][j];
                a[i][j] -= d;
            }
        }
    }
    det
}

/// Solves a square nonsingular system exactly; `None` if singular.
pub(crate) fn solve_rational(m: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .zip(b)
        .map(|(row, x)| {
            let mut r = row.clone();
            r.push(x.clone());
            r
        })
        .collect();
    for k in 0..n {
        let p = (k..n).find(|&i| !a[i][k].is_zero())?;
        a.swap(p, k);
        let inv = a[k][k].recip();
        for x in a[k].iter_mut() {
            *x *= inv.clone();
        }
        for i in 0..n {
            if i != k && !a[i][k].is_zero() {
                let f = a[i][k].clone();
                for j in k..=n {
                    let d = &f * &a[k][j];
                    a[i][j] -= d;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n].clone()).collect())
}

/// Echelon basis of the lattice spanned by the columns of an `m × n`
/// integer matrix.
pub(crate) struct ColumnLattice {
    /// basis vectors, each of length `m`
    pub basis: Vec<Vec<BigInt>>,
    /// first nonzero row of each basis vector, strictly increasing
    pivots: Vec<usize>,
}

impl ColumnLattice {
    pub fn new(a: &[Vec<BigInt>]) -> Self {
        let m = a.len();
        let n = a.first().map_or(0, Vec::len);
        let mut cols: Vec<Vec<BigInt>> = (0..n).map(|j| (0..m).map(|i| a[i][j].clone()).collect()).collect();
        let mut k = 0;
        let mut pivots = Vec::new();
        for r in 0..m {
            loop {
                let best = (k..cols.len())
                    .filter(|&j| !cols[j][r].is_zero())
                    .min_by(|&x, &y| cols[x][r].abs().cmp(&cols[y][r].abs()));
                let Some(best) = best else { break };
                cols.swap(k, best);
                let mut done = true;
                for j in k + 1..cols.len() {
                    if cols[j][r].is_zero() {
                        continue;
                    }
                    let q = &cols[j][r] / &cols[k][r];
                    let pivot_col = cols[k].clone();
                    for (x, p) in cols[j].iter_mut().zip(&pivot_col) {
                        *x -= &q * p;
                    }
                    done &= cols[j][r].is_zero();
                }
                if done {
                    pivots.push(r);
                    k += 1;
                    break;
                }
            }
        }
        cols.truncate(k);
        ColumnLattice { basis: cols, pivots }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Integer coordinates of `v` in the basis, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let mut residual = v.to_vec();
        let mut x = Vec::with_capacity(self.basis.len());
        for (col, &p) in self.basis.iter().zip(&self.pivots) {
            if residual[..p].iter().any(|r| !r.is_zero()) {
                return None;
            }
            let (q, rem) = residual[p].div_rem(&col[p]);
            if !rem.is_zero() {
                return None;
            }
            for (r, c) in residual.iter_mut().zip(col) {
                *r -= &q * c;
            }
            x.push(q);
        }
        residual.iter().all(Zero::is_zero).then_some(x)
    }
}
