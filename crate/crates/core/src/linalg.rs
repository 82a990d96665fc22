//! Row-echelon linear algebra over a [`Field`] on raw element codes, plus
//! exact rank over the rationals for integer matrices.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::gf::Field;

pub type Row = Vec<u32>;

/// Reduced row echelon form. Zero rows are dropped; returns the rows and
/// their pivot columns.
pub fn rref(field: &Field, rows: &[Row]) -> (Vec<Row>, Vec<usize>) {
    let mut m: Vec<Row> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(found) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, found);
        let inv = field.inv(m[r][c]).unwrap();
        for x in m[r].iter_mut() {
            *x = field.mul(*x, inv);
        }
        for i in 0..m.len() {
            if i != r && m[i][c] != 0 {
                let factor = m[i][c];
                let pivot_row = m[r].clone();
                for (x, &b) in m[i].iter_mut().zip(&pivot_row) {
                    *x = field.sub(*x, field.mul(factor, b));
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(field: &Field, rows: &[Row]) -> usize {
    rref(field, rows).0.len()
}

/// Reduce `v` against rows already in reduced echelon form.
pub fn reduce(field: &Field, basis: &[Row], pivots: &[usize], v: &[u32]) -> Row {
    let mut out = v.to_vec();
    for (row, &c) in basis.iter().zip(pivots) {
        let factor = out[c];
        if factor != 0 {
            for (o, &b) in out.iter_mut().zip(row) {
                *o = field.sub(*o, field.mul(factor, b));
            }
        }
    }
    out
}

/// Membership of `v` in the row space of an RREF basis.
pub fn in_span(field: &Field, basis: &[Row], pivots: &[usize], v: &[u32]) -> bool {
    reduce(field, basis, pivots, v).iter().all(|&x| x == 0)
}

/// Basis of `{x : M x = 0}` for `M` given by rows with `cols` columns,
/// returned in reduced echelon form.
pub fn nullspace(field: &Field, rows: &[Row], cols: usize) -> Vec<Row> {
    let (m, pivots) = rref(field, rows);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut x = vec![0u32; cols];
        x[free] = 1;
        for (row, &pc) in m.iter().zip(&pivots) {
            x[pc] = field.neg(row[free]);
        }
        basis.push(x);
    }
    rref(field, &basis).0
}

pub fn dot(field: &Field, a: &[u32], b: &[u32]) -> u32 {
    a.iter()
        .zip(b)
        .fold(0, |acc, (&x, &y)| field.add(acc, field.mul(x, y)))
}

/// Row vector times square matrix.
pub fn vec_mat(field: &Field, v: &[u32], m: &[Row]) -> Row {
    let n = m.first().map_or(0, Vec::len);
    (0..n)
        .map(|j| {
            v.iter()
                .zip(m)
                .fold(0, |acc, (&x, row)| field.add(acc, field.mul(x, row[j])))
        })
        .collect()
}

/// Square matrix times column vector.
pub fn mat_vec(field: &Field, m: &[Row], v: &[u32]) -> Row {
    m.iter().map(|row| dot(field, row, v)).collect()
}

pub fn mat_mul(field: &Field, a: &[Row], b: &[Row]) -> Vec<Row> {
    a.iter().map(|row| vec_mat(field, row, b)).collect()
}

/// Inverse of a square matrix, `None` when singular.
pub fn invert(field: &Field, m: &[Row]) -> Option<Vec<Row>> {
    let n = m.len();
    let aug: Vec<Row> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| u32::from(i == j)));
            r
        })
        .collect();
    let (red, pivots) = rref(field, &aug);
    if red.len() < n || pivots.iter().take(n).enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some(red.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Scale so the first nonzero entry is 1. Zero vectors are returned as is.
pub fn normalize(field: &Field, v: &[u32]) -> Row {
    match v.iter().find(|&&x| x != 0) {
        Some(&lead) => {
            let inv = field.inv(lead).unwrap();
            v.iter().map(|&x| field.mul(x, inv)).collect()
        }
        None => v.to_vec(),
    }
}

/// Every normalized nonzero vector of the row space of `basis`, sorted.
pub fn projective_points_of_span(field: &Field, basis: &[Row]) -> Vec<Row> {
    let k = basis.len();
    let q = field.order() as u64;
    let cols = basis.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    let total = q.pow(k as u32);
    for code in 1..total {
        let mut rest = code;
        let mut coeffs = Vec::with_capacity(k);
        for _ in 0..k {
            coeffs.push((rest % q) as u32);
            rest /= q;
        }
        // first nonzero coefficient (highest index) must be 1
        if coeffs.iter().rev().find(|&&c| c != 0) != Some(&1) {
            continue;
        }
        let mut v = vec![0u32; cols];
        for (c, row) in coeffs.iter().zip(basis) {
            if *c != 0 {
                for (x, &b) in v.iter_mut().zip(row) {
                    *x = field.add(*x, field.mul(*c, b));
                }
            }
        }
        out.push(normalize(field, &v));
    }
    out.sort();
    out.dedup();
    out
}

/// Rank over Q of an integer matrix.
pub fn rational_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|&x| BigRational::from_integer(x.into()))
                .collect()
        })
        .collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(found) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, found);
        let inv = BigRational::one() / m[r][c].clone();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let factor = m[i][c].clone();
                let pivot_row = m[r].clone();
                for (x, b) in m[i].iter_mut().zip(&pivot_row) {
                    *x -= &factor * b;
                }
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// Horizontal concatenation of two matrices with the same row count.
pub fn hconcat(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.iter().chain(y).copied().collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_and_nullspace_over_gf3() {
        let f = Field::new(3, 1).unwrap();
        let rows = vec![vec![1, 2, 0], vec![2, 1, 0], vec![0, 0, 2]];
        let (m, piv) = rref(&f, &rows);
        assert_eq!(m, vec![vec![1, 2, 0], vec![0, 0, 1]]);
        assert_eq!(piv, vec![0, 2]);
        let ns = nullspace(&f, &rows, 3);
        assert_eq!(ns, vec![vec![1, 1, 0]]);
        assert_eq!(dot(&f, &rows[0], &ns[0]), 0);
    }

    #[test]
    fn invert_roundtrip_gf4() {
        let f = Field::new(2, 2).unwrap();
        let m = vec![vec![1, 2, 0], vec![0, 3, 1], vec![1, 0, 1]];
        let inv = invert(&f, &m).unwrap();
        let id = mat_mul(&f, &m, &inv);
        assert_eq!(id, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert!(invert(&f, &[vec![1, 1], vec![1, 1]]).is_none());
    }

    #[test]
    fn span_points_count() {
        let f = Field::new(3, 1).unwrap();
        let pts = projective_points_of_span(&f, &[vec![1, 0, 0], vec![0, 1, 0]]);
        assert_eq!(pts.len(), 4);
        assert!(pts.iter().all(|p| p[2] == 0));
    }

    #[test]
    fn rational_rank_small() {
        assert_eq!(rational_rank(&[vec![1, 2], vec![2, 4]]), 1);
        assert_eq!(rational_rank(&[vec![1, -1], vec![1, 1], vec![0, 3]]), 2);
        assert_eq!(rational_rank(&[vec![0, 0]]), 0);
    }
}
