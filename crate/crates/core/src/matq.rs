//! Exact dense linear algebra over the rationals: row reduction, rank,
//! nullspace, and linear solves. Internal helper shared by the rank,
//! isotropy, recurrence, and classification code.

use num::Zero;

use crate::exactalg::Rational;

pub type Mat = Vec<Vec<Rational>>;

/// Reduced row echelon form in place; returns the pivot column of each
/// nonzero row, in order.
pub fn rref(mat: &mut Mat) -> Vec<usize> {
    let rows = mat.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = mat[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !mat[i][c].is_zero()) else {
            continue;
        };
        mat.swap(r, p);
        let inv = mat[r][c].recip();
        for x in mat[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !mat[i][c].is_zero() {
                let f = mat[i][c].clone();
                for j in 0..cols {
                    let d = &mat[r][j] * &f;
                    mat[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

pub fn rank(mat: &Mat) -> usize {
    let mut m = mat.clone();
    rref(&mut m).len()
}

/// Basis of the right kernel `{v : M v = 0}`.
pub fn nullspace(mat: &Mat) -> Vec<Vec<Rational>> {
    if mat.is_empty() {
        return Vec::new();
    }
    let cols = mat[0].len();
    let mut m = mat.clone();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::new();
    for &fc in &free {
        let mut v = vec![Rational::zero(); cols];
        v[fc] = num::One::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -m[row][fc].clone();
        }
        basis.push(v);
    }
    basis
}

/// Any solution of `M x = b`, or `None` when inconsistent.
pub fn solve(mat: &Mat, b: &[Rational]) -> Option<Vec<Rational>> {
    let rows = mat.len();
    assert_eq!(rows, b.len());
    if rows == 0 {
        return Some(Vec::new());
    }
    let cols = mat[0].len();
    let mut aug: Mat = mat
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&cols) {
        return None; // pivot in the augmented column
    }
    let mut x = vec![Rational::zero(); cols];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[row][cols].clone();
    }
    Some(x)
}

/// Determinant by Gaussian elimination (fine at the sizes used here).
#[cfg_attr(not(test), allow(dead_code))]
pub fn det(mat: &Mat) -> Rational {
    let n = mat.len();
    let mut m = mat.clone();
    let mut sign = false;
    let mut acc: Rational = num::One::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            m.swap(p, c);
            sign = !sign;
        }
        acc *= &m[c][c];
        let inv = m[c][c].recip();
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] * &inv;
            for j in c..n {
                let d = &m[c][j] * &f;
                m[i][j] -= d;
            }
        }
    }
    if sign {
        -acc
    } else {
        acc
    }
}
