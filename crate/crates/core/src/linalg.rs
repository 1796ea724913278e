//! Dense linear algebra over the rationals: row reduction, rank, nullspace.

use num_traits::{One, Zero};

use crate::poly::Rat;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(rows: &mut Vec<Vec<Rat>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(found) = (r..rows.len()).find(|&k| !rows[k][c].is_zero()) else {
            continue;
        };
        rows.swap(r, found);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (k, row) in rows.iter_mut().enumerate() {
            if k != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    if !p.is_zero() {
                        *x -= &f * p;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

pub fn rank(rows: &[Vec<Rat>], ncols: usize) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m, ncols).len()
}

/// A basis of `{x : A x = 0}`.
pub fn nullspace(rows: &[Vec<Rat>], ncols: usize) -> Vec<Vec<Rat>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rat::zero(); ncols];
            v[f] = Rat::one();
            for (row, &pc) in m.iter().zip(&pivots) {
                v[pc] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Coefficients `c` with `Σ c_k basis[k] = target`, if the target lies in the span.
pub fn solve_in_span(basis: &[Vec<Rat>], target: &[Rat]) -> Option<Vec<Rat>> {
    let k = basis.len();
    let dim = target.len();
    // columns are the basis vectors, augmented by the target
    let mut rows: Vec<Vec<Rat>> = (0..dim)
        .map(|i| {
            let mut row: Vec<Rat> = basis.iter().map(|b| b[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let pivots = rref(&mut rows, k + 1);
    if pivots.contains(&k) {
        return None;
    }
    let mut out = vec![Rat::zero(); k];
    for (row, &pc) in rows.iter().zip(&pivots) {
        out[pc] = row[k].clone();
    }
    Some(out)
}
