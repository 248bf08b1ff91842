//! Small dense linear algebra over the rationals: rank, solving, kernels.
//! Everything is exact; matrices are row-major `Vec<Vec<BigRational>>`.

use num_rational::BigRational;
use num_traits::Zero;

/// Reduced row echelon form, in place; returns the pivot columns.
pub fn rref(rows: &mut Vec<Vec<BigRational>>) -> Vec<usize> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..nrows {
            if i != r && !rows[i][c].is_zero() {
                let factor = rows[i][c].clone();
                for k in 0..ncols {
                    let t = &rows[r][k] * &factor;
                    rows[i][k] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == nrows {
            break;
        }
    }
    pivots
}

pub fn rank(matrix: &[Vec<BigRational>]) -> usize {
    let mut rows = matrix.to_vec();
    rref(&mut rows).len()
}

/// Solve `A x = b` where `A` has full column rank; `None` when inconsistent.
pub fn solve(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let ncols = a.first().map_or(0, |r| r.len());
    let mut aug: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    // inconsistent if a pivot lands in the augmented column
    if pivots.contains(&ncols) {
        return None;
    }
    // full column rank required for a unique solution
    if pivots.len() != ncols {
        return None;
    }
    let mut x = vec![BigRational::zero(); ncols];
    for (row, &c) in pivots.iter().enumerate() {
        x[c] = aug[row][ncols].clone();
    }
    Some(x)
}

/// A basis of the null space `{x : A x = 0}`.
pub fn kernel(a: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let ncols = a.first().map_or(0, |r| r.len());
    let mut rows = a.to_vec();
    let pivots = rref(&mut rows);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &f in &free {
        let mut v = vec![BigRational::zero(); ncols];
        v[f] = BigRational::from_integer(1.into());
        for (row, &c) in pivots.iter().enumerate() {
            v[c] = -rows[row][f].clone();
        }
        basis.push(v);
    }
    basis
}
