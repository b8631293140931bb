//! Gaussian elimination over [`Elem`].

use super::field::Elem;

/// Reduces `mat` (rows of length `ncols`) to reduced row echelon form in place
/// and returns the pivot columns, one per nonzero row in order.
pub fn rref(mat: &mut Vec<Vec<Elem>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row == mat.len() {
            break;
        }
        let Some(p) = (row..mat.len()).find(|&r| !mat[r][col].is_zero()) else {
            continue;
        };
        mat.swap(row, p);
        let inv = mat[row][col].inv();
        if !inv.is_one() {
            for c in col..ncols {
                if !mat[row][c].is_zero() {
                    mat[row][c] = &mat[row][c] * &inv;
                }
            }
        }
        let pivot_row = mat[row].clone();
        for (r, other) in mat.iter_mut().enumerate() {
            if r == row || other[col].is_zero() {
                continue;
            }
            let f = other[col].clone();
            for c in col..ncols {
                if !pivot_row[c].is_zero() {
                    other[c] = &other[c] - &(&f * &pivot_row[c]);
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    mat.truncate(row);
    pivots
}

/// Basis of the right kernel `{v : mat * v = 0}`. Vectors are listed by
/// increasing free column, each with a one in its free column and zeros in
/// the other free columns.
pub fn nullspace(mat: &mut Vec<Vec<Elem>>, ncols: usize) -> Vec<Vec<Elem>> {
    let pivots = rref(mat, ncols);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut out = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Elem::zero(); ncols];
        v[free] = Elem::one();
        for (r, &p) in pivots.iter().enumerate() {
            if !mat[r][free].is_zero() {
                v[p] = -&mat[r][free];
            }
        }
        out.push(v);
    }
    out
}

pub fn rank(rows: &[Vec<Elem>], ncols: usize) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m, ncols).len()
}

/// Solves `mat * v = rhs`, returning one solution if the system is consistent.
pub fn solve(mat: &[Vec<Elem>], rhs: &[Elem], ncols: usize) -> Option<Vec<Elem>> {
    let mut aug: Vec<Vec<Elem>> = mat
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut v = vec![Elem::zero(); ncols];
    for (r, &p) in pivots.iter().enumerate() {
        v[p] = aug[r][ncols].clone();
    }
    Some(v)
}

/// Selects a maximal linearly independent subset of `vectors`, keeping the
/// earliest ones, and returns their indices.
pub fn independent_subset(vectors: &[Vec<Elem>], ncols: usize) -> Vec<usize> {
    // columns = vectors; pivots of the transposed system give the indices
    let mut m: Vec<Vec<Elem>> = (0..ncols)
        .map(|r| vectors.iter().map(|v| v[r].clone()).collect())
        .collect();
    rref(&mut m, vectors.len())
}
