//! Exact elimination kernels.
//!
//! Everything is derived from one Gauss-Jordan reduction. Pivots are taken
//! column by column, left to right; inside a column the pivot is the entry of
//! minimal T-order, ties broken by the smallest (current) row index. This
//! makes every returned basis deterministic.

use super::f2::F2;
use super::field::{Field, Ring};
use super::laurent::LaurentPoly;
use super::matrix::{SparseMatrix, SparseVector};
use super::ratfn::RationalFn;
use crate::error::{Error, Result};

/// Reduced row echelon form: row `i` has a 1 in column `pivots[i]` and zero
/// in every other pivot column. Rows past `pivots.len()` are zero and omitted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref<S> {
    pub rows: usize,
    pub cols: usize,
    pub pivots: Vec<usize>,
    pub reduced: Vec<SparseVector<S>>,
}

impl<S: Ring> Rref<S> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// `pivot_row[c]` is the reduced row whose pivot sits in column `c`.
    pub fn pivot_rows(&self) -> Vec<Option<usize>> {
        let mut out = vec![None; self.cols];
        for (i, &c) in self.pivots.iter().enumerate() {
            out[c] = Some(i);
        }
        out
    }

    pub fn free_columns(&self) -> Vec<usize> {
        let pr = self.pivot_rows();
        (0..self.cols).filter(|&c| pr[c].is_none()).collect()
    }
}

pub fn rref_generic<S: Field>(m: &SparseMatrix<S>) -> Rref<S> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.to_dense();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(best) = (r..rows)
            .filter(|&i| !a[i][c].is_zero())
            .min_by_key(|&i| (a[i][c].order(), i))
        else {
            continue;
        };
        a.swap(r, best);
        let inv = a[r][c].inv();
        if !inv.is_one() {
            for x in a[r][c..].iter_mut() {
                *x = x.mul(&inv);
            }
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                if !p.is_zero() {
                    *x = x.add(&p.mul(&f));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let reduced = a
        .into_iter()
        .take(pivots.len())
        .map(|row| SparseVector::from_dense(&row))
        .collect();
    Rref {
        rows,
        cols,
        pivots,
        reduced,
    }
}

/// Bit-packed specialization for F2; same pivot rule as the generic path.
pub fn rref_f2(m: &SparseMatrix<F2>) -> Rref<F2> {
    let (rows, cols) = (m.rows(), m.cols());
    let words = cols.div_ceil(64);
    let mut a = vec![vec![0u64; words]; rows];
    for (r, c, _) in m.entries() {
        a[r][c / 64] |= 1 << (c % 64);
    }
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let (w, bit) = (c / 64, 1u64 << (c % 64));
        let Some(best) = (r..rows).find(|&i| a[i][w] & bit != 0) else {
            continue;
        };
        a.swap(r, best);
        let (head, tail) = a.split_at_mut(r);
        let (prow, tail) = tail.split_first_mut().expect("row r exists");
        for row in head.iter_mut().chain(tail.iter_mut()) {
            if row[w] & bit != 0 {
                for k in w..words {
                    row[k] ^= prow[k];
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let reduced = a
        .into_iter()
        .take(pivots.len())
        .map(|row| {
            let mut entries = Vec::new();
            for (k, &word) in row.iter().enumerate() {
                let mut x = word;
                while x != 0 {
                    let b = x.trailing_zeros() as usize;
                    x &= x - 1;
                    entries.push((k * 64 + b, F2::ONE));
                }
            }
            SparseVector::from_entries(cols, entries)
        })
        .collect();
    Rref {
        rows,
        cols,
        pivots,
        reduced,
    }
}

pub fn rref<S: Field>(m: &SparseMatrix<S>) -> Rref<S> {
    S::rref(m)
}

pub fn rank<S: Field>(m: &SparseMatrix<S>) -> usize {
    S::rank(m)
}

/// Bit-packed rank over F2 without building the reduced rows.
pub fn rank_f2(m: &SparseMatrix<F2>) -> usize {
    let (rows, cols) = (m.rows(), m.cols());
    // eliminate over the shorter side
    let (n, len, entries): (usize, usize, Vec<(usize, usize)>) = if rows <= cols {
        (cols, rows, m.entries().map(|(r, c, _)| (c, r)).collect())
    } else {
        (rows, cols, m.entries().map(|(r, c, _)| (r, c)).collect())
    };
    let words = len.div_ceil(64);
    let mut vecs = vec![vec![0u64; words]; n];
    for (v, i) in entries {
        vecs[v][i / 64] |= 1 << (i % 64);
    }
    // xor basis keyed by leading bit
    let mut basis: Vec<Option<Vec<u64>>> = vec![None; len];
    let mut rank = 0;
    for mut v in vecs {
        while let Some(lead) = v
            .iter()
            .enumerate()
            .rev()
            .find(|(_, w)| **w != 0)
            .map(|(k, w)| k * 64 + 63 - w.leading_zeros() as usize)
        {
            match &basis[lead] {
                Some(b) => {
                    for (x, y) in v.iter_mut().zip(b) {
                        *x ^= y;
                    }
                }
                None => {
                    basis[lead] = Some(v);
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

/// Rank of a Laurent matrix, computed exactly over F2(T).
pub fn rank_laurent(m: &SparseMatrix<LaurentPoly>) -> usize {
    rank(&m.map(|p| RationalFn::from(p.clone())))
}

/// One kernel vector per free column, in increasing free-column order.
pub fn kernel_basis<S: Field>(m: &SparseMatrix<S>) -> Vec<SparseVector<S>> {
    let r = rref(m);
    kernel_from_rref(&r)
}

pub fn kernel_from_rref<S: Field>(r: &Rref<S>) -> Vec<SparseVector<S>> {
    r.free_columns()
        .into_iter()
        .map(|f| {
            let mut entries = vec![(f, S::one())];
            for (i, row) in r.reduced.iter().enumerate() {
                let x = row.get(f);
                if !x.is_zero() {
                    // x_pivot + x * 1 = 0, negation is trivial in characteristic 2
                    entries.push((r.pivots[i], x));
                }
            }
            SparseVector::from_entries(r.cols, entries)
        })
        .collect()
}

/// Indices of columns of `m` forming a basis of its column space.
pub fn image_basis<S: Field>(m: &SparseMatrix<S>) -> Vec<usize> {
    rref(m).pivots
}

/// Some `x` with `m x = b`, or `None` when `b` is not in the image.
/// Free variables are set to zero, so the answer is deterministic.
pub fn solve_in_image<S: Field>(
    m: &SparseMatrix<S>,
    b: &SparseVector<S>,
) -> Result<Option<SparseVector<S>>> {
    if b.dim() != m.rows() {
        return Err(Error::Dimension(format!(
            "right-hand side has length {}, matrix has {} rows",
            b.dim(),
            m.rows()
        )));
    }
    let mut aug = m.clone();
    aug.push_column(b.clone());
    let r = rref(&aug);
    let n = m.cols();
    if r.pivots.last() == Some(&n) {
        return Ok(None);
    }
    let entries = r
        .reduced
        .iter()
        .enumerate()
        .map(|(i, row)| (r.pivots[i], row.get(n)))
        .collect();
    Ok(Some(SparseVector::from_entries(n, entries)))
}

/// Solves `m X = B` column by column; `None` if some column is not in the image.
pub fn solve_many<S: Field>(
    m: &SparseMatrix<S>,
    b: &SparseMatrix<S>,
) -> Result<Option<SparseMatrix<S>>> {
    if b.rows() != m.rows() {
        return Err(Error::Dimension(format!(
            "right-hand sides have {} rows, matrix has {}",
            b.rows(),
            m.rows()
        )));
    }
    let n = m.cols();
    let aug = m.hstack(b);
    let r = rref(&aug);
    if r.pivots.iter().any(|&c| c >= n) {
        return Ok(None);
    }
    let cols = (0..b.cols())
        .map(|j| {
            let entries = r
                .reduced
                .iter()
                .enumerate()
                .map(|(i, row)| (r.pivots[i], row.get(n + j)))
                .collect();
            SparseVector::from_entries(n, entries)
        })
        .collect();
    Ok(Some(SparseMatrix::from_columns(n, cols)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2(rows: &[&[u8]]) -> SparseMatrix<F2> {
        SparseMatrix::from_dense(
            &rows
                .iter()
                .map(|r| r.iter().map(|&x| F2(x == 1)).collect())
                .collect::<Vec<_>>(),
        )
    }

    #[test]
    fn trivial_ranks() {
        assert_eq!(rank(&SparseMatrix::<F2>::zeros(0, 0)), 0);
        assert_eq!(rank(&SparseMatrix::<F2>::identity(3)), 3);
        let m = SparseMatrix::from_dense(&[vec!["1+T".parse::<LaurentPoly>().unwrap()]]);
        assert_eq!(rank_laurent(&m), 1);
    }

    #[test]
    fn kernel_of_row_of_ones() {
        assert!(kernel_basis(&SparseMatrix::<F2>::identity(2)).is_empty());
        let k = kernel_basis(&f2(&[&[1, 1]]));
        assert_eq!(k.len(), 1);
        assert_eq!(k[0].to_dense(), vec![F2::ONE, F2::ONE]);
    }

    #[test]
    fn solve_picks_pivot_solution() {
        let m = f2(&[&[1, 1], &[0, 0]]);
        let b = SparseVector::from_dense(&[F2::ONE, F2::ZERO]);
        let x = solve_in_image(&m, &b).unwrap().unwrap();
        assert_eq!(x.to_dense(), vec![F2::ONE, F2::ZERO]);
        let z = SparseMatrix::<F2>::zeros(2, 2);
        assert_eq!(solve_in_image(&z, &b).unwrap(), None);
        let id = SparseMatrix::<F2>::identity(2);
        assert_eq!(solve_in_image(&id, &b).unwrap(), Some(b.clone()));
        assert!(solve_in_image(&id, &SparseVector::zero(3)).is_err());
    }

    #[test]
    fn bitset_path_matches_generic() {
        let m = f2(&[&[1, 0, 1, 1], &[1, 1, 0, 0], &[0, 1, 1, 1]]);
        assert_eq!(rref_f2(&m), rref_generic(&m));
        assert_eq!(rank_f2(&m), 2);
    }
}
