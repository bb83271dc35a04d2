//! Column-major sparse matrices and vectors over a scalar ring.

use std::fmt;

use super::field::{Ring, ScalarKind};
use crate::error::{Error, Result};

/// A sparse vector: strictly increasing indices, no stored zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SparseVector<S> {
    dim: usize,
    entries: Vec<(usize, S)>,
}

impl<S: Ring> SparseVector<S> {
    pub fn zero(dim: usize) -> Self {
        SparseVector {
            dim,
            entries: Vec::new(),
        }
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        assert!(i < dim);
        SparseVector {
            dim,
            entries: vec![(i, S::one())],
        }
    }

    /// Sums duplicate indices and drops zeros.
    pub fn from_entries(dim: usize, mut entries: Vec<(usize, S)>) -> Self {
        entries.sort_by_key(|(i, _)| *i);
        let mut out: Vec<(usize, S)> = Vec::with_capacity(entries.len());
        for (i, s) in entries {
            assert!(i < dim, "vector index {i} out of range {dim}");
            match out.last_mut() {
                Some((j, acc)) if *j == i => *acc = acc.add(&s),
                _ => out.push((i, s)),
            }
        }
        out.retain(|(_, s)| !s.is_zero());
        SparseVector { dim, entries: out }
    }

    pub fn from_dense(values: &[S]) -> Self {
        SparseVector {
            dim: values.len(),
            entries: values
                .iter()
                .enumerate()
                .filter(|(_, s)| !s.is_zero())
                .map(|(i, s)| (i, s.clone()))
                .collect(),
        }
    }

    pub fn to_dense(&self) -> Vec<S> {
        let mut v = vec![S::zero(); self.dim];
        for (i, s) in &self.entries {
            v[*i] = s.clone();
        }
        v
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[(usize, S)] {
        &self.entries
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.iter().map(|(i, _)| *i)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> S {
        match self.entries.binary_search_by_key(&i, |(j, _)| *j) {
            Ok(k) => self.entries[k].1.clone(),
            Err(_) => S::zero(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "vector dimension mismatch");
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (
            self.entries.iter().peekable(),
            other.entries.iter().peekable(),
        );
        loop {
            match (a.peek(), b.peek()) {
                (Some((i, x)), Some((j, y))) => {
                    if i < j {
                        out.push((*i, x.clone()));
                        a.next();
                    } else if j < i {
                        out.push((*j, y.clone()));
                        b.next();
                    } else {
                        let s = x.add(y);
                        if !s.is_zero() {
                            out.push((*i, s));
                        }
                        a.next();
                        b.next();
                    }
                }
                (Some((i, x)), None) => {
                    out.push((*i, x.clone()));
                    a.next();
                }
                (None, Some((j, y))) => {
                    out.push((*j, y.clone()));
                    b.next();
                }
                (None, None) => break,
            }
        }
        SparseVector {
            dim: self.dim,
            entries: out,
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return SparseVector::zero(self.dim);
        }
        SparseVector {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .map(|(i, s)| (*i, s.mul(c)))
                .filter(|(_, s)| !s.is_zero())
                .collect(),
        }
    }

    /// Restricts to the listed coordinates, renumbered `0..idx.len()`.
    pub fn select(&self, idx: &[usize]) -> Self {
        SparseVector::from_entries(
            idx.len(),
            idx.iter()
                .enumerate()
                .map(|(k, &i)| (k, self.get(i)))
                .collect(),
        )
    }

    /// Places this vector's coordinates at positions `idx` of a vector of length `dim`.
    pub fn embed(&self, dim: usize, idx: &[usize]) -> Self {
        assert_eq!(idx.len(), self.dim);
        SparseVector::from_entries(
            dim,
            self.entries
                .iter()
                .map(|(i, s)| (idx[*i], s.clone()))
                .collect(),
        )
    }
}

/// Sparse matrix stored by columns; each column is sorted by row with no zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SparseMatrix<S> {
    rows: usize,
    cols: usize,
    columns: Vec<Vec<(usize, S)>>,
}

impl<S: Ring> fmt::Debug for SparseMatrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparseMatrix {}x{} [", self.rows, self.cols)?;
        for (r, c, s) in self.entries() {
            write!(f, " ({r},{c})={s}")?;
        }
        write!(f, " ]")
    }
}

impl<S: Ring> SparseMatrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            columns: vec![Vec::new(); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix {
            rows: n,
            cols: n,
            columns: (0..n).map(|i| vec![(i, S::one())]).collect(),
        }
    }

    /// Rejects duplicate or out-of-range entries; zero scalars are dropped.
    pub fn from_entries(rows: usize, cols: usize, entries: Vec<(usize, usize, S)>) -> Result<Self> {
        let mut columns: Vec<Vec<(usize, S)>> = vec![Vec::new(); cols];
        for (r, c, s) in entries {
            if r >= rows || c >= cols {
                return Err(Error::OutOfRange {
                    row: r,
                    col: c,
                    rows,
                    cols,
                });
            }
            columns[c].push((r, s));
        }
        for (c, col) in columns.iter_mut().enumerate() {
            col.sort_by_key(|(r, _)| *r);
            if let Some(w) = col.windows(2).find(|w| w[0].0 == w[1].0) {
                return Err(Error::DuplicateEntry(w[0].0, c));
            }
            col.retain(|(_, s)| !s.is_zero());
        }
        Ok(SparseMatrix {
            rows,
            cols,
            columns,
        })
    }

    /// Like `from_entries`, but duplicate positions are summed.
    pub fn from_summed_entries(rows: usize, cols: usize, entries: Vec<(usize, usize, S)>) -> Self {
        let mut columns: Vec<Vec<(usize, S)>> = vec![Vec::new(); cols];
        for (r, c, s) in entries {
            assert!(
                r < rows && c < cols,
                "entry ({r},{c}) out of range {rows}x{cols}"
            );
            columns[c].push((r, s));
        }
        let columns = columns
            .into_iter()
            .map(|col| SparseVector::from_entries(rows, col).entries)
            .collect();
        SparseMatrix {
            rows,
            cols,
            columns,
        }
    }

    pub fn from_columns(rows: usize, cols: Vec<SparseVector<S>>) -> Self {
        for c in &cols {
            assert_eq!(c.dim, rows, "column length mismatch");
        }
        SparseMatrix {
            rows,
            cols: cols.len(),
            columns: cols.into_iter().map(|c| c.entries).collect(),
        }
    }

    pub fn from_dense(rows: &[Vec<S>]) -> Self {
        let nr = rows.len();
        let nc = rows.first().map_or(0, |r| r.len());
        let mut entries = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), nc, "ragged dense matrix");
            for (j, s) in row.iter().enumerate() {
                if !s.is_zero() {
                    entries.push((i, j, s.clone()));
                }
            }
        }
        SparseMatrix::from_entries(nr, nc, entries).expect("dense input is well-formed")
    }

    pub fn to_dense(&self) -> Vec<Vec<S>> {
        let mut d = vec![vec![S::zero(); self.cols]; self.rows];
        for (r, c, s) in self.entries() {
            d[r][c] = s.clone();
        }
        d
    }

    pub fn kind(&self) -> ScalarKind {
        S::KIND
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn get(&self, r: usize, c: usize) -> S {
        match self.columns[c].binary_search_by_key(&r, |(i, _)| *i) {
            Ok(k) => self.columns[c][k].1.clone(),
            Err(_) => S::zero(),
        }
    }

    pub fn column(&self, c: usize) -> SparseVector<S> {
        SparseVector {
            dim: self.rows,
            entries: self.columns[c].clone(),
        }
    }

    pub fn column_entries(&self, c: usize) -> &[(usize, S)] {
        &self.columns[c]
    }

    /// All nonzero entries in column-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &S)> + '_ {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(r, s)| (*r, c, s)))
    }

    pub fn transpose(&self) -> Self {
        let mut columns: Vec<Vec<(usize, S)>> = vec![Vec::new(); self.rows];
        for (r, c, s) in self.entries() {
            columns[r].push((c, s.clone()));
        }
        SparseMatrix {
            rows: self.cols,
            cols: self.rows,
            columns,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "matrix shape mismatch"
        );
        let columns = (0..self.cols)
            .map(|c| self.column(c).add(&other.column(c)).entries)
            .collect();
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            columns,
        }
    }

    /// `self * other`.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut acc: Vec<S> = vec![S::zero(); self.rows];
        let mut touched: Vec<usize> = Vec::new();
        let mut mark = vec![false; self.rows];
        let mut columns = Vec::with_capacity(other.cols);
        for ocol in &other.columns {
            for (k, b) in ocol {
                for (r, a) in &self.columns[*k] {
                    if !mark[*r] {
                        mark[*r] = true;
                        touched.push(*r);
                    }
                    acc[*r] = acc[*r].add(&a.mul(b));
                }
            }
            touched.sort_unstable();
            let mut col = Vec::with_capacity(touched.len());
            for &r in &touched {
                let s = std::mem::replace(&mut acc[r], S::zero());
                mark[r] = false;
                if !s.is_zero() {
                    col.push((r, s));
                }
            }
            touched.clear();
            columns.push(col);
        }
        SparseMatrix {
            rows: self.rows,
            cols: other.cols,
            columns,
        }
    }

    pub fn mul_vec(&self, v: &SparseVector<S>) -> SparseVector<S> {
        assert_eq!(self.cols, v.dim, "matrix-vector shape mismatch");
        let mut entries = Vec::new();
        for (k, b) in &v.entries {
            for (r, a) in &self.columns[*k] {
                entries.push((*r, a.mul(b)));
            }
        }
        SparseVector::from_entries(self.rows, entries)
    }

    /// Submatrix on the given row and column index lists (in that order).
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut pos = vec![usize::MAX; self.rows];
        for (k, &r) in rows.iter().enumerate() {
            pos[r] = k;
        }
        let columns = cols
            .iter()
            .map(|&c| {
                let mut col: Vec<(usize, S)> = self.columns[c]
                    .iter()
                    .filter(|(r, _)| pos[*r] != usize::MAX)
                    .map(|(r, s)| (pos[*r], s.clone()))
                    .collect();
                col.sort_by_key(|(r, _)| *r);
                col
            })
            .collect();
        SparseMatrix {
            rows: rows.len(),
            cols: cols.len(),
            columns,
        }
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let mut columns = self.columns.clone();
        columns.extend(other.columns.iter().cloned());
        SparseMatrix {
            rows: self.rows,
            cols: self.cols + other.cols,
            columns,
        }
    }

    pub fn push_column(&mut self, v: SparseVector<S>) {
        assert_eq!(v.dim, self.rows, "column length mismatch");
        self.columns.push(v.entries);
        self.cols += 1;
    }

    pub fn map<T: Ring>(&self, f: impl Fn(&S) -> T) -> SparseMatrix<T> {
        let columns = self
            .columns
            .iter()
            .map(|col| {
                col.iter()
                    .map(|(r, s)| (*r, f(s)))
                    .filter(|(_, t)| !t.is_zero())
                    .collect()
            })
            .collect();
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            columns,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::F2;

    #[test]
    fn rejects_bad_entries() {
        assert!(matches!(
            SparseMatrix::from_entries(2, 2, vec![(0, 0, F2::ONE), (0, 0, F2::ONE)]),
            Err(Error::DuplicateEntry(0, 0))
        ));
        assert!(matches!(
            SparseMatrix::from_entries(2, 2, vec![(2, 0, F2::ONE)]),
            Err(Error::OutOfRange { .. })
        ));
        let m = SparseMatrix::from_entries(2, 2, vec![(1, 1, F2::ZERO)]).unwrap();
        assert_eq!(m.nnz(), 0);
    }

    #[test]
    fn product_and_transpose() {
        let a = SparseMatrix::from_dense(&[vec![F2::ONE, F2::ONE], vec![F2::ZERO, F2::ONE]]);
        let sq = a.mul(&a);
        assert_eq!(sq, SparseMatrix::identity(2));
        assert_eq!(a.transpose().transpose(), a);
        assert_eq!(a.transpose().get(1, 0), F2::ONE);
    }
}
