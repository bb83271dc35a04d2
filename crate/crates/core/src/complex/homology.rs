use std::collections::BTreeMap;

use super::chain::FilteredChainComplex;
use crate::algebra::{kernel_basis, rank, rref, solve_in_image, Field, SparseMatrix, SparseVector};
use crate::error::{Error, Result};

/// Homology in one degree, in local coordinates of `C_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeHomology<F: Field> {
    pub degree: i64,
    /// Basis of `ker d_n`.
    pub cycles: SparseMatrix<F>,
    /// Spanning set of `im d_{n+1}` (the columns of `d_{n+1}`).
    pub boundaries: SparseMatrix<F>,
    /// Cycles whose classes form a basis of `H_n`.
    pub reps: SparseMatrix<F>,
}

impl<F: Field> DegreeHomology<F> {
    pub fn dim(&self) -> usize {
        self.reps.cols()
    }

    /// `[B | reps]`: solving against it splits a cycle into boundary and class parts.
    fn basis_matrix(&self) -> SparseMatrix<F> {
        self.boundaries.hstack(&self.reps)
    }

    /// Coordinates of the class of a local cycle in the representative basis.
    pub fn class_coordinates(&self, z: &SparseVector<F>) -> Result<SparseVector<F>> {
        let x = solve_in_image(&self.basis_matrix(), z)?.ok_or(Error::NotACycle)?;
        let nb = self.boundaries.cols();
        let idx: Vec<usize> = (nb..nb + self.dim()).collect();
        Ok(x.select(&idx))
    }

    /// Coordinates of many cycles at once (columns of `zs`).
    pub fn class_matrix(&self, zs: &SparseMatrix<F>) -> Result<SparseMatrix<F>> {
        let cols = (0..zs.cols())
            .map(|j| self.class_coordinates(&zs.column(j)))
            .collect::<Result<Vec<_>>>()?;
        Ok(SparseMatrix::from_columns(self.dim(), cols))
    }
}

/// Homology of a complex in every populated degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologySummary<F: Field> {
    pub degrees: BTreeMap<i64, DegreeHomology<F>>,
}

impl<F: Field> HomologySummary<F> {
    pub fn dim(&self, n: i64) -> usize {
        self.degrees.get(&n).map_or(0, DegreeHomology::dim)
    }

    pub fn get(&self, n: i64) -> Option<&DegreeHomology<F>> {
        self.degrees.get(&n)
    }

    pub fn total_dim(&self) -> usize {
        self.degrees.values().map(DegreeHomology::dim).sum()
    }

    pub fn dims(&self) -> BTreeMap<i64, usize> {
        self.degrees.iter().map(|(n, h)| (*n, h.dim())).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }
}

pub fn degree_homology<F: Field>(c: &FilteredChainComplex<F>, n: i64) -> DegreeHomology<F> {
    let dn = c.block(n);
    let cycles_vecs = kernel_basis(&dn);
    let cycles = SparseMatrix::from_columns(c.rank_in_degree(n), cycles_vecs);
    let boundaries = c.block(n + 1);
    // representatives: the cycle columns that are pivots of [B | Z]
    let bz = boundaries.hstack(&cycles);
    let nb = boundaries.cols();
    let chosen: Vec<usize> = rref(&bz)
        .pivots
        .into_iter()
        .filter(|&p| p >= nb)
        .map(|p| p - nb)
        .collect();
    let reps = SparseMatrix::from_columns(
        c.rank_in_degree(n),
        chosen.iter().map(|&j| cycles.column(j)).collect(),
    );
    DegreeHomology {
        degree: n,
        cycles,
        boundaries,
        reps,
    }
}

/// Requires `d² = 0`; the filtration law is irrelevant here.
pub fn homology<F: Field>(c: &FilteredChainComplex<F>) -> Result<HomologySummary<F>> {
    let report = c.validate();
    if !report.d_squared_ok() {
        return Err(Error::InvalidComplex(report.summary()));
    }
    Ok(homology_unchecked(c))
}

pub fn homology_unchecked<F: Field>(c: &FilteredChainComplex<F>) -> HomologySummary<F> {
    let degrees = c
        .degrees()
        .into_iter()
        .map(|n| (n, degree_homology(c, n)))
        .collect();
    HomologySummary { degrees }
}

/// `dim C_n - rank d_n - rank d_{n+1}`, computed independently of the representatives.
pub fn betti_by_ranks<F: Field>(c: &FilteredChainComplex<F>, n: i64) -> usize {
    c.rank_in_degree(n) - rank(&c.block(n)) - rank(&c.block(n + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::F2;
    use crate::complex::Generator;
    use crate::level::int;

    #[test]
    fn small_examples() {
        let empty = FilteredChainComplex::<F2>::empty();
        assert!(homology(&empty).unwrap().is_zero());
        let one = FilteredChainComplex::<F2>::from_ids(
            vec![Generator::new("x", 3, int(0))],
            vec![],
            true,
        )
        .unwrap();
        let h = homology(&one).unwrap();
        assert_eq!(h.dim(3), 1);
        assert_eq!(h.total_dim(), 1);
        let pair = FilteredChainComplex::from_ids(
            vec![
                Generator::new("a", 0, int(1)),
                Generator::new("b", 1, int(2)),
            ],
            vec![("b".into(), "a".into(), F2::ONE)],
            true,
        )
        .unwrap();
        assert!(homology(&pair).unwrap().is_zero());
    }

    #[test]
    fn class_coordinates_mod_boundaries() {
        // a, a' in degree 0 with d b = a + a'; H_0 is one-dimensional
        let c = FilteredChainComplex::from_ids(
            vec![
                Generator::new("a", 0, int(0)),
                Generator::new("a'", 0, int(0)),
                Generator::new("b", 1, int(0)),
            ],
            vec![
                ("b".into(), "a".into(), F2::ONE),
                ("b".into(), "a'".into(), F2::ONE),
            ],
            true,
        )
        .unwrap();
        let h = homology(&c).unwrap();
        let h0 = h.get(0).unwrap();
        assert_eq!(h0.dim(), 1);
        let a = SparseVector::unit(2, 0);
        let a2 = SparseVector::unit(2, 1);
        assert_eq!(
            h0.class_coordinates(&a).unwrap(),
            h0.class_coordinates(&a2).unwrap()
        );
        assert!(h0.class_coordinates(&a.add(&a2)).unwrap().is_zero());
    }
}
