use std::collections::BTreeMap;
use std::sync::Arc;

use super::chain::{FilteredChainComplex, Generator};
use super::homology::{homology_unchecked, HomologySummary};
use crate::algebra::{rank, Field, SparseMatrix};
use crate::error::{Error, Result};
use crate::level::{Extended, Rational};

/// A degree-`k` chain map `f: S_n -> T_{n+k}`, stored as one
/// `|T| x |S|` matrix. `level_shift` is the certified bound `c` with
/// `ℓ_T(f g) <= ℓ_S(g) + c`; `Infinity` means no certificate.
#[derive(Clone, Debug)]
pub struct ChainMap<F: Field> {
    source: Arc<FilteredChainComplex<F>>,
    target: Arc<FilteredChainComplex<F>>,
    degree: i64,
    matrix: SparseMatrix<F>,
    level_shift: Extended,
    verified: bool,
}

impl<F: Field> ChainMap<F> {
    /// Checks the degree shape, `d_T f = f d_S`, and the level certificate when finite.
    pub fn new(
        source: Arc<FilteredChainComplex<F>>,
        target: Arc<FilteredChainComplex<F>>,
        degree: i64,
        matrix: SparseMatrix<F>,
        level_shift: Extended,
    ) -> Result<Self> {
        let mut f = Self::new_unchecked(source, target, degree, matrix, level_shift)?;
        if let Some(why) = f.first_failure() {
            return Err(Error::InvalidChainMap(why));
        }
        f.verified = true;
        Ok(f)
    }

    pub fn new_unchecked(
        source: Arc<FilteredChainComplex<F>>,
        target: Arc<FilteredChainComplex<F>>,
        degree: i64,
        matrix: SparseMatrix<F>,
        level_shift: Extended,
    ) -> Result<Self> {
        if matrix.rows() != target.len() || matrix.cols() != source.len() {
            return Err(Error::Dimension(format!(
                "map matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.len(),
                source.len()
            )));
        }
        Ok(ChainMap {
            source,
            target,
            degree,
            matrix,
            level_shift,
            verified: false,
        })
    }

    pub fn identity(c: Arc<FilteredChainComplex<F>>) -> Self {
        let n = c.len();
        ChainMap {
            source: c.clone(),
            target: c,
            degree: 0,
            matrix: SparseMatrix::identity(n),
            level_shift: Extended::Finite(Rational::from_integer(0.into())),
            verified: true,
        }
    }

    pub fn zero(
        source: Arc<FilteredChainComplex<F>>,
        target: Arc<FilteredChainComplex<F>>,
        degree: i64,
    ) -> Self {
        let m = SparseMatrix::zeros(target.len(), source.len());
        ChainMap {
            source,
            target,
            degree,
            matrix: m,
            level_shift: Extended::Finite(Rational::from_integer(0.into())),
            verified: true,
        }
    }

    /// Description of the first broken law, if any.
    pub fn first_failure(&self) -> Option<String> {
        let (s, t) = (&*self.source, &*self.target);
        for (r, c, coeff) in self.matrix.entries() {
            let (g, h) = (s.generator(c), t.generator(r));
            if h.degree != g.degree + self.degree {
                return Some(format!(
                    "f({}) hits {}: degree {} -> {}, map degree {}",
                    g.id, h.id, g.degree, h.degree, self.degree
                ));
            }
            if let Extended::Finite(shift) = &self.level_shift {
                let lv = t.entry_level(r, coeff);
                if lv > &g.level + shift {
                    return Some(format!(
                        "f({}) hits {} above the certified level shift",
                        g.id, h.id
                    ));
                }
            }
        }
        let lhs = t.differential().mul(&self.matrix);
        let rhs = self.matrix.mul(s.differential());
        if lhs != rhs {
            let diff = lhs.add(&rhs);
            let (r, c, _) = diff.entries().next().expect("matrices differ");
            return Some(format!(
                "d f != f d at ({}, {})",
                s.generator(c).id,
                t.generator(r).id
            ));
        }
        None
    }

    pub fn source(&self) -> &Arc<FilteredChainComplex<F>> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FilteredChainComplex<F>> {
        &self.target
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn matrix(&self) -> &SparseMatrix<F> {
        &self.matrix
    }

    pub fn level_shift(&self) -> &Extended {
        &self.level_shift
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    /// `f : S_n -> T_{n+k}` in local coordinates.
    pub fn block(&self, n: i64) -> SparseMatrix<F> {
        self.matrix.select(
            self.target.degree_indices(n + self.degree),
            self.source.degree_indices(n),
        )
    }

    pub fn compose(&self, before: &ChainMap<F>) -> Result<ChainMap<F>> {
        if !Arc::ptr_eq(before.target(), &self.source) && **before.target() != *self.source {
            return Err(Error::MismatchedEndpoints("chain map composition".into()));
        }
        ChainMap::new(
            before.source.clone(),
            self.target.clone(),
            before.degree + self.degree,
            self.matrix.mul(&before.matrix),
            before.level_shift.plus_ext(&self.level_shift),
        )
    }
}

/// Cone of a degree-`k` map: `cone_n = T_n ⊕ S_{n-1-k}` with
/// `d(t) = d_T t` and `d(s) = d_S s + f s`.
///
/// Its homology fits into `H_{n-k}S -> H_n T -> H_n cone -> H_{n-1-k}S -> H_{n-1}T`,
/// so `χ(cone) = χ(T) - (-1)^k χ(S)`. Generator ids are prefixed `t:` and `s:`;
/// levels are inherited, and the cone is flagged filtered exactly when the
/// filtration law holds for it.
pub fn mapping_cone<F: Field>(f: &ChainMap<F>) -> Result<FilteredChainComplex<F>> {
    if !f.verified {
        return Err(Error::UnverifiedChainMap);
    }
    let (s, t) = (&*f.source, &*f.target);
    let (ns, nt) = (s.len(), t.len());
    let mut gens: Vec<Generator> = t
        .generators()
        .iter()
        .map(|g| Generator::new(format!("t:{}", g.id), g.degree, g.level.clone()))
        .collect();
    gens.extend(s.generators().iter().map(|g| {
        Generator::new(
            format!("s:{}", g.id),
            g.degree + 1 + f.degree,
            g.level.clone(),
        )
    }));
    let mut entries = Vec::new();
    for (r, c, x) in t.differential().entries() {
        entries.push((r, c, x.clone()));
    }
    for (r, c, x) in s.differential().entries() {
        entries.push((nt + r, nt + c, x.clone()));
    }
    for (r, c, x) in f.matrix.entries() {
        entries.push((r, nt + c, x.clone()));
    }
    let d = SparseMatrix::from_entries(nt + ns, nt + ns, entries)?;
    let mut cone = FilteredChainComplex::new_unchecked(gens, d, true)?;
    if let Some(shift) = t.deck_shift().or(s.deck_shift()) {
        cone = cone.with_deck_shift(shift.clone());
    }
    let report = cone.validate();
    if !report.d_squared_ok() {
        return Err(Error::InvalidComplex(format!("cone: {}", report.summary())));
    }
    Ok(cone.with_filtered(report.filtration_ok()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiIsoCertificate {
    pub is_quasi_iso: bool,
    /// `dim H_n(cone)` for every populated cone degree.
    pub cone_dims: BTreeMap<i64, usize>,
}

pub fn is_quasi_iso<F: Field>(f: &ChainMap<F>) -> Result<QuasiIsoCertificate> {
    let cone = mapping_cone(f)?;
    let h = homology_unchecked(&cone);
    let cone_dims = h.dims();
    Ok(QuasiIsoCertificate {
        is_quasi_iso: h.is_zero(),
        cone_dims,
    })
}

/// `f_*` in the representative bases, keyed by source degree `n`
/// (maps `H_n S -> H_{n+k} T`).
#[derive(Clone, Debug)]
pub struct InducedMap<F: Field> {
    pub source_homology: HomologySummary<F>,
    pub target_homology: HomologySummary<F>,
    pub blocks: BTreeMap<i64, SparseMatrix<F>>,
}

impl<F: Field> InducedMap<F> {
    pub fn block(&self, n: i64) -> Option<&SparseMatrix<F>> {
        self.blocks.get(&n)
    }

    pub fn rank(&self, n: i64) -> usize {
        self.blocks.get(&n).map_or(0, rank)
    }

    pub fn is_injective(&self, n: i64) -> bool {
        self.rank(n) == self.source_homology.dim(n)
    }

    pub fn is_surjective_onto(&self, n: i64, k: i64) -> bool {
        self.rank(n) == self.target_homology.dim(n + k)
    }
}

pub fn induced_map<F: Field>(f: &ChainMap<F>) -> Result<InducedMap<F>> {
    if !f.verified {
        return Err(Error::UnverifiedChainMap);
    }
    let hs = homology_unchecked(&f.source);
    let ht = homology_unchecked(&f.target);
    let mut blocks = BTreeMap::new();
    for (&n, h) in &hs.degrees {
        let image = f.block(n).mul(&h.reps);
        let m = match ht.get(n + f.degree) {
            Some(th) => th.class_matrix(&image)?,
            None => SparseMatrix::zeros(0, h.dim()),
        };
        blocks.insert(n, m);
    }
    Ok(InducedMap {
        source_homology: hs,
        target_homology: ht,
        blocks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::F2;
    use crate::level::int;

    fn pair() -> Arc<FilteredChainComplex<F2>> {
        Arc::new(
            FilteredChainComplex::from_ids(
                vec![
                    Generator::new("a", 0, int(1)),
                    Generator::new("b", 1, int(2)),
                ],
                vec![("b".into(), "a".into(), F2::ONE)],
                true,
            )
            .unwrap(),
        )
    }

    fn point(deg: i64) -> Arc<FilteredChainComplex<F2>> {
        Arc::new(
            FilteredChainComplex::from_ids(vec![Generator::new("x", deg, int(0))], vec![], true)
                .unwrap(),
        )
    }

    #[test]
    fn identity_cone_is_acyclic() {
        let id = ChainMap::identity(pair());
        assert!(is_quasi_iso(&id).unwrap().is_quasi_iso);
        let idp = ChainMap::identity(point(2));
        let cert = is_quasi_iso(&idp).unwrap();
        assert!(cert.is_quasi_iso);
        let ind = induced_map(&idp).unwrap();
        assert_eq!(ind.block(2).unwrap(), &SparseMatrix::identity(1));
    }

    #[test]
    fn zero_maps() {
        let z = ChainMap::zero(pair(), pair(), 0);
        assert!(is_quasi_iso(&z).unwrap().is_quasi_iso);
        let z = ChainMap::zero(point(0), point(0), 0);
        let cone = mapping_cone(&z).unwrap();
        assert_eq!(homology_unchecked(&cone).total_dim(), 2);
        assert!(!is_quasi_iso(&z).unwrap().is_quasi_iso);
        // a degree 1 zero map puts the source copy in degree 0 + 1 + 1
        let z1 = ChainMap::zero(point(0), point(0), 1);
        let h = homology_unchecked(&mapping_cone(&z1).unwrap());
        assert_eq!((h.dim(0), h.dim(2)), (1, 1));
    }

    #[test]
    fn rejects_non_chain_map() {
        let f = ChainMap::new(
            pair(),
            point(0),
            0,
            SparseMatrix::from_entries(1, 2, vec![(0, 0, F2::ONE)]).unwrap(),
            Extended::Infinity,
        );
        // f d b = f a = x, d f b = 0
        assert!(matches!(f, Err(Error::InvalidChainMap(_))));
        let unverified = ChainMap::new_unchecked(
            pair(),
            point(0),
            0,
            SparseMatrix::zeros(1, 2),
            Extended::Infinity,
        )
        .unwrap();
        assert!(matches!(
            mapping_cone(&unverified),
            Err(Error::UnverifiedChainMap)
        ));
    }
}
