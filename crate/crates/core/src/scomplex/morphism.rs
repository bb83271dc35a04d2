use std::fmt;
use std::sync::Arc;

use super::object::SComplex;
use crate::algebra::{SparseMatrix, F2};
use crate::complex::{ChainMap, FilteredChainComplex, Generator};
use crate::error::{Error, Result};
use crate::level::{format_rational, Extended, Rational};

/// The four block identities equivalent to `d̃′ λ̃ = λ̃ d̃`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MorphismIdentity {
    /// `d′λ = λd`
    Chain,
    /// `u′λ + d′η + δ₂′Δ₁ = ηd + λu + Δ₂δ₁`
    U,
    /// `d′Δ₂ + δ₂′ = λδ₂`
    Delta2,
    /// `δ₁′λ = Δ₁d + δ₁`
    Delta1,
}

impl MorphismIdentity {
    pub const ALL: [MorphismIdentity; 4] = [
        MorphismIdentity::Chain,
        MorphismIdentity::U,
        MorphismIdentity::Delta2,
        MorphismIdentity::Delta1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MorphismIdentity::Chain => "chain identity d'lambda = lambda d",
            MorphismIdentity::U => {
                "u identity u'lambda + d'eta + delta2'Delta1 = eta d + lambda u + Delta2 delta1"
            }
            MorphismIdentity::Delta2 => "delta2 identity d'Delta2 + delta2' = lambda delta2",
            MorphismIdentity::Delta1 => "delta1 identity delta1'lambda = Delta1 d + delta1",
        }
    }
}

impl fmt::Display for MorphismIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismReport {
    pub identities: Vec<(MorphismIdentity, bool)>,
    /// The assembled total map commutes with the total differentials.
    pub commutes: bool,
    /// Degree-shape and level-certificate problems.
    pub shape: Vec<String>,
}

impl MorphismReport {
    pub fn identities_hold(&self) -> bool {
        self.identities.iter().all(|(_, ok)| *ok)
    }

    pub fn is_clean(&self) -> bool {
        self.identities_hold() && self.shape.is_empty()
    }

    pub fn summary(&self) -> String {
        let mut parts: Vec<String> = self
            .identities
            .iter()
            .filter(|(_, ok)| !ok)
            .map(|(i, _)| format!("{i} fails"))
            .collect();
        parts.extend(self.shape.iter().cloned());
        parts.join("; ")
    }
}

/// A morphism of S-complexes: the total map
/// `[[λ, 0, 0], [η, λ, Δ₂], [Δ₁, 0, ι]]` where `ι` pairs the reducible
/// generators of source and target by position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SMorphism {
    source: Arc<SComplex>,
    target: Arc<SComplex>,
    degree: i64,
    pub(crate) lambda: SparseMatrix<F2>,
    pub(crate) eta: SparseMatrix<F2>,
    pub(crate) delta1: SparseMatrix<F2>,
    pub(crate) delta2: SparseMatrix<F2>,
    level_shift: Extended,
}

pub(crate) fn same_object(a: &Arc<SComplex>, b: &Arc<SComplex>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Degree and level checks for one block; `shift = None` skips levels.
pub(crate) fn check_block(
    name: &str,
    m: &SparseMatrix<F2>,
    src: &[Generator],
    dst: &[Generator],
    degree: i64,
    shift: Option<&Rational>,
    out: &mut Vec<String>,
) {
    for (r, c, _) in m.entries() {
        let (g, h) = (&src[c], &dst[r]);
        if h.degree != g.degree + degree {
            out.push(format!(
                "{name}({}) hits {} in degree {}, expected {}",
                g.id,
                h.id,
                h.degree,
                g.degree + degree
            ));
        }
        if let Some(s) = shift {
            if h.level > &g.level + s {
                out.push(format!(
                    "{name}({}) hits {} at level {} above {} + {}",
                    g.id,
                    h.id,
                    format_rational(&h.level),
                    format_rational(&g.level),
                    format_rational(s)
                ));
            }
        }
    }
}

fn check_dims(name: &str, m: &SparseMatrix<F2>, rows: usize, cols: usize) -> Result<()> {
    if m.rows() != rows || m.cols() != cols {
        return Err(Error::Dimension(format!(
            "{name} is {}x{}, expected {rows}x{cols}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

impl SMorphism {
    /// Checks shapes, then every identity and the level certificate.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        source: Arc<SComplex>,
        target: Arc<SComplex>,
        degree: i64,
        lambda: SparseMatrix<F2>,
        eta: SparseMatrix<F2>,
        delta1: SparseMatrix<F2>,
        delta2: SparseMatrix<F2>,
        level_shift: Extended,
    ) -> Result<Self> {
        let f = Self::new_unchecked(
            source,
            target,
            degree,
            lambda,
            eta,
            delta1,
            delta2,
            level_shift,
        )?;
        let report = f.report();
        if !report.is_clean() {
            return Err(Error::InvalidSMorphism(report.summary()));
        }
        Ok(f)
    }

    /// Checks matrix shapes and that `ι` is degree-compatible.
    #[allow(clippy::too_many_arguments)]
    pub fn new_unchecked(
        source: Arc<SComplex>,
        target: Arc<SComplex>,
        degree: i64,
        lambda: SparseMatrix<F2>,
        eta: SparseMatrix<F2>,
        delta1: SparseMatrix<F2>,
        delta2: SparseMatrix<F2>,
        level_shift: Extended,
    ) -> Result<Self> {
        let (nc, nr) = (source.irr().len(), source.red().len());
        let (mc, mr) = (target.irr().len(), target.red().len());
        check_dims("lambda", &lambda, mc, nc)?;
        check_dims("eta", &eta, mc, nc)?;
        check_dims("Delta1", &delta1, mr, nc)?;
        check_dims("Delta2", &delta2, mc, nr)?;
        if nr != mr {
            return Err(Error::InvalidSMorphism(format!(
                "reducible parts have sizes {nr} and {mr}; the reducible corner must be an identity"
            )));
        }
        for (a, b) in source
            .red()
            .generators()
            .iter()
            .zip(target.red().generators())
        {
            if b.degree != a.degree + degree {
                return Err(Error::InvalidSMorphism(format!(
                    "reducible corner sends {} (degree {}) to {} (degree {})",
                    a.id, a.degree, b.id, b.degree
                )));
            }
        }
        Ok(SMorphism {
            source,
            target,
            degree,
            lambda,
            eta,
            delta1,
            delta2,
            level_shift,
        })
    }

    pub fn identity(s: Arc<SComplex>) -> Self {
        let (nc, nr) = (s.irr().len(), s.red().len());
        SMorphism {
            source: s.clone(),
            target: s,
            degree: 0,
            lambda: SparseMatrix::identity(nc),
            eta: SparseMatrix::zeros(nc, nc),
            delta1: SparseMatrix::zeros(nr, nc),
            delta2: SparseMatrix::zeros(nc, nr),
            level_shift: Extended::Finite(Rational::from_integer(0.into())),
        }
    }

    pub fn source(&self) -> &Arc<SComplex> {
        &self.source
    }

    pub fn target(&self) -> &Arc<SComplex> {
        &self.target
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn lambda(&self) -> &SparseMatrix<F2> {
        &self.lambda
    }

    pub fn eta(&self) -> &SparseMatrix<F2> {
        &self.eta
    }

    pub fn delta1(&self) -> &SparseMatrix<F2> {
        &self.delta1
    }

    pub fn delta2(&self) -> &SparseMatrix<F2> {
        &self.delta2
    }

    pub fn level_shift(&self) -> &Extended {
        &self.level_shift
    }

    /// The reducible corner `ι`.
    pub fn iota(&self) -> SparseMatrix<F2> {
        SparseMatrix::identity(self.source.red().len())
    }

    /// Left-hand side minus right-hand side of each identity.
    pub fn identity_defect(&self, which: MorphismIdentity) -> SparseMatrix<F2> {
        let (s, t) = (&*self.source, &*self.target);
        let iota = self.iota();
        match which {
            MorphismIdentity::Chain => t.d().mul(&self.lambda).add(&self.lambda.mul(s.d())),
            MorphismIdentity::U => t
                .u()
                .mul(&self.lambda)
                .add(&t.d().mul(&self.eta))
                .add(&t.delta2().mul(&self.delta1))
                .add(&self.eta.mul(s.d()))
                .add(&self.lambda.mul(s.u()))
                .add(&self.delta2.mul(s.delta1())),
            MorphismIdentity::Delta2 => t
                .d()
                .mul(&self.delta2)
                .add(&t.delta2().mul(&iota))
                .add(&self.lambda.mul(s.delta2())),
            MorphismIdentity::Delta1 => t
                .delta1()
                .mul(&self.lambda)
                .add(&self.delta1.mul(s.d()))
                .add(&iota.mul(s.delta1())),
        }
    }

    pub fn report(&self) -> MorphismReport {
        let identities = MorphismIdentity::ALL
            .iter()
            .map(|&i| (i, self.identity_defect(i).is_zero()))
            .collect();
        let total = self.total_matrix();
        let commutes =
            self.target.total_matrix().mul(&total) == total.mul(&self.source.total_matrix());
        let (s, t) = (&*self.source, &*self.target);
        let (sc, sr) = (s.irr().generators(), s.red().generators());
        let (tc, tr) = (t.irr().generators(), t.red().generators());
        let shift = self.level_shift.finite();
        let k = self.degree;
        let mut shape = Vec::new();
        check_block("lambda", &self.lambda, sc, tc, k, shift, &mut shape);
        check_block("eta", &self.eta, sc, tc, k - 1, shift, &mut shape);
        check_block("Delta1", &self.delta1, sc, tr, k, shift, &mut shape);
        check_block("Delta2", &self.delta2, sr, tc, k - 1, shift, &mut shape);
        check_block("iota", &self.iota(), sr, tr, k, shift, &mut shape);
        MorphismReport {
            identities,
            commutes,
            shape,
        }
    }

    /// The block matrix on `C ⊕ C' ⊕ R`.
    pub fn total_matrix(&self) -> SparseMatrix<F2> {
        let (nc, nr) = (self.source.irr().len(), self.source.red().len());
        let mc = self.target.irr().len();
        let mut entries = Vec::new();
        for (r, c, x) in self.lambda.entries() {
            entries.push((r, c, *x));
            entries.push((mc + r, nc + c, *x));
        }
        for (r, c, x) in self.eta.entries() {
            entries.push((mc + r, c, *x));
        }
        for (r, c, x) in self.delta1.entries() {
            entries.push((2 * mc + r, c, *x));
        }
        for (r, c, x) in self.delta2.entries() {
            entries.push((mc + r, 2 * nc + c, *x));
        }
        for i in 0..nr {
            entries.push((2 * mc + i, 2 * nc + i, F2::ONE));
        }
        SparseMatrix::from_entries(2 * mc + nr, 2 * nc + nr, entries).expect("blocks are disjoint")
    }

    /// The induced map of total complexes.
    pub fn total_chain_map(&self) -> Result<ChainMap<F2>> {
        let s: Arc<FilteredChainComplex<F2>> = Arc::new(super::assemble_total(&self.source)?);
        let t: Arc<FilteredChainComplex<F2>> = Arc::new(super::assemble_total(&self.target)?);
        ChainMap::new(
            s,
            t,
            self.degree,
            self.total_matrix(),
            self.level_shift.clone(),
        )
    }

    /// `self ∘ before`.
    pub fn compose(&self, before: &SMorphism) -> Result<SMorphism> {
        compose(self, before)
    }
}

/// `g ∘ f`, block by block.
pub fn compose(g: &SMorphism, f: &SMorphism) -> Result<SMorphism> {
    if !same_object(f.target(), g.source()) {
        return Err(Error::MismatchedEndpoints(
            "target of f differs from source of g".into(),
        ));
    }
    let lambda = g.lambda.mul(&f.lambda);
    let eta = g
        .eta
        .mul(&f.lambda)
        .add(&g.lambda.mul(&f.eta))
        .add(&g.delta2.mul(&f.delta1));
    // the reducible corners are identities, so ι_g Δ₁f = Δ₁f and Δ₂g ι_f = Δ₂g
    let delta2 = g.lambda.mul(&f.delta2).add(&g.delta2);
    let delta1 = g.delta1.mul(&f.lambda).add(&f.delta1);
    let shift = f.level_shift.plus_ext(&g.level_shift);
    SMorphism::new(
        f.source.clone(),
        g.target.clone(),
        f.degree + g.degree,
        lambda,
        eta,
        delta1,
        delta2,
        shift,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::FilteredChainComplex;
    use crate::level::int;

    fn s0() -> Arc<SComplex> {
        let irr =
            FilteredChainComplex::from_ids(vec![Generator::new("x", 3, int(2))], vec![], true)
                .unwrap();
        Arc::new(
            SComplex::new(
                irr,
                vec![Generator::new("Theta", 2, int(0))],
                SparseMatrix::zeros(1, 1),
                SparseMatrix::from_entries(1, 1, vec![(0, 0, F2::ONE)]).unwrap(),
                SparseMatrix::zeros(1, 1),
            )
            .unwrap(),
        )
    }

    #[test]
    fn identity_is_a_unit() {
        let s = s0();
        let id = SMorphism::identity(s.clone());
        assert!(id.report().is_clean());
        assert!(id.report().commutes);
        let c = compose(&id, &id).unwrap();
        assert_eq!(c, id);
        assert!(id.total_chain_map().unwrap().is_verified());
    }

    #[test]
    fn dropping_lambda_breaks_the_delta1_identity() {
        let s = s0();
        let f = SMorphism::new_unchecked(
            s.clone(),
            s.clone(),
            0,
            SparseMatrix::zeros(1, 1),
            SparseMatrix::zeros(1, 1),
            SparseMatrix::zeros(1, 1),
            SparseMatrix::zeros(1, 1),
            Extended::Finite(int(0)),
        )
        .unwrap();
        let rep = f.report();
        let failed: Vec<_> = rep
            .identities
            .iter()
            .filter(|(_, ok)| !ok)
            .map(|(i, _)| *i)
            .collect();
        assert_eq!(failed, vec![MorphismIdentity::Delta1]);
        assert!(!rep.commutes);
        // η(x) = x has the wrong degree for an eta block
        let e = SMorphism::new_unchecked(
            s.clone(),
            s.clone(),
            0,
            SparseMatrix::identity(1),
            SparseMatrix::identity(1),
            SparseMatrix::zeros(1, 1),
            SparseMatrix::zeros(1, 1),
            Extended::Finite(int(0)),
        )
        .unwrap();
        assert!(!e.report().shape.is_empty());
    }
}
