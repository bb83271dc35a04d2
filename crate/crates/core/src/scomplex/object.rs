use std::collections::HashSet;
use std::fmt;

use crate::algebra::{rank, SparseMatrix, SparseVector, F2};
use crate::complex::{FilteredChainComplex, Generator, Violation};
use crate::error::{Error, Result};
use crate::filtered::{rho_degree, SpectralValue};
use crate::level::{format_rational, Rational};

/// The four structural relations of an S-complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    /// `d d = 0`
    DSquared,
    /// `δ₁ d = 0`
    Delta1D,
    /// `d δ₂ = 0`
    DDelta2,
    /// `u d + d u + δ₂ δ₁ = 0`
    UHomotopy,
}

impl Relation {
    pub const ALL: [Relation; 4] = [
        Relation::DSquared,
        Relation::Delta1D,
        Relation::DDelta2,
        Relation::UHomotopy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Relation::DSquared => "d^2 = 0",
            Relation::Delta1D => "delta1 d = 0",
            Relation::DDelta2 => "d delta2 = 0",
            Relation::UHomotopy => "u d + d u + delta2 delta1 = 0",
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which structure map an entry belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StructureMap {
    D,
    U,
    Delta1,
    Delta2,
}

impl StructureMap {
    /// Degree of the map.
    pub fn degree(self) -> i64 {
        match self {
            StructureMap::D | StructureMap::Delta1 => -1,
            StructureMap::U | StructureMap::Delta2 => -2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            StructureMap::D => "d",
            StructureMap::U => "u",
            StructureMap::Delta1 => "delta1",
            StructureMap::Delta2 => "delta2",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SViolation {
    Degree {
        map: StructureMap,
        from: String,
        to: String,
        from_degree: i64,
        to_degree: i64,
    },
    Filtration {
        map: StructureMap,
        from: String,
        to: String,
        from_level: Rational,
        to_level: Rational,
    },
    Relation {
        relation: Relation,
        from: String,
        to: String,
    },
}

impl fmt::Display for SViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SViolation::Degree {
                map,
                from,
                to,
                from_degree,
                to_degree,
            } => write!(
                f,
                "{}({from}) hits {to}: degree {from_degree} -> {to_degree}, expected shift {}",
                map.name(),
                map.degree()
            ),
            SViolation::Filtration {
                map,
                from,
                to,
                from_level,
                to_level,
            } => write!(
                f,
                "filtration: {}({from}) hits {to} at level {} > {}",
                map.name(),
                format_rational(to_level),
                format_rational(from_level)
            ),
            SViolation::Relation { relation, from, to } => {
                write!(f, "{relation} fails: entry ({from} -> {to})")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SValidationReport {
    pub violations: Vec<SViolation>,
    /// Relations that hold, checked one by one on the blocks.
    pub relations: Vec<(Relation, bool)>,
    /// `d̃² = 0` on the assembled total complex.
    pub total_d_squared_zero: bool,
    pub warnings: Vec<String>,
}

impl SValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn relations_hold(&self) -> bool {
        self.relations.iter().all(|(_, ok)| *ok)
    }

    /// The blockwise and total verdicts coincide.
    pub fn verdicts_agree(&self) -> bool {
        self.relations_hold() == self.total_d_squared_zero
    }

    pub fn failed_relations(&self) -> Vec<Relation> {
        self.relations
            .iter()
            .filter(|(_, ok)| !ok)
            .map(|(r, _)| *r)
            .collect()
    }

    pub fn summary(&self) -> String {
        self.violations
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join("; ")
    }
}

/// Degrees in which the data is claimed to be invariant: `q <= below` or `q >= above`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AllowableDegrees {
    pub below: Option<i64>,
    pub above: Option<i64>,
}

/// `(C, d)` together with a graded reducible part `R` and maps
/// `u: C_* -> C_{*-2}`, `δ₁: C_* -> R_{*-1}`, `δ₂: R_* -> C_{*-2}`.
/// All maps are over F2, stored as global matrices on the generators of
/// `C` and `R`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SComplex {
    irr: FilteredChainComplex<F2>,
    red: FilteredChainComplex<F2>,
    u: SparseMatrix<F2>,
    delta1: SparseMatrix<F2>,
    delta2: SparseMatrix<F2>,
    chamber: Option<Rational>,
    allowable: Option<AllowableDegrees>,
}

impl SComplex {
    /// Validates every law eagerly; see `validate`.
    pub fn new(
        irr: FilteredChainComplex<F2>,
        red: Vec<Generator>,
        u: SparseMatrix<F2>,
        delta1: SparseMatrix<F2>,
        delta2: SparseMatrix<F2>,
    ) -> Result<Self> {
        let s = Self::new_unchecked(irr, red, u, delta1, delta2)?;
        let report = s.validate();
        if !report.is_clean() {
            return Err(Error::InvalidSComplex(report.summary()));
        }
        Ok(s)
    }

    /// Checks ids and matrix shapes only.
    pub fn new_unchecked(
        irr: FilteredChainComplex<F2>,
        red: Vec<Generator>,
        u: SparseMatrix<F2>,
        delta1: SparseMatrix<F2>,
        delta2: SparseMatrix<F2>,
    ) -> Result<Self> {
        let (nc, nr) = (irr.len(), red.len());
        let shapes = [
            ("u", &u, nc, nc),
            ("delta1", &delta1, nr, nc),
            ("delta2", &delta2, nc, nr),
        ];
        for (name, m, rows, cols) in shapes {
            if m.rows() != rows || m.cols() != cols {
                return Err(Error::Dimension(format!(
                    "{name} is {}x{}, expected {rows}x{cols}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        let mut ids: HashSet<&str> = HashSet::new();
        for g in irr.generators().iter().chain(&red) {
            if !ids.insert(&g.id) {
                return Err(Error::DuplicateGenerator(g.id.clone()));
            }
        }
        let red = FilteredChainComplex::new_unchecked(red, SparseMatrix::zeros(nr, nr), true)?;
        Ok(SComplex {
            irr,
            red,
            u,
            delta1,
            delta2,
            chamber: None,
            allowable: None,
        })
    }

    pub fn zero() -> Self {
        Self::new_unchecked(
            FilteredChainComplex::empty(),
            Vec::new(),
            SparseMatrix::zeros(0, 0),
            SparseMatrix::zeros(0, 0),
            SparseMatrix::zeros(0, 0),
        )
        .expect("empty S-complex")
    }

    pub fn with_chamber(mut self, m: Rational) -> Self {
        self.chamber = Some(m);
        self
    }

    pub fn with_allowable(mut self, a: AllowableDegrees) -> Self {
        self.allowable = Some(a);
        self
    }

    pub fn chamber(&self) -> Option<&Rational> {
        self.chamber.as_ref()
    }

    pub fn allowable(&self) -> Option<&AllowableDegrees> {
        self.allowable.as_ref()
    }

    pub fn irr(&self) -> &FilteredChainComplex<F2> {
        &self.irr
    }

    /// `R` as a complex with zero differential.
    pub fn red(&self) -> &FilteredChainComplex<F2> {
        &self.red
    }

    pub fn d(&self) -> &SparseMatrix<F2> {
        self.irr.differential()
    }

    pub fn u(&self) -> &SparseMatrix<F2> {
        &self.u
    }

    pub fn delta1(&self) -> &SparseMatrix<F2> {
        &self.delta1
    }

    pub fn delta2(&self) -> &SparseMatrix<F2> {
        &self.delta2
    }

    /// The same object with the structure maps replaced (unchecked).
    pub fn with_maps(
        &self,
        u: SparseMatrix<F2>,
        delta1: SparseMatrix<F2>,
        delta2: SparseMatrix<F2>,
    ) -> Result<Self> {
        let mut s = Self::new_unchecked(
            self.irr.clone(),
            self.red.generators().to_vec(),
            u,
            delta1,
            delta2,
        )?;
        s.chamber = self.chamber.clone();
        s.allowable = self.allowable.clone();
        Ok(s)
    }

    /// The sub-S-complex on generators of level at most `t`.
    pub fn sublevel(&self, t: &Rational) -> Result<Self> {
        let kc = self.irr.indices_at_or_below(t);
        let kr = self.red.indices_at_or_below(t);
        let red = kr.iter().map(|&i| self.red.generator(i).clone()).collect();
        let mut s = Self::new_unchecked(
            self.irr.restrict(&kc)?,
            red,
            self.u.select(&kc, &kc),
            self.delta1.select(&kr, &kc),
            self.delta2.select(&kc, &kr),
        )?;
        s.chamber = self.chamber.clone();
        s.allowable = self.allowable.clone();
        Ok(s)
    }

    /// Sorted distinct levels over `C` and `R`.
    pub fn levels(&self) -> Vec<Rational> {
        let mut l = self.irr.levels();
        l.extend(self.red.levels());
        l.sort();
        l.dedup();
        l
    }

    /// Local blocks in a given source degree.
    pub fn u_block(&self, n: i64) -> SparseMatrix<F2> {
        self.u
            .select(self.irr.degree_indices(n - 2), self.irr.degree_indices(n))
    }

    pub fn delta1_block(&self, n: i64) -> SparseMatrix<F2> {
        self.delta1
            .select(self.red.degree_indices(n - 1), self.irr.degree_indices(n))
    }

    pub fn delta2_block(&self, n: i64) -> SparseMatrix<F2> {
        self.delta2
            .select(self.irr.degree_indices(n - 2), self.red.degree_indices(n))
    }

    fn check_map(
        &self,
        map: StructureMap,
        m: &SparseMatrix<F2>,
        src: &FilteredChainComplex<F2>,
        dst: &FilteredChainComplex<F2>,
        out: &mut Vec<SViolation>,
    ) {
        for (r, c, _) in m.entries() {
            let (g, h) = (src.generator(c), dst.generator(r));
            if h.degree != g.degree + map.degree() {
                out.push(SViolation::Degree {
                    map,
                    from: g.id.clone(),
                    to: h.id.clone(),
                    from_degree: g.degree,
                    to_degree: h.degree,
                });
            }
            if h.level > g.level {
                out.push(SViolation::Filtration {
                    map,
                    from: g.id.clone(),
                    to: h.id.clone(),
                    from_level: g.level.clone(),
                    to_level: h.level.clone(),
                });
            }
        }
    }

    /// Matrix of each relation's left-hand side (zero iff it holds).
    pub fn relation_matrix(&self, rel: Relation) -> SparseMatrix<F2> {
        let d = self.d();
        match rel {
            Relation::DSquared => d.mul(d),
            Relation::Delta1D => self.delta1.mul(d),
            Relation::DDelta2 => d.mul(&self.delta2),
            Relation::UHomotopy => self
                .u
                .mul(d)
                .add(&d.mul(&self.u))
                .add(&self.delta2.mul(&self.delta1)),
        }
    }

    /// Degree, filtration and relation checks, plus an independent `d̃² = 0`
    /// test on the assembled total complex.
    pub fn validate(&self) -> SValidationReport {
        let mut violations = Vec::new();
        // degree shape and filtration of d come from the complex validator
        for v in self.irr.validate().violations {
            match v {
                Violation::DegreeShape {
                    from,
                    to,
                    from_degree,
                    to_degree,
                } => violations.push(SViolation::Degree {
                    map: StructureMap::D,
                    from,
                    to,
                    from_degree,
                    to_degree,
                }),
                Violation::Filtration {
                    from,
                    to,
                    from_level,
                    to_level,
                } => violations.push(SViolation::Filtration {
                    map: StructureMap::D,
                    from,
                    to,
                    from_level,
                    to_level,
                }),
                Violation::DSquared { .. } => {}
            }
        }
        self.check_map(
            StructureMap::U,
            &self.u,
            &self.irr,
            &self.irr,
            &mut violations,
        );
        self.check_map(
            StructureMap::Delta1,
            &self.delta1,
            &self.irr,
            &self.red,
            &mut violations,
        );
        self.check_map(
            StructureMap::Delta2,
            &self.delta2,
            &self.red,
            &self.irr,
            &mut violations,
        );
        let mut relations = Vec::new();
        for rel in Relation::ALL {
            let m = self.relation_matrix(rel);
            let (src, dst) = match rel {
                Relation::DSquared | Relation::UHomotopy => (&self.irr, &self.irr),
                Relation::Delta1D => (&self.irr, &self.red),
                Relation::DDelta2 => (&self.red, &self.irr),
            };
            for (r, c, _) in m.entries() {
                violations.push(SViolation::Relation {
                    relation: rel,
                    from: src.generator(c).id.clone(),
                    to: dst.generator(r).id.clone(),
                });
            }
            relations.push((rel, m.is_zero()));
        }
        let total = self.total_matrix();
        let total_d_squared_zero = total.mul(&total).is_zero();
        let mut warnings = Vec::new();
        if self.chamber.is_some() && self.delta1_star_nonzero() && self.delta2_star_nonzero() {
            warnings
                .push("both delta1_* and delta2_* are nonzero on monopole-tagged data".to_string());
        }
        SValidationReport {
            violations,
            relations,
            total_d_squared_zero,
            warnings,
        }
    }

    /// `δ₁` restricted to cycles is nonzero in some degree.
    pub fn delta1_star_nonzero(&self) -> bool {
        self.irr.degrees().into_iter().any(|n| {
            let z = crate::complex::degree_homology(&self.irr, n).cycles;
            !self.delta1_block(n).mul(&z).is_zero()
        })
    }

    /// Some `δ₂ r` is not a boundary.
    pub fn delta2_star_nonzero(&self) -> bool {
        self.red.degrees().into_iter().any(|n| {
            let b = self.irr.block(n - 1);
            let img = self.delta2_block(n);
            rank(&b.hstack(&img)) > rank(&b)
        })
    }

    /// `d̃` on `C ⊕ C' ⊕ R` (in that generator order), assembled without checks.
    pub fn total_matrix(&self) -> SparseMatrix<F2> {
        let (nc, nr) = (self.irr.len(), self.red.len());
        let n = 2 * nc + nr;
        let mut entries = Vec::new();
        for (r, c, x) in self.d().entries() {
            entries.push((r, c, *x));
            entries.push((nc + r, nc + c, *x));
        }
        for (r, c, x) in self.u.entries() {
            entries.push((nc + r, c, *x));
        }
        for (r, c, x) in self.delta1.entries() {
            entries.push((2 * nc + r, c, *x));
        }
        for (r, c, x) in self.delta2.entries() {
            entries.push((nc + r, 2 * nc + c, *x));
        }
        SparseMatrix::from_entries(n, n, entries).expect("blocks are disjoint")
    }

    /// Generators of the total complex: `x`, then copies `x'` one degree up, then `R`.
    pub fn total_generators(&self) -> Vec<Generator> {
        let mut gens: Vec<Generator> = self.irr.generators().to_vec();
        gens.extend(
            self.irr
                .generators()
                .iter()
                .map(|g| Generator::new(format!("{}'", g.id), g.degree + 1, g.level.clone())),
        );
        gens.extend(self.red.generators().iter().cloned());
        gens
    }

    pub fn total_unchecked(&self) -> Result<FilteredChainComplex<F2>> {
        FilteredChainComplex::new_unchecked(self.total_generators(), self.total_matrix(), true)
    }

    /// Index of `R_i` inside the total complex.
    pub fn total_red_index(&self, i: usize) -> usize {
        2 * self.irr.len() + i
    }

    pub fn total_copy_index(&self, i: usize) -> usize {
        self.irr.len() + i
    }

    /// Embeds a global vector of `C` into the total complex in the chosen slot.
    pub fn embed_c(&self, v: &SparseVector<F2>, copy: bool) -> SparseVector<F2> {
        let n = 2 * self.irr.len() + self.red.len();
        let off = if copy { self.irr.len() } else { 0 };
        SparseVector::from_entries(n, v.entries().iter().map(|(i, x)| (off + i, *x)).collect())
    }
}

/// The total complex `C ⊕ C[1] ⊕ R` with `d̃(α, β, r) = (dα, uα + dβ + δ₂r, δ₁α)`.
pub fn assemble_total(s: &SComplex) -> Result<FilteredChainComplex<F2>> {
    let report = s.validate();
    if !report.is_clean() {
        return Err(Error::InvalidSComplex(report.summary()));
    }
    FilteredChainComplex::new(s.total_generators(), s.total_matrix(), true)
}

pub fn validate_s(s: &SComplex) -> SValidationReport {
    s.validate()
}

/// ρ of degree `q` on the total complex.
pub fn s_rho(s: &SComplex, q: i64) -> Result<SpectralValue> {
    rho_degree(&assemble_total(s)?, q)
}

/// ρ of degree `q` on the irreducible part alone.
pub fn s_lambda(s: &SComplex, q: i64) -> Result<SpectralValue> {
    rho_degree(s.irr(), q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::homology;
    use crate::level::{int, Extended};

    /// x in degree 3 at level 2, Θ in degree 2 at level 0, δ₁ x = Θ.
    pub(crate) fn s0() -> SComplex {
        let irr =
            FilteredChainComplex::from_ids(vec![Generator::new("x", 3, int(2))], vec![], true)
                .unwrap();
        SComplex::new(
            irr,
            vec![Generator::new("Theta", 2, int(0))],
            SparseMatrix::zeros(1, 1),
            SparseMatrix::from_entries(1, 1, vec![(0, 0, F2::ONE)]).unwrap(),
            SparseMatrix::zeros(1, 1),
        )
        .unwrap()
    }

    #[test]
    fn reference_instance() {
        let s = s0();
        let rep = validate_s(&s);
        assert!(rep.is_clean() && rep.total_d_squared_zero);
        let t = assemble_total(&s).unwrap();
        let ids: Vec<_> = t
            .generators()
            .iter()
            .map(|g| (g.id.as_str(), g.degree))
            .collect();
        assert_eq!(ids, vec![("x", 3), ("x'", 4), ("Theta", 2)]);
        assert_eq!(
            t.differential()
                .entries()
                .map(|(r, c, _)| (r, c))
                .collect::<Vec<_>>(),
            vec![(2, 0)]
        );
        let h = homology(&t).unwrap();
        assert_eq!(
            h.dims()
                .into_iter()
                .filter(|(_, d)| *d > 0)
                .collect::<Vec<_>>(),
            vec![(4, 1)]
        );
        assert_eq!(s_lambda(&s, 3).unwrap().value, Extended::Finite(int(2)));
        assert_eq!(s_rho(&s, 4).unwrap().value, Extended::Finite(int(2)));
        assert_eq!(s_rho(&s, 3).unwrap().value, Extended::Infinity);
    }

    #[test]
    fn wrong_degree_u_is_flagged() {
        let s = s0();
        // u(x) = x has degree 0 instead of -2
        let bad = s
            .with_maps(
                SparseMatrix::from_entries(1, 1, vec![(0, 0, F2::ONE)]).unwrap(),
                s.delta1().clone(),
                s.delta2().clone(),
            )
            .unwrap();
        let rep = bad.validate();
        assert!(rep.violations.iter().any(|v| matches!(
            v,
            SViolation::Degree {
                map: StructureMap::U,
                ..
            }
        )));
    }

    #[test]
    fn single_theta_and_empty() {
        let s = SComplex::new(
            FilteredChainComplex::empty(),
            vec![Generator::new("Theta", 0, int(0))],
            SparseMatrix::zeros(0, 0),
            SparseMatrix::zeros(1, 0),
            SparseMatrix::zeros(0, 1),
        )
        .unwrap();
        let t = assemble_total(&s).unwrap();
        assert_eq!(t.len(), 1);
        assert!(t.differential().is_zero());
        assert_eq!(s_rho(&s, 0).unwrap().value, Extended::Finite(int(0)));
        let z = SComplex::zero();
        assert_eq!(s_rho(&z, 0).unwrap().value, Extended::Infinity);
    }
}
