//! Builders from combinatorial Morse data. Flow counts are taken as given and
//! reduced mod 2; only global consistency (d² = 0, the S-relations, the
//! morphism identities, the descending-flow law) is checked.

use std::collections::HashMap;
use std::sync::Arc;

use crate::algebra::{LaurentPoly, RationalFn, SparseMatrix, SparseVector, F2};
use crate::complex::{degree_homology, is_quasi_iso, ChainMap, FilteredChainComplex, Generator};
use crate::error::{Error, Result};
use crate::filtered::{compare, novikov_rho_window, rho_class};
use crate::level::{format_rational, int, Extended, Rational};
use crate::scomplex::{SComplex, SMorphism};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalPoint {
    pub id: String,
    pub index: i64,
    pub value: Rational,
}

impl CriticalPoint {
    pub fn new(id: impl Into<String>, index: i64, value: Rational) -> Self {
        CriticalPoint {
            id: id.into(),
            index,
            value,
        }
    }

    fn generator(&self) -> Generator {
        Generator::new(self.id.clone(), self.index, self.value.clone())
    }
}

/// A flow count `⟨d from, to⟩`, reduced mod 2 on use.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Count {
    pub from: String,
    pub to: String,
    pub count: u64,
}

impl Count {
    pub fn new(from: impl Into<String>, to: impl Into<String>, count: u64) -> Self {
        Count {
            from: from.into(),
            to: to.into(),
            count,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorseData {
    pub points: Vec<CriticalPoint>,
    pub counts: Vec<Count>,
}

/// Free orbits make up `C`, fixed points make up `R`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct EquivariantOrbitData {
    pub free: Vec<CriticalPoint>,
    pub fixed: Vec<CriticalPoint>,
    pub d: Vec<Count>,
    pub u: Vec<Count>,
    pub delta1: Vec<Count>,
    pub delta2: Vec<Count>,
    pub chamber: Option<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrespondenceData {
    /// `dim W - dim Y₁`, the degree of the induced map.
    pub shift: i64,
    pub counts: Vec<Count>,
}

/// Counts for the blocks `λ`, `η`, `Δ₁`, `Δ₂` of an equivariant correspondence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SCorrespondenceData {
    pub shift: i64,
    pub lambda: Vec<Count>,
    pub eta: Vec<Count>,
    pub delta1: Vec<Count>,
    pub delta2: Vec<Count>,
}

/// Lifts to the cyclic cover with Laurent counts `Σ_j #M(p, T^j q) T^j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NovikovMorseData {
    pub lifts: Vec<CriticalPoint>,
    pub counts: Vec<(String, String, LaurentPoly)>,
    pub deck_shift: Rational,
}

fn index_of(points: &[CriticalPoint]) -> Result<HashMap<&str, usize>> {
    let mut idx = HashMap::new();
    for (i, p) in points.iter().enumerate() {
        if idx.insert(p.id.as_str(), i).is_some() {
            return Err(Error::DuplicateGenerator(p.id.clone()));
        }
    }
    Ok(idx)
}

/// Sparse F2 matrix from counts, with the index gap `index(to) = index(from) + gap`.
fn count_matrix(
    name: &str,
    counts: &[Count],
    src: &[CriticalPoint],
    dst: &[CriticalPoint],
    gap: i64,
) -> Result<SparseMatrix<F2>> {
    let (si, di) = (index_of(src)?, index_of(dst)?);
    let mut seen = HashMap::new();
    let mut entries = Vec::new();
    for c in counts {
        let &j = si
            .get(c.from.as_str())
            .ok_or_else(|| Error::UnknownGenerator(c.from.clone()))?;
        let &i = di
            .get(c.to.as_str())
            .ok_or_else(|| Error::UnknownGenerator(c.to.clone()))?;
        if seen.insert((i, j), ()).is_some() {
            return Err(Error::InvalidMorseData(format!(
                "{name}: repeated count {} -> {}",
                c.from, c.to
            )));
        }
        if c.count % 2 == 0 {
            continue;
        }
        if dst[i].index != src[j].index + gap {
            return Err(Error::InvalidMorseData(format!(
                "{name} count {} -> {} joins indices {} and {}, expected a gap of {}",
                c.from, c.to, src[j].index, dst[i].index, -gap
            )));
        }
        entries.push((i, j, F2::ONE));
    }
    SparseMatrix::from_entries(dst.len(), src.len(), entries)
}

pub fn build_morse(m: &MorseData) -> Result<FilteredChainComplex<F2>> {
    let d = count_matrix("d", &m.counts, &m.points, &m.points, -1)?;
    let gens = m.points.iter().map(CriticalPoint::generator).collect();
    let c = FilteredChainComplex::new_unchecked(gens, d, true)?;
    let report = c.validate();
    if !report.is_clean() {
        return Err(Error::InvalidMorseData(report.summary()));
    }
    Ok(c)
}

pub fn build_equivariant(e: &EquivariantOrbitData) -> Result<SComplex> {
    let d = count_matrix("d", &e.d, &e.free, &e.free, -1)?;
    let u = count_matrix("u", &e.u, &e.free, &e.free, -2)?;
    let delta1 = count_matrix("delta1", &e.delta1, &e.free, &e.fixed, -1)?;
    let delta2 = count_matrix("delta2", &e.delta2, &e.fixed, &e.free, -2)?;
    let irr = FilteredChainComplex::new_unchecked(
        e.free.iter().map(CriticalPoint::generator).collect(),
        d,
        true,
    )?;
    let red = e.fixed.iter().map(CriticalPoint::generator).collect();
    let mut s = SComplex::new_unchecked(irr, red, u, delta1, delta2)?;
    if let Some(m) = &e.chamber {
        s = s.with_chamber(m.clone());
    }
    let report = s.validate();
    if !report.is_clean() {
        return Err(Error::InvalidSComplex(report.summary()));
    }
    Ok(s)
}

/// `max(0, sup target - inf source)`; zero exactly when `sup f₂ <= inf f₁`.
pub fn assumption_b_shift<'a>(
    source: impl Iterator<Item = &'a Rational>,
    target: impl Iterator<Item = &'a Rational>,
) -> Rational {
    let inf = source.min();
    let sup = target.max();
    match (inf, sup) {
        (Some(i), Some(s)) if s > i => s - i,
        _ => int(0),
    }
}

fn points_of(c: &FilteredChainComplex<F2>) -> Vec<CriticalPoint> {
    c.generators()
        .iter()
        .map(|g| CriticalPoint::new(g.id.clone(), g.degree, g.level.clone()))
        .collect()
}

pub fn build_pullup(
    source: Arc<FilteredChainComplex<F2>>,
    target: Arc<FilteredChainComplex<F2>>,
    corr: &CorrespondenceData,
) -> Result<ChainMap<F2>> {
    let m = count_matrix(
        "MC(W)",
        &corr.counts,
        &points_of(&source),
        &points_of(&target),
        corr.shift,
    )?;
    let c = assumption_b_shift(
        source.generators().iter().map(|g| &g.level),
        target.generators().iter().map(|g| &g.level),
    );
    ChainMap::new(source, target, corr.shift, m, Extended::Finite(c))
}

pub fn build_s_pullup(
    source: Arc<SComplex>,
    target: Arc<SComplex>,
    corr: &SCorrespondenceData,
) -> Result<SMorphism> {
    let (sc, sr) = (points_of(source.irr()), points_of(source.red()));
    let (tc, tr) = (points_of(target.irr()), points_of(target.red()));
    let k = corr.shift;
    let lambda = count_matrix("lambda", &corr.lambda, &sc, &tc, k)?;
    let eta = count_matrix("eta", &corr.eta, &sc, &tc, k - 1)?;
    let delta1 = count_matrix("Delta1", &corr.delta1, &sc, &tr, k)?;
    let delta2 = count_matrix("Delta2", &corr.delta2, &sr, &tc, k - 1)?;
    let c = assumption_b_shift(
        sc.iter().chain(&sr).map(|p| &p.value),
        tc.iter().chain(&tr).map(|p| &p.value),
    );
    let f = SMorphism::new_unchecked(
        source,
        target,
        k,
        lambda,
        eta,
        delta1,
        delta2,
        Extended::Finite(c),
    )?;
    let report = f.report();
    if let Some((first, _)) = report.identities.iter().find(|(_, ok)| !ok) {
        return Err(Error::InvalidSMorphism(format!("{first} fails")));
    }
    if !report.shape.is_empty() {
        return Err(Error::InvalidSMorphism(report.shape.join("; ")));
    }
    Ok(f)
}

pub fn build_novikov(n: &NovikovMorseData) -> Result<FilteredChainComplex<RationalFn>> {
    let idx = index_of(&n.lifts)?;
    let mut entries = Vec::new();
    let mut seen = HashMap::new();
    for (from, to, p) in &n.counts {
        let &j = idx
            .get(from.as_str())
            .ok_or_else(|| Error::UnknownGenerator(from.clone()))?;
        let &i = idx
            .get(to.as_str())
            .ok_or_else(|| Error::UnknownGenerator(to.clone()))?;
        if seen.insert((i, j), ()).is_some() {
            return Err(Error::InvalidMorseData(format!(
                "repeated count {from} -> {to}"
            )));
        }
        if crate::algebra::Ring::is_zero(p) {
            continue;
        }
        if n.lifts[i].index != n.lifts[j].index - 1 {
            return Err(Error::InvalidMorseData(format!(
                "count {from} -> {to} does not lower the index by one"
            )));
        }
        entries.push((i, j, RationalFn::from(p.clone())));
    }
    let d = SparseMatrix::from_entries(n.lifts.len(), n.lifts.len(), entries)?;
    let gens = n.lifts.iter().map(CriticalPoint::generator).collect();
    let c =
        FilteredChainComplex::new_unchecked(gens, d, true)?.with_deck_shift(n.deck_shift.clone());
    let report = c.validate();
    if !report.is_clean() {
        return Err(Error::InvalidMorseData(report.summary()));
    }
    Ok(c)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InequalityCheck {
    pub degree: i64,
    pub rho_source: Extended,
    pub rho_target: Extended,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctorialityReport {
    /// The mapping cone is acyclic.
    pub quasi_iso: bool,
    pub level_shift: Extended,
    pub asserted: bool,
    pub degree_checks: Vec<InequalityCheck>,
    pub class_checks: Vec<InequalityCheck>,
    /// Description of every failed inequality.
    pub violations: Vec<String>,
    pub note: Option<String>,
}

impl FunctorialityReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Window approximants on both sides of a Novikov chain map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NovikovFunctorialityReport {
    pub quasi_iso: bool,
    pub level_shift: Extended,
    pub window: usize,
    /// `holds` compares the two upper bounds, not the exact invariants.
    pub degree_checks: Vec<InequalityCheck>,
    /// Always "window-level evidence": both sides are upper bounds, so the
    /// comparison neither proves nor refutes the exact inequality.
    pub tag: String,
    pub note: Option<String>,
}

impl NovikovFunctorialityReport {
    pub fn consistent(&self) -> bool {
        self.degree_checks.iter().all(|c| c.holds)
    }
}

/// Compares `novikov_rho_window` of target and source in every degree of the
/// source, under the same preconditions as `verify_functoriality`.
pub fn verify_novikov_functoriality(
    f: &ChainMap<RationalFn>,
    w: usize,
) -> Result<NovikovFunctorialityReport> {
    let quasi_iso = is_quasi_iso(f)?.is_quasi_iso;
    let mut report = NovikovFunctorialityReport {
        quasi_iso,
        level_shift: f.level_shift().clone(),
        window: w,
        degree_checks: Vec::new(),
        tag: "window-level evidence".into(),
        note: None,
    };
    if !quasi_iso {
        report.note = Some("Assumption C fails; nothing compared".into());
        return Ok(report);
    }
    let Some(c) = f.level_shift().finite().cloned() else {
        report.note = Some("level shift is not certified; nothing compared".into());
        return Ok(report);
    };
    for q in f.source().degrees() {
        let rho_source = novikov_rho_window(f.source(), q, w)?.value;
        let rho_target = novikov_rho_window(f.target(), q + f.degree(), w)?.value;
        let holds = rho_target <= rho_source.plus(&c);
        report.degree_checks.push(InequalityCheck {
            degree: q,
            rho_source,
            rho_target,
            holds,
        });
    }
    Ok(report)
}

/// Checks `ρ_T(q + k) <= ρ_S(q) + c` in every degree and, for each class
/// `a`, `ρ_T(f* a) <= ρ_S(a) + c`. Classes default to the homology
/// representatives of the source. Nothing is asserted unless the cone is
/// acyclic and the level shift is certified (`c = 0` under Assumption B).
pub fn verify_functoriality(
    f: &ChainMap<F2>,
    classes: Option<&[SparseVector<F2>]>,
) -> Result<FunctorialityReport> {
    let quasi_iso = is_quasi_iso(f)?.is_quasi_iso;
    let level_shift = f.level_shift().clone();
    let mut report = FunctorialityReport {
        quasi_iso,
        level_shift: level_shift.clone(),
        asserted: false,
        degree_checks: Vec::new(),
        class_checks: Vec::new(),
        violations: Vec::new(),
        note: None,
    };
    if !quasi_iso {
        report.note = Some("Assumption C fails; nothing asserted".into());
        return Ok(report);
    }
    let Some(c) = level_shift.finite().cloned() else {
        report.note = Some("level shift is not certified; nothing asserted".into());
        return Ok(report);
    };
    report.asserted = true;
    let (s, t) = (f.source(), f.target());
    for q in s.degrees() {
        let cmp = compare(f, q)?;
        let holds = cmp.holds.unwrap_or(false);
        if !holds {
            report.violations.push(format!(
                "degree {q}: rho_target = {} > rho_source = {} + {}",
                cmp.rho_target,
                cmp.rho_source,
                format_rational(&c)
            ));
        }
        report.degree_checks.push(InequalityCheck {
            degree: q,
            rho_source: cmp.rho_source,
            rho_target: cmp.rho_target,
            holds,
        });
    }
    let defaults: Vec<SparseVector<F2>>;
    let classes = match classes {
        Some(c) => c,
        None => {
            defaults = s
                .degrees()
                .into_iter()
                .flat_map(|n| {
                    let h = degree_homology(s, n);
                    (0..h.dim())
                        .map(move |j| s.to_global(n, &h.reps.column(j)))
                        .collect::<Vec<_>>()
                })
                .collect();
            &defaults
        }
    };
    for a in classes {
        let degree = a.support().next().map_or(0, |i| s.generator(i).degree);
        let rs = rho_class(s, a)?.value;
        let rt = rho_class(t, &f.matrix().mul_vec(a))?.value;
        let holds = rt <= rs.plus(&c);
        if !holds {
            report.violations.push(format!(
                "class in degree {degree}: rho_target = {rt} > rho_source = {rs} + {}",
                format_rational(&c)
            ));
        }
        report.class_checks.push(InequalityCheck {
            degree,
            rho_source: rs,
            rho_target: rt,
            holds,
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::homology;

    #[test]
    fn circle_height_function() {
        let m = MorseData {
            points: vec![
                CriticalPoint::new("M", 1, int(1)),
                CriticalPoint::new("m", 0, int(-1)),
            ],
            counts: vec![Count::new("M", "m", 2)],
        };
        let c = build_morse(&m).unwrap();
        let h = homology(&c).unwrap();
        assert_eq!((h.dim(0), h.dim(1)), (1, 1));
        let bad = MorseData {
            points: vec![
                CriticalPoint::new("a", 2, int(2)),
                CriticalPoint::new("b", 1, int(1)),
                CriticalPoint::new("c", 0, int(0)),
            ],
            counts: vec![Count::new("a", "b", 1), Count::new("b", "c", 1)],
        };
        assert!(matches!(build_morse(&bad), Err(Error::InvalidMorseData(_))));
        let uphill = MorseData {
            points: vec![
                CriticalPoint::new("a", 1, int(0)),
                CriticalPoint::new("b", 0, int(1)),
            ],
            counts: vec![Count::new("a", "b", 1)],
        };
        assert!(build_morse(&uphill).is_err());
    }

    fn s0_data() -> EquivariantOrbitData {
        EquivariantOrbitData {
            free: vec![CriticalPoint::new("x", 3, int(2))],
            fixed: vec![CriticalPoint::new("Theta", 2, int(0))],
            delta1: vec![Count::new("x", "Theta", 1)],
            ..Default::default()
        }
    }

    #[test]
    fn equivariant_builds() {
        let s = build_equivariant(&s0_data()).unwrap();
        assert_eq!(s.delta1().nnz(), 1);
        assert!(build_equivariant(&EquivariantOrbitData::default())
            .unwrap()
            .irr()
            .is_empty());
        // a, b with δ₁ a = Θ, δ₂ Θ = b; u = 0 so δ₂δ₁ ≠ ud + du
        let bad = EquivariantOrbitData {
            free: vec![
                CriticalPoint::new("a", 3, int(2)),
                CriticalPoint::new("b", 0, int(0)),
            ],
            fixed: vec![CriticalPoint::new("Theta", 2, int(1))],
            delta1: vec![Count::new("a", "Theta", 1)],
            delta2: vec![Count::new("Theta", "b", 1)],
            ..Default::default()
        };
        let err = build_equivariant(&bad).unwrap_err();
        let Error::InvalidSComplex(msg) = err else {
            panic!()
        };
        assert!(msg.contains("u d + d u + delta2 delta1"));
        assert!(!msg.contains("delta1 d = 0 fails"));
    }

    #[test]
    fn pullups() {
        let c = Arc::new(
            build_morse(&MorseData {
                points: vec![CriticalPoint::new("p", 0, int(0))],
                counts: vec![],
            })
            .unwrap(),
        );
        let id = build_pullup(
            c.clone(),
            c.clone(),
            &CorrespondenceData {
                shift: 0,
                counts: vec![Count::new("p", "p", 1)],
            },
        )
        .unwrap();
        assert_eq!(*id.level_shift(), Extended::Finite(int(0)));
        let rep = verify_functoriality(&id, None).unwrap();
        assert!(rep.asserted && rep.holds());
        assert!(rep
            .degree_checks
            .iter()
            .all(|c| c.rho_source == c.rho_target));
        let zero = build_pullup(
            c.clone(),
            c.clone(),
            &CorrespondenceData {
                shift: 0,
                counts: vec![],
            },
        )
        .unwrap();
        let rep = verify_functoriality(&zero, None).unwrap();
        assert!(!rep.asserted);
        assert_eq!(
            rep.note.as_deref(),
            Some("Assumption C fails; nothing asserted")
        );

        let s = Arc::new(build_equivariant(&s0_data()).unwrap());
        let f = build_s_pullup(
            s.clone(),
            s.clone(),
            &SCorrespondenceData {
                shift: 0,
                lambda: vec![Count::new("x", "x", 1)],
                eta: vec![],
                delta1: vec![],
                delta2: vec![],
            },
        )
        .unwrap();
        assert_eq!(
            f.total_matrix(),
            SMorphism::identity(s.clone()).total_matrix()
        );
        // Θ sits below x, so only the trivial bound sup - inf = 2 is granted
        assert_eq!(*f.level_shift(), Extended::Finite(int(2)));
        let err = build_s_pullup(
            s.clone(),
            s,
            &SCorrespondenceData {
                shift: 0,
                lambda: vec![],
                eta: vec![],
                delta1: vec![],
                delta2: vec![],
            },
        )
        .unwrap_err();
        assert!(err.to_string().contains("delta1 identity"));
    }

    #[test]
    fn novikov_builds() {
        let p = |s: &str| s.parse::<LaurentPoly>().unwrap();
        let n = NovikovMorseData {
            lifts: vec![
                CriticalPoint::new("p", 1, int(1)),
                CriticalPoint::new("q", 0, int(0)),
            ],
            counts: vec![("p".into(), "q".into(), p("1+T"))],
            deck_shift: int(1),
        };
        let c = build_novikov(&n).unwrap();
        assert!(homology(&c).unwrap().is_zero());
        assert_eq!(c.deck_shift(), Some(&int(1)));
    }

    #[test]
    fn novikov_identity_is_window_consistent() {
        let n = NovikovMorseData {
            lifts: vec![
                CriticalPoint::new("a", 1, int(3)),
                CriticalPoint::new("b", 0, int(1)),
                CriticalPoint::new("c", 0, int(2)),
            ],
            counts: vec![("a".into(), "b".into(), "T".parse().unwrap())],
            deck_shift: int(1),
        };
        let c = Arc::new(build_novikov(&n).unwrap());
        let rep = verify_novikov_functoriality(&ChainMap::identity(c), 8).unwrap();
        assert!(rep.quasi_iso && rep.consistent());
        assert_eq!(rep.tag, "window-level evidence");
        assert!(rep
            .degree_checks
            .iter()
            .all(|k| k.rho_source == k.rho_target));
    }
}
