//! Property suites over generated instances. Each instance owns a seed
//! derived from the run seed and its index, so any failure replays alone.
//! Instances run in parallel; outcomes are reported in index order.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{rank, window_rank, LaurentPoly, RationalFn, Ring, SparseMatrix, F2};
use crate::complex::{FilteredChainComplex, Violation};
use crate::error::{Error, Result};
use crate::filtered::{barcode, persistence_rank_bruteforce, rho_degree, rho_degree_bruteforce};
use crate::gen::{self, Bounds, Toggles, XorShift64};
use crate::io;
use crate::level::{int, Rational};
use crate::morse::{build_morse, build_novikov, build_pullup, verify_functoriality};
use crate::scomplex::{promote_homotopy, SComplex, SMorphism};
use crate::specseq::{abutment, check_lambda_rho, pages_closed_form, GenericSpectralSequence};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteName {
    Relations,
    Morphisms,
    Persistence,
    Pages,
    Theorem,
    Functoriality,
    Promote,
    Novikov,
}

impl SuiteName {
    pub const ALL: [SuiteName; 8] = [
        SuiteName::Relations,
        SuiteName::Morphisms,
        SuiteName::Persistence,
        SuiteName::Pages,
        SuiteName::Theorem,
        SuiteName::Functoriality,
        SuiteName::Promote,
        SuiteName::Novikov,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SuiteName::Relations => "relations",
            SuiteName::Morphisms => "morphisms",
            SuiteName::Persistence => "persistence",
            SuiteName::Pages => "pages",
            SuiteName::Theorem => "theorem",
            SuiteName::Functoriality => "functoriality",
            SuiteName::Promote => "promote",
            SuiteName::Novikov => "novikov",
        }
    }

    /// Instance size bounds used by the suite.
    pub fn bounds(self) -> Bounds {
        let b = |generators, reducible| Bounds {
            generators,
            reducible,
            ..Bounds::default()
        };
        match self {
            SuiteName::Relations => b(28, 12),
            SuiteName::Morphisms => b(12, 4),
            SuiteName::Persistence => b(30, 0),
            SuiteName::Pages => b(14, 5),
            SuiteName::Theorem => b(12, 4),
            SuiteName::Functoriality => b(12, 0),
            SuiteName::Promote => b(10, 4),
            SuiteName::Novikov => b(8, 0),
        }
    }
}

impl fmt::Display for SuiteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SuiteName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SuiteName::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InstanceOutcome {
    pub index: u64,
    pub seed: u64,
    pub passed: bool,
    pub detail: String,
    /// Tags counted in the suite statistics.
    #[serde(skip)]
    pub tags: Vec<&'static str>,
    /// The offending instance, kept only on failure.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance: Option<Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: SuiteName,
    pub seed: u64,
    pub instances: u64,
    pub passed: u64,
    pub failed: u64,
    pub stats: BTreeMap<String, u64>,
    pub warnings: Vec<String>,
    pub failures: Vec<InstanceOutcome>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

impl InstanceOutcome {
    /// A replayable failure record.
    pub fn dump(&self, suite: SuiteName) -> Value {
        json!({
            "schema": "scx/1 failure",
            "suite": suite.name(),
            "index": self.index,
            "seed": self.seed,
            "detail": self.detail,
            "instance": self.instance,
        })
    }
}

struct Check {
    passed: bool,
    detail: String,
    tags: Vec<&'static str>,
    instance: Value,
}

impl Check {
    fn new(instance: Value) -> Self {
        Check {
            passed: true,
            detail: String::new(),
            tags: Vec::new(),
            instance,
        }
    }

    fn require(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok && self.passed {
            self.passed = false;
            self.detail = what();
        }
    }

    fn tag(&mut self, t: &'static str) {
        self.tags.push(t);
    }
}

pub fn run_suite(name: SuiteName, n: u64, seed: u64) -> SuiteReport {
    let outcomes: Vec<InstanceOutcome> = (0..n)
        .into_par_iter()
        .map(|i| run_instance(name, i, XorShift64::instance_seed(seed, i)))
        .collect();
    let mut stats = BTreeMap::new();
    for o in &outcomes {
        for t in &o.tags {
            *stats.entry(t.to_string()).or_insert(0) += 1;
        }
    }
    let failures: Vec<InstanceOutcome> = outcomes.iter().filter(|o| !o.passed).cloned().collect();
    let mut warnings = Vec::new();
    if n == 0 {
        warnings.push("no instances were run; the pass is vacuous".to_string());
    }
    SuiteReport {
        suite: name,
        seed,
        instances: n,
        passed: n - failures.len() as u64,
        failed: failures.len() as u64,
        stats,
        warnings,
        failures,
    }
}

/// Runs one instance from its own seed; also the replay entry point.
pub fn run_instance(name: SuiteName, index: u64, seed: u64) -> InstanceOutcome {
    let mut rng = XorShift64::new(seed);
    let b = name.bounds();
    let result = match name {
        SuiteName::Relations => relations(&mut rng, &b),
        SuiteName::Morphisms => morphisms(&mut rng, &b),
        SuiteName::Persistence => persistence(&mut rng, &b),
        SuiteName::Pages => pages(&mut rng, &b),
        SuiteName::Theorem => theorem(&mut rng, &b),
        SuiteName::Functoriality => functoriality(&mut rng, &b),
        SuiteName::Promote => promote(&mut rng, &b),
        SuiteName::Novikov => novikov(&mut rng, &b),
    };
    match result {
        Ok(c) => InstanceOutcome {
            index,
            seed,
            passed: c.passed,
            detail: c.detail,
            tags: c.tags,
            instance: (!c.passed).then_some(c.instance),
        },
        Err(e) => InstanceOutcome {
            index,
            seed,
            passed: false,
            detail: format!("error: {e}"),
            tags: vec!["error"],
            instance: None,
        },
    }
}

/// Writes `block` into `out` at offset `(r0, c0)`.
fn place(out: &mut [Vec<bool>], block: &SparseMatrix<F2>, r0: usize, c0: usize) {
    for (r, c, _) in block.entries() {
        out[r0 + r][c0 + c] ^= true;
    }
}

/// The total differential on `C ⊕ C' ⊕ R`, laid out independently of the
/// library assembly.
fn dense_total(s: &SComplex) -> Vec<Vec<bool>> {
    let (nc, nr) = (s.irr().len(), s.red().len());
    let n = 2 * nc + nr;
    let mut t = vec![vec![false; n]; n];
    place(&mut t, s.d(), 0, 0);
    place(&mut t, s.u(), nc, 0);
    place(&mut t, s.delta1(), 2 * nc, 0);
    place(&mut t, s.d(), nc, nc);
    place(&mut t, s.delta2(), nc, 2 * nc);
    t
}

fn dense_mul(a: &[Vec<bool>], b: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).filter(|&k| row[k] && b[k][j]).count() % 2 == 1)
                .collect()
        })
        .collect()
}

fn is_zero(m: &[Vec<bool>]) -> bool {
    m.iter().all(|r| r.iter().all(|x| !x))
}

fn relations(rng: &mut XorShift64, b: &Bounds) -> Result<Check> {
    let s = gen::gen_scomplex(rng, b, &Toggles::default())?;
    let mutated = rng.chance(1, 2);
    let s = if mutated {
        gen::mutate_scomplex(rng, &s)?.unwrap_or(s)
    } else {
        s
    };
    let mut c = Check::new(serde_json::to_value(io::scomplex_to_doc(&s)).expect("serializes"));
    let t = dense_total(&s);
    let oracle = is_zero(&dense_mul(&t, &t));
    let rep = s.validate();
    c.tag(if mutated { "mutated" } else { "unmutated" });
    c.tag(if oracle {
        "total_d_squared_zero"
    } else {
        "total_d_squared_nonzero"
    });
    if !s.delta2().mul(s.delta1()).is_zero() {
        c.tag("delta2_delta1_nonzero");
    }
    c.require(rep.relations_hold() == oracle, || {
        format!(
            "relations hold = {}, dense d~^2 = 0 is {oracle}",
            rep.relations_hold()
        )
    });
    c.require(rep.total_d_squared_zero == oracle, || {
        "library total disagrees with the dense total".into()
    });
    Ok(c)
}

/// `λ̃` on `C ⊕ C' ⊕ R`, laid out independently.
fn dense_morphism(f: &SMorphism) -> Vec<Vec<bool>> {
    let (s, t) = (f.source(), f.target());
    let (nc, nr) = (s.irr().len(), s.red().len());
    let (mc, mr) = (t.irr().len(), t.red().len());
    let mut m = vec![vec![false; 2 * nc + nr]; 2 * mc + mr];
    place(&mut m, f.lambda(), 0, 0);
    place(&mut m, f.eta(), mc, 0);
    place(&mut m, f.delta1(), 2 * mc, 0);
    place(&mut m, f.lambda(), mc, nc);
    place(&mut m, f.delta2(), mc, 2 * nc);
    for i in 0..nr.min(mr) {
        m[2 * mc + i][2 * nc + i] ^= true;
    }
    m
}

fn morphisms(rng: &mut XorShift64, b: &Bounds) -> Result<Check> {
    let f = gen::gen_smorphism(rng, b, &Toggles::default())?;
    let mutated = rng.chance(1, 2);
    let f = if mutated {
        gen::mutate_smorphism(rng, &f)?.unwrap_or(f)
    } else {
        f
    };
    let mut c = Check::new(serde_json::to_value(io::smap_to_doc(&f)).expect("serializes"));
    let m = dense_morphism(&f);
    let (ds, dt) = (dense_total(f.source()), dense_total(f.target()));
    let lhs = dense_mul(&dt, &m);
    let rhs = dense_mul(&m, &ds);
    let oracle = lhs == rhs;
    let rep = f.report();
    c.tag(if mutated { "mutated" } else { "unmutated" });
    c.tag(if oracle {
        "commutes"
    } else {
        "does_not_commute"
    });
    c.require(rep.identities_hold() == oracle, || {
        format!(
            "identities hold = {}, dense commutation is {oracle}",
            rep.identities_hold()
        )
    });
    c.require(rep.commutes == oracle, || {
        "library commutation disagrees with the dense check".into()
    });
    Ok(c)
}

/// Thresholds at which sublevel homology can change, plus one below all levels.
fn thresholds(c: &FilteredChainComplex<F2>) -> Vec<Rational> {
    let mut t = c.levels();
    let below = t.first().cloned().unwrap_or_else(|| int(0)) - int(1);
    t.insert(0, below);
    t
}

fn persistence(rng: &mut XorShift64, b: &Bounds) -> Result<Check> {
    let cx = gen::gen_filtered_complex(rng, b, "g")?;
    let mut c = Check::new(serde_json::to_value(io::complex_to_doc(&cx)).expect("serializes"));
    let bars = barcode(&cx)?;
    let ts = thresholds(&cx);
    let mut degrees = cx.degrees();
    degrees.dedup();
    for &q in &degrees {
        for (i, t) in ts.iter().enumerate() {
            for s in &ts[i..] {
                let fast = bars.rank_between(q, t, s);
                let slow = persistence_rank_bruteforce(&cx, q, t, s);
                c.require(fast == slow, || {
                    format!("degree {q}, ({t}, {s}): barcode {fast}, brute force {slow}")
                });
            }
        }
        let rho = rho_degree(&cx, q)?.value;
        let scan = rho_degree_bruteforce(&cx, q);
        c.require(rho == scan, || {
            format!("rho_{q}: {rho} against scan {scan}")
        });
    }
    if bars.bars.iter().any(|b| b.death.is_finite()) {
        c.tag("finite_bars");
    }
    Ok(c)
}

fn pages(rng: &mut XorShift64, b: &Bounds) -> Result<Check> {
    let s = gen::gen_scomplex(rng, b, &Toggles::default())?;
    let mut c = Check::new(serde_json::to_value(io::scomplex_to_doc(&s)).expect("serializes"));
    let closed = pages_closed_form(&s)?;
    let generic = GenericSpectralSequence::new(&s)?;
    for page in &closed {
        let g = generic.page(page.r);
        c.require(page.same_dims(&g), || {
            format!("page {} differs from the generic construction", page.r)
        });
    }
    let chi = generic.total().euler_characteristic();
    for page in &closed {
        c.require(page.euler() == chi, || {
            format!(
                "page {} has Euler characteristic {}, total has {chi}",
                page.r,
                page.euler()
            )
        });
    }
    let (g3, g4) = (generic.page(3), generic.page(4));
    c.require(g3.differentials.is_empty() && g3.cells == g4.cells, || {
        "E3 and E4 differ".into()
    });
    let rec = abutment(&s)?;
    c.require(rec.all_matched(), || {
        let bad = rec.rows.iter().find(|r| !r.matched).expect("unmatched row");
        format!(
            "degree {}: dim H = {}, pieces {:?}",
            bad.degree, bad.homology_dim, bad.pieces
        )
    });
    if closed[1].differentials.iter().any(|d| d.from.0 == 2) {
        c.tag("delta2_star_nonzero");
    }
    if closed[1].differentials.iter().any(|d| d.from.0 == 3) {
        c.tag("delta1_star_nonzero");
    }
    if !closed[2].differentials.is_empty() {
        c.tag("d2_nonzero");
    }
    Ok(c)
}

fn degree_window(s: &SComplex) -> std::ops::RangeInclusive<i64> {
    let mut d = s.irr().degrees();
    d.extend(s.red().degrees());
    let lo = d.iter().min().copied().unwrap_or(0);
    let hi = d.iter().max().copied().unwrap_or(0);
    lo - 3..=hi + 3
}

/// Both hypotheses in turn, each on an instance generated to satisfy it.
fn theorem(rng: &mut XorShift64, b: &Bounds) -> Result<Check> {
    let first = Toggles {
        force_hypothesis1: true,
        ..Toggles::default()
    };
    let second = Toggles {
        force_hypothesis2: true,
        ..Toggles::default()
    };
    let s1 = gen::gen_scomplex(rng, b, &first)?;
    let s2 = gen::gen_scomplex(rng, b, &second)?;
    let mut c = Check::new(json!([io::scomplex_to_doc(&s1), io::scomplex_to_doc(&s2)]));
    for q in degree_window(&s1) {
        let r = check_lambda_rho(&s1, q)?;
        c.require(r.first.holds, || {
            format!("hypothesis (1) not met in degree {q} despite forcing")
        });
        c.require(r.first.inequality == Some(true), || {
            format!(
                "degree {q}: lambda_{} = {} < rho_{q} = {}",
                q - 1,
                r.first.lambda,
                r.first.rho
            )
        });
        if r.first.rho.is_finite() {
            c.tag("first_finite_rho");
        }
    }
    for q in degree_window(&s2) {
        let r = check_lambda_rho(&s2, q)?;
        c.require(r.second.holds, || {
            format!("hypothesis (2) not met in degree {q} despite forcing")
        });
        c.require(r.second.inequality == Some(true), || {
            format!(
                "degree {q}: lambda_{q} = {} < rho_{q} = {}",
                r.second.lambda, r.second.rho
            )
        });
        if r.second.rho.is_finite() {
            c.tag("second_finite_rho");
        }
        // the reading with λ_{q-3} is recorded, not asserted
        let lit = rho_degree(s2.irr(), q - 3)?.value;
        if lit < r.second.rho {
            c.tag("second_q_minus_3_reading_fails");
        }
    }
    Ok(c)
}

fn functoriality(rng: &mut XorShift64, b: &Bounds) -> Result<Check> {
    let t = Toggles {
        assumption_b: true,
        ..Toggles::default()
    };
    let pair = gen::gen_morse_pair(rng, b, &t)?;
    let mut c = Check::new(
        serde_json::to_value(io::corr_to_doc(&pair.source, &pair.target, &pair.corr))
            .expect("serializes"),
    );
    let (s, tg) = (
        Arc::new(build_morse(&pair.source)?),
        Arc::new(build_morse(&pair.target)?),
    );
    let f = build_pullup(s.clone(), tg.clone(), &pair.corr)?;
    c.require(
        *f.level_shift() == crate::level::Extended::Finite(int(0)),
        || format!("Assumption B shift is {}", f.level_shift()),
    );
    let rep = verify_functoriality(&f, None)?;
    c.require(rep.quasi_iso, || "cone is not acyclic".into());
    c.require(rep.asserted, || rep.note.clone().unwrap_or_default());
    c.require(rep.holds(), || rep.violations.join("; "));
    let mut degrees = s.degrees();
    degrees.dedup();
    for q in degrees {
        let (rs, rt) = (rho_degree_bruteforce(&s, q), rho_degree_bruteforce(&tg, q));
        c.require(rt <= rs, || {
            format!("degree {q}: scanned rho_target {rt} > rho_source {rs}")
        });
    }
    if !rep.class_checks.is_empty() {
        c.tag("classes_checked");
    }
    Ok(c)
}

fn promote(rng: &mut XorShift64, b: &Bounds) -> Result<Check> {
    let (f, l) = gen::gen_endomorphism(rng, b, &Toggles::default())?;
    let mut c = Check::new(serde_json::to_value(io::smap_to_doc(&f)).expect("serializes"));
    let p = promote_homotopy(&f, &l)?;
    let cert = &p.certificate;
    c.require(cert.holds(), || format!("{cert:?}"));
    // independent invertibility check on the dense total matrix
    let g = dense_morphism(&p.morphism);
    let gm = SparseMatrix::from_entries(
        g.len(),
        g.len(),
        g.iter()
            .enumerate()
            .flat_map(|(i, r)| {
                r.iter()
                    .enumerate()
                    .filter(|(_, x)| **x)
                    .map(move |(j, _)| (i, j, F2::ONE))
            })
            .collect(),
    )?;
    c.require(rank(&gm) == g.len(), || {
        "dense total of G is singular".into()
    });
    if *f.lambda() != SparseMatrix::identity(f.source().irr().len()) {
        c.tag("lambda_not_identity");
    }
    Ok(c)
}

fn laurent_rows(m: &SparseMatrix<LaurentPoly>) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| m.get(r, c).to_string()).collect())
        .collect()
}

fn dense_laurent_square(m: &SparseMatrix<LaurentPoly>) -> bool {
    let n = m.rows();
    (0..n).all(|i| {
        (0..n).all(|j| {
            (0..n)
                .fold(LaurentPoly::zero(), |acc, k| {
                    acc.add(&m.get(i, k).mul(&m.get(k, j)))
                })
                .is_zero()
        })
    })
}

fn novikov(rng: &mut XorShift64, b: &Bounds) -> Result<Check> {
    let m = gen::gen_laurent_matrix(rng, 8, -4, 4);
    let data = gen::gen_novikov(rng, b)?;
    let mut c = Check::new(json!({
        "schema": "scx/1 laurent-matrix",
        "matrix": laurent_rows(&m),
        "complex": io::novikov_morse_to_doc(&data),
    }));
    let proxy = rank(&m.map(|p| RationalFn::from(p.clone())));
    for w in [64, 128] {
        let wr = window_rank(&m, w)?;
        c.require(wr == proxy, || {
            format!("window {w}: rank {wr}, rational-function rank {proxy}")
        });
    }
    if proxy < m.rows().min(m.cols()) {
        c.tag("rank_deficient");
    }
    let cx = build_novikov(&data)?;
    let n = cx.len();
    let mut lm = vec![vec![LaurentPoly::zero(); n]; n];
    for (from, to, p) in &data.counts {
        let (i, j) = (cx.id_index(to)?, cx.id_index(from)?);
        lm[i][j] = p.clone();
    }
    let generated_ok = dense_laurent_square(&SparseMatrix::from_dense(&lm));
    c.require(cx.validate().d_squared_ok() && generated_ok, || {
        "generated d^2 != 0".into()
    });
    // flip one monomial of one count and compare the two d² verdicts
    if n > 0 {
        let g = cx.generators();
        let slots: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| g[i].degree == g[j].degree - 1)
            .collect();
        if slots.is_empty() {
            return Ok(c);
        }
        let (i, j) = slots[rng.index(slots.len())];
        lm[i][j] = lm[i][j].add(&LaurentPoly::monomial(rng.range(-1, 2)));
        let lm = SparseMatrix::from_dense(&lm);
        let oracle = dense_laurent_square(&lm);
        let mc = FilteredChainComplex::new_unchecked(
            cx.generators().to_vec(),
            lm.map(|p| RationalFn::from(p.clone())),
            false,
        )?;
        let verdict = !mc
            .validate()
            .violations
            .iter()
            .any(|v| matches!(v, Violation::DSquared { .. }));
        c.require(verdict == oracle, || {
            format!("mutated d^2 = 0 is {oracle}, validator says {verdict}")
        });
        c.tag(if oracle {
            "mutation_kept_d_squared_zero"
        } else {
            "mutation_broke_d_squared"
        });
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_runs_pass_and_are_ordered() {
        for name in SuiteName::ALL {
            let r = run_suite(name, 12, 1);
            assert!(r.ok(), "{name}: {:?}", r.failures.first());
            assert_eq!(r.passed, 12);
        }
        assert_eq!(run_suite(SuiteName::Relations, 0, 0).warnings.len(), 1);
        assert!("nope".parse::<SuiteName>().is_err());
    }
}
