//! JSON documents, all tagged `"schema": "scx/1 <kind>"`. Unknown fields are
//! rejected. Rationals travel as `"p/q"` strings, F2 coefficients as `"1"`,
//! Novikov coefficients in the Laurent grammar.

use std::collections::HashMap;
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::algebra::{LaurentPoly, RationalFn, Ring, SparseMatrix, F2};
use crate::complex::{ChainMap, FilteredChainComplex, Generator};
use crate::error::{Error, ParseError, Result};
use crate::filtered::Barcode;
use crate::level::{format_rational, parse_rational, Extended};
use crate::morse::{
    CorrespondenceData, Count, CriticalPoint, EquivariantOrbitData, MorseData, NovikovMorseData,
    SCorrespondenceData,
};
use crate::scomplex::{AllowableDegrees, SComplex, SMorphism};
use crate::specseq::{Page, ReconstructionReport};

pub const COMPLEX: &str = "scx/1 complex";
pub const SCOMPLEX: &str = "scx/1 scomplex";
pub const SMAP: &str = "scx/1 smap";
pub const MAP: &str = "scx/1 map";
pub const MORSE: &str = "scx/1 morse";
pub const ORBIT: &str = "scx/1 orbit";
pub const CORR: &str = "scx/1 corr";
pub const NOVIKOV_MORSE: &str = "scx/1 novikov-morse";
pub const BARCODE: &str = "scx/1 barcode";
pub const PAGES: &str = "scx/1 pages";

fn one() -> String {
    "1".into()
}

fn default_field() -> String {
    "F2".into()
}

fn yes() -> bool {
    true
}

fn zero_str() -> String {
    "0".into()
}

fn one_count() -> u64 {
    1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorDoc {
    pub id: String,
    pub degree: i64,
    pub level: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryDoc {
    pub from: String,
    pub to: String,
    #[serde(default = "one")]
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDoc {
    pub schema: String,
    #[serde(default = "default_field")]
    pub field: String,
    pub generators: Vec<GeneratorDoc>,
    #[serde(default)]
    pub differential: Vec<EntryDoc>,
    #[serde(default = "yes")]
    pub filtered: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deck_shift: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AllowableDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub below: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub above: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SComplexDoc {
    pub schema: String,
    #[serde(default = "default_field")]
    pub field: String,
    pub generators: Vec<GeneratorDoc>,
    #[serde(default)]
    pub differential: Vec<EntryDoc>,
    #[serde(default)]
    pub reducible: Vec<GeneratorDoc>,
    #[serde(default)]
    pub u: Vec<EntryDoc>,
    #[serde(default)]
    pub delta1: Vec<EntryDoc>,
    #[serde(default)]
    pub delta2: Vec<EntryDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chamber: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub allowable: Option<AllowableDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SMapDoc {
    pub schema: String,
    pub source: SComplexDoc,
    pub target: SComplexDoc,
    pub degree: i64,
    #[serde(default)]
    pub lambda: Vec<EntryDoc>,
    #[serde(default)]
    pub eta: Vec<EntryDoc>,
    #[serde(default, rename = "Delta1")]
    pub delta1: Vec<EntryDoc>,
    #[serde(default, rename = "Delta2")]
    pub delta2: Vec<EntryDoc>,
    #[serde(default = "zero_str")]
    pub level_shift: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDoc {
    pub schema: String,
    pub source: ComplexDoc,
    pub target: ComplexDoc,
    pub degree: i64,
    #[serde(default)]
    pub matrix: Vec<EntryDoc>,
    #[serde(default = "zero_str")]
    pub level_shift: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointDoc {
    pub id: String,
    pub index: i64,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CountDoc {
    pub from: String,
    pub to: String,
    #[serde(default = "one_count")]
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorseDoc {
    pub schema: String,
    pub points: Vec<PointDoc>,
    #[serde(default)]
    pub counts: Vec<CountDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitDoc {
    pub schema: String,
    #[serde(default)]
    pub free: Vec<PointDoc>,
    #[serde(default)]
    pub fixed: Vec<PointDoc>,
    #[serde(default)]
    pub d: Vec<CountDoc>,
    #[serde(default)]
    pub u: Vec<CountDoc>,
    #[serde(default)]
    pub delta1: Vec<CountDoc>,
    #[serde(default)]
    pub delta2: Vec<CountDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chamber: Option<String>,
}

/// A correspondence between two Morse complexes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorrDoc {
    pub schema: String,
    pub source: MorseDoc,
    pub target: MorseDoc,
    pub shift: i64,
    pub counts: Vec<CountDoc>,
}

/// A correspondence between two equivariant orbit data sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SCorrDoc {
    pub schema: String,
    pub source: OrbitDoc,
    pub target: OrbitDoc,
    pub shift: i64,
    pub lambda: Vec<CountDoc>,
    #[serde(default)]
    pub eta: Vec<CountDoc>,
    #[serde(default, rename = "Delta1")]
    pub delta1: Vec<CountDoc>,
    #[serde(default, rename = "Delta2")]
    pub delta2: Vec<CountDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NovikovMorseDoc {
    pub schema: String,
    pub lifts: Vec<PointDoc>,
    #[serde(default)]
    pub counts: Vec<EntryDoc>,
    #[serde(default = "one")]
    pub deck_shift: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BarDoc {
    pub degree: i64,
    pub birth: String,
    pub death: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BarcodeDoc {
    pub schema: String,
    pub bars: Vec<BarDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellDoc {
    pub p: u8,
    pub q: i64,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DifferentialDoc {
    pub from: (u8, i64),
    pub to: (u8, i64),
    pub rank: usize,
    pub entries: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PageDoc {
    pub r: usize,
    pub cells: Vec<CellDoc>,
    pub differentials: Vec<DifferentialDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReconstructionRowDoc {
    pub degree: i64,
    pub homology_dim: usize,
    pub pieces: [usize; 3],
    pub matched: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PagesDoc {
    pub schema: String,
    pub pages: Vec<PageDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reconstruction: Option<Vec<ReconstructionRowDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degenerates_at_three: Option<bool>,
}

/// Any input document, dispatched on its schema tag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Document {
    Complex(ComplexDoc),
    SComplex(SComplexDoc),
    SMap(Box<SMapDoc>),
    Map(Box<MapDoc>),
    Morse(MorseDoc),
    Orbit(OrbitDoc),
    Corr(Box<CorrDoc>),
    SCorr(Box<SCorrDoc>),
    NovikovMorse(NovikovMorseDoc),
}

impl Document {
    pub fn to_value(&self) -> serde_json::Value {
        let v = match self {
            Document::Complex(d) => serde_json::to_value(d),
            Document::SComplex(d) => serde_json::to_value(d),
            Document::SMap(d) => serde_json::to_value(d),
            Document::Map(d) => serde_json::to_value(d),
            Document::Morse(d) => serde_json::to_value(d),
            Document::Orbit(d) => serde_json::to_value(d),
            Document::Corr(d) => serde_json::to_value(d),
            Document::SCorr(d) => serde_json::to_value(d),
            Document::NovikovMorse(d) => serde_json::to_value(d),
        };
        v.expect("documents serialize")
    }
}

fn json_err(e: serde_json::Error) -> Error {
    Error::Parse(ParseError::Json(e.to_string()))
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(json_err)
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    serde_json::to_string_pretty(doc).expect("documents serialize")
}

fn expect_schema(found: &str, expected: &str) -> Result<()> {
    if found != expected {
        return Err(Error::Parse(ParseError::Schema(found.to_string())));
    }
    Ok(())
}

pub fn parse_document(text: &str) -> Result<Document> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(json_err)?;
    let schema = value
        .get("schema")
        .and_then(|s| s.as_str())
        .ok_or_else(|| Error::Parse(ParseError::Json("missing `schema` tag".into())))?
        .to_string();
    let de = |v: serde_json::Value| -> Result<Document> {
        Ok(match schema.as_str() {
            COMPLEX => Document::Complex(serde_json::from_value(v).map_err(json_err)?),
            SCOMPLEX => Document::SComplex(serde_json::from_value(v).map_err(json_err)?),
            SMAP => Document::SMap(Box::new(serde_json::from_value(v).map_err(json_err)?)),
            MAP => Document::Map(Box::new(serde_json::from_value(v).map_err(json_err)?)),
            MORSE => Document::Morse(serde_json::from_value(v).map_err(json_err)?),
            ORBIT => Document::Orbit(serde_json::from_value(v).map_err(json_err)?),
            CORR if v.get("lambda").is_some() => {
                Document::SCorr(Box::new(serde_json::from_value(v).map_err(json_err)?))
            }
            CORR => Document::Corr(Box::new(serde_json::from_value(v).map_err(json_err)?)),
            NOVIKOV_MORSE => Document::NovikovMorse(serde_json::from_value(v).map_err(json_err)?),
            other => return Err(Error::Parse(ParseError::Schema(other.to_string()))),
        })
    };
    de(value)
}

fn gen_from_doc(g: &GeneratorDoc) -> Result<Generator> {
    Ok(Generator::new(
        g.id.clone(),
        g.degree,
        parse_rational(&g.level)?,
    ))
}

fn gen_to_doc(g: &Generator) -> GeneratorDoc {
    GeneratorDoc {
        id: g.id.clone(),
        degree: g.degree,
        level: format_rational(&g.level),
    }
}

fn parse_f2(s: &str) -> Result<F2> {
    match s.trim() {
        "1" => Ok(F2::ONE),
        "0" => Ok(F2::ZERO),
        other => Err(Error::Parse(ParseError::Json(format!(
            "F2 coefficient must be 0 or 1, got `{other}`"
        )))),
    }
}

/// Entries between two id sets as a `|dst| x |src|` matrix.
fn resolve<F: Ring>(
    entries: &[EntryDoc],
    src: &[Generator],
    dst: &[Generator],
    coeff: impl Fn(&str) -> Result<F>,
) -> Result<SparseMatrix<F>> {
    let si: HashMap<&str, usize> = src
        .iter()
        .enumerate()
        .map(|(i, g)| (g.id.as_str(), i))
        .collect();
    let di: HashMap<&str, usize> = dst
        .iter()
        .enumerate()
        .map(|(i, g)| (g.id.as_str(), i))
        .collect();
    let mut out = Vec::new();
    for e in entries {
        let &j = si
            .get(e.from.as_str())
            .ok_or_else(|| Error::UnknownGenerator(e.from.clone()))?;
        let &i = di
            .get(e.to.as_str())
            .ok_or_else(|| Error::UnknownGenerator(e.to.clone()))?;
        let c = coeff(&e.coeff)?;
        if !c.is_zero() {
            out.push((i, j, c));
        }
    }
    SparseMatrix::from_entries(dst.len(), src.len(), out)
}

fn entries_to_doc<F: Ring + std::fmt::Display>(
    m: &SparseMatrix<F>,
    src: &[Generator],
    dst: &[Generator],
) -> Vec<EntryDoc> {
    let mut v: Vec<EntryDoc> = m
        .entries()
        .map(|(r, c, x)| EntryDoc {
            from: src[c].id.clone(),
            to: dst[r].id.clone(),
            coeff: x.to_string(),
        })
        .collect();
    // column-major already; keep a stable listing by source then target
    v.sort_by(|a, b| (&a.from, &a.to).cmp(&(&b.from, &b.to)));
    v
}

/// A parsed complex over either coefficient system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyComplex {
    F2(FilteredChainComplex<F2>),
    Novikov(FilteredChainComplex<RationalFn>),
}

/// Builds the complex; `check` runs the validator and rejects violations.
pub fn complex_from_doc(doc: &ComplexDoc, check: bool) -> Result<AnyComplex> {
    expect_schema(&doc.schema, COMPLEX)?;
    let gens = doc
        .generators
        .iter()
        .map(gen_from_doc)
        .collect::<Result<Vec<_>>>()?;
    let build = |c: AnyComplex| -> Result<AnyComplex> {
        if check {
            let report = match &c {
                AnyComplex::F2(c) => c.validate(),
                AnyComplex::Novikov(c) => c.validate(),
            };
            if !report.is_clean() {
                return Err(Error::InvalidComplex(report.summary()));
            }
        }
        Ok(c)
    };
    match doc.field.as_str() {
        "F2" => {
            let d = resolve(&doc.differential, &gens, &gens, parse_f2)?;
            build(AnyComplex::F2(FilteredChainComplex::new_unchecked(
                gens,
                d,
                doc.filtered,
            )?))
        }
        "novikov" => {
            let d = resolve(&doc.differential, &gens, &gens, |s| {
                Ok(RationalFn::from(s.parse::<LaurentPoly>()?))
            })?;
            let mut c = FilteredChainComplex::new_unchecked(gens, d, doc.filtered)?;
            if let Some(s) = &doc.deck_shift {
                c = c.with_deck_shift(parse_rational(s)?);
            }
            build(AnyComplex::Novikov(c))
        }
        other => Err(Error::Parse(ParseError::Json(format!(
            "unknown field `{other}`"
        )))),
    }
}

pub fn complex_f2_from_doc(doc: &ComplexDoc) -> Result<FilteredChainComplex<F2>> {
    match complex_from_doc(doc, true)? {
        AnyComplex::F2(c) => Ok(c),
        AnyComplex::Novikov(_) => Err(Error::InvalidComplex("expected an F2 complex".into())),
    }
}

pub fn complex_to_doc(c: &FilteredChainComplex<F2>) -> ComplexDoc {
    ComplexDoc {
        schema: COMPLEX.into(),
        field: "F2".into(),
        generators: c.generators().iter().map(gen_to_doc).collect(),
        differential: entries_to_doc(c.differential(), c.generators(), c.generators()),
        filtered: c.is_filtered(),
        deck_shift: c.deck_shift().map(format_rational),
    }
}

pub fn novikov_complex_to_doc(c: &FilteredChainComplex<RationalFn>) -> ComplexDoc {
    ComplexDoc {
        schema: COMPLEX.into(),
        field: "novikov".into(),
        generators: c.generators().iter().map(gen_to_doc).collect(),
        differential: entries_to_doc(c.differential(), c.generators(), c.generators()),
        filtered: c.is_filtered(),
        deck_shift: c.deck_shift().map(format_rational),
    }
}

/// Builds the S-complex without validating it.
pub fn scomplex_from_doc_unchecked(doc: &SComplexDoc) -> Result<SComplex> {
    expect_schema(&doc.schema, SCOMPLEX)?;
    if doc.field != "F2" {
        return Err(Error::InvalidSComplex(
            "S-complexes are defined over F2 only".into(),
        ));
    }
    let c = doc
        .generators
        .iter()
        .map(gen_from_doc)
        .collect::<Result<Vec<_>>>()?;
    let r = doc
        .reducible
        .iter()
        .map(gen_from_doc)
        .collect::<Result<Vec<_>>>()?;
    let d = resolve(&doc.differential, &c, &c, parse_f2)?;
    let u = resolve(&doc.u, &c, &c, parse_f2)?;
    let delta1 = resolve(&doc.delta1, &c, &r, parse_f2)?;
    let delta2 = resolve(&doc.delta2, &r, &c, parse_f2)?;
    let irr = FilteredChainComplex::new_unchecked(c, d, true)?;
    let mut s = SComplex::new_unchecked(irr, r, u, delta1, delta2)?;
    if let Some(m) = &doc.chamber {
        s = s.with_chamber(parse_rational(m)?);
    }
    if let Some(a) = &doc.allowable {
        s = s.with_allowable(AllowableDegrees {
            below: a.below,
            above: a.above,
        });
    }
    Ok(s)
}

pub fn scomplex_from_doc(doc: &SComplexDoc) -> Result<SComplex> {
    let s = scomplex_from_doc_unchecked(doc)?;
    let rep = s.validate();
    if !rep.is_clean() {
        return Err(Error::InvalidSComplex(rep.summary()));
    }
    Ok(s)
}

pub fn scomplex_to_doc(s: &SComplex) -> SComplexDoc {
    let (c, r) = (s.irr().generators(), s.red().generators());
    SComplexDoc {
        schema: SCOMPLEX.into(),
        field: "F2".into(),
        generators: c.iter().map(gen_to_doc).collect(),
        differential: entries_to_doc(s.d(), c, c),
        reducible: r.iter().map(gen_to_doc).collect(),
        u: entries_to_doc(s.u(), c, c),
        delta1: entries_to_doc(s.delta1(), c, r),
        delta2: entries_to_doc(s.delta2(), r, c),
        chamber: s.chamber().map(format_rational),
        allowable: s.allowable().map(|a| AllowableDoc {
            below: a.below,
            above: a.above,
        }),
    }
}

/// Builds the morphism without checking its identities.
pub fn smap_from_doc_unchecked(doc: &SMapDoc) -> Result<SMorphism> {
    expect_schema(&doc.schema, SMAP)?;
    let s = Arc::new(scomplex_from_doc(&doc.source)?);
    let t = Arc::new(scomplex_from_doc(&doc.target)?);
    let (sc, sr) = (s.irr().generators(), s.red().generators());
    let (tc, tr) = (t.irr().generators(), t.red().generators());
    let lambda = resolve(&doc.lambda, sc, tc, parse_f2)?;
    let eta = resolve(&doc.eta, sc, tc, parse_f2)?;
    let delta1 = resolve(&doc.delta1, sc, tr, parse_f2)?;
    let delta2 = resolve(&doc.delta2, sr, tc, parse_f2)?;
    let shift = Extended::parse(&doc.level_shift)?;
    SMorphism::new_unchecked(
        s.clone(),
        t.clone(),
        doc.degree,
        lambda,
        eta,
        delta1,
        delta2,
        shift,
    )
}

pub fn smap_from_doc(doc: &SMapDoc) -> Result<SMorphism> {
    let f = smap_from_doc_unchecked(doc)?;
    let rep = f.report();
    if !rep.is_clean() {
        return Err(Error::InvalidSMorphism(rep.summary()));
    }
    Ok(f)
}

pub fn smap_to_doc(f: &SMorphism) -> SMapDoc {
    let (s, t) = (f.source(), f.target());
    let (sc, sr) = (s.irr().generators(), s.red().generators());
    let (tc, tr) = (t.irr().generators(), t.red().generators());
    SMapDoc {
        schema: SMAP.into(),
        source: scomplex_to_doc(s),
        target: scomplex_to_doc(t),
        degree: f.degree(),
        lambda: entries_to_doc(f.lambda(), sc, tc),
        eta: entries_to_doc(f.eta(), sc, tc),
        delta1: entries_to_doc(f.delta1(), sc, tr),
        delta2: entries_to_doc(f.delta2(), sr, tc),
        level_shift: f.level_shift().to_string(),
    }
}

pub fn map_from_doc(doc: &MapDoc) -> Result<ChainMap<F2>> {
    expect_schema(&doc.schema, MAP)?;
    let s = Arc::new(complex_f2_from_doc(&doc.source)?);
    let t = Arc::new(complex_f2_from_doc(&doc.target)?);
    let m = resolve(&doc.matrix, s.generators(), t.generators(), parse_f2)?;
    ChainMap::new(s, t, doc.degree, m, Extended::parse(&doc.level_shift)?)
}

/// A chain map between Novikov complexes; entries are Laurent polynomials.
pub fn novikov_map_from_doc(doc: &MapDoc) -> Result<ChainMap<RationalFn>> {
    expect_schema(&doc.schema, MAP)?;
    let novikov = |d: &ComplexDoc| match complex_from_doc(d, true)? {
        AnyComplex::Novikov(c) => Ok(Arc::new(c)),
        AnyComplex::F2(_) => Err(Error::InvalidComplex("expected a Novikov complex".into())),
    };
    let (s, t) = (novikov(&doc.source)?, novikov(&doc.target)?);
    let m = resolve(&doc.matrix, s.generators(), t.generators(), |x| {
        Ok(RationalFn::from(x.parse::<LaurentPoly>()?))
    })?;
    ChainMap::new(s, t, doc.degree, m, Extended::parse(&doc.level_shift)?)
}

pub fn map_to_doc(f: &ChainMap<F2>) -> MapDoc {
    MapDoc {
        schema: MAP.into(),
        source: complex_to_doc(f.source()),
        target: complex_to_doc(f.target()),
        degree: f.degree(),
        matrix: entries_to_doc(f.matrix(), f.source().generators(), f.target().generators()),
        level_shift: f.level_shift().to_string(),
    }
}

fn point_from_doc(p: &PointDoc) -> Result<CriticalPoint> {
    Ok(CriticalPoint::new(
        p.id.clone(),
        p.index,
        parse_rational(&p.value)?,
    ))
}

fn point_to_doc(p: &CriticalPoint) -> PointDoc {
    PointDoc {
        id: p.id.clone(),
        index: p.index,
        value: format_rational(&p.value),
    }
}

fn count_from_doc(c: &CountDoc) -> Count {
    Count::new(c.from.clone(), c.to.clone(), c.count)
}

fn count_to_doc(c: &Count) -> CountDoc {
    CountDoc {
        from: c.from.clone(),
        to: c.to.clone(),
        count: c.count,
    }
}

fn points(v: &[PointDoc]) -> Result<Vec<CriticalPoint>> {
    v.iter().map(point_from_doc).collect()
}

fn counts(v: &[CountDoc]) -> Vec<Count> {
    v.iter().map(count_from_doc).collect()
}

fn count_docs(v: &[Count]) -> Vec<CountDoc> {
    v.iter().map(count_to_doc).collect()
}

pub fn morse_from_doc(doc: &MorseDoc) -> Result<MorseData> {
    expect_schema(&doc.schema, MORSE)?;
    Ok(MorseData {
        points: points(&doc.points)?,
        counts: counts(&doc.counts),
    })
}

pub fn morse_to_doc(m: &MorseData) -> MorseDoc {
    MorseDoc {
        schema: MORSE.into(),
        points: m.points.iter().map(point_to_doc).collect(),
        counts: count_docs(&m.counts),
    }
}

pub fn orbit_from_doc(doc: &OrbitDoc) -> Result<EquivariantOrbitData> {
    expect_schema(&doc.schema, ORBIT)?;
    Ok(EquivariantOrbitData {
        free: points(&doc.free)?,
        fixed: points(&doc.fixed)?,
        d: counts(&doc.d),
        u: counts(&doc.u),
        delta1: counts(&doc.delta1),
        delta2: counts(&doc.delta2),
        chamber: doc.chamber.as_deref().map(parse_rational).transpose()?,
    })
}

pub fn orbit_to_doc(e: &EquivariantOrbitData) -> OrbitDoc {
    OrbitDoc {
        schema: ORBIT.into(),
        free: e.free.iter().map(point_to_doc).collect(),
        fixed: e.fixed.iter().map(point_to_doc).collect(),
        d: count_docs(&e.d),
        u: count_docs(&e.u),
        delta1: count_docs(&e.delta1),
        delta2: count_docs(&e.delta2),
        chamber: e.chamber.as_ref().map(format_rational),
    }
}

pub fn corr_from_doc(doc: &CorrDoc) -> Result<(MorseData, MorseData, CorrespondenceData)> {
    expect_schema(&doc.schema, CORR)?;
    Ok((
        morse_from_doc(&doc.source)?,
        morse_from_doc(&doc.target)?,
        CorrespondenceData {
            shift: doc.shift,
            counts: counts(&doc.counts),
        },
    ))
}

pub fn corr_to_doc(source: &MorseData, target: &MorseData, c: &CorrespondenceData) -> CorrDoc {
    CorrDoc {
        schema: CORR.into(),
        source: morse_to_doc(source),
        target: morse_to_doc(target),
        shift: c.shift,
        counts: count_docs(&c.counts),
    }
}

pub fn scorr_from_doc(
    doc: &SCorrDoc,
) -> Result<(
    EquivariantOrbitData,
    EquivariantOrbitData,
    SCorrespondenceData,
)> {
    expect_schema(&doc.schema, CORR)?;
    Ok((
        orbit_from_doc(&doc.source)?,
        orbit_from_doc(&doc.target)?,
        SCorrespondenceData {
            shift: doc.shift,
            lambda: counts(&doc.lambda),
            eta: counts(&doc.eta),
            delta1: counts(&doc.delta1),
            delta2: counts(&doc.delta2),
        },
    ))
}

pub fn novikov_morse_from_doc(doc: &NovikovMorseDoc) -> Result<NovikovMorseData> {
    expect_schema(&doc.schema, NOVIKOV_MORSE)?;
    Ok(NovikovMorseData {
        lifts: points(&doc.lifts)?,
        counts: doc
            .counts
            .iter()
            .map(|e| {
                Ok((
                    e.from.clone(),
                    e.to.clone(),
                    e.coeff.parse::<LaurentPoly>()?,
                ))
            })
            .collect::<Result<Vec<_>>>()?,
        deck_shift: parse_rational(&doc.deck_shift)?,
    })
}

pub fn novikov_morse_to_doc(n: &NovikovMorseData) -> NovikovMorseDoc {
    NovikovMorseDoc {
        schema: NOVIKOV_MORSE.into(),
        lifts: n.lifts.iter().map(point_to_doc).collect(),
        counts: n
            .counts
            .iter()
            .map(|(f, t, p)| EntryDoc {
                from: f.clone(),
                to: t.clone(),
                coeff: p.to_string(),
            })
            .collect(),
        deck_shift: format_rational(&n.deck_shift),
    }
}

pub fn barcode_to_doc(b: &Barcode) -> BarcodeDoc {
    BarcodeDoc {
        schema: BARCODE.into(),
        bars: b
            .bars
            .iter()
            .map(|bar| BarDoc {
                degree: bar.degree,
                birth: format_rational(&bar.birth),
                death: bar.death.to_string(),
            })
            .collect(),
    }
}

pub fn pages_to_doc(pages: &[Page], rec: Option<&ReconstructionReport>) -> PagesDoc {
    PagesDoc {
        schema: PAGES.into(),
        pages: pages
            .iter()
            .map(|p| PageDoc {
                r: p.r,
                cells: p
                    .cells
                    .iter()
                    .map(|(&(p, q), &dim)| CellDoc { p, q, dim })
                    .collect(),
                differentials: p
                    .differentials
                    .iter()
                    .map(|d| DifferentialDoc {
                        from: d.from,
                        to: d.to,
                        rank: d.rank,
                        entries: d.entries.clone(),
                    })
                    .collect(),
            })
            .collect(),
        reconstruction: rec.map(|r| {
            r.rows
                .iter()
                .map(|row| ReconstructionRowDoc {
                    degree: row.degree,
                    homology_dim: row.homology_dim,
                    pieces: row.pieces,
                    matched: row.matched,
                })
                .collect()
        }),
        degenerates_at_three: rec.map(|r| r.degenerates_at_three),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_fields_and_schemas_are_rejected() {
        let ok = r#"{"schema":"scx/1 complex","generators":[{"id":"x","degree":0,"level":"1/2"}]}"#;
        assert!(matches!(parse_document(ok).unwrap(), Document::Complex(_)));
        let extra = r#"{"schema":"scx/1 complex","generators":[],"colour":1}"#;
        assert!(matches!(
            parse_document(extra),
            Err(Error::Parse(ParseError::Json(_)))
        ));
        let other = r#"{"schema":"scx/2 complex","generators":[]}"#;
        assert!(matches!(
            parse_document(other),
            Err(Error::Parse(ParseError::Schema(_)))
        ));
        assert!(parse_document("{").is_err());
    }

    #[test]
    fn round_trips() {
        let text = r#"{"schema":"scx/1 complex","field":"novikov","deck_shift":"1",
            "generators":[{"id":"p","degree":1,"level":"1"},{"id":"q","degree":0,"level":"0"}],
            "differential":[{"from":"p","to":"q","coeff":"1+T"}]}"#;
        let Document::Complex(doc) = parse_document(text).unwrap() else {
            panic!()
        };
        let AnyComplex::Novikov(c) = complex_from_doc(&doc, true).unwrap() else {
            panic!()
        };
        let back = novikov_complex_to_doc(&c);
        assert_eq!(back.differential[0].coeff, "1+T");
        let again =
            complex_from_doc(&from_json::<ComplexDoc>(&to_json(&back)).unwrap(), true).unwrap();
        assert_eq!(again, AnyComplex::Novikov(c));
    }
}
