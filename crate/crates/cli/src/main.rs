//! `scx`: validate, compute and compare filtered and S-complexes.
//!
//! JSON goes to stdout, a one-line summary to stderr. Exit status: 0 ok,
//! 1 invalid data, 2 usage or parse error, 3 a theorem oracle or internal
//! invariant was violated.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use scx_core::algebra::{SparseVector, F2};
use scx_core::complex::{homology, ChainMap, FilteredChainComplex};
use scx_core::filtered::{
    barcode, compare, novikov_rho_window, psc_check, rho_degree, SpectralValue,
};
use scx_core::gen::{generate, Bounds, GenKind, GenSpec, Toggles};
use scx_core::io::{self, AnyComplex, Document};
use scx_core::level::{format_rational, parse_rational, Extended, Rational};
use scx_core::morse::{
    build_equivariant, build_morse, build_novikov, build_pullup, build_s_pullup,
    verify_functoriality, verify_novikov_functoriality,
};
use scx_core::scomplex::{assemble_total, s_lambda, s_rho, SComplex};
use scx_core::specseq::{abutment, check_lambda_rho, pages_closed_form, pages_generic};
use scx_core::suite::{run_instance, run_suite, SuiteName};
use scx_core::Error;

#[derive(Parser)]
#[command(
    name = "scx",
    version,
    about = "Filtered chain complexes, S-complexes and their spectral invariants"
)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Verb {
    /// Run the validator matching the document's schema.
    Validate { input: PathBuf },
    /// Homology dimensions (of the total complex for S-complexes).
    Homology {
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        degree: Option<i64>,
    },
    /// Barcode of an F2 complex, optionally with Betti numbers at a threshold.
    Barcode {
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        degree: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        threshold: Option<String>,
    },
    /// Spectral invariant in one degree; rho and lambda for S-complexes.
    Rho {
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        degree: i64,
        /// Window width for Novikov complexes.
        #[arg(long, default_value_t = 64)]
        window: usize,
    },
    /// S-complex relations, or S-morphism identities, plus the lambda/rho
    /// comparison under either hypothesis.
    Scheck {
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        degree: Option<i64>,
    },
    /// The assembled total complex of an S-complex, as a complex document.
    Stotal { input: PathBuf },
    /// Pages 0 to 3 in closed form, cross-checked against the generic computation.
    Pages { input: PathBuf },
    /// Graded reconstruction of the total homology from the third page.
    Abut { input: PathBuf },
    /// Functoriality of rho along a chain map, correspondence or S-correspondence.
    Compare {
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        degree: Option<i64>,
        /// Window width for maps between Novikov complexes.
        #[arg(long, default_value_t = 64)]
        window: usize,
    },
    /// Obstruction and lower bound for the integral of the squared scalar curvature.
    Psc {
        #[arg(long, allow_hyphen_values = true)]
        rho_in: String,
        #[arg(long, allow_hyphen_values = true)]
        rho_out: String,
        #[arg(long = "const-C", allow_hyphen_values = true)]
        const_c: String,
        #[arg(long, allow_hyphen_values = true)]
        s2: Option<String>,
    },
    /// Generate a random instance.
    Gen(GenArgs),
    /// Run a property suite, or replay a failure dump.
    Suite(SuiteArgs),
}

#[derive(Args)]
struct GenArgs {
    kind: GenKind,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = Bounds::default().generators)]
    generators: usize,
    #[arg(long, default_value_t = Bounds::default().reducible)]
    reducible: usize,
    #[arg(long, default_value_t = Bounds::default().min_degree, allow_hyphen_values = true)]
    min_degree: i64,
    #[arg(long, default_value_t = Bounds::default().max_degree, allow_hyphen_values = true)]
    max_degree: i64,
    #[arg(long, default_value_t = Bounds::default().max_level)]
    max_level: i64,
    #[arg(long)]
    force_delta2_zero: bool,
    #[arg(long)]
    force_hypothesis1: bool,
    #[arg(long)]
    force_hypothesis2: bool,
    #[arg(long)]
    assumption_b: bool,
    /// Write the instance here instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SuiteArgs {
    /// Suite name; omit with --replay.
    name: Option<String>,
    #[arg(short, long, default_value_t = 100)]
    n: u64,
    #[arg(long)]
    seed: Option<u64>,
    /// Directory receiving one dump per failing instance.
    #[arg(long, default_value = "scx-failures")]
    dump_dir: PathBuf,
    /// Replay a failure dump instead of running a suite.
    #[arg(long, conflicts_with = "name")]
    replay: Option<PathBuf>,
}

/// Why a command did not succeed.
enum Failure {
    Invalid(String),
    Usage(String),
    Breach(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::UnknownSuite(_) => Failure::Usage(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

/// Structured output plus the stderr summary and the exit status it implies.
struct Output {
    value: Value,
    summary: String,
    status: u8,
}

impl Output {
    fn ok(value: Value, summary: impl Into<String>) -> Self {
        Output {
            value,
            summary: summary.into(),
            status: 0,
        }
    }

    fn with_status(mut self, status: u8) -> Self {
        self.status = status;
        self
    }
}

type CmdResult = Result<Output, Failure>;

fn seed_or_env(seed: Option<u64>) -> Result<u64, Failure> {
    if let Some(s) = seed {
        return Ok(s);
    }
    match std::env::var("SCX_SEED") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("SCX_SEED `{v}` is not a 64-bit integer"))),
        Err(_) => Ok(0),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        return std::io::read_to_string(std::io::stdin())
            .map_err(|e| Failure::Usage(format!("stdin: {e}")));
    }
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Document, Failure> {
    Ok(io::parse_document(&read(path)?)?)
}

fn rational(s: &str, what: &str) -> Result<Rational, Failure> {
    parse_rational(s).map_err(|e| Failure::Usage(format!("--{what}: {e}")))
}

fn extended(s: &str, what: &str) -> Result<Extended, Failure> {
    Extended::parse(s).map_err(|e| Failure::Usage(format!("--{what}: {e}")))
}

/// Documents that denote a single complex.
enum Loaded {
    F2(FilteredChainComplex<F2>),
    Novikov(FilteredChainComplex<scx_core::algebra::RationalFn>),
    S(Box<SComplex>),
}

fn load_complex(path: &Path) -> Result<Loaded, Failure> {
    Ok(match load(path)? {
        Document::Complex(d) => match io::complex_from_doc(&d, true)? {
            AnyComplex::F2(c) => Loaded::F2(c),
            AnyComplex::Novikov(c) => Loaded::Novikov(c),
        },
        Document::Morse(d) => Loaded::F2(build_morse(&io::morse_from_doc(&d)?)?),
        Document::NovikovMorse(d) => {
            Loaded::Novikov(build_novikov(&io::novikov_morse_from_doc(&d)?)?)
        }
        Document::SComplex(d) => Loaded::S(Box::new(io::scomplex_from_doc(&d)?)),
        Document::Orbit(d) => Loaded::S(Box::new(build_equivariant(&io::orbit_from_doc(&d)?)?)),
        _ => {
            return Err(Failure::Usage(
                "expected a complex, Morse, orbit or S-complex document".into(),
            ))
        }
    })
}

fn load_scomplex(path: &Path) -> Result<SComplex, Failure> {
    match load_complex(path)? {
        Loaded::S(s) => Ok(*s),
        _ => Err(Failure::Usage(
            "expected an S-complex or orbit document".into(),
        )),
    }
}

fn load_f2(path: &Path) -> Result<FilteredChainComplex<F2>, Failure> {
    match load_complex(path)? {
        Loaded::F2(c) => Ok(c),
        Loaded::S(s) => Ok(assemble_total(&s)?),
        Loaded::Novikov(_) => Err(Failure::Usage(
            "persistence is computed over F2 only".into(),
        )),
    }
}

fn ext(e: &Extended) -> Value {
    Value::String(e.to_string())
}

fn cycle_ids(c: &FilteredChainComplex<F2>, v: &SparseVector<F2>) -> Value {
    v.entries()
        .iter()
        .map(|(i, _)| Value::String(c.generators()[*i].id.clone()))
        .collect()
}

fn spectral(c: &FilteredChainComplex<F2>, v: &SpectralValue) -> Value {
    match &v.witness {
        Some(w) => json!({
            "value": ext(&v.value),
            "witness": {"threshold": format_rational(&w.threshold), "cycle": cycle_ids(c, &w.cycle)},
        }),
        None => json!({"value": ext(&v.value)}),
    }
}

fn report(valid: bool, kind: &str, violations: Vec<String>) -> Output {
    let n = violations.len();
    let out = Output::ok(
        json!({"kind": kind, "valid": valid, "violations": violations}),
        if valid {
            format!("{kind}: valid")
        } else {
            format!("{kind}: {n} violation(s)")
        },
    );
    out.with_status(if valid { 0 } else { 1 })
}

/// A builder error on a combinatorial document is a verdict, not a crash.
fn built<T>(kind: &str, r: scx_core::Result<T>) -> Result<Output, Failure> {
    match r {
        Ok(_) => Ok(report(true, kind, vec![])),
        Err(Error::Parse(p)) => Err(Failure::Usage(p.to_string())),
        Err(e) => Ok(report(false, kind, vec![e.to_string()])),
    }
}

fn validate(path: &Path) -> CmdResult {
    match load(path)? {
        Document::Complex(d) => {
            let violations = match io::complex_from_doc(&d, false)? {
                AnyComplex::F2(c) => c
                    .validate()
                    .violations
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>(),
                AnyComplex::Novikov(c) => c
                    .validate()
                    .violations
                    .iter()
                    .map(ToString::to_string)
                    .collect(),
            };
            Ok(report(violations.is_empty(), "complex", violations))
        }
        Document::SComplex(d) => {
            let s = io::scomplex_from_doc_unchecked(&d)?;
            let r = s.validate();
            if !r.verdicts_agree() {
                return Err(Failure::Breach(format!(
                    "relation verdict and total d^2 disagree: relations {}, total {}",
                    r.relations_hold(),
                    r.total_d_squared_zero
                )));
            }
            let mut out = report(
                r.is_clean(),
                "scomplex",
                r.violations.iter().map(ToString::to_string).collect(),
            );
            out.value["relations"] = r
                .relations
                .iter()
                .map(|(rel, ok)| (rel.name().to_string(), json!(ok)))
                .collect();
            out.value["total_d_squared_zero"] = json!(r.total_d_squared_zero);
            out.value["warnings"] = json!(r.warnings);
            Ok(out)
        }
        Document::SMap(d) => {
            let f = io::smap_from_doc_unchecked(&d)?;
            let r = f.report();
            if r.identities_hold() != r.commutes {
                return Err(Failure::Breach(
                    "identity verdict and total commutation disagree".into(),
                ));
            }
            let mut violations: Vec<String> = r
                .identities
                .iter()
                .filter(|(_, ok)| !ok)
                .map(|(i, _)| format!("{i} fails"))
                .collect();
            violations.extend(r.shape.iter().cloned());
            let mut out = report(r.is_clean(), "smap", violations);
            out.value["identities"] = r
                .identities
                .iter()
                .map(|(i, ok)| (i.name().to_string(), json!(ok)))
                .collect();
            out.value["commutes"] = json!(r.commutes);
            Ok(out)
        }
        Document::Map(d) => built("map", io::map_from_doc(&d)),
        Document::Morse(d) => built("morse", build_morse(&io::morse_from_doc(&d)?)),
        Document::Orbit(d) => built("orbit", build_equivariant(&io::orbit_from_doc(&d)?)),
        Document::NovikovMorse(d) => built(
            "novikov-morse",
            build_novikov(&io::novikov_morse_from_doc(&d)?),
        ),
        Document::Corr(d) => {
            let (s, t, c) = io::corr_from_doc(&d)?;
            built(
                "corr",
                build_morse(&s).and_then(|s| {
                    let t = build_morse(&t)?;
                    build_pullup(Arc::new(s), Arc::new(t), &c)
                }),
            )
        }
        Document::SCorr(d) => {
            let (s, t, c) = io::scorr_from_doc(&d)?;
            built(
                "scorr",
                build_equivariant(&s).and_then(|s| {
                    let t = build_equivariant(&t)?;
                    build_s_pullup(Arc::new(s), Arc::new(t), &c)
                }),
            )
        }
    }
}

fn dims_value(dims: BTreeMap<i64, usize>, degree: Option<i64>) -> Value {
    dims.into_iter()
        .filter(|(n, _)| degree.is_none_or(|q| q == *n))
        .map(|(n, d)| (n.to_string(), json!(d)))
        .collect::<serde_json::Map<_, _>>()
        .into()
}

fn homology_cmd(path: &Path, degree: Option<i64>) -> CmdResult {
    let (dims, what) = match load_complex(path)? {
        Loaded::F2(c) => (homology(&c)?.dims(), "complex"),
        Loaded::Novikov(c) => (homology(&c)?.dims(), "Novikov complex"),
        Loaded::S(s) => (homology(&assemble_total(&s)?)?.dims(), "total complex"),
    };
    let dims = match degree {
        Some(q) => BTreeMap::from([(q, dims.get(&q).copied().unwrap_or(0))]),
        None => dims,
    };
    let total: usize = dims.values().sum();
    Ok(Output::ok(
        json!({"homology": dims_value(dims, degree)}),
        format!("{what}: total homology dimension {total}"),
    ))
}

fn barcode_cmd(path: &Path, degree: Option<i64>, threshold: Option<&str>) -> CmdResult {
    let c = load_f2(path)?;
    let mut b = barcode(&c)?;
    if let Some(q) = degree {
        b.bars.retain(|bar| bar.degree == q);
    }
    let mut value = serde_json::to_value(io::barcode_to_doc(&b)).expect("barcode serializes");
    if let Some(t) = threshold {
        let t = rational(t, "threshold")?;
        let mut alive: BTreeMap<i64, usize> = BTreeMap::new();
        for bar in &b.bars {
            if bar.birth <= t && Extended::Finite(t.clone()) < bar.death {
                *alive.entry(bar.degree).or_default() += 1;
            }
        }
        value["betti_at_threshold"] =
            json!({"threshold": format_rational(&t), "dims": dims_value(alive, None)});
    }
    let n = b.bars.len();
    Ok(Output::ok(value, format!("{n} bar(s)")))
}

fn rho_cmd(path: &Path, q: i64, window: usize) -> CmdResult {
    match load_complex(path)? {
        Loaded::F2(c) => {
            let v = rho_degree(&c, q)?;
            let summary = format!("rho_{q} = {}", v.value);
            Ok(Output::ok(
                json!({"degree": q, "rho": spectral(&c, &v)}),
                summary,
            ))
        }
        Loaded::Novikov(c) => {
            let v = novikov_rho_window(&c, q, window)?;
            Ok(Output::ok(
                json!({"degree": q, "rho": {"value": ext(&v.value), "window": v.window, "tag": v.tag}}),
                format!("rho_{q} <= {} ({})", v.value, v.tag),
            ))
        }
        Loaded::S(s) => {
            let total = assemble_total(&s)?;
            let rho = s_rho(&s, q)?;
            let lambda = s_lambda(&s, q)?;
            let summary = format!("rho_{q} = {}, lambda_{q} = {}", rho.value, lambda.value);
            Ok(Output::ok(
                json!({"degree": q, "rho": spectral(&total, &rho), "lambda": spectral(s.irr(), &lambda)}),
                summary,
            ))
        }
    }
}

/// Degrees worth checking: every total degree with a margin on both sides.
fn degree_span(s: &SComplex) -> Vec<i64> {
    let degs: Vec<i64> = s.total_generators().iter().map(|g| g.degree).collect();
    match (degs.iter().min(), degs.iter().max()) {
        (Some(lo), Some(hi)) => (lo - 3..=hi + 3).collect(),
        _ => Vec::new(),
    }
}

fn scheck(path: &Path, degree: Option<i64>) -> CmdResult {
    let doc = load(path)?;
    if let Document::SMap(_) = doc {
        return validate(path);
    }
    let s = match doc {
        Document::SComplex(d) => io::scomplex_from_doc(&d)?,
        Document::Orbit(d) => build_equivariant(&io::orbit_from_doc(&d)?)?,
        _ => {
            return Err(Failure::Usage(
                "expected an S-complex, orbit or S-map document".into(),
            ))
        }
    };
    let degrees = degree.map_or_else(|| degree_span(&s), |q| vec![q]);
    let mut rows = Vec::new();
    let mut breaches = Vec::new();
    for q in degrees {
        let r = check_lambda_rho(&s, q)?;
        let side = |h: &scx_core::specseq::HypothesisOutcome| {
            json!({
                "holds": h.holds,
                "lambda_degree": h.lambda_degree,
                "page_row": h.page_row,
                "lambda": ext(&h.lambda),
                "rho": ext(&h.rho),
                "inequality": h.inequality,
            })
        };
        if !r.consistent() {
            breaches.push(q);
        }
        rows.push(json!({
            "degree": q,
            "first": side(&r.first),
            "second": side(&r.second),
            "second_without_sublevels": r.second_unfiltered,
            "note": r.note,
        }));
    }
    let value = json!({"kind": "scomplex", "valid": true, "degrees": rows});
    if !breaches.is_empty() {
        emit(&io::to_json(&value));
        return Err(Failure::Breach(format!(
            "lambda >= rho fails under a met hypothesis in degree(s) {breaches:?}"
        )));
    }
    let n = rows.len();
    Ok(Output::ok(
        value,
        format!("S-complex valid; comparison consistent in {n} degree(s)"),
    ))
}

fn stotal(path: &Path) -> CmdResult {
    let s = load_scomplex(path)?;
    let total = assemble_total(&s)?;
    let n = total.len();
    Ok(Output::ok(
        serde_json::to_value(io::complex_to_doc(&total)).expect("complex serializes"),
        format!("total complex with {n} generator(s)"),
    ))
}

fn pages_cmd(path: &Path) -> CmdResult {
    let s = load_scomplex(path)?;
    let closed = pages_closed_form(&s)?;
    let generic = pages_generic(&s)?;
    if let Some((a, _)) = closed.iter().zip(&generic).find(|(a, b)| !a.same_dims(b)) {
        return Err(Failure::Breach(format!(
            "closed-form page {} differs from the generic computation",
            a.r
        )));
    }
    let rec = abutment(&s)?;
    let value =
        serde_json::to_value(io::pages_to_doc(&closed, Some(&rec))).expect("pages serialize");
    Ok(Output::ok(
        value,
        format!("{} page(s), closed form agrees with generic", closed.len()),
    ))
}

fn abut(path: &Path) -> CmdResult {
    let s = load_scomplex(path)?;
    let rec = abutment(&s)?;
    let rows: Vec<Value> = rec
        .rows
        .iter()
        .map(|r| json!({"degree": r.degree, "homology_dim": r.homology_dim, "pieces": r.pieces, "matched": r.matched}))
        .collect();
    let value = json!({"reconstruction": rows, "degenerates_at_three": rec.degenerates_at_three});
    if !rec.holds() {
        emit(&io::to_json(&value));
        return Err(Failure::Breach("graded reconstruction fails".into()));
    }
    Ok(Output::ok(
        value,
        format!("reconstruction holds in {} degree(s)", rec.rows.len()),
    ))
}

/// Novikov maps only yield evidence between window approximants, never a breach.
fn compare_novikov(doc: &io::MapDoc, window: usize) -> CmdResult {
    let f = io::novikov_map_from_doc(doc)?;
    let r = verify_novikov_functoriality(&f, window)?;
    let checks: Vec<Value> = r
        .degree_checks
        .iter()
        .map(|c| json!({"degree": c.degree, "rho_source": ext(&c.rho_source), "rho_target": ext(&c.rho_target), "holds": c.holds}))
        .collect();
    let summary = format!(
        "{}: window {} approximants {}",
        r.tag,
        r.window,
        if r.consistent() {
            "consistent"
        } else {
            "inconsistent"
        }
    );
    Ok(Output::ok(
        json!({
            "quasi_iso": r.quasi_iso,
            "level_shift": ext(&r.level_shift),
            "window": r.window,
            "tag": r.tag,
            "degree_checks": checks,
            "consistent": r.consistent(),
            "note": r.note,
        }),
        summary,
    ))
}

fn compare_cmd(path: &Path, degree: Option<i64>, window: usize) -> CmdResult {
    let f: ChainMap<F2> = match load(path)? {
        Document::Map(d) if d.source.field == "novikov" => return compare_novikov(&d, window),
        Document::Map(d) => io::map_from_doc(&d)?,
        Document::Corr(d) => {
            let (s, t, c) = io::corr_from_doc(&d)?;
            build_pullup(Arc::new(build_morse(&s)?), Arc::new(build_morse(&t)?), &c)?
        }
        Document::SCorr(d) => {
            let (s, t, c) = io::scorr_from_doc(&d)?;
            let f = build_s_pullup(
                Arc::new(build_equivariant(&s)?),
                Arc::new(build_equivariant(&t)?),
                &c,
            )?;
            f.total_chain_map()?
        }
        _ => {
            return Err(Failure::Usage(
                "expected a map, correspondence or S-correspondence document".into(),
            ))
        }
    };
    let r = verify_functoriality(&f, None)?;
    let check = |c: &scx_core::morse::InequalityCheck| json!({"degree": c.degree, "rho_source": ext(&c.rho_source), "rho_target": ext(&c.rho_target), "holds": c.holds});
    let mut value = json!({
        "quasi_iso": r.quasi_iso,
        "level_shift": ext(&r.level_shift),
        "asserted": r.asserted,
        "degree_checks": r.degree_checks.iter().map(check).collect::<Vec<_>>(),
        "class_checks": r.class_checks.iter().map(check).collect::<Vec<_>>(),
        "violations": r.violations,
        "note": r.note,
    });
    let mut degree_breach = None;
    if let Some(q) = degree {
        if f.level_shift().is_finite() {
            let c = compare(&f, q)?;
            value["degree"] = json!({
                "degree": q,
                "injective": c.injective,
                "rho_source": ext(&c.rho_source),
                "rho_target": ext(&c.rho_target),
                "holds": c.holds,
            });
            if r.asserted && c.holds == Some(false) {
                degree_breach = Some(format!("rho fails to decrease in degree {q}"));
            }
        }
    }
    if r.asserted && (!r.holds() || degree_breach.is_some()) {
        emit(&io::to_json(&value));
        let mut why = r.violations.clone();
        why.extend(degree_breach);
        return Err(Failure::Breach(why.join("; ")));
    }
    let summary = if r.asserted {
        format!(
            "functoriality holds ({} degree, {} class checks)",
            r.degree_checks.len(),
            r.class_checks.len()
        )
    } else {
        format!("nothing asserted: {}", r.note.clone().unwrap_or_default())
    };
    Ok(Output::ok(value, summary))
}

fn psc(rho_in: &str, rho_out: &str, c: &str, s2: Option<&str>) -> CmdResult {
    let rho_in = extended(rho_in, "rho-in")?;
    let rho_out = extended(rho_out, "rho-out")?;
    let c = rational(c, "const-C")?;
    let s2 = s2.map(|s| rational(s, "s2")).transpose()?;
    let v = psc_check(&rho_in, &rho_out, &c, s2.as_ref());
    let bound = v.s2_lower_bound.as_ref().map(ext);
    let summary = match &v.s2_lower_bound {
        _ if v.vacuous => "rho_in is infinite; no information".to_string(),
        Some(b) => format!("obstructed: {}; integral of s^2 >= {b}", v.obstructed),
        None => format!("obstructed: {}", v.obstructed),
    };
    Ok(Output::ok(
        json!({
            "obstructed": v.obstructed,
            "s2_lower_bound": bound,
            "vacuous": v.vacuous,
            "consistent": v.consistent,
        }),
        summary,
    ))
}

fn gen_cmd(a: &GenArgs) -> CmdResult {
    let spec = GenSpec {
        kind: a.kind,
        bounds: Bounds {
            generators: a.generators,
            reducible: a.reducible,
            min_degree: a.min_degree,
            max_degree: a.max_degree,
            max_level: a.max_level,
        },
        seed: seed_or_env(a.seed)?,
        toggles: Toggles {
            force_delta2_zero: a.force_delta2_zero,
            force_hypothesis1: a.force_hypothesis1,
            force_hypothesis2: a.force_hypothesis2,
            assumption_b: a.assumption_b,
        },
    };
    if spec.bounds.min_degree > spec.bounds.max_degree || spec.bounds.max_level < 0 {
        return Err(Failure::Usage(
            "degree bounds must satisfy min <= max and --max-level >= 0".into(),
        ));
    }
    let doc = generate(&spec)?.to_value();
    let summary = format!("generated {} instance with seed {}", spec.kind, spec.seed);
    if let Some(path) = &a.output {
        std::fs::write(path, io::to_json(&doc) + "\n")
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        return Ok(Output::ok(
            json!({"written": path.display().to_string()}),
            summary,
        ));
    }
    Ok(Output::ok(doc, summary))
}

fn suite_cmd(a: &SuiteArgs) -> CmdResult {
    if let Some(path) = &a.replay {
        return replay(path);
    }
    let Some(name) = &a.name else {
        return Err(Failure::Usage(
            "a suite name or --replay is required".into(),
        ));
    };
    let name: SuiteName = name.parse()?;
    let seed = seed_or_env(a.seed)?;
    let r = run_suite(name, a.n, seed);
    let mut dumps = Vec::new();
    if !r.failures.is_empty() {
        std::fs::create_dir_all(&a.dump_dir)
            .map_err(|e| Failure::Usage(format!("{}: {e}", a.dump_dir.display())))?;
        for f in &r.failures {
            let path = a.dump_dir.join(format!("{}-{}.json", name.name(), f.index));
            std::fs::write(&path, io::to_json(&f.dump(name)) + "\n")
                .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            dumps.push(path.display().to_string());
        }
    }
    for w in &r.warnings {
        eprintln!("warning: {w}");
    }
    let mut value = serde_json::to_value(&r).expect("report serializes");
    if let Some(list) = value["failures"].as_array_mut() {
        for f in list {
            if let Some(obj) = f.as_object_mut() {
                obj.remove("instance");
            }
        }
    }
    value["dumps"] = json!(dumps);
    let summary = format!(
        "{}: {}/{} passed (seed {seed})",
        name, r.passed, r.instances
    );
    let status = if r.ok() { 0 } else { 3 };
    Ok(Output::ok(value, summary).with_status(status))
}

fn replay(path: &Path) -> CmdResult {
    let dump: Value = serde_json::from_str(&read(path)?)
        .map_err(|e| Failure::Usage(format!("failure dump: {e}")))?;
    if dump["schema"] != "scx/1 failure" {
        return Err(Failure::Usage("not a failure dump".into()));
    }
    let field = |k: &str| {
        dump[k]
            .as_u64()
            .ok_or_else(|| Failure::Usage(format!("failure dump lacks `{k}`")))
    };
    let name: SuiteName = dump["suite"].as_str().unwrap_or_default().parse()?;
    let (index, seed) = (field("index")?, field("seed")?);
    let o = run_instance(name, index, seed);
    let reproduced = !o.passed && o.detail == dump["detail"].as_str().unwrap_or_default();
    let value = json!({"suite": name.name(), "index": index, "seed": seed, "passed": o.passed, "detail": o.detail, "reproduced": reproduced});
    let summary = if o.passed {
        format!("{name} #{index} now passes")
    } else {
        format!("{name} #{index} fails: {}", o.detail)
    };
    Ok(Output::ok(value, summary).with_status(if o.passed { 0 } else { 3 }))
}

fn dispatch(verb: &Verb) -> CmdResult {
    match verb {
        Verb::Validate { input } => validate(input),
        Verb::Homology { input, degree } => homology_cmd(input, *degree),
        Verb::Barcode {
            input,
            degree,
            threshold,
        } => barcode_cmd(input, *degree, threshold.as_deref()),
        Verb::Rho {
            input,
            degree,
            window,
        } => rho_cmd(input, *degree, *window),
        Verb::Scheck { input, degree } => scheck(input, *degree),
        Verb::Stotal { input } => stotal(input),
        Verb::Pages { input } => pages_cmd(input),
        Verb::Abut { input } => abut(input),
        Verb::Compare {
            input,
            degree,
            window,
        } => compare_cmd(input, *degree, *window),
        Verb::Psc {
            rho_in,
            rho_out,
            const_c,
            s2,
        } => psc(rho_in, rho_out, const_c, s2.as_deref()),
        Verb::Gen(a) => gen_cmd(a),
        Verb::Suite(a) => suite_cmd(a),
    }
}

/// Indented `key: value` lines for `--format text`.
fn text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                if x.is_object()
                    || x.is_array()
                        && !x
                            .as_array()
                            .is_some_and(|a| a.iter().all(|e| !e.is_object() && !e.is_array()))
                {
                    out.push_str(&format!("{pad}{k}:\n"));
                    text(x, indent + 1, out);
                } else {
                    out.push_str(&format!("{pad}{k}: {}\n", scalar(x)));
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                if x.is_object() || x.is_array() {
                    out.push_str(&format!("{pad}-\n"));
                    text(x, indent + 1, out);
                } else {
                    out.push_str(&format!("{pad}- {}\n", scalar(x)));
                }
            }
        }
        x => out.push_str(&format!("{pad}{}\n", scalar(x))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(a) => a.iter().map(scalar).collect::<Vec<_>>().join(", "),
        other => other.to_string(),
    }
}

/// Writes one document to stdout; a closed pipe is not an error.
fn emit(s: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{s}").and_then(|_| out.flush());
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(&cli.verb) {
        Ok(out) => {
            match cli.format {
                Format::Json => emit(&io::to_json(&out.value)),
                Format::Text => {
                    let mut s = String::new();
                    text(&out.value, 0, &mut s);
                    emit(s.trim_end());
                }
            }
            eprintln!("{}", out.summary);
            ExitCode::from(out.status)
        }
        Err(Failure::Invalid(m)) => {
            eprintln!("invalid data: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Breach(m)) => {
            eprintln!("invariant violated: {m}");
            ExitCode::from(3)
        }
    }
}
