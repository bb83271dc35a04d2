//! Seeded random instances for every document kind.
//!
//! Randomness comes from xorshift64 with shifts (13, 7, 17); the user seed is
//! passed once through the splitmix64 finalizer so that nearby seeds give
//! unrelated streams. Integers below `n` are drawn by rejection. Any other
//! implementation following the same recipe replays the same instances.
//!
//! Filtered complexes are built in normal form (disjoint pairs `d a = b` with
//! `ℓ(b) <= ℓ(a)` plus free cycles) and then scrambled by filtered elementary
//! changes of basis `g_j <- g_j + g_i`, `ℓ(g_i) <= ℓ(g_j)`, which keep `d² = 0`
//! and the filtration law. S-complex maps are drawn from cycles and cocycles
//! so that the last three relations hold, and `u` is solved for.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::algebra::{
    kernel_basis, solve_in_image, LaurentPoly, Ring, SparseMatrix, SparseVector, F2,
};
use crate::complex::{FilteredChainComplex, Generator};
use crate::error::{Error, Result};
use crate::io::{self, Document};
use crate::level::{int, rat, Extended, Rational};
use crate::morse::{
    build_equivariant, build_morse, build_novikov, build_pullup, CorrespondenceData, Count,
    CriticalPoint, EquivariantOrbitData, MorseData, NovikovMorseData,
};
use crate::scomplex::{perturb_by_homotopy, SComplex, SHomotopy, SMorphism};

/// xorshift64 seeded through splitmix64.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XorShift64 {
    state: u64,
}

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

impl XorShift64 {
    pub fn new(seed: u64) -> Self {
        let mut z = seed.wrapping_add(GOLDEN);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
        XorShift64 {
            state: if z == 0 { GOLDEN } else { z },
        }
    }

    /// Seed of the `i`-th instance of a suite run.
    pub fn instance_seed(seed: u64, i: u64) -> u64 {
        seed ^ i.wrapping_add(1).wrapping_mul(GOLDEN)
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.state = x;
        x
    }

    /// Uniform in `0..n`. Panics when `n == 0`.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "empty range");
        let zone = u64::MAX - u64::MAX % n;
        loop {
            let x = self.next_u64();
            if x < zone {
                return x % n;
            }
        }
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.below(n as u64) as usize
    }

    /// Uniform in `lo..=hi`.
    pub fn range(&mut self, lo: i64, hi: i64) -> i64 {
        assert!(lo <= hi, "empty range");
        lo + self.below((hi - lo) as u64 + 1) as i64
    }

    /// True with probability `num / den`.
    pub fn chance(&mut self, num: u64, den: u64) -> bool {
        self.below(den) < num
    }

    pub fn shuffle<T>(&mut self, v: &mut [T]) {
        for i in (1..v.len()).rev() {
            v.swap(i, self.index(i + 1));
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GenKind {
    Complex,
    SComplex,
    Morse,
    Orbit,
    Corr,
    Novikov,
}

impl GenKind {
    pub const ALL: [GenKind; 6] = [
        GenKind::Complex,
        GenKind::SComplex,
        GenKind::Morse,
        GenKind::Orbit,
        GenKind::Corr,
        GenKind::Novikov,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GenKind::Complex => "complex",
            GenKind::SComplex => "scomplex",
            GenKind::Morse => "morse",
            GenKind::Orbit => "orbit",
            GenKind::Corr => "corr",
            GenKind::Novikov => "novikov",
        }
    }
}

impl fmt::Display for GenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GenKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        GenKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown kind `{s}`"))
    }
}

/// Upper bounds; actual sizes are drawn uniformly up to them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bounds {
    /// Generators of `C` (or of the whole complex).
    pub generators: usize,
    /// Generators of `R`.
    pub reducible: usize,
    pub min_degree: i64,
    pub max_degree: i64,
    /// Levels are halves in `[0, max_level]`.
    pub max_level: i64,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            generators: 10,
            reducible: 3,
            min_degree: 0,
            max_degree: 4,
            max_level: 4,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Toggles {
    pub force_delta2_zero: bool,
    /// `δ₂ = 0` and `u* = 0` on `ker δ₁*`, in every degree.
    pub force_hypothesis1: bool,
    /// `δ₁ = 0` and `u*` lands in `im δ₂*`, on every sublevel.
    pub force_hypothesis2: bool,
    /// Every target value lies at or below every source value.
    pub assumption_b: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenSpec {
    pub kind: GenKind,
    pub bounds: Bounds,
    pub seed: u64,
    pub toggles: Toggles,
}

type Dense = Vec<Vec<bool>>;

fn dense(rows: usize, cols: usize) -> Dense {
    vec![vec![false; cols]; rows]
}

fn to_sparse(m: &Dense, rows: usize, cols: usize) -> SparseMatrix<F2> {
    let entries = (0..rows)
        .flat_map(|i| {
            (0..cols)
                .filter(move |&j| m[i][j])
                .map(move |j| (i, j, F2::ONE))
        })
        .collect();
    SparseMatrix::from_entries(rows, cols, entries).expect("dense entries are distinct")
}

fn from_sparse(m: &SparseMatrix<F2>) -> Dense {
    let mut d = dense(m.rows(), m.cols());
    for (r, c, _) in m.entries() {
        d[r][c] = true;
    }
    d
}

fn random_level(rng: &mut XorShift64, b: &Bounds) -> Rational {
    rat(rng.range(0, 2 * b.max_level.max(0)), 2)
}

/// `n` generators sorted by degree, ids `{prefix}{i}`.
fn random_generators(rng: &mut XorShift64, prefix: &str, n: usize, b: &Bounds) -> Vec<Generator> {
    let mut raw: Vec<(i64, Rational)> = (0..n)
        .map(|_| {
            (
                rng.range(b.min_degree, b.max_degree.max(b.min_degree)),
                random_level(rng, b),
            )
        })
        .collect();
    raw.sort_by_key(|(deg, _)| *deg);
    raw.into_iter()
        .enumerate()
        .map(|(i, (deg, lev))| Generator::new(format!("{prefix}{i}"), deg, lev))
        .collect()
}

/// Filtered elementary changes of basis applied to `d` (square on `gens`).
/// `tracked` maps into these generators and is updated alongside.
fn scramble(
    rng: &mut XorShift64,
    gens: &[Generator],
    d: &mut Dense,
    mut tracked: Option<&mut Dense>,
) {
    let n = gens.len();
    if n < 2 {
        return;
    }
    for _ in 0..3 * n {
        let (i, j) = (rng.index(n), rng.index(n));
        if i == j || gens[i].degree != gens[j].degree || gens[i].level > gens[j].level {
            continue;
        }
        for row in d.iter_mut() {
            if row[i] {
                row[j] ^= true;
            }
        }
        let rj = d[j].clone();
        for (x, y) in d[i].iter_mut().zip(rj) {
            *x ^= y;
        }
        if let Some(t) = tracked.as_deref_mut() {
            let rj = t[j].clone();
            for (x, y) in t[i].iter_mut().zip(rj) {
                *x ^= y;
            }
        }
    }
}

/// Normal-form pairs on `gens`, then scrambled.
fn random_differential(rng: &mut XorShift64, gens: &[Generator]) -> Dense {
    let n = gens.len();
    let mut d = dense(n, n);
    let mut order: Vec<usize> = (0..n).collect();
    rng.shuffle(&mut order);
    let mut used = vec![false; n];
    for &a in &order {
        if used[a] || !rng.chance(2, 3) {
            continue;
        }
        let cands: Vec<usize> = (0..n)
            .filter(|&b| {
                !used[b]
                    && b != a
                    && gens[b].degree == gens[a].degree - 1
                    && gens[b].level <= gens[a].level
            })
            .collect();
        if cands.is_empty() {
            continue;
        }
        let b = cands[rng.index(cands.len())];
        used[a] = true;
        used[b] = true;
        d[b][a] = true;
    }
    scramble(rng, gens, &mut d, None);
    d
}

fn random_combination(rng: &mut XorShift64, basis: &[SparseVector<F2>], len: usize) -> Vec<bool> {
    let mut out = vec![false; len];
    for v in basis {
        if rng.chance(1, 2) {
            for (i, _) in v.entries() {
                out[*i] ^= true;
            }
        }
    }
    out
}

/// A random cycle of degree `degree` supported on levels `<= max_level`.
fn random_cycle(
    rng: &mut XorShift64,
    gens: &[Generator],
    d: &Dense,
    degree: i64,
    max_level: &Rational,
) -> Vec<bool> {
    let n = gens.len();
    let idx: Vec<usize> = (0..n)
        .filter(|&i| gens[i].degree == degree && gens[i].level <= *max_level)
        .collect();
    let rows: Vec<usize> = (0..n).filter(|&k| gens[k].degree == degree - 1).collect();
    let mut entries = Vec::new();
    for (a, &r) in rows.iter().enumerate() {
        for (b, &c) in idx.iter().enumerate() {
            if d[r][c] {
                entries.push((a, b, F2::ONE));
            }
        }
    }
    let m = SparseMatrix::from_entries(rows.len(), idx.len(), entries).expect("distinct");
    let local = random_combination(rng, &kernel_basis(&m), idx.len());
    let mut out = vec![false; n];
    for (b, &c) in idx.iter().enumerate() {
        out[c] = local[b];
    }
    out
}

/// A random functional on degree `degree`, vanishing on boundaries and
/// supported on levels `>= min_level`.
fn random_cocycle(
    rng: &mut XorShift64,
    gens: &[Generator],
    d: &Dense,
    degree: i64,
    min_level: &Rational,
) -> Vec<bool> {
    let n = gens.len();
    let idx: Vec<usize> = (0..n)
        .filter(|&i| gens[i].degree == degree && gens[i].level >= *min_level)
        .collect();
    let cols: Vec<usize> = (0..n).filter(|&k| gens[k].degree == degree + 1).collect();
    let mut entries = Vec::new();
    for (a, &c) in cols.iter().enumerate() {
        for (b, &r) in idx.iter().enumerate() {
            if d[r][c] {
                entries.push((a, b, F2::ONE));
            }
        }
    }
    let m = SparseMatrix::from_entries(cols.len(), idx.len(), entries).expect("distinct");
    let local = random_combination(rng, &kernel_basis(&m), idx.len());
    let mut out = vec![false; n];
    for (b, &r) in idx.iter().enumerate() {
        out[r] = local[b];
    }
    out
}

/// Random map `src -> dst` raising degree by `offset` and not raising levels.
fn random_filtered(
    rng: &mut XorShift64,
    src: &[Generator],
    dst: &[Generator],
    offset: i64,
    num: u64,
    den: u64,
) -> Dense {
    let mut m = dense(dst.len(), src.len());
    for (j, g) in src.iter().enumerate() {
        for (i, h) in dst.iter().enumerate() {
            if h.degree == g.degree + offset && h.level <= g.level && rng.chance(num, den) {
                m[i][j] = true;
            }
        }
    }
    m
}

fn gen_err(e: Error) -> Error {
    Error::Generation(e.to_string())
}

pub fn gen_filtered_complex(
    rng: &mut XorShift64,
    b: &Bounds,
    prefix: &str,
) -> Result<FilteredChainComplex<F2>> {
    let n = rng.index(b.generators + 1);
    let gens = random_generators(rng, prefix, n, b);
    let d = random_differential(rng, &gens);
    FilteredChainComplex::new(gens, to_sparse(&d, n, n), true).map_err(gen_err)
}

/// Solves `u d + d u = m` for a filtered `u` of degree -2.
fn solve_u(c: &FilteredChainComplex<F2>, m: &SparseMatrix<F2>) -> Result<Option<SparseMatrix<F2>>> {
    let n = c.len();
    if m.is_zero() {
        return Ok(Some(SparseMatrix::zeros(n, n)));
    }
    let g = c.generators();
    let unknowns: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .filter(|&(a, b)| g[a].degree == g[b].degree - 2 && g[a].level <= g[b].level)
        .collect();
    let mut eq: HashMap<(usize, usize), usize> = HashMap::new();
    for a in 0..n {
        for e in 0..n {
            if g[a].degree == g[e].degree - 3 {
                let k = eq.len();
                eq.insert((a, e), k);
            }
        }
    }
    let d = c.differential();
    let dt = d.transpose();
    let mut entries = Vec::new();
    for (t, &(a, b)) in unknowns.iter().enumerate() {
        // u_{ab} d_{be}
        for (e, _) in dt.column_entries(b) {
            if let Some(&row) = eq.get(&(a, *e)) {
                entries.push((row, t, F2::ONE));
            }
        }
        // d_{a'a} u_{ab}
        for (a2, _) in d.column_entries(a) {
            if let Some(&row) = eq.get(&(*a2, b)) {
                entries.push((row, t, F2::ONE));
            }
        }
    }
    let mut rhs = Vec::new();
    for (r, col, _) in m.entries() {
        match eq.get(&(r, col)) {
            Some(&row) => rhs.push((row, F2::ONE)),
            None => return Ok(None),
        }
    }
    let a = SparseMatrix::from_summed_entries(eq.len(), unknowns.len(), entries);
    let Some(x) = solve_in_image(&a, &SparseVector::from_entries(eq.len(), rhs))? else {
        return Ok(None);
    };
    let entries = x
        .entries()
        .iter()
        .map(|(t, s)| (unknowns[*t].0, unknowns[*t].1, *s))
        .collect();
    Ok(Some(SparseMatrix::from_entries(n, n, entries)?))
}

pub fn gen_scomplex(rng: &mut XorShift64, b: &Bounds, t: &Toggles) -> Result<SComplex> {
    let irr = gen_filtered_complex(rng, b, "x")?;
    let nr = rng.index(b.reducible + 1);
    let red = random_generators(rng, "t", nr, b);
    let cg = irr.generators().to_vec();
    let nc = cg.len();
    let d = from_sparse(irr.differential());
    let mut delta1 = dense(nr, nc);
    let mut delta2 = dense(nc, nr);
    for (k, r) in red.iter().enumerate() {
        if !t.force_hypothesis2 && rng.chance(2, 3) {
            delta1[k] = random_cocycle(rng, &cg, &d, r.degree + 1, &r.level);
        }
        if !(t.force_hypothesis1 || t.force_delta2_zero) && rng.chance(2, 3) {
            let col = random_cycle(rng, &cg, &d, r.degree - 2, &r.level);
            for (i, x) in col.into_iter().enumerate() {
                delta2[i][k] = x;
            }
        }
    }
    let mut delta1 = to_sparse(&delta1, nr, nc);
    let mut delta2 = to_sparse(&delta2, nc, nr);
    // repair: drop δ₂ columns or δ₁ rows until δ₂δ₁ has a filtered null-homotopy
    let mut particular = None;
    for attempt in 0..=2 * nr + 1 {
        if let Some(u) = solve_u(&irr, &delta2.mul(&delta1))? {
            particular = Some(u);
            break;
        }
        let cols: Vec<usize> = (0..nr).filter(|&k| !delta2.column(k).is_zero()).collect();
        let rows: Vec<usize> = (0..nr)
            .filter(|&k| delta1.entries().any(|(r, _, _)| r == k))
            .collect();
        if attempt % 2 == 0 && !cols.is_empty() {
            let k = cols[rng.index(cols.len())];
            delta2 = zero_column(&delta2, k);
        } else if !rows.is_empty() {
            let k = rows[rng.index(rows.len())];
            delta1 = zero_row(&delta1, k);
        }
    }
    let Some(particular) = particular else {
        return Err(Error::Generation(
            "no filtered u solves u d + d u = delta2 delta1 after repairs".into(),
        ));
    };
    let ds = irr.differential();
    let k = to_sparse(&random_filtered(rng, &cg, &cg, -1, 1, 4), nc, nc);
    let mut u = particular.add(&ds.mul(&k)).add(&k.mul(ds));
    // rank-one chain maps z ζᵀ commute with d and can act on homology; both
    // forced hypotheses need u* to vanish, so they skip this term
    let forced = t.force_hypothesis1 || t.force_hypothesis2;
    for _ in 0..if forced { 0 } else { rng.index(3) } {
        let level = random_level(rng, b);
        let q = rng.range(b.min_degree + 2, b.max_degree.max(b.min_degree + 2));
        let zeta = random_cocycle(rng, &cg, &d, q, &level);
        let z = random_cycle(rng, &cg, &d, q - 2, &level);
        let mut m = dense(nc, nc);
        for (i, &zi) in z.iter().enumerate() {
            for (j, &zj) in zeta.iter().enumerate() {
                m[i][j] = zi && zj;
            }
        }
        u = u.add(&to_sparse(&m, nc, nc));
    }
    if !delta1.is_zero() {
        let mut chi = dense(nc, nr);
        for (j, r) in red.iter().enumerate() {
            if rng.chance(1, 2) {
                for (i, x) in random_cycle(rng, &cg, &d, r.degree - 1, &r.level)
                    .into_iter()
                    .enumerate()
                {
                    chi[i][j] = x;
                }
            }
        }
        u = u.add(&to_sparse(&chi, nc, nr).mul(&delta1));
    }
    if !delta2.is_zero() {
        let mut phi = dense(nr, nc);
        for (i, r) in red.iter().enumerate() {
            if rng.chance(1, 2) {
                phi[i] = random_cocycle(rng, &cg, &d, r.degree, &r.level);
            }
        }
        u = u.add(&delta2.mul(&to_sparse(&phi, nr, nc)));
    }
    SComplex::new(irr, red, u, delta1, delta2).map_err(gen_err)
}

fn zero_column(m: &SparseMatrix<F2>, k: usize) -> SparseMatrix<F2> {
    let entries = m
        .entries()
        .filter(|(_, c, _)| *c != k)
        .map(|(r, c, x)| (r, c, *x))
        .collect();
    SparseMatrix::from_entries(m.rows(), m.cols(), entries).expect("subset of entries")
}

fn zero_row(m: &SparseMatrix<F2>, k: usize) -> SparseMatrix<F2> {
    let entries = m
        .entries()
        .filter(|(r, _, _)| *r != k)
        .map(|(r, c, x)| (r, c, *x))
        .collect();
    SparseMatrix::from_entries(m.rows(), m.cols(), entries).expect("subset of entries")
}

fn flip(m: &SparseMatrix<F2>, r: usize, c: usize) -> SparseMatrix<F2> {
    m.add(&SparseMatrix::from_entries(m.rows(), m.cols(), vec![(r, c, F2::ONE)]).expect("in range"))
}

/// Positions `(row, col)` of a block `src -> dst` that respect its degree.
fn degree_slots(src: &[Generator], dst: &[Generator], offset: i64) -> Vec<(usize, usize)> {
    (0..dst.len())
        .flat_map(|i| (0..src.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| dst[i].degree == src[j].degree + offset)
        .collect()
}

/// Flips one degree-respecting entry of `d`, `u`, `δ₁` or `δ₂`. The result
/// is usually invalid; `None` when the shape admits no entry at all.
pub fn mutate_scomplex(rng: &mut XorShift64, s: &SComplex) -> Result<Option<SComplex>> {
    let (c, r) = (s.irr().generators(), s.red().generators());
    let slots = [
        degree_slots(c, c, -1),
        degree_slots(c, c, -2),
        degree_slots(c, r, -1),
        degree_slots(r, c, -2),
    ];
    let live: Vec<usize> = (0..4).filter(|&k| !slots[k].is_empty()).collect();
    if live.is_empty() {
        return Ok(None);
    }
    let which = live[rng.index(live.len())];
    let (i, j) = slots[which][rng.index(slots[which].len())];
    let (mut d, mut u, mut d1, mut d2) = (
        s.d().clone(),
        s.u().clone(),
        s.delta1().clone(),
        s.delta2().clone(),
    );
    match which {
        0 => d = flip(&d, i, j),
        1 => u = flip(&u, i, j),
        2 => d1 = flip(&d1, i, j),
        _ => d2 = flip(&d2, i, j),
    }
    let irr = FilteredChainComplex::new_unchecked(c.to_vec(), d, true)?;
    Ok(Some(SComplex::new_unchecked(irr, r.to_vec(), u, d1, d2)?))
}

/// `S[k] ⊕ A` with `A` acyclic and carrying no `R`, plus the inclusion blocks.
fn shifted_with_acyclic(
    rng: &mut XorShift64,
    s: &SComplex,
    k: i64,
    pairs: usize,
    b: &Bounds,
) -> Result<SComplex> {
    let (nc, nr) = (s.irr().len(), s.red().len());
    let mut cg: Vec<Generator> = s
        .irr()
        .generators()
        .iter()
        .enumerate()
        .map(|(i, g)| Generator::new(format!("y{i}"), g.degree + k, g.level.clone()))
        .collect();
    for p in 0..pairs {
        let deg = rng.range(b.min_degree, b.max_degree.max(b.min_degree)) + k;
        let la = random_level(rng, b);
        let lb = random_level(rng, b).min(la.clone());
        cg.push(Generator::new(format!("a{p}"), deg, la));
        cg.push(Generator::new(format!("b{p}"), deg - 1, lb));
    }
    let m = cg.len();
    let mut entries: Vec<(usize, usize, F2)> =
        s.d().entries().map(|(r, c, x)| (r, c, *x)).collect();
    for p in 0..pairs {
        entries.push((nc + 2 * p + 1, nc + 2 * p, F2::ONE));
    }
    let d = SparseMatrix::from_entries(m, m, entries)?;
    let pad = |x: &SparseMatrix<F2>, rows: usize, cols: usize| {
        SparseMatrix::from_entries(
            rows,
            cols,
            x.entries().map(|(r, c, v)| (r, c, *v)).collect(),
        )
        .expect("in range")
    };
    let red: Vec<Generator> = s
        .red()
        .generators()
        .iter()
        .enumerate()
        .map(|(i, g)| Generator::new(format!("v{i}"), g.degree + k, g.level.clone()))
        .collect();
    let irr = FilteredChainComplex::new(cg, d, true)?;
    SComplex::new(
        irr,
        red,
        pad(s.u(), m, m),
        pad(s.delta1(), nr, m),
        pad(s.delta2(), m, nr),
    )
}

/// A random filtered S-homotopy between degree-`k` morphisms `s -> t`.
pub fn random_shomotopy(rng: &mut XorShift64, s: &SComplex, t: &SComplex, k: i64) -> SHomotopy {
    let (sc, sr) = (s.irr().generators(), s.red().generators());
    let (tc, tr) = (t.irr().generators(), t.red().generators());
    SHomotopy {
        degree: k,
        l: to_sparse(
            &random_filtered(rng, sc, tc, k + 1, 1, 4),
            tc.len(),
            sc.len(),
        ),
        n: to_sparse(&random_filtered(rng, sc, tc, k, 1, 4), tc.len(), sc.len()),
        d1: to_sparse(
            &random_filtered(rng, sc, tr, k + 1, 1, 3),
            tr.len(),
            sc.len(),
        ),
        d2: to_sparse(&random_filtered(rng, sr, tc, k, 1, 3), tc.len(), sr.len()),
    }
}

/// The inclusion `S -> S[k] ⊕ A` perturbed by a random S-homotopy.
pub fn gen_smorphism(rng: &mut XorShift64, b: &Bounds, t: &Toggles) -> Result<SMorphism> {
    let s = Arc::new(gen_scomplex(rng, b, t)?);
    let k = rng.range(-1, 2);
    let pairs = rng.index(3);
    let tgt = Arc::new(shifted_with_acyclic(rng, &s, k, pairs, b).map_err(gen_err)?);
    let (nc, nr) = (s.irr().len(), s.red().len());
    let m = tgt.irr().len();
    let lambda = SparseMatrix::from_entries(m, nc, (0..nc).map(|i| (i, i, F2::ONE)).collect())?;
    let f = SMorphism::new(
        s.clone(),
        tgt.clone(),
        k,
        lambda,
        SparseMatrix::zeros(m, nc),
        SparseMatrix::zeros(nr, nc),
        SparseMatrix::zeros(m, nr),
        Extended::Finite(int(0)),
    )
    .map_err(gen_err)?;
    let h = random_shomotopy(rng, &s, &tgt, k);
    perturb_by_homotopy(&f, &h).map_err(gen_err)
}

/// Flips one degree-respecting entry of `λ`, `η`, `Δ₁` or `Δ₂`.
pub fn mutate_smorphism(rng: &mut XorShift64, f: &SMorphism) -> Result<Option<SMorphism>> {
    let (s, t, k) = (f.source(), f.target(), f.degree());
    let (sc, sr) = (s.irr().generators(), s.red().generators());
    let (tc, tr) = (t.irr().generators(), t.red().generators());
    let slots = [
        degree_slots(sc, tc, k),
        degree_slots(sc, tc, k - 1),
        degree_slots(sc, tr, k),
        degree_slots(sr, tc, k - 1),
    ];
    let live: Vec<usize> = (0..4).filter(|&i| !slots[i].is_empty()).collect();
    if live.is_empty() {
        return Ok(None);
    }
    let which = live[rng.index(live.len())];
    let (i, j) = slots[which][rng.index(slots[which].len())];
    let (mut l, mut e, mut d1, mut d2) = (
        f.lambda().clone(),
        f.eta().clone(),
        f.delta1().clone(),
        f.delta2().clone(),
    );
    match which {
        0 => l = flip(&l, i, j),
        1 => e = flip(&e, i, j),
        2 => d1 = flip(&d1, i, j),
        _ => d2 = flip(&d2, i, j),
    }
    Ok(Some(SMorphism::new_unchecked(
        s.clone(),
        t.clone(),
        k,
        l,
        e,
        d1,
        d2,
        f.level_shift().clone(),
    )?))
}

/// `F = id + d̃h + hd̃` for a random degree-0 S-homotopy `h`, returned with
/// the `L` block of `h`, so that `λ_F = id + dL + Ld`.
pub fn gen_endomorphism(
    rng: &mut XorShift64,
    b: &Bounds,
    t: &Toggles,
) -> Result<(SMorphism, SparseMatrix<F2>)> {
    let s = Arc::new(gen_scomplex(rng, b, t)?);
    let h = random_shomotopy(rng, &s, &s, 0);
    let f = perturb_by_homotopy(&SMorphism::identity(s), &h).map_err(gen_err)?;
    Ok((f, h.l))
}

fn counts_of(
    rng: &mut XorShift64,
    m: &SparseMatrix<F2>,
    src: &[Generator],
    dst: &[Generator],
) -> Vec<Count> {
    let mut v: Vec<Count> = m
        .entries()
        .map(|(r, c, _)| {
            Count::new(
                src[c].id.clone(),
                dst[r].id.clone(),
                [1, 1, 3][rng.index(3)],
            )
        })
        .collect();
    v.sort_by(|a, b| (&a.from, &a.to).cmp(&(&b.from, &b.to)));
    v
}

fn points_of(g: &[Generator]) -> Vec<CriticalPoint> {
    g.iter()
        .map(|g| CriticalPoint::new(g.id.clone(), g.degree, g.level.clone()))
        .collect()
}

pub fn morse_of(rng: &mut XorShift64, c: &FilteredChainComplex<F2>) -> MorseData {
    MorseData {
        points: points_of(c.generators()),
        counts: counts_of(rng, c.differential(), c.generators(), c.generators()),
    }
}

pub fn orbit_of(rng: &mut XorShift64, s: &SComplex) -> EquivariantOrbitData {
    let (c, r) = (s.irr().generators(), s.red().generators());
    EquivariantOrbitData {
        free: points_of(c),
        fixed: points_of(r),
        d: counts_of(rng, s.d(), c, c),
        u: counts_of(rng, s.u(), c, c),
        delta1: counts_of(rng, s.delta1(), c, r),
        delta2: counts_of(rng, s.delta2(), r, c),
        chamber: s.chamber().cloned(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorsePair {
    pub source: MorseData,
    pub target: MorseData,
    pub corr: CorrespondenceData,
}

/// The target is a copy of the source (lowered by the value span under
/// Assumption B) plus acyclic pairs, scrambled; the correspondence is the
/// inclusion plus `dK + Kd`. The cone is acyclic by construction.
pub fn gen_morse_pair(rng: &mut XorShift64, b: &Bounds, t: &Toggles) -> Result<MorsePair> {
    let src = gen_filtered_complex(rng, b, "p")?;
    let sg = src.generators();
    let n = sg.len();
    let (lo, hi) = match (
        sg.iter().map(|g| &g.level).min(),
        sg.iter().map(|g| &g.level).max(),
    ) {
        (Some(l), Some(h)) => (l.clone(), h.clone()),
        _ => (int(0), int(0)),
    };
    let drop = if t.assumption_b { &hi - &lo } else { int(0) };
    let mut tg: Vec<Generator> = sg
        .iter()
        .enumerate()
        .map(|(i, g)| Generator::new(format!("q{i}"), g.degree, &g.level - &drop))
        .collect();
    let pairs = rng.index(b.generators / 4 + 2);
    for p in 0..pairs {
        let deg = rng.range(b.min_degree + 1, b.max_degree.max(b.min_degree + 1));
        let (la, lb) = if t.assumption_b {
            let la = &lo - random_level(rng, b);
            let lb = &la - random_level(rng, b);
            (la, lb)
        } else {
            let la = random_level(rng, b);
            let lb = random_level(rng, b).min(la.clone());
            (la, lb)
        };
        tg.push(Generator::new(format!("a{p}"), deg, la));
        tg.push(Generator::new(format!("b{p}"), deg - 1, lb));
    }
    let m = tg.len();
    let mut dt = dense(m, m);
    for (r, c, _) in src.differential().entries() {
        dt[r][c] = true;
    }
    for p in 0..pairs {
        dt[n + 2 * p + 1][n + 2 * p] = true;
    }
    let mut f = dense(m, n);
    for (i, row) in f.iter_mut().enumerate().take(n) {
        row[i] = true;
    }
    scramble(rng, &tg, &mut dt, Some(&mut f));
    let dts = to_sparse(&dt, m, m);
    let mut kmat = dense(m, n);
    for (j, g) in sg.iter().enumerate() {
        for (i, h) in tg.iter().enumerate() {
            if h.degree == g.degree + 1
                && (t.assumption_b || h.level <= g.level)
                && rng.chance(1, 4)
            {
                kmat[i][j] = true;
            }
        }
    }
    let kmat = to_sparse(&kmat, m, n);
    let fmat = to_sparse(&f, m, n)
        .add(&dts.mul(&kmat))
        .add(&kmat.mul(src.differential()));
    let target = FilteredChainComplex::new(tg, dts, true).map_err(gen_err)?;
    let pair = MorsePair {
        source: morse_of(rng, &src),
        target: morse_of(rng, &target),
        corr: CorrespondenceData {
            shift: 0,
            counts: counts_of(rng, &fmat, src.generators(), target.generators()),
        },
    };
    // round trip through the builders, which is what consumers will do
    let (s2, t2) = (
        Arc::new(build_morse(&pair.source)?),
        Arc::new(build_morse(&pair.target)?),
    );
    build_pullup(s2, t2, &pair.corr).map_err(gen_err)?;
    Ok(pair)
}

fn random_laurent(rng: &mut XorShift64, lo: i64, hi: i64, nonzero: bool) -> LaurentPoly {
    loop {
        let exps: Vec<i64> = (lo..=hi).filter(|_| rng.chance(1, 3)).collect();
        let p = LaurentPoly::from_exponents(exps);
        if !nonzero || !p.is_zero() {
            return p;
        }
    }
}

/// Lifts with Laurent counts, built from normal-form pairs `d a = T^e b` and
/// scrambled by `g_j <- g_j + p g_i` with `p` of non-negative exponents.
pub fn gen_novikov(rng: &mut XorShift64, b: &Bounds) -> Result<NovikovMorseData> {
    let n = rng.index(b.generators + 1);
    let gens = random_generators(rng, "n", n, b);
    let mut d = vec![vec![LaurentPoly::zero(); n]; n];
    let mut used = vec![false; n];
    let mut order: Vec<usize> = (0..n).collect();
    rng.shuffle(&mut order);
    for &a in &order {
        if used[a] || !rng.chance(2, 3) {
            continue;
        }
        let cands: Vec<usize> = (0..n)
            .filter(|&c| {
                !used[c]
                    && c != a
                    && gens[c].degree == gens[a].degree - 1
                    && gens[c].level <= gens[a].level
            })
            .collect();
        if let Some(&c) = cands.get(rng.index(cands.len().max(1))) {
            used[a] = true;
            used[c] = true;
            d[c][a] = LaurentPoly::monomial(rng.range(0, 2));
        }
    }
    if n >= 2 {
        for _ in 0..2 * n {
            let (i, j) = (rng.index(n), rng.index(n));
            if i == j || gens[i].degree != gens[j].degree || gens[i].level > gens[j].level {
                continue;
            }
            let p = random_laurent(rng, 0, 2, true);
            for row in d.iter_mut() {
                let add = row[i].mul(&p);
                row[j] = row[j].add(&add);
            }
            let rj = d[j].clone();
            for (x, y) in d[i].iter_mut().zip(&rj) {
                *x = x.add(&y.mul(&p));
            }
        }
    }
    let mut counts = Vec::new();
    for (j, gj) in gens.iter().enumerate() {
        for (i, gi) in gens.iter().enumerate() {
            if !d[i][j].is_zero() {
                counts.push((gj.id.clone(), gi.id.clone(), d[i][j].clone()));
            }
        }
    }
    let data = NovikovMorseData {
        lifts: points_of(&gens),
        counts,
        deck_shift: int(1),
    };
    build_novikov(&data).map_err(gen_err)?;
    Ok(data)
}

/// A Laurent matrix with at most `max` rows and columns and exponents in
/// `[lo, hi]`; half the time one row is replaced by a sum of others.
pub fn gen_laurent_matrix(
    rng: &mut XorShift64,
    max: usize,
    lo: i64,
    hi: i64,
) -> SparseMatrix<LaurentPoly> {
    let rows = rng.range(1, max.max(1) as i64) as usize;
    let cols = rng.range(1, max.max(1) as i64) as usize;
    let mut m: Vec<Vec<LaurentPoly>> = (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| {
                    if rng.chance(1, 2) {
                        random_laurent(rng, lo, hi, true)
                    } else {
                        LaurentPoly::zero()
                    }
                })
                .collect()
        })
        .collect();
    if rows >= 2 && rng.chance(1, 2) {
        let target = rng.index(rows);
        let mut sum = vec![LaurentPoly::zero(); cols];
        for (i, row) in m.iter().enumerate() {
            if i != target && rng.chance(1, 2) {
                for (s, x) in sum.iter_mut().zip(row) {
                    *s = s.add(x);
                }
            }
        }
        m[target] = sum;
    }
    SparseMatrix::from_dense(&m)
}

/// One instance of the requested kind, already validated.
pub fn generate(spec: &GenSpec) -> Result<Document> {
    let mut rng = XorShift64::new(spec.seed);
    let (b, t) = (&spec.bounds, &spec.toggles);
    Ok(match spec.kind {
        GenKind::Complex => {
            Document::Complex(io::complex_to_doc(&gen_filtered_complex(&mut rng, b, "g")?))
        }
        GenKind::SComplex => {
            Document::SComplex(io::scomplex_to_doc(&gen_scomplex(&mut rng, b, t)?))
        }
        GenKind::Morse => {
            let c = gen_filtered_complex(&mut rng, b, "p")?;
            Document::Morse(io::morse_to_doc(&morse_of(&mut rng, &c)))
        }
        GenKind::Orbit => {
            let s = gen_scomplex(&mut rng, b, t)?;
            let o = orbit_of(&mut rng, &s);
            build_equivariant(&o).map_err(gen_err)?;
            Document::Orbit(io::orbit_to_doc(&o))
        }
        GenKind::Corr => {
            let p = gen_morse_pair(&mut rng, b, t)?;
            Document::Corr(Box::new(io::corr_to_doc(&p.source, &p.target, &p.corr)))
        }
        GenKind::Novikov => {
            let n = gen_novikov(&mut rng, b)?;
            let c = build_novikov(&n)?;
            Document::Complex(io::novikov_complex_to_doc(&c))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specseq::check_lambda_rho;

    #[test]
    fn xorshift_stream_is_fixed() {
        let mut a = XorShift64::new(0);
        let mut b = XorShift64::new(0);
        let xs: Vec<u64> = (0..4).map(|_| a.next_u64()).collect();
        assert_eq!(xs, (0..4).map(|_| b.next_u64()).collect::<Vec<_>>());
        assert_ne!(XorShift64::new(1).next_u64(), xs[0]);
        let mut r = XorShift64::new(7);
        assert!((0..1000).all(|_| r.range(-2, 3) >= -2));
    }

    #[test]
    fn generation_is_deterministic() {
        for kind in GenKind::ALL {
            let spec = GenSpec {
                kind,
                bounds: Bounds::default(),
                seed: 0,
                toggles: Toggles::default(),
            };
            let a = io::to_json(&generate(&spec).unwrap().to_value());
            let b = io::to_json(&generate(&spec).unwrap().to_value());
            assert_eq!(a, b, "{kind}");
        }
    }

    #[test]
    fn zero_bounds_give_empty_instances() {
        let b = Bounds {
            generators: 0,
            reducible: 0,
            ..Bounds::default()
        };
        let mut rng = XorShift64::new(3);
        let s = gen_scomplex(&mut rng, &b, &Toggles::default()).unwrap();
        assert_eq!((s.irr().len(), s.red().len()), (0, 0));
    }

    #[test]
    fn forced_hypotheses_are_met() {
        let mut rng = XorShift64::new(11);
        let b = Bounds::default();
        for _ in 0..20 {
            let t1 = Toggles {
                force_hypothesis1: true,
                ..Toggles::default()
            };
            let s = gen_scomplex(&mut rng, &b, &t1).unwrap();
            for q in -1..=8 {
                assert!(check_lambda_rho(&s, q).unwrap().first.holds);
            }
            let t2 = Toggles {
                force_hypothesis2: true,
                ..Toggles::default()
            };
            let s = gen_scomplex(&mut rng, &b, &t2).unwrap();
            for q in -1..=8 {
                assert!(check_lambda_rho(&s, q).unwrap().second.holds);
            }
        }
    }

    #[test]
    fn morphisms_and_pairs_validate() {
        let mut rng = XorShift64::new(5);
        let b = Bounds::default();
        let t = Toggles {
            assumption_b: true,
            ..Toggles::default()
        };
        for _ in 0..10 {
            assert!(gen_smorphism(&mut rng, &b, &t).unwrap().report().is_clean());
            let (f, l) = gen_endomorphism(&mut rng, &b, &t).unwrap();
            assert!(crate::scomplex::promote_homotopy(&f, &l)
                .unwrap()
                .certificate
                .holds());
            gen_morse_pair(&mut rng, &b, &t).unwrap();
            gen_novikov(&mut rng, &b).unwrap();
        }
    }
}
