use std::collections::BTreeMap;

use crate::algebra::{kernel_basis, rank, SparseMatrix, SparseVector, F2};
use crate::complex::{degree_homology, homology, DegreeHomology, FilteredChainComplex};
use crate::error::{Error, Result};
use crate::scomplex::{assemble_total, SComplex};

/// Columns of the three-step filtration.
pub const COLUMNS: [u8; 3] = [1, 2, 3];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PageDifferential {
    pub from: (u8, i64),
    pub to: (u8, i64),
    pub rank: usize,
    /// Nonzero entries `(row, col)` when the map is given in explicit bases.
    pub entries: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Page {
    pub r: usize,
    /// `(p, q) -> dim`, zero cells included.
    pub cells: BTreeMap<(u8, i64), usize>,
    /// Nonzero differentials `d^r: (p, q) -> (p - r, q + r - 1)`.
    pub differentials: Vec<PageDifferential>,
}

impl Page {
    pub fn dim(&self, p: u8, q: i64) -> usize {
        self.cells.get(&(p, q)).copied().unwrap_or(0)
    }

    /// `Σ (-1)^{p+q} dim E_{p,q}`.
    pub fn euler(&self) -> i64 {
        self.cells
            .iter()
            .map(|(&(p, q), &d)| {
                if (p as i64 + q).rem_euclid(2) == 0 {
                    d as i64
                } else {
                    -(d as i64)
                }
            })
            .sum()
    }

    pub fn total_dim(&self) -> usize {
        self.cells.values().sum()
    }

    pub fn rank_from(&self, p: u8, q: i64) -> usize {
        self.differentials
            .iter()
            .find(|d| d.from == (p, q))
            .map_or(0, |d| d.rank)
    }

    /// Same cells and the same differential ranks.
    pub fn same_dims(&self, other: &Page) -> bool {
        let ranks = |pg: &Page| -> BTreeMap<(u8, i64), usize> {
            pg.differentials
                .iter()
                .filter(|d| d.rank > 0)
                .map(|d| (d.from, d.rank))
                .collect()
        };
        self.r == other.r && self.cells == other.cells && ranks(self) == ranks(other)
    }
}

/// Rows `q` that can carry a nonzero cell: total degrees `p + q` of the total complex.
fn row_range(s: &SComplex) -> Vec<i64> {
    let mut lo = i64::MAX;
    let mut hi = i64::MIN;
    for g in s.irr().generators() {
        lo = lo.min(g.degree);
        hi = hi.max(g.degree + 1);
    }
    for g in s.red().generators() {
        lo = lo.min(g.degree);
        hi = hi.max(g.degree);
    }
    if lo > hi {
        return Vec::new();
    }
    (lo - 3..=hi - 1).collect()
}

fn entries_of(m: &SparseMatrix<F2>) -> Vec<(usize, usize)> {
    m.entries().map(|(r, c, _)| (r, c)).collect()
}

fn push_diff(
    out: &mut Vec<PageDifferential>,
    from: (u8, i64),
    to: (u8, i64),
    m: Option<&SparseMatrix<F2>>,
    rank: usize,
) {
    if rank > 0 {
        out.push(PageDifferential {
            from,
            to,
            rank,
            entries: m.map(entries_of).unwrap_or_default(),
        });
    }
}

/// The maps induced on `H(C)` by `δ₁`, `δ₂` and `u`, per source degree.
pub struct InducedMaps {
    homology: BTreeMap<i64, DegreeHomology<F2>>,
}

impl InducedMaps {
    pub fn new(s: &SComplex) -> Self {
        let lo = s
            .irr()
            .degrees()
            .first()
            .copied()
            .unwrap_or(0)
            .min(s.red().degrees().first().copied().unwrap_or(0))
            - 4;
        let hi = s
            .irr()
            .degrees()
            .last()
            .copied()
            .unwrap_or(0)
            .max(s.red().degrees().last().copied().unwrap_or(0))
            + 4;
        let homology = (lo..=hi)
            .map(|n| (n, degree_homology(s.irr(), n)))
            .collect();
        InducedMaps { homology }
    }

    fn h(&self, s: &SComplex, m: i64) -> DegreeHomology<F2> {
        self.homology
            .get(&m)
            .cloned()
            .unwrap_or_else(|| degree_homology(s.irr(), m))
    }

    pub fn h_dim(&self, s: &SComplex, m: i64) -> usize {
        self.h(s, m).dim()
    }

    /// `δ₁*: H_m(C) -> R_{m-1}` in the representative basis.
    pub fn delta1_star(&self, s: &SComplex, m: i64) -> SparseMatrix<F2> {
        s.delta1_block(m).mul(&self.h(s, m).reps)
    }

    /// `δ₂*: R_m -> H_{m-2}(C)` in class coordinates.
    pub fn delta2_star(&self, s: &SComplex, m: i64) -> Result<SparseMatrix<F2>> {
        self.h(s, m - 2).class_matrix(&s.delta2_block(m))
    }

    /// `u*` on `ker δ₁* ⊂ H_m(C)`, in class coordinates of `H_{m-2}(C)`.
    pub fn u_star_on_kernel(&self, s: &SComplex, m: i64) -> Result<SparseMatrix<F2>> {
        let hm = self.h(s, m);
        let d1 = self.delta1_star(s, m);
        let kernel = SparseMatrix::from_columns(hm.dim(), kernel_basis(&d1));
        let cycles = hm.reps.mul(&kernel);
        self.h(s, m - 2).class_matrix(&s.u_block(m).mul(&cycles))
    }

    /// Rank of `u*: ker δ₁* ⊂ H_m -> H_{m-2} / im δ₂*(R_m)`.
    pub fn d2_rank(&self, s: &SComplex, m: i64) -> Result<usize> {
        let d2 = self.delta2_star(s, m)?;
        let u = self.u_star_on_kernel(s, m)?;
        Ok(rank(&d2.hstack(&u)) - rank(&d2))
    }
}

fn require_valid(s: &SComplex) -> Result<()> {
    let rep = s.validate();
    if !rep.is_clean() {
        return Err(Error::InvalidSComplex(rep.summary()));
    }
    Ok(())
}

/// Pages 0 to 3 from the explicit descriptions in terms of `H(C)`, `R`,
/// `δ₁*`, `δ₂*` and `u*`.
pub fn pages_closed_form(s: &SComplex) -> Result<Vec<Page>> {
    require_valid(s)?;
    let maps = InducedMaps::new(s);
    let rows = row_range(s);
    let r_dim = |m: i64| s.red().rank_in_degree(m);
    let c_dim = |m: i64| s.irr().rank_in_degree(m);
    let mut pages: Vec<Page> = (0..4)
        .map(|r| Page {
            r,
            cells: BTreeMap::new(),
            differentials: Vec::new(),
        })
        .collect();
    for &q in &rows {
        // page 0: (C_q, R_{q+2}, C_{q+3}) with differentials (d, 0, d)
        pages[0].cells.insert((1, q), c_dim(q));
        pages[0].cells.insert((2, q), r_dim(q + 2));
        pages[0].cells.insert((3, q), c_dim(q + 3));
        let (b1, b3) = (s.irr().block(q), s.irr().block(q + 3));
        push_diff(
            &mut pages[0].differentials,
            (1, q),
            (1, q - 1),
            Some(&b1),
            rank(&b1),
        );
        push_diff(
            &mut pages[0].differentials,
            (3, q),
            (3, q - 1),
            Some(&b3),
            rank(&b3),
        );

        // page 1: (H_q, R_{q+2}, H_{q+3}) with δ₂* and δ₁*
        let d2 = maps.delta2_star(s, q + 2)?;
        let d1 = maps.delta1_star(s, q + 3);
        let (rk2, rk1) = (rank(&d2), rank(&d1));
        pages[1].cells.insert((1, q), maps.h_dim(s, q));
        pages[1].cells.insert((2, q), r_dim(q + 2));
        pages[1].cells.insert((3, q), maps.h_dim(s, q + 3));
        push_diff(&mut pages[1].differentials, (2, q), (1, q), Some(&d2), rk2);
        push_diff(&mut pages[1].differentials, (3, q), (2, q), Some(&d1), rk1);

        // page 2: H/im δ₂*, ker δ₂*/im δ₁*, ker δ₁*, with d² = u*
        pages[2].cells.insert((1, q), maps.h_dim(s, q) - rk2);
        pages[2].cells.insert((2, q), r_dim(q + 2) - rk2 - rk1);
        pages[2].cells.insert((3, q), maps.h_dim(s, q + 3) - rk1);
        let du = maps.d2_rank(s, q + 3)?;
        push_diff(&mut pages[2].differentials, (3, q), (1, q + 1), None, du);
    }
    for &q in &rows {
        let e21 = pages[2].dim(1, q);
        let e23 = pages[2].dim(3, q);
        let into = pages[2].rank_from(3, q - 1);
        let out = pages[2].rank_from(3, q);
        pages[3].cells.insert((1, q), e21 - into);
        let e22 = pages[2].dim(2, q);
        pages[3].cells.insert((2, q), e22);
        pages[3].cells.insert((3, q), e23 - out);
    }
    Ok(pages)
}

/// Filtration column of a total generator: `C' -> 1`, `R -> 2`, `C -> 3`.
fn column_of(s: &SComplex, global: usize) -> u8 {
    let nc = s.irr().len();
    if global < nc {
        3
    } else if global < 2 * nc {
        1
    } else {
        2
    }
}

/// Subspaces `Z^r_p` and `B^r_p` of the total complex, computed from scratch.
pub struct GenericSpectralSequence<'a> {
    s: &'a SComplex,
    total: FilteredChainComplex<F2>,
}

impl<'a> GenericSpectralSequence<'a> {
    pub fn new(s: &'a SComplex) -> Result<Self> {
        Ok(GenericSpectralSequence {
            s,
            total: assemble_total(s)?,
        })
    }

    /// Local indices in total degree `n` lying in `F_p`.
    fn in_filtration(&self, n: i64, p: i64) -> Vec<usize> {
        let idx = self.total.degree_indices(n);
        (0..idx.len())
            .filter(|&i| (column_of(self.s, idx[i]) as i64) <= p)
            .collect()
    }

    fn outside_filtration(&self, n: i64, p: i64) -> Vec<usize> {
        let idx = self.total.degree_indices(n);
        (0..idx.len())
            .filter(|&i| (column_of(self.s, idx[i]) as i64) > p)
            .collect()
    }

    /// `Z^r_p = {x ∈ F_p C̃_n : d x ∈ F_{p-r}}`, as local vectors of `C̃_n`.
    fn z(&self, n: i64, p: i64, r: i64) -> Vec<SparseVector<F2>> {
        let dim = self.total.rank_in_degree(n);
        let cols = self.in_filtration(n, p);
        let rows = self.outside_filtration(n - 1, p - r);
        let m = self.total.block(n).select(&rows, &cols);
        kernel_basis(&m)
            .into_iter()
            .map(|v| v.embed(dim, &cols))
            .collect()
    }

    /// `B^r_p = F_p C̃_n ∩ d(F_{p+r-1} C̃_{n+1})`.
    fn b(&self, n: i64, p: i64, r: i64) -> Vec<SparseVector<F2>> {
        let d = self.total.block(n + 1);
        let cols = self.in_filtration(n + 1, p + r - 1);
        let all_rows: Vec<usize> = (0..d.rows()).collect();
        let dsub = d.select(&all_rows, &cols);
        let outside = self.outside_filtration(n, p);
        let k = kernel_basis(&dsub.select(&outside, &(0..cols.len()).collect::<Vec<_>>()));
        k.into_iter().map(|v| dsub.mul_vec(&v)).collect()
    }

    fn span_dim(&self, n: i64, parts: &[&[SparseVector<F2>]]) -> usize {
        let dim = self.total.rank_in_degree(n);
        let cols: Vec<SparseVector<F2>> = parts.iter().flat_map(|p| p.iter().cloned()).collect();
        rank(&SparseMatrix::from_columns(dim, cols))
    }

    /// `dim E^r_{p,q} = dim Z^r_p - dim(Z^{r-1}_{p-1} + B^r_p)` in degree `p + q`.
    pub fn cell(&self, r: i64, p: i64, q: i64) -> usize {
        let n = p + q;
        let z = self.z(n, p, r);
        let zlow = self.z(n, p - 1, r - 1);
        let b = self.b(n, p, r);
        self.span_dim(n, &[&z]) - self.span_dim(n, &[&zlow, &b])
    }

    /// Rank of `d^r` leaving `(p, q)`: `dim Z^r_p - dim(Z^{r+1}_p + Z^{r-1}_{p-1})`.
    pub fn differential_rank(&self, r: i64, p: i64, q: i64) -> usize {
        let n = p + q;
        let z = self.z(n, p, r);
        let znext = self.z(n, p, r + 1);
        let zlow = self.z(n, p - 1, r - 1);
        self.span_dim(n, &[&z]) - self.span_dim(n, &[&znext, &zlow])
    }

    pub fn page(&self, r: usize) -> Page {
        let mut page = Page {
            r,
            cells: BTreeMap::new(),
            differentials: Vec::new(),
        };
        let ri = r as i64;
        for q in row_range(self.s) {
            for p in COLUMNS {
                page.cells.insert((p, q), self.cell(ri, p as i64, q));
                if p as i64 - ri >= 1 {
                    let rk = self.differential_rank(ri, p as i64, q);
                    push_diff(
                        &mut page.differentials,
                        (p, q),
                        (p - r as u8, q + ri - 1),
                        None,
                        rk,
                    );
                }
            }
        }
        page
    }

    pub fn total(&self) -> &FilteredChainComplex<F2> {
        &self.total
    }
}

/// Pages 0 to 3 by the standard `Z^r / B^r` construction on the total complex.
pub fn pages_generic(s: &SComplex) -> Result<Vec<Page>> {
    let g = GenericSpectralSequence::new(s)?;
    Ok((0..4).map(|r| g.page(r)).collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReconstructionRow {
    pub degree: i64,
    pub homology_dim: usize,
    /// `dim E³_{1,n-1}`, `dim E³_{2,n-2}`, `dim E³_{3,n-3}`.
    pub pieces: [usize; 3],
    pub matched: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReconstructionReport {
    pub rows: Vec<ReconstructionRow>,
    /// The generic fourth page equals the third.
    pub degenerates_at_three: bool,
}

impl ReconstructionReport {
    pub fn all_matched(&self) -> bool {
        self.rows.iter().all(|r| r.matched)
    }

    pub fn holds(&self) -> bool {
        self.all_matched() && self.degenerates_at_three
    }
}

pub fn abutment(s: &SComplex) -> Result<ReconstructionReport> {
    let closed = pages_closed_form(s)?;
    let generic = GenericSpectralSequence::new(s)?;
    let e3 = &closed[3];
    let g3 = generic.page(3);
    let degenerates_at_three = g3.differentials.is_empty() && g3.cells == generic.page(4).cells;
    let h = homology(generic.total())?;
    let mut rows = Vec::new();
    let mut degrees: Vec<i64> = generic.total().degrees();
    degrees.extend(e3.cells.keys().map(|&(p, q)| p as i64 + q));
    degrees.sort();
    degrees.dedup();
    for n in degrees {
        let pieces = [e3.dim(1, n - 1), e3.dim(2, n - 2), e3.dim(3, n - 3)];
        let homology_dim = h.dim(n);
        rows.push(ReconstructionRow {
            degree: n,
            homology_dim,
            pieces,
            matched: homology_dim == pieces.iter().sum::<usize>(),
        });
    }
    Ok(ReconstructionReport {
        rows,
        degenerates_at_three,
    })
}
