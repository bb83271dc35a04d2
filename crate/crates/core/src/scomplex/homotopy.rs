use std::sync::Arc;

use super::morphism::{check_block, same_object, SMorphism};
use super::object::SComplex;
use crate::algebra::{rank, SparseMatrix, F2};
use crate::complex::induced_map;
use crate::error::{Error, Result};
use crate::level::Extended;

/// `h = [[L, 0, 0], [N, L, D₂], [D₁, 0, 0]]`, a homotopy between degree-`k`
/// S-morphisms (so `h` itself has degree `k + 1`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SHomotopy {
    pub degree: i64,
    pub l: SparseMatrix<F2>,
    pub n: SparseMatrix<F2>,
    pub d1: SparseMatrix<F2>,
    pub d2: SparseMatrix<F2>,
}

impl SHomotopy {
    pub fn zero(source: &SComplex, target: &SComplex, degree: i64) -> Self {
        let (nc, nr) = (source.irr().len(), source.red().len());
        let (mc, mr) = (target.irr().len(), target.red().len());
        SHomotopy {
            degree,
            l: SparseMatrix::zeros(mc, nc),
            n: SparseMatrix::zeros(mc, nc),
            d1: SparseMatrix::zeros(mr, nc),
            d2: SparseMatrix::zeros(mc, nr),
        }
    }

    /// Reads the blocks off a total matrix, rejecting anything outside the
    /// allowed shape.
    pub fn from_total(
        source: &SComplex,
        target: &SComplex,
        degree: i64,
        h: &SparseMatrix<F2>,
    ) -> Result<Self> {
        let (nc, nr) = (source.irr().len(), source.red().len());
        let (mc, mr) = (target.irr().len(), target.red().len());
        if h.rows() != 2 * mc + mr || h.cols() != 2 * nc + nr {
            return Err(Error::HomotopyShape(format!(
                "total homotopy is {}x{}",
                h.rows(),
                h.cols()
            )));
        }
        let slot = |i: usize, n: usize| {
            if i < n {
                (0, i)
            } else if i < 2 * n {
                (1, i - n)
            } else {
                (2, i - 2 * n)
            }
        };
        let mut z = SHomotopy::zero(source, target, degree);
        let mut l = Vec::new();
        let mut l2 = Vec::new();
        let (mut n, mut d1, mut d2) = (Vec::new(), Vec::new(), Vec::new());
        for (r, c, x) in h.entries() {
            match (slot(r, mc), slot(c, nc)) {
                ((0, i), (0, j)) => l.push((i, j, *x)),
                ((1, i), (1, j)) => l2.push((i, j, *x)),
                ((1, i), (0, j)) => n.push((i, j, *x)),
                ((1, i), (2, j)) => d2.push((i, j, *x)),
                ((2, i), (0, j)) => d1.push((i, j, *x)),
                ((a, _), (b, _)) => {
                    return Err(Error::HomotopyShape(format!(
                        "nonzero corner ({}, {}) at entry ({r}, {c})",
                        a + 1,
                        b + 1
                    )))
                }
            }
        }
        z.l = SparseMatrix::from_entries(mc, nc, l)?;
        if SparseMatrix::from_entries(mc, nc, l2)? != z.l {
            return Err(Error::HomotopyShape(
                "the two diagonal L blocks differ".into(),
            ));
        }
        z.n = SparseMatrix::from_entries(mc, nc, n)?;
        z.d1 = SparseMatrix::from_entries(mr, nc, d1)?;
        z.d2 = SparseMatrix::from_entries(mc, nr, d2)?;
        Ok(z)
    }

    pub fn total_matrix(&self) -> SparseMatrix<F2> {
        let (mc, nc) = (self.l.rows(), self.l.cols());
        let (mr, nr) = (self.d1.rows(), self.d2.cols());
        let mut entries = Vec::new();
        for (r, c, x) in self.l.entries() {
            entries.push((r, c, *x));
            entries.push((mc + r, nc + c, *x));
        }
        for (r, c, x) in self.n.entries() {
            entries.push((mc + r, c, *x));
        }
        for (r, c, x) in self.d1.entries() {
            entries.push((2 * mc + r, c, *x));
        }
        for (r, c, x) in self.d2.entries() {
            entries.push((mc + r, 2 * nc + c, *x));
        }
        SparseMatrix::from_entries(2 * mc + mr, 2 * nc + nr, entries).expect("blocks are disjoint")
    }

    /// Block sizes and degrees against the given endpoints.
    pub fn check_shape(&self, source: &SComplex, target: &SComplex) -> Result<()> {
        let (nc, nr) = (source.irr().len(), source.red().len());
        let (mc, mr) = (target.irr().len(), target.red().len());
        let dims = [
            ("L", &self.l, mc, nc),
            ("N", &self.n, mc, nc),
            ("D1", &self.d1, mr, nc),
            ("D2", &self.d2, mc, nr),
        ];
        for (name, m, r, c) in dims {
            if m.rows() != r || m.cols() != c {
                return Err(Error::HomotopyShape(format!(
                    "{name} is {}x{}, expected {r}x{c}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        let (sc, sr) = (source.irr().generators(), source.red().generators());
        let (tc, tr) = (target.irr().generators(), target.red().generators());
        let k = self.degree;
        let mut bad = Vec::new();
        check_block("L", &self.l, sc, tc, k + 1, None, &mut bad);
        check_block("N", &self.n, sc, tc, k, None, &mut bad);
        check_block("D1", &self.d1, sc, tr, k + 1, None, &mut bad);
        check_block("D2", &self.d2, sr, tc, k, None, &mut bad);
        if !bad.is_empty() {
            return Err(Error::HomotopyShape(bad.join("; ")));
        }
        Ok(())
    }

    /// Blocks `(λ, η, Δ₁, Δ₂)` of `d̃′h + h d̃`; the reducible corner vanishes.
    pub fn boundary_blocks(
        &self,
        s: &SComplex,
        t: &SComplex,
    ) -> (
        SparseMatrix<F2>,
        SparseMatrix<F2>,
        SparseMatrix<F2>,
        SparseMatrix<F2>,
    ) {
        let lambda = t.d().mul(&self.l).add(&self.l.mul(s.d()));
        let eta = t
            .u()
            .mul(&self.l)
            .add(&t.d().mul(&self.n))
            .add(&t.delta2().mul(&self.d1))
            .add(&self.n.mul(s.d()))
            .add(&self.l.mul(s.u()))
            .add(&self.d2.mul(s.delta1()));
        let delta2 = t.d().mul(&self.d2).add(&self.l.mul(s.delta2()));
        let delta1 = t.delta1().mul(&self.l).add(&self.d1.mul(s.d()));
        (lambda, eta, delta1, delta2)
    }
}

/// `f − g = d̃′h + h d̃`, compared block by block.
pub fn is_s_homotopic(f: &SMorphism, g: &SMorphism, h: &SHomotopy) -> Result<bool> {
    if !same_object(f.source(), g.source()) || !same_object(f.target(), g.target()) {
        return Err(Error::MismatchedEndpoints(
            "morphisms are not parallel".into(),
        ));
    }
    if f.degree() != g.degree() || h.degree != f.degree() {
        return Err(Error::MismatchedEndpoints(format!(
            "degrees {}, {} and homotopy degree {}",
            f.degree(),
            g.degree(),
            h.degree
        )));
    }
    h.check_shape(f.source(), f.target())?;
    let (l, e, d1, d2) = h.boundary_blocks(f.source(), f.target());
    Ok(f.lambda().add(g.lambda()) == l
        && f.eta().add(g.eta()) == e
        && f.delta1().add(g.delta1()) == d1
        && f.delta2().add(g.delta2()) == d2)
}

/// `g + d̃′h + h d̃`, verified.
pub fn perturb_by_homotopy(g: &SMorphism, h: &SHomotopy) -> Result<SMorphism> {
    h.check_shape(g.source(), g.target())?;
    let (l, e, d1, d2) = h.boundary_blocks(g.source(), g.target());
    let build = |shift| {
        SMorphism::new(
            g.source().clone(),
            g.target().clone(),
            g.degree(),
            g.lambda().add(&l),
            g.eta().add(&e),
            g.delta1().add(&d1),
            g.delta2().add(&d2),
            shift,
        )
    };
    // a homotopy that raises levels voids the level certificate, nothing else
    build(g.level_shift().clone()).or_else(|_| build(Extended::Infinity))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PromotionCertificate {
    /// `λ_G` is the identity, so `G` is unipotent lower-triangular.
    pub unit_diagonal: bool,
    /// Rank of the total matrix of `G` equals its size.
    pub invertible: bool,
    pub homotopic: bool,
    /// `F` and `G` induce the same map on homology of the total complex.
    pub equal_on_homology: bool,
}

impl PromotionCertificate {
    pub fn holds(&self) -> bool {
        self.unit_diagonal && self.invertible && self.homotopic && self.equal_on_homology
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Promotion {
    pub homotopy: SHomotopy,
    pub morphism: SMorphism,
    pub certificate: PromotionCertificate,
}

/// Given `L` with `L d + d L = λ_F + id`, builds `h = diag(L, L, 0)` and the
/// S-isomorphism `G = F + d̃h + h d̃`.
pub fn promote_homotopy(f: &SMorphism, l: &SparseMatrix<F2>) -> Result<Promotion> {
    if !same_object(f.source(), f.target()) || f.degree() != 0 {
        return Err(Error::MismatchedEndpoints(
            "promotion needs a degree-0 endomorphism".into(),
        ));
    }
    let s: &Arc<SComplex> = f.source();
    let mut h = SHomotopy::zero(s, s, 0);
    h.l = l.clone();
    h.check_shape(s, s)?;
    let n = s.irr().len();
    let law = l
        .mul(s.d())
        .add(&s.d().mul(l))
        .add(f.lambda())
        .add(&SparseMatrix::identity(n));
    if !law.is_zero() {
        return Err(Error::HomotopyLaw(format!(
            "L d + d L differs from lambda_F - id in {} entries",
            law.nnz()
        )));
    }
    let g = perturb_by_homotopy(f, &h)?;
    let total = g.total_matrix();
    let invertible = total.rows() == total.cols() && rank(&total) == total.rows();
    let homotopic = is_s_homotopic(f, &g, &h)?;
    let (hf, hg) = (
        induced_map(&f.total_chain_map()?)?,
        induced_map(&g.total_chain_map()?)?,
    );
    let equal_on_homology = hf.blocks == hg.blocks;
    let certificate = PromotionCertificate {
        unit_diagonal: *g.lambda() == SparseMatrix::identity(n),
        invertible,
        homotopic,
        equal_on_homology,
    };
    Ok(Promotion {
        homotopy: h,
        morphism: g,
        certificate,
    })
}
