//! λ-versus-ρ comparisons that follow from the shape of the third page.
//!
//! Hypothesis (1) makes `H_{q-1}(C) -> H_q(C̃)`, `x ↦ x'`, injective, so a
//! class of `C` at level `t` gives a class of `C̃` at the same level. Only the
//! degrees touching `E_{1,q-1}` matter: `δ₂*: R_{q+1} -> H_{q-1}` must vanish
//! and `u*` must kill `ker δ₁* ⊂ H_{q+1}`.
//!
//! Hypothesis (2) concerns column 3, the top quotient `E_{3,q-3} ⊂ H_q(C)`.
//! A cycle `α` there lifts to `(α, β, r)` but the lift may sit above `ℓ(α)`,
//! so the vanishing of `δ₁*` and of `u*` modulo `im δ₂*` is required on every
//! sublevel S-complex. The comparison is then `λ_q(C) ≥ ρ_q(C̃)`; the row
//! label `q - 3` of the cell is carried alongside.

use crate::algebra::{rank, F2};
use crate::complex::FilteredChainComplex;
use crate::error::Result;
use crate::filtered::rho_degree;
use crate::level::Extended;
use crate::scomplex::{assemble_total, SComplex};

use super::pages::InducedMaps;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypothesisOutcome {
    pub holds: bool,
    /// Homological degree of the λ side.
    pub lambda_degree: i64,
    /// Row of the page cell the argument runs through.
    pub page_row: i64,
    pub lambda: Extended,
    pub rho: Extended,
    /// `Some(λ ≥ ρ)` when the hypothesis holds.
    pub inequality: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremReport {
    pub degree: i64,
    pub first: HypothesisOutcome,
    pub second: HypothesisOutcome,
    /// Hypothesis (2) on the full complex only, without sublevels.
    pub second_unfiltered: bool,
    pub note: Option<String>,
}

impl TheoremReport {
    pub fn asserted(&self) -> bool {
        self.first.holds || self.second.holds
    }

    /// No asserted inequality fails.
    pub fn consistent(&self) -> bool {
        self.first.inequality != Some(false) && self.second.inequality != Some(false)
    }
}

fn first_hypothesis(s: &SComplex, maps: &InducedMaps, q: i64) -> Result<bool> {
    let d2 = maps.delta2_star(s, q + 1)?;
    if !d2.is_zero() {
        return Ok(false);
    }
    Ok(maps.u_star_on_kernel(s, q + 1)?.is_zero())
}

/// `δ₁*` vanishes on `H_q` and `u*: H_q -> H_{q-2} / im δ₂*(R_q)` is zero.
fn second_hypothesis_at(s: &SComplex, q: i64) -> Result<bool> {
    let maps = InducedMaps::new(s);
    if !maps.delta1_star(s, q).is_zero() {
        return Ok(false);
    }
    let d2 = maps.delta2_star(s, q)?;
    let u = maps.u_star_on_kernel(s, q)?;
    Ok(rank(&d2.hstack(&u)) == rank(&d2))
}

fn outcome(
    holds: bool,
    lambda_degree: i64,
    page_row: i64,
    irr: &FilteredChainComplex<F2>,
    total: &FilteredChainComplex<F2>,
    q: i64,
) -> Result<HypothesisOutcome> {
    let lambda = rho_degree(irr, lambda_degree)?.value;
    let rho = rho_degree(total, q)?.value;
    let inequality = holds.then(|| lambda >= rho);
    Ok(HypothesisOutcome {
        holds,
        lambda_degree,
        page_row,
        lambda,
        rho,
        inequality,
    })
}

pub fn check_lambda_rho(s: &SComplex, q: i64) -> Result<TheoremReport> {
    let total = assemble_total(s)?;
    let maps = InducedMaps::new(s);
    let h1 = first_hypothesis(s, &maps, q)?;
    let second_unfiltered = second_hypothesis_at(s, q)?;
    let mut h2 = second_unfiltered;
    if h2 {
        for t in s.levels() {
            if !second_hypothesis_at(&s.sublevel(&t)?, q)? {
                h2 = false;
                break;
            }
        }
    }
    let first = outcome(h1, q - 1, q - 1, s.irr(), &total, q)?;
    let second = outcome(h2, q, q - 3, s.irr(), &total, q)?;
    let note = (!h1 && !h2).then(|| "hypotheses not met".to_string());
    Ok(TheoremReport {
        degree: q,
        first,
        second,
        second_unfiltered,
        note,
    })
}
