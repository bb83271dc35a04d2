//! Window approximation of the spectral invariant of a Novikov complex.
//!
//! The sublevel sets of a Novikov complex are infinite-dimensional over F2,
//! so the value here is an upper bound: for each fixed homology
//! representative `x` (denominators cleared, lowest T-order normalized to 0)
//! we minimize `ℓ(x + dβ)` over `β` in the F2-span of the shifted lifts
//! `T^j h`, `|j| <= w`. Enlarging `w` enlarges the search space, so the
//! value never increases with `w`.

use std::collections::{BTreeMap, HashMap};

use crate::algebra::{
    solve_in_image, F2Poly, LaurentPoly, RationalFn, Ring, SparseMatrix, SparseVector, F2,
};
use crate::complex::{degree_homology, FilteredChainComplex};
use crate::error::{Error, Result};
use crate::level::{Extended, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NovikovSpectral {
    pub value: Extended,
    pub window: usize,
    pub tag: String,
}

fn as_laurent(x: &RationalFn) -> Result<LaurentPoly> {
    if !x.is_polynomial() {
        return Err(Error::InvalidComplex(format!(
            "Novikov entry {x} is not a Laurent polynomial"
        )));
    }
    Ok(x.numerator().clone())
}

/// Scales a local vector to Laurent entries whose lowest T-order is 0.
fn primitive_laurent(v: &SparseVector<RationalFn>) -> Vec<(usize, LaurentPoly)> {
    let mut lcm = F2Poly::one();
    for (_, x) in v.entries() {
        let den = x.denominator().body().clone();
        let g = lcm.gcd(&den);
        lcm = lcm.mul(&den.div_rem(&g).0);
    }
    let scale = LaurentPoly::from_parts(0, lcm);
    let scaled: Vec<(usize, LaurentPoly)> = v
        .entries()
        .iter()
        .map(|(i, x)| {
            let y = x.mul(&RationalFn::from(scale.clone()));
            (*i, y.numerator().clone())
        })
        .collect();
    let m = scaled.iter().map(|(_, p)| p.shift()).min().unwrap_or(0);
    scaled
        .into_iter()
        .map(|(i, p)| (i, p.times_monomial(-m)))
        .collect()
}

pub fn novikov_rho_window(
    c: &FilteredChainComplex<RationalFn>,
    q: i64,
    w: usize,
) -> Result<NovikovSpectral> {
    let deck = c.deck_shift().cloned().ok_or(Error::MissingDeckMetadata)?;
    let h = degree_homology(c, q);
    let idx_q = c.degree_indices(q);
    let level = |e: i64, i: usize| -> Rational {
        &c.generator(idx_q[i]).level - &deck * Rational::from_integer(e.into())
    };

    // boundary columns T^j d(h) as F2-sets of (exponent, local index)
    let dup = c.block(q + 1);
    let mut moves: Vec<Vec<(i64, usize)>> = Vec::new();
    for col in 0..dup.cols() {
        let entries = dup
            .column_entries(col)
            .iter()
            .map(|(i, x)| Ok((*i, as_laurent(x)?)))
            .collect::<Result<Vec<_>>>()?;
        for j in -(w as i64)..=(w as i64) {
            let mut v = Vec::new();
            for (i, p) in &entries {
                v.extend(p.exponents().into_iter().map(|e| (e + j, *i)));
            }
            moves.push(v);
        }
    }

    let mut best = Extended::Infinity;
    for r in 0..h.dim() {
        let x: Vec<(i64, usize)> = primitive_laurent(&h.reps.column(r))
            .into_iter()
            .flat_map(|(i, p)| p.exponents().into_iter().map(move |e| (e, i)))
            .collect();
        let value = min_level(&x, &moves, &level);
        if value < best {
            best = value;
        }
    }
    Ok(NovikovSpectral {
        value: best,
        window: w,
        tag: format!("upper bound, window {w}"),
    })
}

/// Smallest threshold `t` such that `x + Σ ε_k moves_k` vanishes above `t`.
fn min_level(
    x: &[(i64, usize)],
    moves: &[Vec<(i64, usize)>],
    level: &impl Fn(i64, usize) -> Rational,
) -> Extended {
    let mut rows: HashMap<(i64, usize), usize> = HashMap::new();
    let mut keys: Vec<(i64, usize)> = Vec::new();
    for key in x.iter().chain(moves.iter().flatten()) {
        rows.entry(*key).or_insert_with(|| {
            keys.push(*key);
            keys.len() - 1
        });
    }
    let levels: Vec<Rational> = keys.iter().map(|&(e, i)| level(e, i)).collect();
    let mut thresholds: BTreeMap<Rational, ()> = BTreeMap::new();
    for l in &levels {
        thresholds.insert(l.clone(), ());
    }
    let n = keys.len();
    let rhs = SparseVector::from_entries(n, x.iter().map(|k| (rows[k], F2::ONE)).collect());
    let mat = SparseMatrix::from_summed_entries(
        n,
        moves.len(),
        moves
            .iter()
            .enumerate()
            .flat_map(|(col, m)| {
                m.iter()
                    .map(|k| (rows[k], col, F2::ONE))
                    .collect::<Vec<_>>()
            })
            .collect(),
    );
    let all_cols: Vec<usize> = (0..moves.len()).collect();
    for t in thresholds.keys() {
        let high: Vec<usize> = (0..n).filter(|&r| levels[r] > *t).collect();
        let feasible = solve_in_image(&mat.select(&high, &all_cols), &rhs.select(&high))
            .expect("dimensions agree")
            .is_some();
        if feasible {
            return Extended::Finite(t.clone());
        }
    }
    Extended::Infinity
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::Generator;
    use crate::level::int;

    fn lp(s: &str) -> RationalFn {
        RationalFn::from(s.parse::<LaurentPoly>().unwrap())
    }

    #[test]
    fn single_lift() {
        let c = FilteredChainComplex::from_ids(vec![Generator::new("p", 0, int(3))], vec![], true)
            .unwrap()
            .with_deck_shift(int(1));
        for w in 0..3 {
            assert_eq!(
                novikov_rho_window(&c, 0, w).unwrap().value,
                Extended::Finite(int(3))
            );
        }
        assert_eq!(
            novikov_rho_window(&c, 1, 0).unwrap().value,
            Extended::Infinity
        );
        let bare = FilteredChainComplex::<RationalFn>::from_ids(
            vec![Generator::new("p", 0, int(3))],
            vec![],
            true,
        )
        .unwrap();
        assert_eq!(
            novikov_rho_window(&bare, 0, 0),
            Err(Error::MissingDeckMetadata)
        );
    }

    #[test]
    fn cheaper_representative_needs_one_shift() {
        // d h = T^-1 b + T a; the representative b drops to T^2 a once T h is allowed
        let c = FilteredChainComplex::from_ids(
            vec![
                Generator::new("b", 0, int(10)),
                Generator::new("a", 0, int(0)),
                Generator::new("h", 1, int(11)),
            ],
            vec![
                ("h".into(), "b".into(), lp("T^-1")),
                ("h".into(), "a".into(), lp("T")),
            ],
            true,
        )
        .unwrap()
        .with_deck_shift(int(1));
        let v: Vec<Extended> = (0..4)
            .map(|w| novikov_rho_window(&c, 0, w).unwrap().value)
            .collect();
        assert_eq!(v[0], Extended::Finite(int(10)));
        assert_eq!(v[1], Extended::Finite(int(-2)));
        assert_eq!(v[2], v[1]);
        assert_eq!(v[3], v[1]);
    }
}
