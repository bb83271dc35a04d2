use std::collections::BTreeMap;

use crate::algebra::{kernel_basis, rank, SparseMatrix, F2};
use crate::complex::FilteredChainComplex;
use crate::error::{Error, Result};
use crate::level::{Extended, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Bar {
    pub degree: i64,
    pub birth: Rational,
    pub death: Extended,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Barcode {
    /// Sorted by (degree, birth, death).
    pub bars: Vec<Bar>,
    /// Number of infinite bars per degree.
    pub essential: BTreeMap<i64, usize>,
    /// `(degree, birth, support)` for each infinite bar, in filtration order;
    /// the support lists the global generator indices of a cycle realizing it.
    pub(crate) essential_cycles: Vec<(i64, Rational, Vec<usize>)>,
}

impl Barcode {
    pub fn in_degree(&self, q: i64) -> impl Iterator<Item = &Bar> + '_ {
        self.bars.iter().filter(move |b| b.degree == q)
    }

    /// `#{bars in degree q born at or before t and dying after s}`.
    pub fn rank_between(&self, q: i64, t: &Rational, s: &Rational) -> usize {
        let s = Extended::Finite(s.clone());
        self.in_degree(q)
            .filter(|b| b.birth <= *t && b.death > s)
            .count()
    }
}

fn require_filtered(c: &FilteredChainComplex<F2>) -> Result<()> {
    if !c.is_filtered() {
        return Err(Error::InvalidComplex(
            "complex is not flagged as filtered".into(),
        ));
    }
    let report = c.validate();
    if !report.is_clean() {
        return Err(Error::InvalidComplex(report.summary()));
    }
    Ok(())
}

/// The subcomplex spanned by generators of level at most `t`.
pub fn sublevel(c: &FilteredChainComplex<F2>, t: &Rational) -> Result<FilteredChainComplex<F2>> {
    require_filtered(c)?;
    c.restrict(&c.indices_at_or_below(t))
}

/// Filtration order: by level, then degree, then id. Degree breaks level ties
/// so that every prefix is a subcomplex.
pub(crate) fn filtration_order(c: &FilteredChainComplex<F2>) -> Vec<usize> {
    let mut order: Vec<usize> = (0..c.len()).collect();
    order.sort_by(|&a, &b| {
        let (ga, gb) = (c.generator(a), c.generator(b));
        (&ga.level, ga.degree, &ga.id).cmp(&(&gb.level, gb.degree, &gb.id))
    });
    order
}

/// Standard column reduction of the boundary matrix in filtration order.
pub fn barcode(c: &FilteredChainComplex<F2>) -> Result<Barcode> {
    require_filtered(c)?;
    Ok(barcode_unchecked(c))
}

pub(crate) fn barcode_unchecked(c: &FilteredChainComplex<F2>) -> Barcode {
    let order = filtration_order(c);
    let n = order.len();
    let mut pos = vec![0; n];
    for (p, &g) in order.iter().enumerate() {
        pos[g] = p;
    }
    let words = n.div_ceil(64);
    let bit = |v: &mut Vec<u64>, i: usize| v[i / 64] ^= 1 << (i % 64);
    let low = |v: &[u64]| -> Option<usize> {
        v.iter()
            .enumerate()
            .rev()
            .find(|(_, w)| **w != 0)
            .map(|(k, w)| k * 64 + 63 - w.leading_zeros() as usize)
    };
    // columns in filtration positions; V tracks the combination of original columns
    let mut r: Vec<Vec<u64>> = vec![vec![0; words]; n];
    let mut v: Vec<Vec<u64>> = vec![vec![0; words]; n];
    for (p, &g) in order.iter().enumerate() {
        for (row, _) in c.differential().column_entries(g) {
            bit(&mut r[p], pos[*row]);
        }
        bit(&mut v[p], p);
    }
    let mut owner: Vec<Option<usize>> = vec![None; n];
    for j in 0..n {
        while let Some(l) = low(&r[j]) {
            match owner[l] {
                Some(i) => {
                    let (ri, vi) = (r[i].clone(), v[i].clone());
                    for k in 0..words {
                        r[j][k] ^= ri[k];
                        v[j][k] ^= vi[k];
                    }
                }
                None => {
                    owner[l] = Some(j);
                    break;
                }
            }
        }
    }
    let mut bars = Vec::new();
    let mut essential: BTreeMap<i64, usize> = BTreeMap::new();
    let mut essential_cycles = Vec::new();
    for p in 0..n {
        let g = c.generator(order[p]);
        if let Some(j) = owner[p] {
            let death = &c.generator(order[j]).level;
            if *death != g.level {
                bars.push(Bar {
                    degree: g.degree,
                    birth: g.level.clone(),
                    death: Extended::Finite(death.clone()),
                });
            }
        } else if low(&r[p]).is_none() {
            bars.push(Bar {
                degree: g.degree,
                birth: g.level.clone(),
                death: Extended::Infinity,
            });
            *essential.entry(g.degree).or_default() += 1;
            let cycle: Vec<usize> = (0..n)
                .filter(|&k| v[p][k / 64] >> (k % 64) & 1 == 1)
                .map(|k| order[k])
                .collect();
            essential_cycles.push((g.degree, g.level.clone(), cycle));
        }
    }
    bars.sort_by(|a, b| (a.degree, &a.birth, &a.death).cmp(&(b.degree, &b.birth, &b.death)));
    Barcode {
        bars,
        essential,
        essential_cycles,
    }
}

/// `rank(H_q(C^t) -> H_q(C^s))` for `t <= s`, straight from the definition:
/// `rank [Z^t | B^s] - rank B^s`, with `Z^t` the degree-`q` cycles supported
/// at level `<= t` and `B^s` the boundaries of `C^s`.
pub fn persistence_rank_bruteforce(
    c: &FilteredChainComplex<F2>,
    q: i64,
    t: &Rational,
    s: &Rational,
) -> usize {
    let idx_q = c.degree_indices(q);
    let idx_up = c.degree_indices(q + 1);
    let low_q: Vec<usize> = (0..idx_q.len())
        .filter(|&i| c.generator(idx_q[i]).level <= *s)
        .collect();
    let low_up: Vec<usize> = (0..idx_up.len())
        .filter(|&i| c.generator(idx_up[i]).level <= *s)
        .collect();
    let in_t: Vec<usize> = (0..low_q.len())
        .filter(|&k| c.generator(idx_q[low_q[k]]).level <= *t)
        .collect();
    let dq = c.block(q);
    let dup = c.block(q + 1);
    // boundaries of C^s in local coordinates of C^s_q
    let b_s = dup.select(&low_q, &low_up);
    // cycles of C^t_q, embedded in C^s_q coordinates
    let t_cols: Vec<usize> = in_t.iter().map(|&k| low_q[k]).collect();
    let below_q: Vec<usize> = (0..c.rank_in_degree(q - 1)).collect();
    let z_t: Vec<_> = kernel_basis(&dq.select(&below_q, &t_cols))
        .into_iter()
        .map(|z| z.embed(low_q.len(), &in_t))
        .collect();
    let z_t = SparseMatrix::from_columns(low_q.len(), z_t);
    rank(&b_s.hstack(&z_t)) - rank(&b_s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::Generator;
    use crate::level::int;

    fn pair() -> FilteredChainComplex<F2> {
        FilteredChainComplex::from_ids(
            vec![
                Generator::new("a", 0, int(1)),
                Generator::new("b", 1, int(2)),
            ],
            vec![("b".into(), "a".into(), F2::ONE)],
            true,
        )
        .unwrap()
    }

    #[test]
    fn sublevel_examples() {
        let c = pair();
        assert!(sublevel(&c, &int(0)).unwrap().is_empty());
        assert_eq!(sublevel(&c, &int(5)).unwrap().len(), 2);
        let half = sublevel(&c, &crate::level::rat(3, 2)).unwrap();
        assert_eq!(half.generators().len(), 1);
        assert_eq!(half.generator(0).id, "a");
    }

    #[test]
    fn barcode_examples() {
        let x = FilteredChainComplex::<F2>::from_ids(
            vec![Generator::new("x", 4, int(1))],
            vec![],
            true,
        )
        .unwrap();
        let bx = barcode(&x).unwrap();
        assert_eq!(
            bx.bars,
            vec![Bar {
                degree: 4,
                birth: int(1),
                death: Extended::Infinity
            }]
        );
        let bp = barcode(&pair()).unwrap();
        assert_eq!(
            bp.bars,
            vec![Bar {
                degree: 0,
                birth: int(1),
                death: Extended::Finite(int(2))
            }]
        );
        assert_eq!(persistence_rank_bruteforce(&pair(), 0, &int(1), &int(1)), 1);
        assert_eq!(persistence_rank_bruteforce(&pair(), 0, &int(1), &int(2)), 0);
        assert_eq!(bp.rank_between(0, &int(1), &int(1)), 1);
    }
}
