use num_traits::Signed;

use crate::algebra::{solve_in_image, SparseVector, F2};
use crate::complex::{induced_map, ChainMap, FilteredChainComplex};
use crate::error::{Error, Result};
use crate::level::{clamp_nonnegative, int, Extended, Rational};

use super::persistence::{barcode, persistence_rank_bruteforce};

/// A realizing cycle (global coordinates) and the threshold where it appears.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub cycle: SparseVector<F2>,
    pub threshold: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralValue {
    pub value: Extended,
    pub witness: Option<Witness>,
}

impl SpectralValue {
    pub fn infinite() -> Self {
        SpectralValue {
            value: Extended::Infinity,
            witness: None,
        }
    }
}

/// Smallest `t` with `H_q(C^t) -> H_q(C)` nonzero: the earliest birth among
/// infinite bars in degree `q`, or `+inf` when `H_q = 0`.
pub fn rho_degree(c: &FilteredChainComplex<F2>, q: i64) -> Result<SpectralValue> {
    let bc = barcode(c)?;
    let best = bc
        .essential_cycles
        .iter()
        .filter(|(d, _, _)| *d == q)
        .min_by(|a, b| a.1.cmp(&b.1));
    Ok(match best {
        None => SpectralValue::infinite(),
        Some((_, birth, support)) => SpectralValue {
            value: Extended::Finite(birth.clone()),
            witness: Some(Witness {
                cycle: SparseVector::from_entries(
                    c.len(),
                    support.iter().map(|&i| (i, F2::ONE)).collect(),
                ),
                threshold: birth.clone(),
            }),
        },
    })
}

/// The same quantity by scanning generator levels with brute-force ranks.
pub fn rho_degree_bruteforce(c: &FilteredChainComplex<F2>, q: i64) -> Extended {
    let levels = c.levels();
    let Some(top) = levels.last() else {
        return Extended::Infinity;
    };
    for t in &levels {
        if persistence_rank_bruteforce(c, q, t, top) > 0 {
            return Extended::Finite(t.clone());
        }
    }
    Extended::Infinity
}

/// `inf ℓ(α')` over cycles `α'` homologous to `alpha` (a global vector).
///
/// At threshold `t` the class is realized below `t` iff some boundary `d b`
/// cancels every coordinate of `alpha` above `t`.
pub fn rho_class(c: &FilteredChainComplex<F2>, alpha: &SparseVector<F2>) -> Result<SpectralValue> {
    if alpha.dim() != c.len() {
        return Err(Error::Dimension(format!(
            "class vector has length {}, complex has {} generators",
            alpha.dim(),
            c.len()
        )));
    }
    let Some(first) = alpha.support().next() else {
        return Err(Error::ZeroClass);
    };
    let q = c.generator(first).degree;
    if alpha.support().any(|i| c.generator(i).degree != q) {
        return Err(Error::Dimension("class vector is not homogeneous".into()));
    }
    if !c.differential().mul_vec(alpha).is_zero() {
        return Err(Error::NotACycle);
    }
    let local = c.to_local(q, alpha);
    let b = c.block(q + 1);
    if solve_in_image(&b, &local)?.is_some() {
        return Err(Error::ZeroClass);
    }
    let idx = c.degree_indices(q);
    let all_cols: Vec<usize> = (0..b.cols()).collect();
    for t in c.levels() {
        let high: Vec<usize> = (0..idx.len())
            .filter(|&i| c.generator(idx[i]).level > t)
            .collect();
        if let Some(x) = solve_in_image(&b.select(&high, &all_cols), &local.select(&high))? {
            let rep = local.add(&b.mul_vec(&x));
            return Ok(SpectralValue {
                value: Extended::Finite(t.clone()),
                witness: Some(Witness {
                    cycle: c.to_global(q, &rep),
                    threshold: t,
                }),
            });
        }
    }
    unreachable!("a class is always realized at the top level")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComparisonReport {
    pub source_degree: i64,
    pub map_degree: i64,
    pub level_shift: Rational,
    /// Whether `f_*` is injective on `H_q(source)`.
    pub injective: bool,
    pub rho_source: Extended,
    pub rho_target: Extended,
    /// `rho_target(q + k) <= rho_source(q) + c`; `None` when `f_*` is not injective.
    pub holds: Option<bool>,
}

pub fn compare(f: &ChainMap<F2>, q: i64) -> Result<ComparisonReport> {
    let Extended::Finite(c) = f.level_shift().clone() else {
        return Err(Error::UncertifiedLevelShift);
    };
    let ind = induced_map(f)?;
    let injective = ind.is_injective(q);
    let rho_source = rho_degree(f.source(), q)?.value;
    let rho_target = rho_degree(f.target(), q + f.degree())?.value;
    let holds = injective.then(|| rho_target <= rho_source.plus(&c));
    Ok(ComparisonReport {
        source_degree: q,
        map_degree: f.degree(),
        level_shift: c,
        injective,
        rho_source,
        rho_target,
        holds,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PscVerdict {
    pub obstructed: bool,
    /// Lower bound for the integral of `s^2`: finite when both ρ are finite,
    /// `+inf` when only `rho_out` is infinite, absent when `rho_in` is infinite.
    pub s2_lower_bound: Option<Extended>,
    /// Set when `rho_in = +inf`, where the inequality carries no information.
    pub vacuous: bool,
    pub consistent: Option<bool>,
}

/// A cobordism with `rho_out > rho_in + C` cannot carry positive scalar
/// curvature, and in general `∫ s² >= 32 (rho_out - rho_in - C)`.
pub fn psc_check(
    rho_in: &Extended,
    rho_out: &Extended,
    c: &Rational,
    s2_integral: Option<&Rational>,
) -> PscVerdict {
    let obstructed = *rho_out > rho_in.plus(c);
    let (s2_lower_bound, vacuous) = match (rho_in, rho_out) {
        (Extended::Infinity, _) => (None, true),
        (Extended::Finite(a), Extended::Finite(b)) => (
            Some(Extended::Finite(clamp_nonnegative(int(32) * (b - a - c)))),
            false,
        ),
        (Extended::Finite(_), Extended::Infinity) => (Some(Extended::Infinity), false),
    };
    let consistent = s2_integral.map(|s2| match &s2_lower_bound {
        None => true,
        Some(bound) => Extended::Finite(s2.clone()) >= *bound,
    });
    PscVerdict {
        obstructed,
        s2_lower_bound,
        vacuous,
        consistent,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerturbationProbe {
    pub epsilon: Rational,
    pub base: Extended,
    /// ρ after moving each level by at most `epsilon`, one entry per pattern.
    pub perturbed: Vec<Extended>,
    /// Every perturbed value lies within `epsilon` of the base value.
    pub stable: bool,
}

/// Recomputes `rho_degree` after the level perturbations `+ε`, `-ε` and an
/// alternating `±ε` pattern. The alternating pattern is repaired in
/// filtration order so that `ℓ(dg) <= ℓ(g)` still holds, which keeps every
/// level within `ε` of its original value.
pub fn perturbation_probe(
    c: &FilteredChainComplex<F2>,
    q: i64,
    epsilon: &Rational,
) -> Result<PerturbationProbe> {
    let base = rho_degree(c, q)?.value;
    let up = c.map_levels(|l| l + epsilon);
    let down = c.map_levels(|l| l - epsilon);
    let order = super::persistence::filtration_order(c);
    let mut new_levels: Vec<Rational> = c.generators().iter().map(|g| g.level.clone()).collect();
    for (k, &g) in order.iter().enumerate() {
        let mut l = if k % 2 == 0 {
            &c.generator(g).level + epsilon
        } else {
            &c.generator(g).level - epsilon
        };
        for (r, _) in c.differential().column_entries(g) {
            if new_levels[*r] > l {
                l = new_levels[*r].clone();
            }
        }
        new_levels[g] = l;
    }
    let alt = c.map_levels_indexed(|i, _| new_levels[i].clone());
    let mut perturbed = Vec::new();
    for p in [&up, &down, &alt] {
        perturbed.push(rho_degree(p, q)?.value);
    }
    let stable = perturbed.iter().all(|v| match (v, &base) {
        (Extended::Infinity, Extended::Infinity) => true,
        (Extended::Finite(a), Extended::Finite(b)) => (a - b).abs() <= *epsilon,
        _ => false,
    });
    Ok(PerturbationProbe {
        epsilon: epsilon.clone(),
        base,
        perturbed,
        stable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::SparseMatrix;
    use crate::complex::Generator;
    use crate::level::rat;
    use std::sync::Arc;

    fn gens(spec: &[(&str, i64, Rational)]) -> Vec<Generator> {
        spec.iter()
            .map(|(i, d, l)| Generator::new(*i, *d, l.clone()))
            .collect()
    }

    #[test]
    fn rho_degree_examples() {
        let x = FilteredChainComplex::<F2>::from_ids(gens(&[("x", 2, rat(5, 2))]), vec![], true)
            .unwrap();
        let r = rho_degree(&x, 2).unwrap();
        assert_eq!(r.value, Extended::Finite(rat(5, 2)));
        assert_eq!(rho_degree(&x, 1).unwrap(), SpectralValue::infinite());
        assert_eq!(rho_degree_bruteforce(&x, 2), Extended::Finite(rat(5, 2)));
    }

    #[test]
    fn rho_class_finds_cheaper_representative() {
        // x at level 2, y at level 1, z at level 2 with d z = x + y
        let c = FilteredChainComplex::<F2>::from_ids(
            gens(&[("x", 0, int(2)), ("y", 0, int(1)), ("z", 1, int(2))]),
            vec![
                ("z".into(), "x".into(), F2::ONE),
                ("z".into(), "y".into(), F2::ONE),
            ],
            true,
        )
        .unwrap();
        let x = SparseVector::unit(3, 0);
        let r = rho_class(&c, &x).unwrap();
        assert_eq!(r.value, Extended::Finite(int(1)));
        assert_eq!(r.witness.unwrap().cycle, SparseVector::unit(3, 1));
        let single =
            FilteredChainComplex::<F2>::from_ids(gens(&[("x", 0, int(1))]), vec![], true).unwrap();
        assert_eq!(
            rho_class(&single, &SparseVector::unit(1, 0)).unwrap().value,
            Extended::Finite(int(1))
        );
        assert_eq!(
            rho_class(&FilteredChainComplex::empty(), &SparseVector::zero(0)),
            Err(Error::ZeroClass)
        );
    }

    #[test]
    fn compare_identity_is_equality() {
        let c = Arc::new(
            FilteredChainComplex::<F2>::from_ids(gens(&[("x", 0, int(3))]), vec![], true).unwrap(),
        );
        let rep = compare(&ChainMap::identity(c.clone()), 0).unwrap();
        assert_eq!(rep.rho_source, rep.rho_target);
        assert_eq!(rep.holds, Some(true));
        let unc = ChainMap::new(
            c.clone(),
            c,
            0,
            SparseMatrix::identity(1),
            Extended::Infinity,
        )
        .unwrap();
        assert_eq!(compare(&unc, 0), Err(Error::UncertifiedLevelShift));
    }

    #[test]
    fn psc_examples() {
        let f = |x: i64| Extended::Finite(int(x));
        let v = psc_check(&f(0), &f(0), &int(0), None);
        assert!(!v.obstructed);
        assert_eq!(v.s2_lower_bound, Some(f(0)));
        let v = psc_check(&f(1), &f(5), &int(1), Some(&int(95)));
        assert!(v.obstructed);
        assert_eq!(v.s2_lower_bound, Some(f(96)));
        assert_eq!(v.consistent, Some(false));
        let v = psc_check(&f(-7), &Extended::Infinity, &int(100), None);
        assert!(v.obstructed);
        assert_eq!(v.s2_lower_bound, Some(Extended::Infinity));
        let v = psc_check(&Extended::Infinity, &f(3), &int(0), Some(&int(0)));
        assert!(v.vacuous && !v.obstructed && v.s2_lower_bound.is_none());
        assert!(!psc_check(&Extended::Infinity, &Extended::Infinity, &int(0), None).obstructed);
    }
}
