use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::algebra::{Field, SparseMatrix, SparseVector};
use crate::error::{Error, Result};
use crate::level::{format_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub id: String,
    pub degree: i64,
    pub level: Rational,
}

impl Generator {
    pub fn new(id: impl Into<String>, degree: i64, level: Rational) -> Self {
        Generator {
            id: id.into(),
            degree,
            level,
        }
    }
}

/// One broken law, reported by generator ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// `d` sends `from` to a generator whose degree is not one less.
    DegreeShape {
        from: String,
        to: String,
        from_degree: i64,
        to_degree: i64,
    },
    /// `<d d from, to>` is nonzero; `degree` is the degree of `from`.
    DSquared {
        degree: i64,
        from: String,
        to: String,
    },
    /// `to` appears in `d from` at a level above `ℓ(from)`.
    Filtration {
        from: String,
        to: String,
        from_level: Rational,
        to_level: Rational,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DegreeShape {
                from,
                to,
                from_degree,
                to_degree,
            } => write!(
                f,
                "d({from}) hits {to}: degree {from_degree} -> {to_degree}"
            ),
            Violation::DSquared { degree, from, to } => {
                write!(f, "d^2 != 0 in degree {degree}: <dd {from}, {to}> = 1")
            }
            Violation::Filtration {
                from,
                to,
                from_level,
                to_level,
            } => write!(
                f,
                "filtration: d({from}) hits {to} at level {} > {}",
                format_rational(to_level),
                format_rational(from_level)
            ),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn d_squared_ok(&self) -> bool {
        !self.violations.iter().any(|v| {
            matches!(
                v,
                Violation::DSquared { .. } | Violation::DegreeShape { .. }
            )
        })
    }

    pub fn filtration_ok(&self) -> bool {
        !self
            .violations
            .iter()
            .any(|v| matches!(v, Violation::Filtration { .. }))
    }

    pub fn summary(&self) -> String {
        self.violations
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join("; ")
    }
}

/// A finitely generated graded complex with one level per generator.
///
/// The differential is stored as a single square matrix on all generators:
/// column `j` is `d(g_j)`. When `deck_shift` is set (Novikov coefficients),
/// the level of `T^k g` is `ℓ(g) - k * deck_shift`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredChainComplex<F: Field> {
    generators: Vec<Generator>,
    index: HashMap<String, usize>,
    by_degree: BTreeMap<i64, Vec<usize>>,
    d: SparseMatrix<F>,
    filtered: bool,
    deck_shift: Option<Rational>,
}

impl<F: Field> FilteredChainComplex<F> {
    /// Builds and validates: degree shape and d² always, the filtration law
    /// when `filtered` is set.
    pub fn new(generators: Vec<Generator>, d: SparseMatrix<F>, filtered: bool) -> Result<Self> {
        let c = Self::new_unchecked(generators, d, filtered)?;
        let report = c.validate();
        if !report.is_clean() {
            return Err(Error::InvalidComplex(report.summary()));
        }
        Ok(c)
    }

    /// Checks only ids and matrix shape; the differential laws are not verified.
    pub fn new_unchecked(
        generators: Vec<Generator>,
        d: SparseMatrix<F>,
        filtered: bool,
    ) -> Result<Self> {
        let n = generators.len();
        if d.rows() != n || d.cols() != n {
            return Err(Error::Dimension(format!(
                "differential is {}x{} for {n} generators",
                d.rows(),
                d.cols()
            )));
        }
        let mut index = HashMap::with_capacity(n);
        let mut by_degree: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (i, g) in generators.iter().enumerate() {
            if index.insert(g.id.clone(), i).is_some() {
                return Err(Error::DuplicateGenerator(g.id.clone()));
            }
            by_degree.entry(g.degree).or_default().push(i);
        }
        Ok(FilteredChainComplex {
            generators,
            index,
            by_degree,
            d,
            filtered,
            deck_shift: None,
        })
    }

    /// Builds from `(from id, to id, coefficient)` triples, meaning `to` occurs in `d(from)`.
    pub fn from_ids(
        generators: Vec<Generator>,
        entries: Vec<(String, String, F)>,
        filtered: bool,
    ) -> Result<Self> {
        let n = generators.len();
        let probe = Self::new_unchecked(generators, SparseMatrix::zeros(n, n), filtered)?;
        let mut triples = Vec::with_capacity(entries.len());
        for (from, to, c) in entries {
            triples.push((probe.id_index(&to)?, probe.id_index(&from)?, c));
        }
        let d = SparseMatrix::from_entries(n, n, triples)?;
        Self::new(probe.generators, d, filtered)
    }

    pub fn empty() -> Self {
        Self::new_unchecked(Vec::new(), SparseMatrix::zeros(0, 0), true).expect("empty complex")
    }

    pub fn with_deck_shift(mut self, shift: Rational) -> Self {
        self.deck_shift = Some(shift);
        self
    }

    pub(crate) fn with_filtered(mut self, filtered: bool) -> Self {
        self.filtered = filtered;
        self
    }

    pub fn deck_shift(&self) -> Option<&Rational> {
        self.deck_shift.as_ref()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator(&self, i: usize) -> &Generator {
        &self.generators[i]
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn is_filtered(&self) -> bool {
        self.filtered
    }

    pub fn id_index(&self, id: &str) -> Result<usize> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownGenerator(id.to_string()))
    }

    pub fn differential(&self) -> &SparseMatrix<F> {
        &self.d
    }

    /// Degrees that carry at least one generator, ascending.
    pub fn degrees(&self) -> Vec<i64> {
        self.by_degree.keys().copied().collect()
    }

    /// Inclusive range of populated degrees, if any.
    pub fn degree_range(&self) -> Option<(i64, i64)> {
        Some((
            *self.by_degree.keys().next()?,
            *self.by_degree.keys().next_back()?,
        ))
    }

    /// Global indices of the degree-`n` generators, in generator order.
    pub fn degree_indices(&self, n: i64) -> &[usize] {
        self.by_degree.get(&n).map_or(&[], Vec::as_slice)
    }

    pub fn rank_in_degree(&self, n: i64) -> usize {
        self.degree_indices(n).len()
    }

    /// `d_n : C_n -> C_{n-1}` in local coordinates.
    pub fn block(&self, n: i64) -> SparseMatrix<F> {
        self.d
            .select(self.degree_indices(n - 1), self.degree_indices(n))
    }

    /// Level of the term `coeff * g_i`.
    pub fn entry_level(&self, i: usize, coeff: &F) -> Rational {
        let base = self.generators[i].level.clone();
        match &self.deck_shift {
            Some(s) => base - s * Rational::from_integer(coeff.order().into()),
            None => base,
        }
    }

    /// `ℓ` of a global chain: the maximum entry level over its support.
    pub fn chain_level(&self, v: &SparseVector<F>) -> Option<Rational> {
        v.entries()
            .iter()
            .map(|(i, c)| self.entry_level(*i, c))
            .max()
    }

    /// Level of a local chain in degree `n`.
    pub fn local_level(&self, n: i64, v: &SparseVector<F>) -> Option<Rational> {
        let idx = self.degree_indices(n);
        v.entries()
            .iter()
            .map(|(i, c)| self.entry_level(idx[*i], c))
            .max()
    }

    pub fn to_global(&self, n: i64, v: &SparseVector<F>) -> SparseVector<F> {
        v.embed(self.len(), self.degree_indices(n))
    }

    pub fn to_local(&self, n: i64, v: &SparseVector<F>) -> SparseVector<F> {
        v.select(self.degree_indices(n))
    }

    /// Every violated law. The filtration law is only checked on filtered complexes.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for (r, c, s) in self.d.entries() {
            let (from, to) = (&self.generators[c], &self.generators[r]);
            if to.degree != from.degree - 1 {
                violations.push(Violation::DegreeShape {
                    from: from.id.clone(),
                    to: to.id.clone(),
                    from_degree: from.degree,
                    to_degree: to.degree,
                });
            }
            if self.filtered {
                let lv = self.entry_level(r, s);
                if lv > from.level {
                    violations.push(Violation::Filtration {
                        from: from.id.clone(),
                        to: to.id.clone(),
                        from_level: from.level.clone(),
                        to_level: lv,
                    });
                }
            }
        }
        let dd = self.d.mul(&self.d);
        for (r, c, _) in dd.entries() {
            violations.push(Violation::DSquared {
                degree: self.generators[c].degree,
                from: self.generators[c].id.clone(),
                to: self.generators[r].id.clone(),
            });
        }
        ValidationReport { violations }
    }

    /// Global indices of the generators with level at most `t`, in generator order.
    pub fn indices_at_or_below(&self, t: &Rational) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.generators[i].level <= *t)
            .collect()
    }

    /// Sorted distinct generator levels.
    pub fn levels(&self) -> Vec<Rational> {
        let mut l: Vec<Rational> = self.generators.iter().map(|g| g.level.clone()).collect();
        l.sort();
        l.dedup();
        l
    }

    /// The subcomplex on the listed global indices (which must be closed under `d`).
    pub fn restrict(&self, keep: &[usize]) -> Result<Self> {
        let gens = keep.iter().map(|&i| self.generators[i].clone()).collect();
        let d = self.d.select(keep, keep);
        let mut c = Self::new_unchecked(gens, d, self.filtered)?;
        c.deck_shift = self.deck_shift.clone();
        Ok(c)
    }

    pub fn map_levels(&self, f: impl Fn(&Rational) -> Rational) -> Self {
        self.map_levels_indexed(|_, l| f(l))
    }

    pub fn map_levels_indexed(&self, f: impl Fn(usize, &Rational) -> Rational) -> Self {
        let mut c = self.clone();
        for (i, g) in c.generators.iter_mut().enumerate() {
            g.level = f(i, &g.level);
        }
        c
    }

    /// Euler characteristic of the chain groups.
    pub fn euler_characteristic(&self) -> i64 {
        self.by_degree
            .iter()
            .map(|(n, v)| {
                if n.rem_euclid(2) == 0 {
                    v.len() as i64
                } else {
                    -(v.len() as i64)
                }
            })
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::F2;
    use crate::level::int;

    fn pair(lb: i64, la: i64) -> Result<FilteredChainComplex<F2>> {
        FilteredChainComplex::from_ids(
            vec![
                Generator::new("a", 0, int(la)),
                Generator::new("b", 1, int(lb)),
            ],
            vec![("b".into(), "a".into(), F2::ONE)],
            true,
        )
    }

    #[test]
    fn validation_examples() {
        let free = FilteredChainComplex::<F2>::new_unchecked(
            vec![
                Generator::new("x", 0, int(7)),
                Generator::new("y", 3, int(-1)),
            ],
            SparseMatrix::zeros(2, 2),
            true,
        )
        .unwrap();
        assert!(free.validate().is_clean());
        assert!(pair(2, 1).is_ok());
        let n = 2;
        let bad = FilteredChainComplex::<F2>::new_unchecked(
            vec![
                Generator::new("a", 0, int(2)),
                Generator::new("b", 1, int(1)),
            ],
            SparseMatrix::from_entries(n, n, vec![(0, 1, F2::ONE)]).unwrap(),
            true,
        )
        .unwrap();
        assert_eq!(
            bad.validate().violations,
            vec![Violation::Filtration {
                from: "b".into(),
                to: "a".into(),
                from_level: int(1),
                to_level: int(2)
            }]
        );
        assert!(matches!(pair(1, 2), Err(Error::InvalidComplex(_))));
    }

    #[test]
    fn d_squared_is_caught() {
        // c -> b -> a with both arrows: d^2 c = a
        let r = FilteredChainComplex::<F2>::from_ids(
            vec![
                Generator::new("a", 0, int(0)),
                Generator::new("b", 1, int(0)),
                Generator::new("c", 2, int(0)),
            ],
            vec![
                ("b".into(), "a".into(), F2::ONE),
                ("c".into(), "b".into(), F2::ONE),
            ],
            true,
        );
        assert!(matches!(r, Err(Error::InvalidComplex(msg)) if msg.contains("d^2")));
    }
}
