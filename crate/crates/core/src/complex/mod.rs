//! Graded chain complexes with filtration levels, homology, chain maps and cones.

mod chain;
mod homology;
mod map;

pub use chain::{FilteredChainComplex, Generator, ValidationReport, Violation};
pub use homology::{
    betti_by_ranks, degree_homology, homology, homology_unchecked, DegreeHomology, HomologySummary,
};
pub use map::{induced_map, is_quasi_iso, mapping_cone, ChainMap, InducedMap, QuasiIsoCertificate};
