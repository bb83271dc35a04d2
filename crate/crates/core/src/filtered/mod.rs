//! Sublevel complexes, barcodes and spectral invariants.

mod novikov;
mod persistence;
mod spectral;

pub use novikov::{novikov_rho_window, NovikovSpectral};
pub use persistence::{barcode, persistence_rank_bruteforce, sublevel, Bar, Barcode};
pub use spectral::{
    compare, perturbation_probe, psc_check, rho_class, rho_degree, rho_degree_bruteforce,
    ComparisonReport, PerturbationProbe, PscVerdict, SpectralValue, Witness,
};
