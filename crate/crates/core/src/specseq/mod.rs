mod pages;
mod theorem;

pub use pages::{
    abutment, pages_closed_form, pages_generic, GenericSpectralSequence, InducedMaps, Page,
    PageDifferential, ReconstructionReport, ReconstructionRow, COLUMNS,
};
pub use theorem::{check_lambda_rho, HypothesisOutcome, TheoremReport};

#[cfg(test)]
mod tests;
