mod homotopy;
mod morphism;
mod object;

pub use homotopy::{
    is_s_homotopic, perturb_by_homotopy, promote_homotopy, Promotion, PromotionCertificate,
    SHomotopy,
};
pub use morphism::{compose, MorphismIdentity, MorphismReport, SMorphism};
pub use object::{
    assemble_total, s_lambda, s_rho, validate_s, AllowableDegrees, Relation, SComplex,
    SValidationReport, SViolation, StructureMap,
};
