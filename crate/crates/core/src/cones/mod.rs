//! Gram-matrix certificates for the four cones, compiled to conic programs.

mod affine;
mod certificate;
mod certify;
mod kind;
mod program;
mod structure;

pub use affine::{AffineExpr, AffinePoly, AffinePolyMatrix, DecVar};
pub use certificate::{
    dd_margin, sdd_margin, verify_certificate, verify_certificate_as, BlockCheck, BlockJson, CertificateBlock,
    CertificateJson, GramCertificate, VerificationReport,
};
pub use certify::{certify, certify_matrix, scalarize_matrix, CertifyOptions, CertifyOutcome};
pub use kind::ConeKind;
pub use program::{SosProgram, SosSolution, SosStatus};
pub use structure::{
    build_gram_structure, CoeffKey, Contribution, GramBlockSpec, GramElement, GramOptions, GramStructure,
};
