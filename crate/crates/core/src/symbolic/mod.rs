//! Symbolic execution over rational functions of the inputs: shadow
//! traces, path trees and certified neighborhoods.

pub mod certificate;
pub mod paths;
pub mod shadow;

pub use certificate::{
    certify_trace, epsilon_certificate, verify_neighborhood, CertificateError, EpsilonCertificate, FunctionEnclosure,
    NeighborhoodReport, SampleCheck,
};
pub use paths::{
    boundary_report, explore_paths, BoundaryError, Constraint, LeafOutcome, OraclePolicy, PathCondition, PathLeaf,
    PathTree,
};
pub use shadow::{
    coefficient_field, extract_f, field_boundary_check, shadow_agreement, shadow_trace, FieldBoundaryReport,
    OracleMode, ShadowOutcome, SymbolicTrace,
};
