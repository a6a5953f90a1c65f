//! Dehn twist words on chain curves, their symplectic action, filling
//! certificates for pseudo-Anosov maps, and contact surgery diagrams along
//! a section of the resulting surface bundles.

pub mod certify;
pub mod curves;
pub mod error;
pub mod homology;
pub mod linalg;
pub mod poly;
pub mod surgery;
pub mod words;

pub use certify::{
    certify_orbit, fathi_certificate, hyperbolicity_report, symbolic_orbit, BundleHyperbolic,
    CertificateOutcome, HyperbolicityReport, PaBasis, PaCertificate, SymbolicCurve,
};
pub use curves::{bigon_scan, build_chain_system, check_filling, trace_faces, EmbeddedCurveSystem};
pub use error::{Error, Result};
pub use homology::{
    casson_bleiler_check, mapping_torus_h1, surgered_h1, word_action, CbVerdict, FramingConvention,
};
pub use linalg::{AbelianGroupInvariant, IntMatrix};
pub use surgery::{
    compile_contact_diagram, tightness_verdict, ContactDiagram, Slope, SurgerySpec, VerdictKind,
};
pub use words::{build_monodromy, free_reduce, CurveId, FamilyParams, SurfaceSpec, TwistWord};
