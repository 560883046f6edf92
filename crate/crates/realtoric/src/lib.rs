//! Mod-2 Borel–Moore homology of real toric varieties.
//!
//! Given a rational fan, this crate builds the chain complex of the orbit
//! cell decomposition of the real points, filters it by powers of the
//! augmentation ideal of the per-orbit group algebras, runs the spectral
//! sequence of that filtration, and compares against the exterior-power
//! complex attached to the complex points. When the filtration spectral
//! sequence degenerates at the first page, the total mod-2 Betti number of
//! the real part equals that of the complex variety (the Thom–Smith bound is
//! attained) and the variety is certified maximal.
//!
//! The pipeline is exact: all linear algebra happens over GF(2) with
//! bit-packed rows, and all lattice arithmetic is overflow-checked.

mod combo;
pub mod corpus;
pub mod exterior;
pub mod f2;
pub mod fan;
pub mod lattice;
pub mod orbit;
pub mod report;
pub mod spectral;

pub use exterior::{ExteriorComplex, PageDims};
pub use f2::{F2Matrix, F2Subspace, F2Vector};
pub use fan::{Builtin, Cone, Fan, Violation};
pub use lattice::{
    mod2_cone_subspace, saturate_span, smith_normal_form, IntegerMatrix, QuotientData,
    SmithDecomposition,
};
pub use orbit::{GroupAlgebraChain, OrbitComplex};
pub use report::{run_check_fan, run_check_file, MaximalityReport, Verdict};
pub use spectral::{
    check_s_condition, compute_pages, verify_g0_matches_e1, verify_g1_equals_e2, FilteredView,
    PageReport,
};

/// Errors surfaced by fan construction and the checking pipeline.
/// Dimension mismatches in the linear-algebra kernel are programming errors
/// and panic instead.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("integer overflow in lattice arithmetic")]
    Overflow,
    #[error("fan file: {0}")]
    Parse(String),
    #[error("invalid fan: {0}")]
    InvalidFan(String),
    #[error("builtin fan: {0}")]
    BadBuiltin(String),
    #[error("star subdivision: {0}")]
    Subdivision(String),
    #[error("internal consistency check failed: {0}")]
    Consistency(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
