//! Exact-arithmetic toolkit for homological log Calabi-Yau divisor
//! configurations on rational surfaces.
//!
//! The surfaces are the plane blown up in `l` points (`M_l`) and the product
//! of two spheres (the quadric). Everything downstream of the intersection
//! lattice works over arbitrary-precision rationals: enumeration of cyclic
//! divisor configurations, closed counting formulas with an independent
//! brute-force cross-check, Delzant moment polygons for the toric
//! configurations, and a polygon mutation graph explorer.

pub mod catalog;
pub mod config;
pub mod delzant;
pub mod enumerate;
pub mod formulas;
pub mod lattice;
pub(crate) mod linalg;
pub mod mutation;
pub mod rat;
pub mod selftest;

pub use config::{Config, ReductionStep, Validation};
pub use enumerate::{enumerate_lcy, EnumOptions, EnumerationResult};
pub use lattice::{Class, Space, SympClass};
pub use rat::Rat;

/// Crate-wide error type. `Bug` marks a broken internal invariant and is
/// never an acceptable outcome for valid inputs.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("space mismatch: {0} vs {1}")]
    SpaceMismatch(Space, Space),
    #[error("coefficient vector of length {got} does not fit {space} (rank {want})")]
    BadCoeffLen { space: Space, got: usize, want: usize },
    #[error("invalid symplectic data: {0}")]
    BadWeights(String),
    #[error("mirror class must have self-intersection -2, got {0}")]
    BadMirror(i64),
    #[error("invalid configuration: {0}")]
    BadConfig(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("blow-up count {l} exceeds cap {cap}")]
    CapExceeded { l: usize, cap: usize },
    #[error("catalog is infinite: {0}")]
    InfiniteCatalog(String),
    #[error("not valid toric boundary data: {0}")]
    BadBoundary(String),
    #[error("internal invariant violated: {0}")]
    Bug(String),
}

pub type Result<T> = std::result::Result<T, Error>;
