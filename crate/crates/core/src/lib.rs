//! Horn-type decision procedures for Schubert positions of quiver subrepresentations.
//!
//! The crate decides whether a family of coordinate subspaces is in general
//! position with respect to generic quiver representations, cross-checks the
//! answer with an algebraic rank oracle and with exhaustive finite-field
//! counts, and computes the cone of highest weights that the resulting
//! inequalities cut out.

pub mod augment;
pub mod brute;
pub mod catalog;
pub mod cli;
pub mod cone;
pub mod error;
pub mod ext_oracle;
pub mod family;
pub mod horn;
pub mod quiver;

pub use error::{Error, Result};
pub use family::{FiltrationProfile, Subset, SubsetFamily};
pub use horn::{HornEngine, HornQuery};
pub use quiver::{DimensionVector, Quiver, QuiverAutomorphism};

/// Cone description over arbitrary-precision integers.
pub type BigCone = cone::ConeDescription<num_bigint::BigInt>;
/// Cone description over 128-bit integers, for small systems.
pub type SmallCone = cone::ConeDescription<i128>;
pub type BigGenerators = cone::Generators<num_bigint::BigInt>;
