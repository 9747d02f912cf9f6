use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Inputs are defined over different vertex sets, or have incompatible shapes.
    #[error("domain error: {0}")]
    Domain(String),
    /// A candidate family is not contained in its ambient family.
    #[error("containment error: {0}")]
    Containment(String),
    /// Filtration profiles are malformed or of mismatched length.
    #[error("profile error: {0}")]
    Profile(String),
    /// The requested computation exceeds a configured size bound.
    #[error("capacity error: {0}")]
    Capacity(String),
    /// A Horn query violates its invariants.
    #[error("query error: {0}")]
    Query(String),
    #[error("invalid quiver: {0}")]
    Quiver(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
