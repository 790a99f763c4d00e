//! Error type shared by every engine in the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Γ evaluated at a non-positive integer.
    #[error("gamma pole at non-positive integer near s = {0}")]
    GammaPole(String),

    /// π/sin(πs) evaluated too close to an integer.
    #[error("pi/sin(pi s) pole: s = {0} is within {1:e} of an integer")]
    SinPole(String, f64),

    /// Argument outside the documented domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A series was asked for outside its region of convergence.
    #[error("divergent series: {0}")]
    Divergence(String),

    /// Convergent in principle, but the term cap was exhausted.
    #[error("slow convergence: needed more than {0} terms")]
    SlowConvergence(u64),

    /// Contour quadrature failed to reach the requested accuracy.
    #[error("quadrature did not converge: {0}")]
    QuadratureNonConvergence(String),

    /// z outside the sector |arg z| < π − A of the continuation theorem.
    #[error("sector violation: |arg z| = {arg_z:.6} but the sector half-angle is {half_angle:.6}")]
    SectorViolation { arg_z: f64, half_angle: f64 },

    /// Truncation height would exceed the configured cap.
    #[error("truncation height {needed:.3} exceeds cap {cap:.3}")]
    CapExceeded { needed: f64, cap: f64 },

    /// Iterative scheme (Newton, coefficient doubling, ...) did not settle.
    #[error("no convergence: {0}")]
    NonConvergence(String),

    /// Evaluation point coincides with a cataloged singularity.
    #[error("singularity hit at s = {0}")]
    SingularityHit(String),

    /// The singularity catalog cannot justify the requested expansion.
    #[error("catalog incomplete: {0}")]
    CatalogIncomplete(String),

    /// A lemma/theorem hypothesis (cut angle, growth, ...) is violated.
    #[error("hypothesis violation: {0}")]
    HypothesisViolation(String),

    /// Builtin constructor got parameters it does not support.
    #[error("unsupported parameter: {0}")]
    UnsupportedParameter(String),

    /// Unknown sequence / builtin kind.
    #[error("unsupported kind: {0}")]
    UnsupportedKind(String),

    /// Working precision would exceed the hard cap.
    #[error("precision cap: {needed} bits needed, cap is {cap}")]
    PrecisionCap { needed: u64, cap: u64 },

    /// An expansion was evaluated in the wrong variable.
    #[error("variable mismatch: {0}")]
    VariableMismatch(String),

    /// Evaluation point outside the expansion's validity region.
    #[error("outside validity region: {0}")]
    ValidityRegion(String),

    /// Rationality mattered but the input carried no exactness declaration.
    #[error("unanchored exactness: {0}")]
    UnanchoredExactness(String),
}
