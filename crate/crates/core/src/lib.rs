//! Numerical toolkit for the analytic continuation of power series
//! Σ φ(n)(−z)ⁿ via Lindelöf contour integrals, asymptotic expansions of the
//! continued functions at z → ∞ and z → −1, exact and asymptotic binomial
//! differences, and classification of expansions against the structural
//! constraints satisfied by holonomic functions.
//!
//! The crate is organized in the layers the problem decomposes into:
//!
//! - [`numerics`] — extended-precision complex Γ, π/sin(πs), ζ, polylogarithms
//!   and numeric Taylor/Laurent coefficient extraction;
//! - [`coeff_functions`] — the catalog of coefficient functions φ(s) (analytic
//!   liftings) with growth metadata and singularity data;
//! - [`lindelof`] — direct summation and contour continuation of the
//!   generating function F(z) = Σ φ(n)(−z)ⁿ;
//! - [`expansions`] — residue-based (polar) and Hankel-based (algebraic)
//!   asymptotic expansions at infinity, with a common term model;
//! - [`saddle_boundary`] — closed-form saddle-point asymptotics of
//!   E(z;c,θ) = Σ e^{cnᶿ}(−z)ⁿ for θ < 0 and the full z → −1 analysis;
//! - [`differences`] — exact high-precision binomial differences, the Euler
//!   transform identity, and difference asymptotics;
//! - [`holonomy`] — the structure-criterion classifier.
//!
//! Everything is pure and reentrant; values are safe to send across threads.

pub mod coeff_functions;
pub mod differences;
pub mod error;
pub mod expansions;
pub mod holonomy;
pub mod lindelof;
pub mod numerics;
pub mod saddle_boundary;

pub use error::{Error, Result};
pub use numerics::PrecisionContext;
pub use rug::{Complex, Float, Integer};
