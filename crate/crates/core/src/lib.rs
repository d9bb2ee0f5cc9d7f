//! Construction, evaluation, and verification of hypergeometric series for `1/π`
//! built from the four-parameter family
//!
//! ```text
//! Σ_{n≥0} (α)_{a+n} (1-α)_{b+n} / (n! Γ(c+n+1))
//!     = (α)_a (1-α)_b Γ(c-a-b) / ((α)_{c-b} (1-α)_{c-a}) · sin(πα)/π
//! ```
//!
//! All term and constant arithmetic is exact; numeric comparisons use
//! [`BigFloat`] at an explicit precision.

pub mod bigfloat;
pub mod catalog;
pub mod error;
pub mod latex;
pub mod pi_reference;
pub mod series;
pub mod shifted_factorial;
pub mod summation;
pub mod verifier;

pub use bigfloat::{BigFloat, Rounding};
pub use catalog::{catalog_entries, find_by_spec, find_entry, CatalogEntry};
pub use error::{Error, Result};
pub use latex::{emit_latex, emit_spec, parse_spec};
pub use pi_reference::{compute_pi, eval_surd, sqrt_big, PiReference};
pub use series::{
    build_spec, normalize_identity, rhs_constant, sin_pi_rational, ClosedFormRHS, NormalizedIdentity, RationalAlpha,
    SeriesSpec, SurdConstant, SurdKind, SurdTerm, TermRule,
};
pub use shifted_factorial::{factorial, gamma_half, poch, HalfGamma};
pub use summation::{
    accelerate, partial_sum_exact, partial_sum_float, sum_to_digits, tail_bound, AccelerationScheme, SumMethod,
    SumMode, SumOptions, SumResult, SumValue,
};
pub use verifier::{
    verify_gauss_reduced, verify_normalized, verify_spec, verify_symmetry, VerificationReport, VerifyOptions,
};
