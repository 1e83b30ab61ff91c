//! Exact weight spectra of polar and decreasing monomial codes.
//!
//! Codes are described by their information set over the rows of the
//! `n`-fold Kronecker power of `[[1, 0], [1, 1]]`. Spectra are assembled from
//! coset weight enumerators of a prefix of the input vector, and the number
//! of cosets is cut down using the symmetries of the lower-triangular affine
//! group.

pub mod boolean_poly;
pub mod code;
pub mod enumerator;
pub mod error;
pub mod io;
pub mod lta;
pub mod monomial;
pub mod planner;
pub mod spectrum;
pub mod verifier;

pub use boolean_poly::BooleanPolynomial;
pub use code::{CodeProfile, CodeSpec, CosetPrefix, ReliabilitySequence};
pub use enumerator::{CosetEnumerator, WeightEnumerator};
pub use error::{Error, Result};
pub use lta::AffineTransform;
pub use monomial::Monomial;
pub use planner::{Method, PlanEntry, ReductionPlan};
