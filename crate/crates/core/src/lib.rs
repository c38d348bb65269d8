//! Analysis toolkit for two-mode Gaussian states given by a 4×4 covariance
//! matrix: physicality (uncertainty principle), exact separability, and
//! P-representability with explicit certificates.
//!
//! The crate is organized around the pipeline
//!
//! 1. [`standard_form::reduce`] — bring a covariance matrix to the
//!    four-parameter standard form (a, b, c1, c2) by local symplectic
//!    transformations;
//! 2. [`criteria`] — evaluate the uncertainty-principle and separability
//!    inequalities with explicit margins, plus linear witnesses;
//! 3. [`prep`] — construct the extremal squeezing parameters and, for
//!    separable states, the Gaussian P-function certificate;
//! 4. [`dgcz_simon`] — two independent cross-checking constructions
//!    (variance-based root search and symplectic diagonalization).
//!
//! All quantities use the convention in which the vacuum covariance matrix
//! is I/2.

#![forbid(unsafe_code)]

pub mod criteria;
pub mod dgcz_simon;
pub mod error;
pub mod linalg;
pub mod prep;
pub mod standard_form;
pub mod symplectic;

pub use error::{Error, Result};
pub use standard_form::StandardForm;
pub use symplectic::CovarianceMatrix;
