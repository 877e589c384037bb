//! Special functions on cones of positive semidefinite matrices.
//!
//! The crate evaluates the Bessel function `J_mu` of a Hermitian matrix
//! argument through its Jack-polynomial series, the two-argument series
//! `0F0` and `0F1` behind Dunkl-Bessel functions of types A and B, and the
//! measures these functions are attached to (Haar measure, matrix beta and
//! Wishart laws, the hypergroup convolution on the cone). Every integral
//! identity relating them can be checked numerically through the `verify_*`
//! functions, which return a [`report::VerificationReport`].
//!
//! Matrices over R and C are materialized; the quaternionic case is handled
//! through spectra and the Jack parameter `alpha = 1/2` only.

// Quadrature constants are quoted to full published precision, and `!(x > y)`
// is used on purpose so that NaN fails the test.
#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod bessel;
pub mod cone;
pub mod dunkl;
pub mod error;
pub mod field;
pub mod hypergroup;
pub mod jack;
pub mod laplace;
pub mod linalg;
pub mod mc;
pub mod measures;
pub mod quadrature;
pub mod report;
pub mod scalar;
pub mod series;
pub mod special;
pub mod suite;

pub use error::{Error, Result};
pub use field::{Field, FieldParams};
