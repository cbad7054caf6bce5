//! Exact computation of the minimal rank of prolonged diagonal Hermitian
//! sums of squares.
//!
//! The pipeline: build the prolongation matrix `J_{n,d}`, enumerate the
//! extreme rays of the cone `{x : J_{n,d} x >= 0}` by double description,
//! slice them to the trace-one polytope, drop the unit vectors (the vertices
//! of the standard simplex) and minimize the support size of `J_{n,d} x`
//! over what remains.

pub mod analysis;
pub mod error;
pub mod format;
pub mod linalg;
pub mod monomial;
pub mod polytope;
pub mod prolongation;

pub use error::{Error, Result};
pub use linalg::{GaussianRational, HermMatrix, Matrix, Rational};
pub use monomial::{enumerate_monomials, MonomialBasis, MultiIndex};
pub use prolongation::{DiagCoeffVector, ProlongationMatrix, SignVector};
