//! Exact invariants of left-invariant Koszul connections on finite-dimensional
//! Lie algebras.
//!
//! Everything algebraic runs over the rationals with no tolerance: structure
//! constants, connection coefficients, bilinear forms, cochains and symbol
//! spaces are all [`Rational`] tables, and every rank is exact. The only
//! floating point lives in [`statmodel`], which works with smooth families of
//! probability vectors on a finite outcome set.
//!
//! Index convention, fixed once for every table in the crate: `gamma[k][i][j]`
//! style accessors take `(i, j, k)` and mean the component along `e_k` of
//! `e_i · e_j` (for a connection, of `∇_{e_i} e_j`). Indices are 0-based.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod algebra;
pub mod catalog;
pub mod cohomology;
pub mod connection;
pub mod error;
pub mod flat_models;
pub mod form;
pub mod gauge;
pub mod invariants;
pub mod linalg;
mod numeric;
pub mod rational;
pub mod sample;
pub mod spencer;
pub mod statmodel;
pub mod tensor;

pub use algebra::{BilinearProduct, LieAlgebra};
pub use connection::InvariantConnection;
pub use error::{Error, Result};
pub use form::{BilinearForm, Symmetry};
pub use linalg::Matrix;
pub use rational::Rational;
pub use tensor::DefectTensor;
