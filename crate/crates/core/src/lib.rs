//! Multilinear Schur and Fourier multipliers on finite-dimensional spaces:
//! Schatten norms, finite-group transference identities, and lower-bound
//! experiments for triangular truncation, the bilinear Hilbert transform and
//! Calderón–Zygmund symbols.

pub mod builtin;
pub mod error;
pub mod experiments;
pub mod exponent;
pub mod groups;
pub mod io;
pub mod lattice;
pub mod matrix;
pub mod normest;
pub mod quadrature;
pub mod schatten;
pub mod symbols;
pub mod transference;
pub mod svd;

pub use error::{Error, Result};
pub use exponent::Exponent;
pub use matrix::ComplexMatrix;
