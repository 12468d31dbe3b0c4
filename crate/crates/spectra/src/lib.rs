//! Exact and validated inverse spectral computations for finite Jacobi matrices.
//!
//! A finite Jacobi matrix is determined by its spectral measure. This crate runs the
//! correspondence in both directions, links it to canonical systems with piecewise
//! constant Hamiltonians and to Fock-type spaces, and certifies the two-sided entry bounds
//! that hold for lacunary spectral data.

pub mod arith;
pub mod canonical;
pub mod error;
pub mod focktype;
pub mod forward;
pub mod measure;
pub mod report;
pub mod stieltjes;

pub use error::{Error, Result};
