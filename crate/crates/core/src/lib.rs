//! Shape-invariant 3×3 matrix superpotentials `W_k = kQ + P + R/k`.

pub mod catalog;
pub mod error;
pub mod hermitian;
pub mod spectral;
pub mod verifier;

pub use error::{Error, Result};
pub use hermitian::{anticommutator, basis_element, combine, matmul, Hermitian3, Matrix3c};
