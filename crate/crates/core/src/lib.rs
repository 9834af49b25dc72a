//! Online matrix prediction.
//!
//! Learners for online max-cut, online gambling and online collaborative
//! filtering, built on matrix multiplicative weights with quantum relative
//! entropy projections over `(β, τ)`-decomposable comparison classes.
//!
//! All numerical code is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases at the crate root fix the scalar to `f64`.

pub mod adversaries;
pub mod decompose;
pub mod error;
pub mod formats;
pub mod harness;
pub mod linalg;
pub mod mmw;
pub mod omp;
pub mod problems;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Matrix = linalg::Matrix<f64>;
pub type SymMatrix = linalg::SymMatrix<f64>;
pub type EigenDecomp = linalg::EigenDecomp<f64>;
