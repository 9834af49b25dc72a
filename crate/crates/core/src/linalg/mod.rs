//! Dense symmetric linear algebra.

mod eigen;
mod matrix;
mod spectral;

pub use eigen::{eig_sym, eig_sym_with, EigenDecomp, EigenSettings};
pub use matrix::{Matrix, SymMatrix};
pub use spectral::{
    block_embed, exp_sym, inner, log_floor, log_from_eig, log_sym, matrix_fn, qre, spectral_norm, sym_trace_norm,
    symmetrize, trace_norm, LogPolicy, LOG_FLOOR_REL,
};
