//! Tensor-train decompositions built on rank-revealing UTV factorizations.
//!
//! The classical TT-SVD sweep computes one truncated SVD per unfolding. The
//! algorithms here replace that SVD by a truncated ULV or URV factorization,
//! which costs a pair of pivoted QR factorizations instead. Left-to-right
//! sweeps pair naturally with ULV (the retained left factor is orthogonal to
//! the residual) and right-to-left sweeps with URV. Both satisfy
//! `‖A − Â‖_F <= sqrt(Σ ε_k²)` in the per-step truncation errors `ε_k`.
//!
//! Modules:
//! - [`tensor`]: dense tensors, unfoldings, mode products, error metrics
//! - [`factor`]: pivoted QR, Jacobi SVD, ULV/URV and their truncation
//! - [`tt`]: the TT format itself
//! - [`decomp`]: the sweep algorithms with error bookkeeping
//! - [`completion`]: masked completion with a TT retraction
//! - [`io`], [`gen`], [`report`]: file formats, generators and CSV reports
//! - [`cli`]: the `ttutv` command line

// `!(x >= 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod completion;
pub mod decomp;
pub mod error;
pub mod factor;
pub mod gen;
pub mod io;
pub mod matrix;
pub mod report;
pub mod tensor;
pub mod tt;

pub use error::{Error, ParseError, Result};
pub use matrix::Matrix;
pub use tensor::{DenseTensor, Shape};
pub use tt::{TtCore, TtTensor};
