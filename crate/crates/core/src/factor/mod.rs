//! Matrix factorizations: pivoted QR, Jacobi SVD and the rank-revealing
//! ULV/URV builders, with fixed-rank and fixed-tolerance truncation.

pub mod qr;
pub mod svd;
pub mod utv;

pub use qr::{qr, qr_col_pivot, PivotedQr};
pub use svd::{singular_values, spectral_norm, svd, Svd};
pub use utv::{
    factorize, rank_reveal_diag, svd_factors, truncate_fixed_rank, truncate_fixed_tol, ulv,
    ulv_with, urv, urv_with, FactorKind, RankRevealDiag, TruncatedFactorization, UlvFactors,
    UrvFactors, UtvFactors,
};
