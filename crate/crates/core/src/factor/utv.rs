//! Rank-revealing two-sided orthogonal factorizations `A = U·T·Vᵀ`.
//!
//! Both triangular forms come from the pivoted QLP construction: a
//! column-pivoted QR `A·Π₁ = Q₁R₁` followed by a pivoted QR of `R₁ᵀ`, which
//! leaves a lower-triangular middle factor whose trailing rows are small
//! whenever `A` is numerically low rank. Each refinement pass runs one more
//! QR/LQ alternation on the middle factor, shrinking the off-diagonal block
//! further. The URV form is the transposed ULV form of `Aᵀ`.
//!
//! Truncation keeps the leading `r x r` block `T₁₁`. The residual norm is
//! read off the discarded entries of `T`, which equals
//! `‖A‖²_F − ‖T₁₁‖²_F` because `U` and `V` are orthonormal and the
//! discarded block is one-sided orthogonal to the retained factor.

use crate::error::{Error, Result};
use crate::factor::qr::{qr, qr_col_pivot};
use crate::factor::svd::{spectral_norm, svd};
use crate::matrix::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FactorKind {
    Ulv,
    Urv,
    Svd,
}

impl FactorKind {
    pub fn name(self) -> &'static str {
        match self {
            FactorKind::Ulv => "ulv",
            FactorKind::Urv => "urv",
            FactorKind::Svd => "svd",
        }
    }
}

/// Economy factorization `A = U·T·Vᵀ` with `U: m x p`, `T: p x p`,
/// `V: n x p`, `p = min(m, n)`. `T` is lower triangular for ULV, upper
/// triangular for URV and diagonal for the SVD.
#[derive(Debug, Clone)]
pub struct UtvFactors {
    pub kind: FactorKind,
    pub u: Matrix,
    pub t: Matrix,
    pub v: Matrix,
    /// `tail[r]` = squared Frobenius norm of `T` outside its leading `r x r` block.
    tail: Vec<f64>,
}

pub type UlvFactors = UtvFactors;
pub type UrvFactors = UtvFactors;

impl UtvFactors {
    fn new(kind: FactorKind, u: Matrix, t: Matrix, v: Matrix) -> Self {
        let p = t.rows();
        // shell[k] collects T(i, j)² with max(i, j) == k
        let mut shell = vec![0.0; p];
        for j in 0..p {
            for i in 0..p {
                let x = t[(i, j)];
                shell[i.max(j)] += x * x;
            }
        }
        let mut tail = vec![0.0; p + 1];
        for k in (0..p).rev() {
            tail[k] = tail[k + 1] + shell[k];
        }
        Self {
            kind,
            u,
            t,
            v,
            tail,
        }
    }

    /// `min(m, n)`, the largest admissible truncation rank.
    pub fn full_rank(&self) -> usize {
        self.t.rows()
    }

    pub fn source_shape(&self) -> (usize, usize) {
        (self.u.rows(), self.v.rows())
    }

    /// `‖A‖²_F` as carried by the middle factor.
    pub fn norm_sq(&self) -> f64 {
        self.tail[0]
    }

    /// Squared residual norm of the rank-`r` truncation, `0 <= r <= p`.
    pub fn residual_sq(&self, r: usize) -> f64 {
        self.tail[r.min(self.full_rank())]
    }

    pub fn reconstruct(&self) -> Matrix {
        self.u.matmul(&self.t).matmul_t(&self.v)
    }

    /// Leading rank-`r` factors `U₁, T₁₁, V₁`.
    pub fn truncate(&self, r: usize) -> Result<TruncatedFactorization> {
        let p = self.full_rank();
        if r == 0 || r > p {
            return Err(Error::Argument(format!(
                "truncation rank {r} outside 1..={p}"
            )));
        }
        Ok(TruncatedFactorization {
            kind: self.kind,
            rank: r,
            u1: self.u.leading_cols(r),
            t11: self.t.block(0, 0, r, r),
            v1: self.v.leading_cols(r),
            residual_norm: self.tail[r].sqrt(),
        })
    }

    /// Smallest rank `r >= 1` whose residual norm is at most `eps`.
    pub fn select_rank(&self, eps: f64) -> usize {
        let target = eps * eps;
        (1..=self.full_rank())
            .find(|&r| self.tail[r] <= target)
            .unwrap_or(self.full_rank())
            .max(1)
    }

    pub fn truncate_tol(&self, eps: f64) -> Result<TruncatedFactorization> {
        if !(eps >= 0.0) {
            return Err(Error::Argument(format!("tolerance {eps} must be >= 0")));
        }
        self.truncate(self.select_rank(eps))
    }
}

#[derive(Debug, Clone)]
pub struct TruncatedFactorization {
    pub kind: FactorKind,
    pub rank: usize,
    pub u1: Matrix,
    pub t11: Matrix,
    pub v1: Matrix,
    /// `‖A − U₁·T₁₁·V₁ᵀ‖_F`, obtained without forming the residual.
    pub residual_norm: f64,
}

impl TruncatedFactorization {
    pub fn approx(&self) -> Matrix {
        self.u1.matmul(&self.t11).matmul_t(&self.v1)
    }

    /// Explicit residual against the source matrix; for checks only.
    pub fn residual(&self, a: &Matrix) -> Matrix {
        a.sub(&self.approx())
    }
}

pub fn ulv(a: &Matrix) -> UlvFactors {
    ulv_with(a, 1)
}

/// ULV by pivoted QLP plus `refine_passes` QR/LQ sweeps on the middle factor.
pub fn ulv_with(a: &Matrix, refine_passes: usize) -> UlvFactors {
    let first = qr_col_pivot(a);
    let second = qr_col_pivot(&first.r.transpose());
    let p = second.r.rows();

    // A·Π₁ = Q₁·Π₂·R₂ᵀ·Q₂ᵀ
    let mut u = Matrix::zeros(a.rows(), p);
    for (i, &src) in second.perm.iter().enumerate() {
        u.col_mut(i).copy_from_slice(first.q.col(src));
    }
    let mut v = Matrix::zeros(a.cols(), p);
    for (i, &dst) in first.perm.iter().enumerate() {
        for j in 0..p {
            v[(dst, j)] = second.q[(i, j)];
        }
    }
    let mut l = second.r.transpose();

    for _ in 0..refine_passes {
        // L = Q₃R₃, R₃ᵀ = Q₄R₄  =>  L = Q₃·R₄ᵀ·Q₄ᵀ
        let left = qr(&l);
        let right = qr(&left.r.transpose());
        u = u.matmul(&left.q);
        v = v.matmul(&right.q);
        l = right.r.transpose();
    }

    UtvFactors::new(FactorKind::Ulv, u, l, v)
}

pub fn urv(a: &Matrix) -> UrvFactors {
    urv_with(a, 1)
}

/// URV as the transpose of the ULV of `Aᵀ`.
pub fn urv_with(a: &Matrix, refine_passes: usize) -> UrvFactors {
    let f = ulv_with(&a.transpose(), refine_passes);
    UtvFactors::new(FactorKind::Urv, f.v, f.t.transpose(), f.u)
}

/// The SVD packed as a UTV factorization with diagonal middle factor.
pub fn svd_factors(a: &Matrix) -> Result<UtvFactors> {
    let f = svd(a)?;
    let t = Matrix::diag(&f.s);
    Ok(UtvFactors::new(FactorKind::Svd, f.u, t, f.v))
}

pub fn factorize(a: &Matrix, kind: FactorKind, refine_passes: usize) -> Result<UtvFactors> {
    match kind {
        FactorKind::Ulv => Ok(ulv_with(a, refine_passes)),
        FactorKind::Urv => Ok(urv_with(a, refine_passes)),
        FactorKind::Svd => svd_factors(a),
    }
}

pub fn truncate_fixed_rank(f: &UtvFactors, r: usize) -> Result<TruncatedFactorization> {
    f.truncate(r)
}

pub fn truncate_fixed_tol(f: &UtvFactors, eps: f64) -> Result<TruncatedFactorization> {
    f.truncate_tol(eps)
}

/// Quantities behind the rank-revealing conditions for a split at rank `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankRevealDiag {
    pub sigma_min_t11: f64,
    /// Spectral norm of the discarded block row (ULV) or block column (URV).
    pub residual_spectral_norm: f64,
    /// `(σ_r, σ_{r+1})` of the source matrix.
    pub reference_sigmas: (f64, f64),
}

impl RankRevealDiag {
    pub fn leading_ratio(&self) -> f64 {
        self.sigma_min_t11 / self.reference_sigmas.0
    }

    pub fn trailing_ratio(&self) -> f64 {
        self.residual_spectral_norm / self.reference_sigmas.1
    }
}

/// Reference singular values are taken from `T`, which shares them with `A`.
pub fn rank_reveal_diag(f: &UtvFactors, r: usize) -> Result<RankRevealDiag> {
    let p = f.full_rank();
    if r == 0 || r >= p {
        return Err(Error::Argument(format!("split rank {r} outside 1..{p}")));
    }
    let t11 = f.t.block(0, 0, r, r);
    let discarded = match f.kind {
        FactorKind::Ulv => f.t.block(r, 0, p - r, p),
        FactorKind::Urv => f.t.block(0, r, p, p - r),
        FactorKind::Svd => f.t.block(r, r, p - r, p - r),
    };
    let sigma_min_t11 = *svd(&t11)?.s.last().expect("r >= 1");
    let sigmas = svd(&f.t)?.s;
    Ok(RankRevealDiag {
        sigma_min_t11,
        residual_spectral_norm: spectral_norm(&discarded)?,
        reference_sigmas: (sigmas[r - 1], sigmas[r]),
    })
}
