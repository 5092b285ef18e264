//! Householder QR, optionally with column pivoting.

use crate::matrix::{norm2, Matrix};

/// Squared ratio of a downdated column norm to its last exactly computed
/// value below which the norm is recomputed from scratch.
const NORM_RECOMPUTE_RATIO_SQ: f64 = 1e-8;

/// `A[:, perm] = Q · R` with `Q` (`m x p`) orthonormal columns and `R`
/// (`p x n`) upper trapezoidal, `p = min(m, n)`.
#[derive(Debug, Clone)]
pub struct PivotedQr {
    pub q: Matrix,
    pub r: Matrix,
    /// `perm[i]` is the source column placed at position `i`.
    pub perm: Vec<usize>,
}

impl PivotedQr {
    /// `A · P` rebuilt from the source matrix, for checks.
    pub fn permuted(&self, a: &Matrix) -> Matrix {
        Matrix::from_fn(a.rows(), a.cols(), |i, j| a[(i, self.perm[j])])
    }
}

/// Column-pivoted Householder QR. The pivot is the remaining column of
/// largest norm, lowest index on exact ties, so `|R_11| >= |R_22| >= ...`.
pub fn qr_col_pivot(a: &Matrix) -> PivotedQr {
    householder_qr(a, true)
}

/// Plain Householder QR (`perm` is the identity).
pub fn qr(a: &Matrix) -> PivotedQr {
    householder_qr(a, false)
}

fn householder_qr(a: &Matrix, pivot: bool) -> PivotedQr {
    let (m, n) = a.shape();
    let p = m.min(n);
    let mut w = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut norms: Vec<f64> = (0..n).map(|j| norm2(w.col(j))).collect();
    let mut exact = norms.clone();
    let mut taus = vec![0.0; p];

    for k in 0..p {
        if pivot {
            let mut best = k;
            for j in k + 1..n {
                if norms[j] > norms[best] {
                    best = j;
                }
            }
            if best != k {
                w.swap_cols(k, best);
                perm.swap(k, best);
                norms.swap(k, best);
                exact.swap(k, best);
            }
        }

        let tau = make_reflector(&mut w.col_mut(k)[k..]);
        taus[k] = tau;

        if tau != 0.0 {
            let v: Vec<f64> = w.col(k)[k + 1..].to_vec();
            for j in k + 1..n {
                let col = &mut w.col_mut(j)[k..];
                apply_reflector(tau, &v, col);
            }
        }

        if pivot {
            for j in k + 1..n {
                if norms[j] == 0.0 {
                    continue;
                }
                let ratio = w[(k, j)].abs() / norms[j];
                let keep = (1.0 - ratio * ratio).max(0.0);
                let rel = norms[j] / exact[j];
                if keep * rel * rel <= NORM_RECOMPUTE_RATIO_SQ {
                    norms[j] = norm2(&w.col(j)[k + 1..]);
                    exact[j] = norms[j];
                } else {
                    norms[j] *= keep.sqrt();
                }
            }
        }
    }

    let r = Matrix::from_fn(p, n, |i, j| if i <= j { w[(i, j)] } else { 0.0 });

    let mut q = Matrix::eye(m, p);
    for k in (0..p).rev() {
        let tau = taus[k];
        if tau == 0.0 {
            continue;
        }
        let v: Vec<f64> = w.col(k)[k + 1..].to_vec();
        for j in k..p {
            apply_reflector(tau, &v, &mut q.col_mut(j)[k..]);
        }
    }

    PivotedQr { q, r, perm }
}

/// Turn `x` into `(beta, v_2..)` so that `(I − tau·v·vᵀ)·x = beta·e_1`
/// with `v_1 = 1` implicit. Returns `tau`; zero when `x` is already reduced.
fn make_reflector(x: &mut [f64]) -> f64 {
    let alpha = x[0];
    let tail = norm2(&x[1..]);
    if tail == 0.0 {
        return 0.0;
    }
    let mag = alpha.hypot(tail);
    let beta = if alpha >= 0.0 { -mag } else { mag };
    let tau = (beta - alpha) / beta;
    let s = 1.0 / (alpha - beta);
    for v in &mut x[1..] {
        *v *= s;
    }
    x[0] = beta;
    tau
}

/// `y ← (I − tau·v·vᵀ)·y` where `v = (1, v_tail)`.
fn apply_reflector(tau: f64, v_tail: &[f64], y: &mut [f64]) {
    let mut s = y[0];
    for (vi, yi) in v_tail.iter().zip(&y[1..]) {
        s += vi * yi;
    }
    s *= tau;
    y[0] -= s;
    for (vi, yi) in v_tail.iter().zip(&mut y[1..]) {
        *yi -= s * vi;
    }
}
