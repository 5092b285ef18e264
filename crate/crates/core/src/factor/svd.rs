//! One-sided (Hestenes) Jacobi SVD.

use crate::error::{Error, Result};
use crate::matrix::{dot, norm2, Matrix};

const MAX_SWEEPS: usize = 100;

/// Thin SVD `A = U · diag(s) · Vᵀ`, `U` is `m x p`, `V` is `n x p`, `s` nonincreasing.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: Matrix,
    pub s: Vec<f64>,
    pub v: Matrix,
}

impl Svd {
    pub fn reconstruct(&self) -> Matrix {
        let mut us = self.u.clone();
        for (j, &sj) in self.s.iter().enumerate() {
            us.col_mut(j).iter_mut().for_each(|x| *x *= sj);
        }
        us.matmul_t(&self.v)
    }
}

pub fn svd(a: &Matrix) -> Result<Svd> {
    if a.rows() < a.cols() {
        let t = jacobi_tall(&a.transpose())?;
        return Ok(Svd {
            u: t.v,
            s: t.s,
            v: t.u,
        });
    }
    jacobi_tall(a)
}

pub fn singular_values(a: &Matrix) -> Result<Vec<f64>> {
    Ok(svd(a)?.s)
}

/// Spectral norm; zero for an empty matrix.
pub fn spectral_norm(a: &Matrix) -> Result<f64> {
    if a.rows() == 0 || a.cols() == 0 {
        return Ok(0.0);
    }
    Ok(svd(a)?.s[0])
}

fn jacobi_tall(a: &Matrix) -> Result<Svd> {
    let (m, n) = a.shape();
    let mut u = a.clone();
    let mut v = Matrix::identity(n);
    let tol = f64::EPSILON * (m.max(1) as f64).sqrt();

    let mut converged = n < 2;
    let mut sweeps = 0;
    while !converged {
        if sweeps == MAX_SWEEPS {
            let off = max_off_cosine(&u);
            return Err(Error::Numerical(format!(
                "Jacobi SVD of a {m}x{n} matrix did not converge in {MAX_SWEEPS} sweeps \
                 (largest column cosine {off:e}, tolerance {tol:e})"
            )));
        }
        sweeps += 1;
        converged = true;
        for i in 0..n - 1 {
            for j in i + 1..n {
                let alpha = dot(u.col(i), u.col(i));
                let beta = dot(u.col(j), u.col(j));
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let gamma = dot(u.col(i), u.col(j));
                if gamma.abs() <= tol * alpha.sqrt() * beta.sqrt() {
                    continue;
                }
                converged = false;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = if zeta.abs() > 1e150 {
                    0.5 / zeta
                } else {
                    zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut u, i, j, c, s);
                rotate(&mut v, i, j, c, s);
            }
        }
    }

    let mut s: Vec<f64> = (0..n).map(|j| norm2(u.col(j))).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| s[y].total_cmp(&s[x]));

    let mut u_sorted = Matrix::zeros(m, n);
    let mut v_sorted = Matrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        u_sorted.col_mut(dst).copy_from_slice(u.col(src));
        v_sorted.col_mut(dst).copy_from_slice(v.col(src));
    }
    s = order.iter().map(|&k| s[k]).collect();

    let smax = s.first().copied().unwrap_or(0.0);
    let weak = smax * f64::EPSILON * (m as f64);
    for (j, &sj) in s.iter().enumerate().take(n) {
        let col = u_sorted.col_mut(j);
        if sj > 0.0 {
            col.iter_mut().for_each(|x| *x /= sj);
        }
        if sj <= weak {
            reorthonormalize(&mut u_sorted, j);
        }
    }

    Ok(Svd {
        u: u_sorted,
        s,
        v: v_sorted,
    })
}

fn rotate(m: &mut Matrix, i: usize, j: usize, c: f64, s: f64) {
    let rows = m.rows();
    let data = m.as_mut_slice();
    let (lo, hi) = data.split_at_mut(j * rows);
    let ci = &mut lo[i * rows..(i + 1) * rows];
    let cj = &mut hi[..rows];
    for (x, y) in ci.iter_mut().zip(cj.iter_mut()) {
        let a = *x;
        let b = *y;
        *x = c * a - s * b;
        *y = s * a + c * b;
    }
}

fn max_off_cosine(u: &Matrix) -> f64 {
    let n = u.cols();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            let a = norm2(u.col(i));
            let b = norm2(u.col(j));
            if a > 0.0 && b > 0.0 {
                worst = worst.max(dot(u.col(i), u.col(j)).abs() / (a * b));
            }
        }
    }
    worst
}

/// Replace column `j` by a unit vector orthogonal to columns `0..j`,
/// starting from its current direction and falling back to basis vectors.
/// Used for columns whose singular value is zero or at rounding level.
pub(crate) fn reorthonormalize(m: &mut Matrix, j: usize) {
    let rows = m.rows();
    let mut candidate: Vec<f64> = m.col(j).to_vec();
    let mut basis = 0;
    loop {
        let start = norm2(&candidate);
        if start > 0.0 {
            candidate.iter_mut().for_each(|x| *x /= start);
            for _ in 0..2 {
                for k in 0..j {
                    let prev = m.col(k);
                    let h = dot(prev, &candidate);
                    for (c, p) in candidate.iter_mut().zip(prev) {
                        *c -= h * p;
                    }
                }
            }
            let left = norm2(&candidate);
            if left > 0.5 {
                candidate.iter_mut().for_each(|x| *x /= left);
                m.col_mut(j).copy_from_slice(&candidate);
                return;
            }
        }
        assert!(basis < rows, "no orthogonal complement left for column {j}");
        candidate = vec![0.0; rows];
        candidate[basis] = 1.0;
        basis += 1;
    }
}
