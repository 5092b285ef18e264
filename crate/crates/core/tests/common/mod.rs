//! Fixtures shared by the integration test targets.
#![allow(dead_code)]

use rand::Rng;
use ttutv::decomp::clamp_ranks;
use ttutv::gen::{gen_gaussian, gen_planted_tt, rng};
use ttutv::matrix::Matrix;
use ttutv::DenseTensor;

/// Random order 3-4 tensor with dims in `2..=max_dim` and a feasible random rank chain.
pub fn random_fixture(seed: u64, max_dim: usize, max_rank: usize) -> (DenseTensor, Vec<usize>) {
    let mut g = rng(seed);
    let d = g.random_range(3..=4);
    let dims: Vec<usize> = (0..d).map(|_| g.random_range(2..=max_dim)).collect();
    let mut ranks = vec![1];
    ranks.extend((1..d).map(|_| g.random_range(1..=max_rank)));
    ranks.push(1);
    let ranks = clamp_ranks(&dims, &ranks).unwrap().0;
    (gen_gaussian(&dims, seed ^ 0x5eed).unwrap(), ranks)
}

/// Planted TT plus Gaussian noise at a random relative level in `[1e-3, 10^-0.5]`.
pub fn noisy_planted(seed: u64, min_dim: usize, max_dim: usize) -> DenseTensor {
    let mut g = rng(seed);
    let d = g.random_range(3..=4);
    let dims: Vec<usize> = (0..d).map(|_| g.random_range(min_dim..=max_dim)).collect();
    let mut ranks = vec![1];
    ranks.extend((1..d).map(|_| g.random_range(1..=4)));
    ranks.push(1);
    let ranks = clamp_ranks(&dims, &ranks).unwrap().0;
    let (clean, _) = gen_planted_tt(&dims, &ranks, seed).unwrap();
    let noise = gen_gaussian(&dims, seed.wrapping_add(7777)).unwrap();
    let level = 10f64.powf(g.random_range(-3.0..-0.5)) * clean.frobenius_norm() / noise.frobenius_norm();
    let mut out = clean;
    for (x, n) in out.as_mut_slice().iter_mut().zip(noise.as_slice()) {
        *x += level * n;
    }
    out
}

pub fn gaussian_matrix(m: usize, n: usize, seed: u64) -> Matrix {
    use rand_distr::{Distribution, StandardNormal};
    let mut g = rng(seed);
    Matrix::from_fn(m, n, |_, _| StandardNormal.sample(&mut g))
}

/// `Q₁·diag(σ)·Q₂ᵀ` with random orthonormal `Q₁`, `Q₂`.
pub fn planted_spectrum(m: usize, n: usize, sigmas: &[f64], seed: u64) -> Matrix {
    let q1 = ttutv::factor::qr(&gaussian_matrix(m, sigmas.len(), seed)).q;
    let q2 = ttutv::factor::qr(&gaussian_matrix(n, sigmas.len(), seed.wrapping_add(1))).q;
    q1.matmul(&Matrix::diag(sigmas)).matmul_t(&q2)
}

/// Frobenius norm of everything past the leading `r` singular values.
pub fn svd_tail(a: &Matrix, r: usize) -> f64 {
    let s = ttutv::factor::singular_values(a).unwrap();
    s.iter().skip(r).map(|x| x * x).sum::<f64>().sqrt()
}
