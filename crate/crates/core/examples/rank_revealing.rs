//! How well ULV and URV separate a planted spectrum σ_i = 2^{-i}.

use ttutv::factor::{factorize, qr, rank_reveal_diag, FactorKind};
use ttutv::gen::rng;
use ttutv::matrix::Matrix;
use rand_distr::{Distribution, StandardNormal};

fn random_orthonormal(m: usize, n: usize, seed: u64) -> Matrix {
    let mut g = rng(seed);
    qr(&Matrix::from_fn(m, n, |_, _| StandardNormal.sample(&mut g))).q
}

fn main() -> ttutv::Result<()> {
    let sigmas: Vec<f64> = (1..=15).map(|i| 2f64.powi(-i)).collect();
    let a = random_orthonormal(20, 15, 1)
        .matmul(&Matrix::diag(&sigmas))
        .matmul_t(&random_orthonormal(15, 15, 2));

    for refine in [0, 1, 2] {
        for kind in [FactorKind::Ulv, FactorKind::Urv] {
            let f = factorize(&a, kind, refine)?;
            let d = rank_reveal_diag(&f, 4)?;
            println!(
                "{} refine {refine}: sigma_min(T11)/sigma_4 = {:.4}, discarded/sigma_5 = {:.4}, residual at rank 4 = {:.3e}",
                kind.name(),
                d.sigma_min_t11 / sigmas[3],
                d.residual_spectral_norm / sigmas[4],
                f.residual_sq(4).sqrt()
            );
        }
    }
    Ok(())
}
