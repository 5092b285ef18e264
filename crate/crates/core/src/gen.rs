//! Seeded synthetic tensors used by tests, examples and the benchmark suites.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::tensor::{DenseTensor, Shape};
use crate::tt::{TtCore, TtTensor};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `X(i_1, ..., i_d) = 1 / (i_1 + ... + i_d)` with 1-based indices.
pub fn gen_hilbert(dims: &[usize]) -> Result<DenseTensor> {
    let shape = Shape::new(dims.to_vec())?;
    Ok(DenseTensor::from_fn(shape, |idx| {
        1.0 / idx.iter().sum::<usize>() as f64
    }))
}

/// I.i.d. standard normal entries.
pub fn gen_gaussian(dims: &[usize], seed: u64) -> Result<DenseTensor> {
    let shape = Shape::new(dims.to_vec())?;
    let mut r = rng(seed);
    let data = (0..shape.numel())
        .map(|_| StandardNormal.sample(&mut r))
        .collect();
    DenseTensor::from_vec(shape, data)
}

/// TT tensor with standard normal cores and its dense reconstruction.
/// `ranks` is the full chain `(1, r_1, ..., r_{d-1}, 1)`.
pub fn gen_planted_tt(dims: &[usize], ranks: &[usize], seed: u64) -> Result<(DenseTensor, TtTensor)> {
    Shape::new(dims.to_vec())?;
    if ranks.len() != dims.len() + 1 {
        return Err(Error::Argument(format!(
            "{} ranks given for {} dims",
            ranks.len(),
            dims.len()
        )));
    }
    let mut r = rng(seed);
    let cores = dims
        .iter()
        .enumerate()
        .map(|(k, &n)| {
            let len = ranks[k] * n * ranks[k + 1];
            let data = (0..len).map(|_| StandardNormal.sample(&mut r)).collect();
            TtCore::new(ranks[k], n, ranks[k + 1], data)
        })
        .collect::<Result<Vec<_>>>()?;
    let tt = TtTensor::new(cores)?;
    Ok((tt.reconstruct()?, tt))
}

/// Uniformly random set of `round(fraction·N)` observed linear indices
/// (at least one), sorted ascending.
pub fn random_mask_indices(shape: &Shape, fraction: f64, seed: u64) -> Result<Vec<usize>> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::Argument(format!(
            "observed fraction {fraction} must lie in (0, 1]"
        )));
    }
    let n = shape.numel();
    let count = ((fraction * n as f64).round() as usize).clamp(1, n);
    let mut idx = sample(&mut rng(seed), n, count).into_vec();
    idx.sort_unstable();
    Ok(idx)
}

/// 0/1 tensor marking `round(fraction·N)` random entries.
pub fn gen_mask(dims: &[usize], fraction: f64, seed: u64) -> Result<DenseTensor> {
    let shape = Shape::new(dims.to_vec())?;
    let idx = random_mask_indices(&shape, fraction, seed)?;
    let mut t = DenseTensor::zeros(shape);
    let data = t.as_mut_slice();
    for i in idx {
        data[i] = 1.0;
    }
    Ok(t)
}
