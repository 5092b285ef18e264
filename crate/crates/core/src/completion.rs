//! Masked tensor completion by projected gradient steps followed by a
//! fixed-rank TT retraction.
//!
//! Each iteration forms `Y = X + α·P_Ω(M − X)` and maps `Y` back to the
//! fixed-rank set by a truncated TT sweep. The retraction is pluggable
//! (TT-SVD, TT-ULV left-to-right, TT-URV right-to-left), which is the point of
//! the comparison: the three retractions should give indistinguishable runs.

use std::time::{Duration, Instant};

use crate::decomp::{clamp_ranks, decompose, DecompConfig, Method, Sweep};
use crate::error::{Error, Result};
use crate::gen::random_mask_indices;
use crate::tensor::{ivec, psnr, rse, DenseTensor, Shape};
use crate::tt::TtTensor;

/// Default element cap for the densified iterate.
pub const DEFAULT_COMPLETION_CAP: usize = 10_000_000;

/// Observed entries of a tensor: sorted, unique column-major linear indices
/// with their values.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservationMask {
    shape: Shape,
    indices: Vec<usize>,
    values: Vec<f64>,
}

impl ObservationMask {
    /// From 1-based multi-indices.
    pub fn from_multi_indices(shape: Shape, indices: &[Vec<usize>], values: &[f64]) -> Result<Self> {
        let lin = indices
            .iter()
            .map(|ix| ivec(ix, shape.dims()).map(|l| l - 1))
            .collect::<Result<Vec<_>>>()?;
        Self::from_linear(shape, lin, values.to_vec())
    }

    /// From 0-based linear indices in any order.
    pub fn from_linear(shape: Shape, indices: Vec<usize>, values: Vec<f64>) -> Result<Self> {
        if indices.len() != values.len() {
            return Err(Error::Argument(format!(
                "{} indices but {} values",
                indices.len(),
                values.len()
            )));
        }
        if indices.is_empty() {
            return Err(Error::Argument("observation mask is empty".into()));
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= shape.numel()) {
            return Err(Error::Index(format!(
                "linear index {bad} out of range for {} entries",
                shape.numel()
            )));
        }
        let mut pairs: Vec<(usize, f64)> = indices.into_iter().zip(values).collect();
        pairs.sort_by_key(|p| p.0);
        if let Some(w) = pairs.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::Argument(format!("index {} observed twice", w[0].0)));
        }
        let (indices, values) = pairs.into_iter().unzip();
        Ok(Self {
            shape,
            indices,
            values,
        })
    }

    /// Entries of `data` where `mask` is 1. The mask must hold only 0 and 1.
    pub fn from_tensors(mask: &DenseTensor, data: &DenseTensor) -> Result<Self> {
        data.check_same_shape(mask)?;
        let mut idx = Vec::new();
        for (i, &m) in mask.as_slice().iter().enumerate() {
            if m == 1.0 {
                idx.push(i);
            } else if m != 0.0 {
                return Err(Error::Domain(format!(
                    "mask entry {i} is {m}, expected 0 or 1"
                )));
            }
        }
        let values = idx.iter().map(|&i| data.as_slice()[i]).collect();
        Self::from_linear(mask.shape().clone(), idx, values)
    }

    /// Observe `round(fraction·N)` uniformly chosen entries of `truth`.
    pub fn sample(truth: &DenseTensor, fraction: f64, seed: u64) -> Result<Self> {
        let idx = random_mask_indices(truth.shape(), fraction, seed)?;
        let values = idx.iter().map(|&i| truth.as_slice()[i]).collect();
        Self::from_linear(truth.shape().clone(), idx, values)
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn observed_fraction(&self) -> f64 {
        self.len() as f64 / self.shape.numel() as f64
    }

    /// Observed values in place, zeros elsewhere.
    pub fn to_dense(&self) -> DenseTensor {
        let mut t = DenseTensor::zeros(self.shape.clone());
        let data = t.as_mut_slice();
        for (&i, &v) in self.indices.iter().zip(&self.values) {
            data[i] = v;
        }
        t
    }

    /// 0/1 indicator tensor.
    pub fn indicator(&self) -> DenseTensor {
        let mut t = DenseTensor::zeros(self.shape.clone());
        let data = t.as_mut_slice();
        for &i in &self.indices {
            data[i] = 1.0;
        }
        t
    }

    fn values_norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// `P_Ω(T)`: entries at observed positions kept, the rest zeroed.
pub fn project_observed(t: &DenseTensor, mask: &ObservationMask) -> Result<DenseTensor> {
    if t.shape() != mask.shape() {
        return Err(Error::Argument(format!(
            "tensor shape {:?} differs from mask shape {:?}",
            t.dims(),
            mask.shape().dims()
        )));
    }
    let mut out = DenseTensor::zeros(t.shape().clone());
    let src = t.as_slice();
    let dst = out.as_mut_slice();
    for &i in mask.indices() {
        dst[i] = src[i];
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Retraction {
    /// TT-SVD, left-to-right.
    Svd,
    /// TT-ULV, left-to-right.
    Ulv,
    /// TT-URV, right-to-left.
    Urv,
}

impl Retraction {
    pub fn name(self) -> &'static str {
        match self {
            Retraction::Svd => "svd",
            Retraction::Ulv => "ulv",
            Retraction::Urv => "urv",
        }
    }

    fn method_and_sweep(self) -> (Method, Sweep) {
        match self {
            Retraction::Svd => (Method::Svd, Sweep::LeftToRight),
            Retraction::Ulv => (Method::Ulv, Sweep::LeftToRight),
            Retraction::Urv => (Method::Urv, Sweep::RightToLeft),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompletionConfig {
    /// Full rank chain `(1, r_1, ..., r_{d-1}, 1)`.
    pub ranks: Vec<usize>,
    pub retraction: Retraction,
    /// `α >= 0`; `0` leaves the initial iterate untouched.
    pub step_size: f64,
    pub max_iters: usize,
    /// Stop once the observed RSE changes by less than this, relatively, over `window` iterations.
    pub stop_tol: f64,
    pub window: usize,
    /// Halt after this many consecutive increases of the observed RSE.
    pub divergence_patience: usize,
    pub refine_passes: usize,
    pub cap: usize,
}

impl CompletionConfig {
    pub fn new(ranks: Vec<usize>, retraction: Retraction) -> Self {
        Self {
            ranks,
            retraction,
            step_size: 1.0,
            max_iters: 500,
            stop_tol: 1e-6,
            window: 5,
            divergence_patience: 20,
            refine_passes: 1,
            cap: DEFAULT_COMPLETION_CAP,
        }
    }

    fn validate(&self, shape: &Shape) -> Result<Vec<usize>> {
        if !(self.step_size >= 0.0) || !self.step_size.is_finite() {
            return Err(Error::Argument(format!(
                "step size {} must be finite and >= 0",
                self.step_size
            )));
        }
        if self.max_iters == 0 {
            return Err(Error::Argument("max_iters must be at least 1".into()));
        }
        if self.window == 0 {
            return Err(Error::Argument("stopping window must be at least 1".into()));
        }
        if !(self.stop_tol >= 0.0) {
            return Err(Error::Argument("stop_tol must be >= 0".into()));
        }
        if shape.numel() > self.cap {
            return Err(Error::Resource(format!(
                "completion densifies {} entries, cap is {}",
                shape.numel(),
                self.cap
            )));
        }
        Ok(clamp_ranks(shape.dims(), &self.ranks)?.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub iteration: usize,
    pub rse_observed: f64,
    pub rse_full: Option<f64>,
    pub psnr: Option<f64>,
    /// Time since the loop started.
    pub wall_time: Duration,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    MaxIters,
    /// Observed RSE stalled within `stop_tol` over the window.
    Stalled,
    /// Observed entries fitted to rounding level.
    Exact,
    /// Observed RSE rose for `divergence_patience` iterations in a row.
    Diverged,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationTrace {
    pub records: Vec<IterationRecord>,
    pub stop: StopReason,
    /// Effective ranks after clamping.
    pub ranks: Vec<usize>,
}

impl IterationTrace {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn diverged(&self) -> bool {
        self.stop == StopReason::Diverged
    }

    pub fn last(&self) -> Option<&IterationRecord> {
        self.records.last()
    }
}

/// Observed RSE below which the fit is treated as exact.
const EXACT_FIT: f64 = 1e-14;

fn retract(y: &DenseTensor, ranks: &[usize], cfg: &CompletionConfig) -> Result<TtTensor> {
    let (method, sweep) = cfg.retraction.method_and_sweep();
    let dc = DecompConfig::fixed_rank(method, sweep, ranks.to_vec()).with_refine(cfg.refine_passes);
    let (tt, _) = decompose(y, &dc)?;
    if tt.ranks() != ranks {
        return Err(Error::Invariant(format!(
            "retraction returned ranks {:?}, expected {:?}",
            tt.ranks(),
            ranks
        )));
    }
    Ok(tt)
}

/// Retraction of the zero-filled observations.
pub fn initial_guess(mask: &ObservationMask, cfg: &CompletionConfig) -> Result<TtTensor> {
    let ranks = cfg.validate(mask.shape())?;
    retract(&mask.to_dense(), &ranks, cfg)
}

fn observed_rse(x: &DenseTensor, mask: &ObservationMask, denom: f64) -> f64 {
    let xs = x.as_slice();
    let num = mask
        .indices()
        .iter()
        .zip(mask.values())
        .map(|(&i, &v)| (xs[i] - v) * (xs[i] - v))
        .sum::<f64>()
        .sqrt();
    if denom > 0.0 {
        num / denom
    } else {
        num
    }
}

/// Run the completion loop. With `truth`, the trace also carries full-tensor
/// RSE and PSNR.
pub fn complete(
    mask: &ObservationMask,
    cfg: &CompletionConfig,
    truth: Option<&DenseTensor>,
) -> Result<(TtTensor, IterationTrace)> {
    let ranks = cfg.validate(mask.shape())?;
    if let Some(t) = truth {
        if t.shape() != mask.shape() {
            return Err(Error::Argument("ground truth shape differs from mask shape".into()));
        }
    }
    let start = Instant::now();
    let denom = mask.values_norm();
    let mut tt = retract(&mask.to_dense(), &ranks, cfg).map_err(|e| Error::Completion {
        iteration: 0,
        source: Box::new(e),
    })?;
    let mut x = tt.reconstruct()?;
    let mut records: Vec<IterationRecord> = Vec::new();
    let mut rises = 0;
    let mut stop = StopReason::MaxIters;

    for it in 1..=cfg.max_iters {
        if cfg.step_size > 0.0 {
            let mut y = x.clone();
            let ys = y.as_mut_slice();
            for (&i, &v) in mask.indices().iter().zip(mask.values()) {
                ys[i] += cfg.step_size * (v - ys[i]);
            }
            tt = retract(&y, &ranks, cfg).map_err(|e| Error::Completion {
                iteration: it,
                source: Box::new(e),
            })?;
            x = tt.reconstruct()?;
        }

        let rse_observed = observed_rse(&x, mask, denom);
        let (rse_full, psnr_db) = match truth {
            Some(t) if t.frobenius_norm() > 0.0 => (Some(rse(&x, t)?), Some(psnr(&x, t)?)),
            _ => (None, None),
        };
        if let Some(prev) = records.last() {
            rises = if rse_observed > prev.rse_observed { rises + 1 } else { 0 };
        }
        records.push(IterationRecord {
            iteration: it,
            rse_observed,
            rse_full,
            psnr: psnr_db,
            wall_time: start.elapsed(),
        });

        if rse_observed <= EXACT_FIT {
            stop = StopReason::Exact;
            break;
        }
        if rises >= cfg.divergence_patience {
            stop = StopReason::Diverged;
            break;
        }
        if records.len() > cfg.window {
            let then = records[records.len() - 1 - cfg.window].rse_observed;
            if (then - rse_observed).abs() < cfg.stop_tol * then {
                stop = StopReason::Stalled;
                break;
            }
        }
    }

    Ok((
        tt,
        IterationTrace {
            records,
            stop,
            ranks,
        },
    ))
}
