//! TT decomposition sweeps with per-step truncation bookkeeping.
//!
//! | method | sweep | cores             | bound on `‖A − Â‖_F`  |
//! |--------|-------|-------------------|-----------------------|
//! | SVD    | L2R   | left-orthogonal   | `sqrt(Σ ε_k²)`        |
//! | SVD    | R2L   | right-orthogonal  | `sqrt(Σ ε_k²)`        |
//! | ULV    | L2R   | left-orthogonal   | `sqrt(Σ ε_k²)`        |
//! | URV    | R2L   | right-orthogonal  | `sqrt(Σ ε_k²)`        |
//! | ULV    | R2L   | right-orthogonal  | `Σ ε_k` (keep `L₁₁`) or `sqrt(Σ ε_k²)` (keep full column) |
//! | URV    | L2R   | left-orthogonal   | `sqrt(Σ ε_k²)`, via index reversal |
//!
//! `ε_k` is the truncation residual of the k-th step, read from the factor's
//! middle matrix without forming the residual. Reported `eps_k` are always
//! indexed by unfolding (`k = 1..d-1`), whatever the sweep direction.

use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::factor::{factorize, FactorKind, UtvFactors};
use crate::matrix::Matrix;
use crate::tensor::{reverse_indices, DenseTensor};
use crate::tt::{TtCore, TtTensor, DEFAULT_RECONSTRUCT_CAP};

pub type Method = FactorKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sweep {
    LeftToRight,
    RightToLeft,
}

impl Sweep {
    pub fn name(self) -> &'static str {
        match self {
            Sweep::LeftToRight => "l2r",
            Sweep::RightToLeft => "r2l",
        }
    }
}

/// What the ULV right-to-left sweep carries into the next step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Retain {
    /// `C ← U₁·L₁₁`; cheaper, only the summed bound holds.
    #[default]
    L11Only,
    /// `C ← U₁·L₁₁ + U₂·L₂₁`; keeps the residual orthogonal to `V₁`.
    FullColumn,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Mode {
    /// Full rank list `(r_0, ..., r_d)` with `r_0 = r_d = 1`.
    FixedRank(Vec<usize>),
    /// Relative tolerance with optional error weights (`Σ w_k² = 1`);
    /// equal weights `1/sqrt(d-1)` when absent.
    FixedTol { eps: f64, weights: Option<Vec<f64>> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecompConfig {
    pub method: Method,
    pub sweep: Sweep,
    pub mode: Mode,
    pub refine_passes: usize,
    pub retain: Retain,
    /// Check `A₁^{(k+1)} = U^{(k)ᵀ}·A₂^{(k)}` at every left-to-right step.
    pub instrument: bool,
    /// Largest tensor (in elements) accepted as input.
    pub cap: usize,
}

impl DecompConfig {
    pub fn fixed_rank(method: Method, sweep: Sweep, ranks: Vec<usize>) -> Self {
        Self::new(method, sweep, Mode::FixedRank(ranks))
    }

    pub fn fixed_tol(method: Method, sweep: Sweep, eps: f64) -> Self {
        Self::new(method, sweep, Mode::FixedTol { eps, weights: None })
    }

    pub fn new(method: Method, sweep: Sweep, mode: Mode) -> Self {
        Self {
            method,
            sweep,
            mode,
            refine_passes: 1,
            retain: Retain::default(),
            instrument: false,
            cap: DEFAULT_RECONSTRUCT_CAP,
        }
    }

    pub fn with_refine(mut self, passes: usize) -> Self {
        self.refine_passes = passes;
        self
    }

    pub fn with_retain(mut self, retain: Retain) -> Self {
        self.retain = retain;
        self
    }

    pub fn with_weights(mut self, w: Vec<f64>) -> Self {
        if let Mode::FixedTol { weights, .. } = &mut self.mode {
            *weights = Some(w);
        }
        self
    }

    pub fn with_instrument(mut self, on: bool) -> Self {
        self.instrument = on;
        self
    }

    /// Bound shape this configuration certifies.
    pub fn bound_kind(&self) -> BoundKind {
        if self.method == Method::Ulv
            && self.sweep == Sweep::RightToLeft
            && self.retain == Retain::L11Only
        {
            BoundKind::Sum
        } else {
            BoundKind::SqrtSumSquares
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    SqrtSumSquares,
    Sum,
}

impl BoundKind {
    pub fn name(self) -> &'static str {
        match self {
            BoundKind::SqrtSumSquares => "sqrt_sum_sq",
            BoundKind::Sum => "sum",
        }
    }

    pub fn evaluate(self, eps_k: &[f64]) -> f64 {
        match self {
            BoundKind::SqrtSumSquares => eps_k.iter().map(|e| e * e).sum::<f64>().sqrt(),
            BoundKind::Sum => eps_k.iter().sum(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecompReport {
    pub method: Method,
    pub sweep: Sweep,
    pub retain: Retain,
    /// Truncation residual of unfolding `k`, `k = 1..d-1`.
    pub eps_k: Vec<f64>,
    pub requested_ranks: Option<Vec<usize>>,
    /// `(r_0, ..., r_d)` of the output.
    pub ranks_chosen: Vec<usize>,
    pub bound_kind: BoundKind,
    pub bound: f64,
    /// `‖A − Â‖_F`, filled by [`verify_bound`].
    pub achieved_error: Option<f64>,
    pub input_norm: f64,
    pub wall_time: Duration,
    pub warnings: Vec<String>,
}

impl DecompReport {
    pub fn achieved_rse(&self) -> Option<f64> {
        self.achieved_error.map(|e| {
            if self.input_norm > 0.0 {
                e / self.input_norm
            } else {
                e
            }
        })
    }
}

/// Absolute slack allowed on top of a bound, relative to `‖A‖_F`.
pub const BOUND_SLACK: f64 = 1e-8;

/// Clamp `(r_0..r_d)` into the feasible set `r_k <= min(r_{k-1}·I_k, I_{k+1}·r_{k+1})`.
///
/// The clamped list is feasible for both sweep directions.
pub fn clamp_ranks(dims: &[usize], requested: &[usize]) -> Result<(Vec<usize>, Vec<String>)> {
    let d = dims.len();
    if requested.len() != d + 1 {
        return Err(Error::Argument(format!(
            "expected {} ranks for an order-{d} tensor, got {}",
            d + 1,
            requested.len()
        )));
    }
    if requested[0] != 1 || requested[d] != 1 {
        return Err(Error::Argument(format!(
            "boundary ranks must be 1, got {} and {}",
            requested[0], requested[d]
        )));
    }
    if let Some(k) = requested.iter().position(|&r| r == 0) {
        return Err(Error::Argument(format!("rank r_{k} is 0")));
    }
    let mut r = requested.to_vec();
    for k in 1..d {
        r[k] = r[k].min(r[k - 1] * dims[k - 1]);
    }
    for k in (1..d).rev() {
        r[k] = r[k].min(dims[k] * r[k + 1]);
    }
    let warnings = (1..d)
        .filter(|&k| r[k] != requested[k])
        .map(|k| format!("rank r_{k} clamped from {} to {}", requested[k], r[k]))
        .collect();
    Ok((r, warnings))
}

/// Equal weights `1/sqrt(d-1)` or validated user weights.
fn resolve_weights(d: usize, weights: Option<&[f64]>) -> Result<Vec<f64>> {
    let steps = d.saturating_sub(1);
    match weights {
        None => Ok(vec![1.0 / (steps.max(1) as f64).sqrt(); steps]),
        Some(w) => {
            if w.len() != steps {
                return Err(Error::Argument(format!(
                    "{} weights given for {steps} truncation steps",
                    w.len()
                )));
            }
            if w.iter().any(|&x| !(x >= 0.0) || !x.is_finite()) {
                return Err(Error::Argument("weights must be finite and >= 0".into()));
            }
            let s: f64 = w.iter().map(|x| x * x).sum();
            if (s - 1.0).abs() > 1e-12 {
                return Err(Error::Argument(format!(
                    "squared weights sum to {s}, expected 1"
                )));
            }
            Ok(w.to_vec())
        }
    }
}

enum RankRule {
    Fixed(Vec<usize>),
    /// Absolute tolerance per unfolding, index `k-1`.
    Tol(Vec<f64>),
}

struct SweepOutput {
    cores: Vec<TtCore>,
    eps_k: Vec<f64>,
    ranks: Vec<usize>,
}

pub fn decompose(a: &DenseTensor, cfg: &DecompConfig) -> Result<(TtTensor, DecompReport)> {
    match (cfg.method, cfg.sweep) {
        (Method::Urv, Sweep::LeftToRight) => left_orthogonal_via_urv(a, cfg),
        _ => run(a, cfg),
    }
}

fn run(a: &DenseTensor, cfg: &DecompConfig) -> Result<(TtTensor, DecompReport)> {
    let start = Instant::now();
    if a.numel() > cfg.cap {
        return Err(Error::Resource(format!(
            "input has {} elements, cap is {}",
            a.numel(),
            cfg.cap
        )));
    }
    let d = a.order();
    let dims = a.dims();
    let norm = a.frobenius_norm();
    let bound_kind = cfg.bound_kind();

    let mut warnings = Vec::new();
    let (rule, requested) = match &cfg.mode {
        Mode::FixedRank(ranks) => {
            let (r, w) = clamp_ranks(dims, ranks)?;
            warnings.extend(w);
            (RankRule::Fixed(r), Some(ranks.clone()))
        }
        Mode::FixedTol { eps, weights } => {
            if !(*eps >= 0.0) || !eps.is_finite() {
                return Err(Error::Argument(format!("tolerance {eps} must be finite and >= 0")));
            }
            let w = resolve_weights(d, weights.as_deref())?;
            // The summed bound needs Σ ε_k <= eps·‖A‖; Cauchy-Schwarz gives Σ w_k <= sqrt(d-1).
            let shrink = match bound_kind {
                BoundKind::Sum => 1.0 / ((d.saturating_sub(1)).max(1) as f64).sqrt(),
                BoundKind::SqrtSumSquares => 1.0,
            };
            (
                RankRule::Tol(w.iter().map(|wk| wk * eps * norm * shrink).collect()),
                None,
            )
        }
    };

    let out = match cfg.sweep {
        Sweep::LeftToRight => sweep_l2r(a, cfg, &rule)?,
        Sweep::RightToLeft => sweep_r2l(a, cfg, &rule)?,
    };
    let tt = TtTensor::new(out.cores)?;
    let report = DecompReport {
        method: cfg.method,
        sweep: cfg.sweep,
        retain: cfg.retain,
        bound: bound_kind.evaluate(&out.eps_k),
        eps_k: out.eps_k,
        requested_ranks: requested,
        ranks_chosen: out.ranks,
        bound_kind,
        achieved_error: None,
        input_norm: norm,
        wall_time: start.elapsed(),
        warnings,
    };
    Ok((tt, report))
}

fn pick_rank(f: &UtvFactors, rule: &RankRule, k: usize) -> usize {
    match rule {
        RankRule::Fixed(r) => r[k].min(f.full_rank()),
        RankRule::Tol(eps) => f.select_rank(eps[k - 1]),
    }
}

fn sweep_l2r(a: &DenseTensor, cfg: &DecompConfig, rule: &RankRule) -> Result<SweepOutput> {
    let dims = a.dims();
    let d = dims.len();
    let mut c = a.as_slice().to_vec();
    let mut r_prev = 1;
    let mut cores = Vec::with_capacity(d);
    let mut eps_k = Vec::with_capacity(d.saturating_sub(1));
    let mut ranks = vec![1];

    for k in 1..d {
        let rows = r_prev * dims[k - 1];
        let cols = c.len() / rows;
        let mat = Matrix::from_col_major(rows, cols, c)?;
        let f = factorize(&mat, cfg.method, cfg.refine_passes)?;
        let r = pick_rank(&f, rule, k);
        let t = f.truncate(r)?;
        let next = t.t11.matmul_t(&t.v1);
        if cfg.instrument && cfg.method != Method::Urv {
            let projected = t.u1.t_matmul(&mat);
            let gap = projected.sub(&next).frobenius_norm();
            if gap > 1e-10 * mat.frobenius_norm().max(f64::MIN_POSITIVE) {
                return Err(Error::Invariant(format!(
                    "step {k}: carried matrix differs from U₁ᵀ·C by {gap:e}"
                )));
            }
        }
        cores.push(TtCore::from_left_unfolding(t.u1, r_prev, dims[k - 1])?);
        eps_k.push(t.residual_norm);
        ranks.push(r);
        r_prev = r;
        c = next.into_vec();
    }
    cores.push(TtCore::new(r_prev, dims[d - 1], 1, c)?);
    ranks.push(1);
    Ok(SweepOutput {
        cores,
        eps_k,
        ranks,
    })
}

fn sweep_r2l(a: &DenseTensor, cfg: &DecompConfig, rule: &RankRule) -> Result<SweepOutput> {
    let dims = a.dims();
    let d = dims.len();
    let full_column = cfg.method == Method::Ulv && cfg.retain == Retain::FullColumn;
    let mut c = a.as_slice().to_vec();
    let mut r_next = 1;
    let mut cores = Vec::with_capacity(d);
    let mut eps_k = vec![0.0; d.saturating_sub(1)];
    let mut ranks = vec![1; d + 1];

    for k in (1..d).rev() {
        let cols = dims[k] * r_next;
        let rows = c.len() / cols;
        let mat = Matrix::from_col_major(rows, cols, c)?;
        let f = factorize(&mat, cfg.method, cfg.refine_passes)?;
        let (r, next, eps) = if full_column {
            let r = match rule {
                RankRule::Fixed(ranks) => ranks[k].min(f.full_rank()),
                RankRule::Tol(eps) => select_rank_trailing(&f, eps[k - 1]),
            };
            let carried = f.u.matmul(&f.t.leading_cols(r));
            (r, carried, trailing_block_sq(&f.t, r).sqrt())
        } else {
            let r = pick_rank(&f, rule, k);
            let t = f.truncate(r)?;
            (r, t.u1.matmul(&t.t11), t.residual_norm)
        };
        let vt = f.v.leading_cols(r).transpose();
        cores.push(TtCore::from_right_unfolding(vt, dims[k], r_next)?);
        eps_k[k - 1] = eps;
        ranks[k] = r;
        r_next = r;
        c = next.into_vec();
    }
    cores.push(TtCore::new(1, dims[0], r_next, c)?);
    cores.reverse();
    Ok(SweepOutput {
        cores,
        eps_k,
        ranks,
    })
}

/// `‖T[r.., r..]‖²_F`.
fn trailing_block_sq(t: &Matrix, r: usize) -> f64 {
    let p = t.rows();
    (r..p)
        .map(|j| (r..p).map(|i| t[(i, j)] * t[(i, j)]).sum::<f64>())
        .sum()
}

fn select_rank_trailing(f: &UtvFactors, eps: f64) -> usize {
    let p = f.full_rank();
    (1..=p)
        .find(|&r| trailing_block_sq(&f.t, r) <= eps * eps)
        .unwrap_or(p)
}

fn require_method(cfg: &DecompConfig, method: Method) -> Result<()> {
    if cfg.method != method {
        return Err(Error::Argument(format!(
            "configuration uses {}, this routine needs {}",
            cfg.method.name(),
            method.name()
        )));
    }
    Ok(())
}

/// Classical TT-SVD in either sweep direction.
pub fn tt_svd(a: &DenseTensor, cfg: &DecompConfig) -> Result<(TtTensor, DecompReport)> {
    require_method(cfg, Method::Svd)?;
    run(a, cfg)
}

pub fn tt_ulv_fixed_rank_l2r(
    a: &DenseTensor,
    ranks: &[usize],
    refine_passes: usize,
) -> Result<(TtTensor, DecompReport)> {
    let cfg = DecompConfig::fixed_rank(Method::Ulv, Sweep::LeftToRight, ranks.to_vec())
        .with_refine(refine_passes);
    run(a, &cfg)
}

pub fn tt_ulv_fixed_tol_l2r(
    a: &DenseTensor,
    eps: f64,
    weights: Option<&[f64]>,
    refine_passes: usize,
) -> Result<(TtTensor, DecompReport)> {
    let cfg = DecompConfig::new(
        Method::Ulv,
        Sweep::LeftToRight,
        Mode::FixedTol {
            eps,
            weights: weights.map(<[f64]>::to_vec),
        },
    )
    .with_refine(refine_passes);
    run(a, &cfg)
}

pub fn tt_urv_fixed_rank_r2l(
    a: &DenseTensor,
    ranks: &[usize],
    refine_passes: usize,
) -> Result<(TtTensor, DecompReport)> {
    let cfg = DecompConfig::fixed_rank(Method::Urv, Sweep::RightToLeft, ranks.to_vec())
        .with_refine(refine_passes);
    run(a, &cfg)
}

pub fn tt_urv_fixed_tol_r2l(
    a: &DenseTensor,
    eps: f64,
    weights: Option<&[f64]>,
    refine_passes: usize,
) -> Result<(TtTensor, DecompReport)> {
    let cfg = DecompConfig::new(
        Method::Urv,
        Sweep::RightToLeft,
        Mode::FixedTol {
            eps,
            weights: weights.map(<[f64]>::to_vec),
        },
    )
    .with_refine(refine_passes);
    run(a, &cfg)
}

pub fn tt_ulv_fixed_rank_r2l(
    a: &DenseTensor,
    ranks: &[usize],
    retain: Retain,
    refine_passes: usize,
) -> Result<(TtTensor, DecompReport)> {
    let cfg = DecompConfig::fixed_rank(Method::Ulv, Sweep::RightToLeft, ranks.to_vec())
        .with_retain(retain)
        .with_refine(refine_passes);
    run(a, &cfg)
}

/// Left-orthogonal cores from URV: run the right-to-left URV sweep on the
/// index-reversed tensor and reverse the resulting train.
pub fn left_orthogonal_via_urv(
    a: &DenseTensor,
    cfg: &DecompConfig,
) -> Result<(TtTensor, DecompReport)> {
    require_method(cfg, Method::Urv)?;
    let mut inner = cfg.clone();
    inner.sweep = Sweep::RightToLeft;
    inner.mode = match &cfg.mode {
        Mode::FixedRank(r) => Mode::FixedRank(r.iter().rev().copied().collect()),
        Mode::FixedTol { eps, weights } => Mode::FixedTol {
            eps: *eps,
            weights: weights
                .as_ref()
                .map(|w| w.iter().rev().copied().collect()),
        },
    };
    let (tt, mut report) = run(&reverse_indices(a), &inner)?;
    report.sweep = Sweep::LeftToRight;
    report.eps_k.reverse();
    report.ranks_chosen.reverse();
    if let Mode::FixedRank(r) = &cfg.mode {
        report.requested_ranks = Some(r.clone());
    }
    Ok((tt.reversed(), report))
}

/// Fill `achieved_error` and check it against the recorded bound.
pub fn verify_bound(a: &DenseTensor, x: &TtTensor, report: &DecompReport) -> Result<DecompReport> {
    let approx = x.reconstruct()?;
    let achieved = a.sub(&approx)?.frobenius_norm();
    let slack = BOUND_SLACK * report.input_norm;
    if achieved > report.bound + slack {
        return Err(Error::BoundViolation {
            achieved,
            bound: report.bound,
            slack,
        });
    }
    let mut out = report.clone();
    out.achieved_error = Some(achieved);
    Ok(out)
}
