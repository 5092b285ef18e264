//! The tensor-train format: a chain of order-3 cores `G_k` of size
//! `r_{k-1} x I_k x r_k` with boundary ranks `r_0 = r_d = 1`.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::tensor::{DenseTensor, Shape};

/// Default element cap for densifying a TT tensor.
pub const DEFAULT_RECONSTRUCT_CAP: usize = 100_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct TtCore {
    data: DenseTensor,
}

impl TtCore {
    pub fn new(left: usize, mode: usize, right: usize, data: Vec<f64>) -> Result<Self> {
        let shape = Shape::new(vec![left, mode, right])?;
        Ok(Self {
            data: DenseTensor::from_vec(shape, data)?,
        })
    }

    pub fn zeros(left: usize, mode: usize, right: usize) -> Result<Self> {
        Self::new(left, mode, right, vec![0.0; left * mode * right])
    }

    pub fn from_tensor(t: DenseTensor) -> Result<Self> {
        if t.order() != 3 {
            return Err(Error::Argument(format!(
                "a TT core is order 3, got order {}",
                t.order()
            )));
        }
        Ok(Self { data: t })
    }

    /// Core from a `(left·mode) x right` matrix (column-major reshape).
    pub fn from_left_unfolding(m: Matrix, left: usize, mode: usize) -> Result<Self> {
        let right = m.cols();
        if m.rows() != left * mode {
            return Err(Error::Argument(format!(
                "{} rows cannot be split as {left} x {mode}",
                m.rows()
            )));
        }
        Self::new(left, mode, right, m.into_vec())
    }

    /// Core from a `left x (mode·right)` matrix.
    pub fn from_right_unfolding(m: Matrix, mode: usize, right: usize) -> Result<Self> {
        let left = m.rows();
        if m.cols() != mode * right {
            return Err(Error::Argument(format!(
                "{} columns cannot be split as {mode} x {right}",
                m.cols()
            )));
        }
        Self::new(left, mode, right, m.into_vec())
    }

    pub fn left_rank(&self) -> usize {
        self.data.dims()[0]
    }

    pub fn mode_size(&self) -> usize {
        self.data.dims()[1]
    }

    pub fn right_rank(&self) -> usize {
        self.data.dims()[2]
    }

    pub fn as_tensor(&self) -> &DenseTensor {
        &self.data
    }

    pub fn as_slice(&self) -> &[f64] {
        self.data.as_slice()
    }

    /// 0-based entry `G(a, i, b)`.
    pub fn at(&self, a: usize, i: usize, b: usize) -> f64 {
        let (l, n) = (self.left_rank(), self.mode_size());
        self.data.as_slice()[a + l * (i + n * b)]
    }

    /// Second unfolding `(r_{k-1}·I_k) x r_k`.
    pub fn left_unfolding(&self) -> Matrix {
        Matrix::from_col_major(
            self.left_rank() * self.mode_size(),
            self.right_rank(),
            self.data.as_slice().to_vec(),
        )
        .expect("core layout")
    }

    /// First unfolding `r_{k-1} x (I_k·r_k)`.
    pub fn right_unfolding(&self) -> Matrix {
        Matrix::from_col_major(
            self.left_rank(),
            self.mode_size() * self.right_rank(),
            self.data.as_slice().to_vec(),
        )
        .expect("core layout")
    }

    /// Swap the two rank modes: `out(b, i, a) = G(a, i, b)`.
    pub fn flipped(&self) -> TtCore {
        let (l, n, r) = (self.left_rank(), self.mode_size(), self.right_rank());
        let mut out = vec![0.0; l * n * r];
        for b in 0..r {
            for i in 0..n {
                for a in 0..l {
                    out[b + r * (i + n * a)] = self.at(a, i, b);
                }
            }
        }
        TtCore::new(r, n, l, out).expect("same element count")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrthogonalityReport {
    pub side: Side,
    /// One entry per checked core: `‖GᵀG − I‖_max` (left) or `‖GGᵀ − I‖_max` (right).
    pub max_deviation: Vec<f64>,
}

impl OrthogonalityReport {
    pub fn worst(&self) -> f64 {
        self.max_deviation.iter().fold(0.0, |m, &v| m.max(v))
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.worst() <= tol
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TtTensor {
    cores: Vec<TtCore>,
}

impl TtTensor {
    /// Validates the rank chain and the unit boundary ranks.
    pub fn new(cores: Vec<TtCore>) -> Result<Self> {
        if cores.is_empty() {
            return Err(Error::Argument("a TT tensor needs at least one core".into()));
        }
        if cores[0].left_rank() != 1 {
            return Err(Error::Argument(format!(
                "first core has left rank {}, expected 1",
                cores[0].left_rank()
            )));
        }
        let last = cores.len() - 1;
        if cores[last].right_rank() != 1 {
            return Err(Error::Argument(format!(
                "last core has right rank {}, expected 1",
                cores[last].right_rank()
            )));
        }
        for (k, pair) in cores.windows(2).enumerate() {
            if pair[0].right_rank() != pair[1].left_rank() {
                return Err(Error::Argument(format!(
                    "rank chain broken between cores {} and {}: {} vs {}",
                    k + 1,
                    k + 2,
                    pair[0].right_rank(),
                    pair[1].left_rank()
                )));
            }
        }
        Ok(Self { cores })
    }

    pub fn cores(&self) -> &[TtCore] {
        &self.cores
    }

    pub fn into_cores(self) -> Vec<TtCore> {
        self.cores
    }

    pub fn order(&self) -> usize {
        self.cores.len()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.cores.iter().map(TtCore::mode_size).collect()
    }

    /// `(r_0, ..., r_d)`.
    pub fn ranks(&self) -> Vec<usize> {
        std::iter::once(1)
            .chain(self.cores.iter().map(TtCore::right_rank))
            .collect()
    }

    pub fn param_count(&self) -> usize {
        self.cores
            .iter()
            .map(|c| c.left_rank() * c.mode_size() * c.right_rank())
            .sum()
    }

    /// Entry at a 1-based multi-index by chaining core slices.
    pub fn entry(&self, index: &[usize]) -> Result<f64> {
        let dims = self.dims();
        crate::tensor::ivec(index, &dims)?;
        let mut row = vec![1.0];
        for (core, &i) in self.cores.iter().zip(index) {
            let mut next = vec![0.0; core.right_rank()];
            for (b, nb) in next.iter_mut().enumerate() {
                *nb = row
                    .iter()
                    .enumerate()
                    .map(|(a, ra)| ra * core.at(a, i - 1, b))
                    .sum();
            }
            row = next;
        }
        Ok(row[0])
    }

    pub fn reconstruct(&self) -> Result<DenseTensor> {
        self.reconstruct_with_cap(DEFAULT_RECONSTRUCT_CAP)
    }

    /// Left-to-right contraction over the first unfoldings of the cores.
    pub fn reconstruct_with_cap(&self, cap: usize) -> Result<DenseTensor> {
        let dims = self.dims();
        let mut peak = 1usize;
        let mut head = 1usize;
        for c in &self.cores {
            head = head.saturating_mul(c.mode_size());
            peak = peak.max(head.saturating_mul(c.right_rank()));
        }
        if peak > cap {
            return Err(Error::Resource(format!(
                "densifying {dims:?} needs {peak} elements, cap is {cap}"
            )));
        }
        let mut acc = Matrix::identity(1);
        for c in &self.cores {
            let n = acc.rows();
            let prod = acc.matmul(&c.right_unfolding());
            acc = prod.reshape(n * c.mode_size(), c.right_rank())?;
        }
        DenseTensor::from_vec(Shape::new(dims)?, acc.into_vec())
    }

    pub fn check_orthogonality(&self, side: Side) -> OrthogonalityReport {
        let d = self.order();
        let max_deviation = match side {
            Side::Left => self.cores[..d - 1]
                .iter()
                .map(|c| c.left_unfolding().col_orthonormality_error())
                .collect(),
            Side::Right => self.cores[1..]
                .iter()
                .map(|c| c.right_unfolding().transpose().col_orthonormality_error())
                .collect(),
        };
        OrthogonalityReport {
            side,
            max_deviation,
        }
    }

    /// TT of the index-reversed tensor: cores in reverse order, rank modes swapped.
    pub fn reversed(&self) -> TtTensor {
        TtTensor {
            cores: self.cores.iter().rev().map(TtCore::flipped).collect(),
        }
    }
}

pub fn reconstruct(x: &TtTensor) -> Result<DenseTensor> {
    x.reconstruct()
}

pub fn param_count(x: &TtTensor) -> usize {
    x.param_count()
}

pub fn check_orthogonality(x: &TtTensor, side: Side) -> OrthogonalityReport {
    x.check_orthogonality(side)
}

pub fn reverse_tt(x: &TtTensor) -> TtTensor {
    x.reversed()
}

/// TT with the given dims and ranks and all-zero cores.
pub fn zeros(dims: &[usize], ranks: &[usize]) -> Result<TtTensor> {
    if ranks.len() != dims.len() + 1 {
        return Err(Error::Argument(format!(
            "{} ranks given for {} modes",
            ranks.len(),
            dims.len()
        )));
    }
    let cores = dims
        .iter()
        .enumerate()
        .map(|(k, &n)| TtCore::zeros(ranks[k], n, ranks[k + 1]))
        .collect::<Result<Vec<_>>>()?;
    TtTensor::new(cores)
}
