//! Dense tensors in reverse-lexicographic (first index fastest) layout,
//! together with unfoldings, mode products, Kronecker products and the
//! error metrics used by the experiments.
//!
//! Multi-indices passed to [`ivec`] and [`DenseTensor::get`] are 1-based to
//! keep the index map literal; storage is 0-based.

use crate::error::{Error, Result};
use crate::matrix::{norm2, Matrix};

/// Mode sizes `(I_1, ..., I_d)` of a tensor.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Shape(Vec<usize>);

impl Shape {
    pub fn new(dims: impl Into<Vec<usize>>) -> Result<Self> {
        let dims = dims.into();
        if dims.is_empty() {
            return Err(Error::Argument("a shape needs at least one mode".into()));
        }
        if let Some(k) = dims.iter().position(|&n| n == 0) {
            return Err(Error::Argument(format!("mode {} has size 0", k + 1)));
        }
        dims.iter()
            .try_fold(1usize, |acc, &n| acc.checked_mul(n))
            .ok_or_else(|| Error::Argument(format!("element count of {dims:?} overflows")))?;
        Ok(Self(dims))
    }

    pub fn dims(&self) -> &[usize] {
        &self.0
    }

    pub fn order(&self) -> usize {
        self.0.len()
    }

    pub fn numel(&self) -> usize {
        self.0.iter().product()
    }

    /// `I_1 ··· I_k` (k counted from 1; `k = 0` gives 1).
    pub fn head_size(&self, k: usize) -> usize {
        self.0[..k].iter().product()
    }

    /// `I_{k+1} ··· I_d`.
    pub fn tail_size(&self, k: usize) -> usize {
        self.0[k..].iter().product()
    }

    pub fn reversed(&self) -> Shape {
        Shape(self.0.iter().rev().copied().collect())
    }
}

/// Reverse-lexicographic linear index of a 1-based multi-index, itself 1-based.
pub fn ivec(index: &[usize], dims: &[usize]) -> Result<usize> {
    if index.len() != dims.len() {
        return Err(Error::Index(format!(
            "multi-index has {} components, shape has {}",
            index.len(),
            dims.len()
        )));
    }
    let mut lin = 0usize;
    let mut stride = 1usize;
    for (k, (&i, &n)) in index.iter().zip(dims).enumerate() {
        if i == 0 || i > n {
            return Err(Error::Index(format!(
                "component {} = {i} outside 1..={n}",
                k + 1
            )));
        }
        lin += (i - 1) * stride;
        stride *= n;
    }
    Ok(lin + 1)
}

/// Advance a 0-based multi-index in reverse-lexicographic order. Returns false on wrap-around.
pub(crate) fn next_index(idx: &mut [usize], dims: &[usize]) -> bool {
    for (i, &n) in idx.iter_mut().zip(dims) {
        *i += 1;
        if *i < n {
            return true;
        }
        *i = 0;
    }
    false
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseTensor {
    shape: Shape,
    data: Vec<f64>,
}

impl DenseTensor {
    pub fn zeros(shape: Shape) -> Self {
        let n = shape.numel();
        Self {
            shape,
            data: vec![0.0; n],
        }
    }

    pub fn from_vec(shape: Shape, data: Vec<f64>) -> Result<Self> {
        if data.len() != shape.numel() {
            return Err(Error::Argument(format!(
                "shape {:?} needs {} entries, got {}",
                shape.dims(),
                shape.numel(),
                data.len()
            )));
        }
        Ok(Self { shape, data })
    }

    /// Fill from a function of the 1-based multi-index.
    pub fn from_fn(shape: Shape, mut f: impl FnMut(&[usize]) -> f64) -> Self {
        let dims = shape.dims().to_vec();
        let mut data = Vec::with_capacity(shape.numel());
        let mut idx = vec![0usize; dims.len()];
        let mut one_based = vec![1usize; dims.len()];
        loop {
            for (o, &i) in one_based.iter_mut().zip(&idx) {
                *o = i + 1;
            }
            data.push(f(&one_based));
            if !next_index(&mut idx, &dims) {
                break;
            }
        }
        Self { shape, data }
    }

    pub fn from_matrix(m: Matrix) -> Self {
        let shape = Shape(vec![m.rows(), m.cols()]);
        Self {
            shape,
            data: m.into_vec(),
        }
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn dims(&self) -> &[usize] {
        self.shape.dims()
    }

    pub fn order(&self) -> usize {
        self.shape.order()
    }

    pub fn numel(&self) -> usize {
        self.data.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn get(&self, index: &[usize]) -> Result<f64> {
        Ok(self.data[ivec(index, self.dims())? - 1])
    }

    pub fn set(&mut self, index: &[usize], value: f64) -> Result<()> {
        let lin = ivec(index, self.dims())? - 1;
        self.data[lin] = value;
        Ok(())
    }

    pub fn frobenius_norm(&self) -> f64 {
        norm2(&self.data)
    }

    pub fn scale(&self, s: f64) -> DenseTensor {
        Self {
            shape: self.shape.clone(),
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn sub(&self, rhs: &DenseTensor) -> Result<DenseTensor> {
        self.check_same_shape(rhs)?;
        Ok(Self {
            shape: self.shape.clone(),
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn reshape(self, shape: Shape) -> Result<DenseTensor> {
        Self::from_vec(shape, self.data)
    }

    /// k-th unfolding `(I_1···I_k) x (I_{k+1}···I_d)`, `1 <= k <= d-1`.
    pub fn unfold(&self, k: usize) -> Result<Matrix> {
        self.clone().into_unfolding(k)
    }

    /// Consuming variant of [`unfold`](Self::unfold); no data is moved.
    pub fn into_unfolding(self, k: usize) -> Result<Matrix> {
        let d = self.order();
        if k == 0 || k >= d {
            return Err(Error::Argument(format!(
                "unfolding index {k} outside 1..={}",
                d.saturating_sub(1)
            )));
        }
        let rows = self.shape.head_size(k);
        let cols = self.shape.tail_size(k);
        Matrix::from_col_major(rows, cols, self.data)
    }

    /// Flat view as a `rows x cols` matrix for any split with matching element count.
    pub fn as_matrix(&self, rows: usize, cols: usize) -> Result<Matrix> {
        Matrix::from_col_major(rows, cols, self.data.clone())
    }

    pub(crate) fn check_same_shape(&self, other: &DenseTensor) -> Result<()> {
        if self.shape != other.shape {
            return Err(Error::Argument(format!(
                "shape mismatch: {:?} vs {:?}",
                self.dims(),
                other.dims()
            )));
        }
        Ok(())
    }
}

/// Inverse of [`DenseTensor::unfold`] for any split of the modes.
pub fn fold(m: Matrix, shape: &Shape) -> Result<DenseTensor> {
    if m.rows() * m.cols() != shape.numel() {
        return Err(Error::Argument(format!(
            "cannot fold a {}x{} matrix into {:?}",
            m.rows(),
            m.cols(),
            shape.dims()
        )));
    }
    DenseTensor::from_vec(shape.clone(), m.into_vec())
}

/// Mode-k product `T ×_k A` with `A` of size `J x I_k`; `k` is 1-based.
pub fn mode_product(t: &DenseTensor, a: &Matrix, k: usize) -> Result<DenseTensor> {
    let d = t.order();
    if k == 0 || k > d {
        return Err(Error::Argument(format!("mode {k} outside 1..={d}")));
    }
    let n = t.dims()[k - 1];
    if a.cols() != n {
        return Err(Error::Argument(format!(
            "mode-{k} product needs {n} columns, matrix has {}",
            a.cols()
        )));
    }
    let left = t.shape().head_size(k - 1);
    let right = t.shape().tail_size(k);
    let j_out = a.rows();
    let mut dims = t.dims().to_vec();
    dims[k - 1] = j_out;
    let mut out = vec![0.0; left * j_out * right];
    let src = t.as_slice();
    for r in 0..right {
        for i in 0..n {
            let fiber = &src[left * (i + n * r)..left * (i + n * r + 1)];
            for j in 0..j_out {
                let w = a[(j, i)];
                if w == 0.0 {
                    continue;
                }
                let dst = &mut out[left * (j + j_out * r)..left * (j + j_out * r + 1)];
                for (o, s) in dst.iter_mut().zip(fiber) {
                    *o += w * s;
                }
            }
        }
    }
    DenseTensor::from_vec(Shape::new(dims)?, out)
}

/// Kronecker product: the block matrix `[a_ij · B]`.
pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let (m, n) = a.shape();
    let (p, q) = b.shape();
    let mut out = Matrix::zeros(m * p, n * q);
    for j in 0..n {
        for l in 0..q {
            let col = out.col_mut(j * q + l);
            for i in 0..m {
                let aij = a[(i, j)];
                for k in 0..p {
                    col[i * p + k] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

pub fn frobenius_norm(t: &DenseTensor) -> f64 {
    t.frobenius_norm()
}

/// Relative error `‖est − truth‖_F / ‖truth‖_F`.
pub fn rse(est: &DenseTensor, truth: &DenseTensor) -> Result<f64> {
    est.check_same_shape(truth)?;
    let denom = truth.frobenius_norm();
    if denom == 0.0 {
        return Err(Error::Domain("relative error against a zero tensor".into()));
    }
    let diff: Vec<f64> = est
        .as_slice()
        .iter()
        .zip(truth.as_slice())
        .map(|(a, b)| a - b)
        .collect();
    Ok(norm2(&diff) / denom)
}

/// Peak signal-to-noise ratio in dB with the peak taken from `truth`.
///
/// An exact reconstruction returns `f64::INFINITY`.
pub fn psnr(est: &DenseTensor, truth: &DenseTensor) -> Result<f64> {
    est.check_same_shape(truth)?;
    let peak = truth
        .as_slice()
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let sq: f64 = est
        .as_slice()
        .iter()
        .zip(truth.as_slice())
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    if sq == 0.0 {
        return Ok(f64::INFINITY);
    }
    let mse = sq / truth.numel() as f64;
    Ok(10.0 * (peak * peak / mse).log10())
}

/// Tensor with the mode order reversed: `out(i_d, ..., i_1) = T(i_1, ..., i_d)`.
pub fn reverse_indices(t: &DenseTensor) -> DenseTensor {
    let dims = t.dims();
    let d = dims.len();
    let rshape = t.shape().reversed();
    // strides of the output, indexed by the source mode
    let mut stride = vec![0usize; d];
    let mut s = 1;
    for k in (0..d).rev() {
        stride[k] = s;
        s *= dims[k];
    }
    let mut out = vec![0.0; t.numel()];
    let mut idx = vec![0usize; d];
    for &v in t.as_slice() {
        let lin: usize = idx.iter().zip(&stride).map(|(i, s)| i * s).sum();
        out[lin] = v;
        next_index(&mut idx, dims);
    }
    DenseTensor {
        shape: rshape,
        data: out,
    }
}
