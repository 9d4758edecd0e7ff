use std::fmt;

use num_complex::Complex64;

use super::HilbError;

pub type C64 = Complex64;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Dense row-major complex tensor.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexTensor {
    shape: Vec<usize>,
    data: Vec<C64>,
}

impl ComplexTensor {
    pub fn new(shape: Vec<usize>, data: Vec<C64>) -> Result<Self, HilbError> {
        let len: usize = shape.iter().product();
        if shape.contains(&0) {
            return Err(HilbError::InvalidTensor(format!("zero extent in shape {shape:?}")));
        }
        if len != data.len() {
            return Err(HilbError::InvalidTensor(format!(
                "shape {shape:?} needs {len} entries, got {}",
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(HilbError::InvalidTensor("non-finite entry".into()));
        }
        Ok(ComplexTensor { shape, data })
    }

    pub fn zeros(shape: Vec<usize>) -> Self {
        let len = shape.iter().product();
        ComplexTensor { shape, data: vec![C64::new(0.0, 0.0); len] }
    }

    pub fn scalar(z: C64) -> Self {
        ComplexTensor { shape: vec![], data: vec![z] }
    }

    pub fn identity(d: usize) -> Self {
        let mut t = ComplexTensor::zeros(vec![d, d]);
        for i in 0..d {
            t.data[i * d + i] = C64::new(1.0, 0.0);
        }
        t
    }

    /// Matrix from rows. Panics on ragged input.
    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let r = rows.len();
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == cols), "ragged matrix");
        ComplexTensor { shape: vec![r, cols], data: rows.concat() }
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let rows: Vec<Vec<C64>> = rows.iter().map(|r| r.iter().map(|&x| c(x, 0.0)).collect()).collect();
        ComplexTensor::from_rows(&rows)
    }

    pub fn vector(entries: &[C64]) -> Self {
        ComplexTensor { shape: vec![entries.len()], data: entries.to_vec() }
    }

    pub fn diag(entries: &[C64]) -> Self {
        let d = entries.len();
        let mut t = ComplexTensor::zeros(vec![d, d]);
        for (i, z) in entries.iter().enumerate() {
            t.data[i * d + i] = *z;
        }
        t
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn rank(&self) -> usize {
        self.shape.len()
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    fn strides(shape: &[usize]) -> Vec<usize> {
        let mut strides = vec![1; shape.len()];
        for k in (0..shape.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * shape[k + 1];
        }
        strides
    }

    fn offset(&self, index: &[usize]) -> usize {
        debug_assert_eq!(index.len(), self.shape.len());
        index.iter().zip(Self::strides(&self.shape)).map(|(i, s)| i * s).sum()
    }

    pub fn get(&self, index: &[usize]) -> C64 {
        self.data[self.offset(index)]
    }

    pub fn set(&mut self, index: &[usize], z: C64) {
        let o = self.offset(index);
        self.data[o] = z;
    }

    pub fn reshape(&self, shape: Vec<usize>) -> Result<Self, HilbError> {
        if shape.iter().product::<usize>() != self.data.len() {
            return Err(HilbError::ShapeMismatch { expected: shape, found: self.shape.clone() });
        }
        Ok(ComplexTensor { shape, data: self.data.clone() })
    }

    /// Axis `k` of the result is axis `axes[k]` of `self`.
    pub fn permute(&self, axes: &[usize]) -> Self {
        assert_eq!(axes.len(), self.shape.len(), "permutation rank");
        let shape: Vec<usize> = axes.iter().map(|&a| self.shape[a]).collect();
        let src_strides = Self::strides(&self.shape);
        let strides: Vec<usize> = axes.iter().map(|&a| src_strides[a]).collect();
        let mut data = Vec::with_capacity(self.data.len());
        let mut idx = vec![0usize; shape.len()];
        for _ in 0..self.data.len() {
            let off: usize = idx.iter().zip(&strides).map(|(i, s)| i * s).sum();
            data.push(self.data[off]);
            for k in (0..shape.len()).rev() {
                idx[k] += 1;
                if idx[k] < shape[k] {
                    break;
                }
                idx[k] = 0;
            }
        }
        ComplexTensor { shape, data }
    }

    pub fn conj(&self) -> Self {
        ComplexTensor { shape: self.shape.clone(), data: self.data.iter().map(|z| z.conj()).collect() }
    }

    pub fn scale(&self, z: C64) -> Self {
        ComplexTensor { shape: self.shape.clone(), data: self.data.iter().map(|w| w * z).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self, HilbError> {
        self.same_shape(other)?;
        Ok(ComplexTensor {
            shape: self.shape.clone(),
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, HilbError> {
        self.add(&other.scale(c(-1.0, 0.0)))
    }

    fn same_shape(&self, other: &Self) -> Result<(), HilbError> {
        if self.shape != other.shape {
            return Err(HilbError::ShapeMismatch { expected: self.shape.clone(), found: other.shape.clone() });
        }
        Ok(())
    }

    /// Sums over `self` axes `ax_a` paired with `other` axes `ax_b`. The
    /// result carries the free axes of `self`, then those of `other`, each
    /// in their original order.
    pub fn contract(&self, ax_a: &[usize], other: &Self, ax_b: &[usize]) -> Result<Self, HilbError> {
        assert_eq!(ax_a.len(), ax_b.len());
        for (&i, &j) in ax_a.iter().zip(ax_b) {
            if self.shape[i] != other.shape[j] {
                return Err(HilbError::ShapeMismatch { expected: vec![self.shape[i]], found: vec![other.shape[j]] });
            }
        }
        let free_a: Vec<usize> = (0..self.rank()).filter(|k| !ax_a.contains(k)).collect();
        let free_b: Vec<usize> = (0..other.rank()).filter(|k| !ax_b.contains(k)).collect();
        let pa: Vec<usize> = free_a.iter().chain(ax_a).copied().collect();
        let pb: Vec<usize> = ax_b.iter().chain(&free_b).copied().collect();
        let a = self.permute(&pa);
        let b = other.permute(&pb);
        let m: usize = free_a.iter().map(|&k| self.shape[k]).product();
        let k: usize = ax_a.iter().map(|&k| self.shape[k]).product();
        let n: usize = free_b.iter().map(|&k| other.shape[k]).product();
        let mut data = vec![C64::new(0.0, 0.0); m * n];
        for i in 0..m {
            for l in 0..k {
                let x = a.data[i * k + l];
                if x == C64::new(0.0, 0.0) {
                    continue;
                }
                let row = &b.data[l * n..(l + 1) * n];
                for (j, y) in row.iter().enumerate() {
                    data[i * n + j] += x * y;
                }
            }
        }
        let shape: Vec<usize> = free_a.iter().map(|&k| self.shape[k]).chain(free_b.iter().map(|&k| other.shape[k])).collect();
        Ok(ComplexTensor { shape, data })
    }

    /// Tensor (outer) product; axes of `self` first.
    pub fn outer(&self, other: &Self) -> Self {
        self.contract(&[], other, &[]).expect("outer product has no contracted axes")
    }

    /// Views the tensor as a matrix with the first `rows_rank` axes as rows.
    pub fn as_matrix(&self, rows_rank: usize) -> Self {
        let r: usize = self.shape[..rows_rank].iter().product();
        let cols: usize = self.shape[rows_rank..].iter().product();
        ComplexTensor { shape: vec![r, cols], data: self.data.clone() }
    }

    pub fn matmul(&self, other: &Self) -> Result<Self, HilbError> {
        if self.rank() != 2 || other.rank() != 2 {
            return Err(HilbError::ShapeMismatch { expected: vec![2], found: vec![self.rank(), other.rank()] });
        }
        self.contract(&[1], other, &[0])
    }

    /// Conjugate transpose of a matrix.
    pub fn adjoint(&self) -> Self {
        assert_eq!(self.rank(), 2, "adjoint of a non-matrix");
        self.permute(&[1, 0]).conj()
    }

    pub fn transpose2(&self) -> Self {
        assert_eq!(self.rank(), 2, "transpose of a non-matrix");
        self.permute(&[1, 0])
    }

    /// Kronecker product of two matrices.
    pub fn kron(&self, other: &Self) -> Self {
        assert!(self.rank() == 2 && other.rank() == 2, "kron of non-matrices");
        let (r1, c1) = (self.shape[0], self.shape[1]);
        let (r2, c2) = (other.shape[0], other.shape[1]);
        self.outer(other).permute(&[0, 2, 1, 3]).reshape(vec![r1 * r2, c1 * c2]).unwrap()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise deviation; `f64::INFINITY` on shape mismatch.
    pub fn max_diff(&self, other: &Self) -> f64 {
        if self.shape != other.shape {
            return f64::INFINITY;
        }
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_residual() <= tol
    }

    /// `max(‖U†U − 1‖, ‖UU† − 1‖)` in max-entry norm.
    pub fn unitarity_residual(&self) -> f64 {
        if self.rank() != 2 || self.shape[0] != self.shape[1] {
            return f64::INFINITY;
        }
        let id = ComplexTensor::identity(self.shape[0]);
        let a = self.adjoint().matmul(self).unwrap().max_diff(&id);
        let b = self.matmul(&self.adjoint()).unwrap().max_diff(&id);
        a.max(b)
    }
}

impl fmt::Display for ComplexTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "shape {:?}", self.shape)?;
        for z in &self.data {
            writeln!(f, "  {:.12e} {:+.12e}i", z.re, z.im)?;
        }
        Ok(())
    }
}

/// Max-entry equality.
pub fn equal(a: &ComplexTensor, b: &ComplexTensor, tol: f64) -> Result<bool, HilbError> {
    a.same_shape(b)?;
    Ok(a.max_diff(b) <= tol)
}

/// Least-squares `c` with `a ≈ c·b`, and whether the residual `max|a − c·b|`
/// is within `tol`. `c` is reported even when the check fails.
pub fn equal_upto_scalar(a: &ComplexTensor, b: &ComplexTensor, tol: f64) -> Result<(bool, C64), HilbError> {
    a.same_shape(b)?;
    let denom: f64 = b.data.iter().map(|z| z.norm_sqr()).sum();
    if denom == 0.0 {
        return Ok((a.max_abs() <= tol, C64::new(0.0, 0.0)));
    }
    let num: C64 = b.data.iter().zip(&a.data).map(|(y, x)| y.conj() * x).sum();
    let z = num / denom;
    let residual = a.max_diff(&b.scale(z));
    Ok((residual <= tol, z))
}
