//! Dense row-major storage and the kernels every solver shares.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Deref, DerefMut};

use crate::error::{check_len, Error, Result};

/// Row-major dense matrix with cached row norms.
///
/// Rows with zero Euclidean norm are rejected at construction so the
/// projection step never divides by zero.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
    row_norms_sq: Vec<f64>,
    frob_norm_sq: f64,
}

impl DenseMatrix {
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyMatrix);
        }
        check_len("matrix data", rows * cols, data.len())?;
        let row_norms_sq: Vec<f64> = data.chunks_exact(cols).map(norm_sq).collect();
        if let Some(i) = row_norms_sq.iter().position(|&s| !(s > 0.0)) {
            return Err(Error::ZeroRow(i));
        }
        let frob_norm_sq = row_norms_sq.iter().sum();
        Ok(Self {
            rows,
            cols,
            data,
            row_norms_sq,
            frob_norm_sq,
        })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            check_len("row length", cols, r.as_ref().len())?;
            data.extend_from_slice(r.as_ref());
        }
        Self::from_row_major(rows.len(), cols, data)
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        Self::from_row_major(n, n, data).expect("identity rows are nonzero")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn row_norm_sq(&self, i: usize) -> f64 {
        self.row_norms_sq[i]
    }

    pub fn row_norms_sq(&self) -> &[f64] {
        &self.row_norms_sq
    }

    pub fn frob_norm_sq(&self) -> f64 {
        self.frob_norm_sq
    }

    /// Squared Euclidean norm of every column, accumulated in a single row sweep.
    pub fn column_norms_sq(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.cols];
        for row in self.data.chunks_exact(self.cols) {
            for (acc, &v) in out.iter_mut().zip(row) {
                *acc += v * v;
            }
        }
        out
    }

    /// Leading `rows × cols` block.
    pub fn submatrix(&self, rows: usize, cols: usize) -> Result<Self> {
        if rows > self.rows {
            return Err(Error::IndexOutOfRange {
                index: rows,
                bound: self.rows + 1,
            });
        }
        if cols > self.cols {
            return Err(Error::IndexOutOfRange {
                index: cols,
                bound: self.cols + 1,
            });
        }
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            data.extend_from_slice(&self.row(i)[..cols]);
        }
        Self::from_row_major(rows, cols, data)
    }

    /// Copy of the matrix with row `k` of the result equal to row `order[k]` of `self`.
    pub fn reordered_rows(&self, order: &[usize]) -> Result<Self> {
        check_len("row order", self.rows, order.len())?;
        let mut data = Vec::with_capacity(self.data.len());
        let mut row_norms_sq = Vec::with_capacity(self.rows);
        for &i in order {
            if i >= self.rows {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    bound: self.rows,
                });
            }
            data.extend_from_slice(self.row(i));
            row_norms_sq.push(self.row_norms_sq[i]);
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
            row_norms_sq,
            frob_norm_sq: self.frob_norm_sq,
        })
    }

    /// Dense `AᵀA`, row-major `cols × cols`.
    pub fn normal_matrix(&self) -> Vec<f64> {
        let n = self.cols;
        let mut g = vec![0.0; n * n];
        for row in self.data.chunks_exact(n) {
            for (j, &aj) in row.iter().enumerate() {
                if aj == 0.0 {
                    continue;
                }
                let gj = &mut g[j * n..(j + 1) * n];
                for (gjk, &ak) in gj.iter_mut().zip(row) {
                    *gjk += aj * ak;
                }
            }
        }
        g
    }
}

/// Owned vector of 64-bit floats. Kernels take plain slices; this type
/// is what the operations hand back.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DenseVector(Vec<f64>);

impl DenseVector {
    pub fn zeros(len: usize) -> Self {
        Self(vec![0.0; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl From<Vec<f64>> for DenseVector {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

impl From<&[f64]> for DenseVector {
    fn from(v: &[f64]) -> Self {
        Self(v.to_vec())
    }
}

impl Deref for DenseVector {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl DerefMut for DenseVector {
    fn deref_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm_sq(a: &[f64]) -> f64 {
    dot(a, a)
}

/// `‖a − b‖²`.
#[inline]
pub fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x - y;
            d * d
        })
        .sum()
}

/// `y += s·x`.
#[inline]
pub fn axpy(s: f64, x: &[f64], y: &mut [f64]) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi += s * xi;
    }
}

/// Unchecked Kaczmarz step on row `i`; the hot loop of every row-action solver.
#[inline]
pub(crate) fn kaczmarz_step(a: &DenseMatrix, x: &mut [f64], i: usize, b_i: f64, alpha: f64) {
    let row = a.row(i);
    let scale = alpha * (b_i - dot(row, x)) / a.row_norm_sq(i);
    axpy(scale, row, x);
}

/// Projects `x` onto (or, for `alpha ≠ 1`, relaxes toward) the hyperplane
/// `⟨A⁽ⁱ⁾, x⟩ = b_i`, in place.
pub fn project_row_in_place(
    a: &DenseMatrix,
    x: &mut [f64],
    i: usize,
    b_i: f64,
    alpha: f64,
) -> Result<()> {
    if i >= a.rows() {
        return Err(Error::IndexOutOfRange {
            index: i,
            bound: a.rows(),
        });
    }
    check_len("project_row iterate", a.cols(), x.len())?;
    kaczmarz_step(a, x, i, b_i, alpha);
    Ok(())
}

/// `x + α·(b_i − ⟨A⁽ⁱ⁾,x⟩)/‖A⁽ⁱ⁾‖² · A⁽ⁱ⁾ᵀ`, leaving `x` untouched.
pub fn project_row(
    a: &DenseMatrix,
    x: &[f64],
    i: usize,
    b_i: f64,
    alpha: f64,
) -> Result<DenseVector> {
    let mut out = x.to_vec();
    project_row_in_place(a, &mut out, i, b_i, alpha)?;
    Ok(out.into())
}

pub fn matvec(a: &DenseMatrix, x: &[f64]) -> Result<DenseVector> {
    let mut out = vec![0.0; a.rows()];
    matvec_into(a, x, &mut out)?;
    Ok(out.into())
}

pub fn matvec_into(a: &DenseMatrix, x: &[f64], out: &mut [f64]) -> Result<()> {
    check_len("matvec input", a.cols(), x.len())?;
    check_len("matvec output", a.rows(), out.len())?;
    for (o, row) in out.iter_mut().zip(a.data().chunks_exact(a.cols())) {
        *o = dot(row, x);
    }
    Ok(())
}

/// `Aᵀy` computed row by row, never forming `Aᵀ`.
pub fn matvec_transpose(a: &DenseMatrix, y: &[f64]) -> Result<DenseVector> {
    let mut out = vec![0.0; a.cols()];
    matvec_transpose_into(a, y, &mut out)?;
    Ok(out.into())
}

pub fn matvec_transpose_into(a: &DenseMatrix, y: &[f64], out: &mut [f64]) -> Result<()> {
    check_len("matvec_transpose input", a.rows(), y.len())?;
    check_len("matvec_transpose output", a.cols(), out.len())?;
    out.iter_mut().for_each(|o| *o = 0.0);
    for (&yi, row) in y.iter().zip(a.data().chunks_exact(a.cols())) {
        if yi != 0.0 {
            axpy(yi, row, out);
        }
    }
    Ok(())
}

/// `b − A·x`.
pub fn residual(a: &DenseMatrix, x: &[f64], b: &[f64]) -> Result<DenseVector> {
    let mut r = vec![0.0; a.rows()];
    residual_into(a, x, b, &mut r)?;
    Ok(r.into())
}

pub fn residual_into(a: &DenseMatrix, x: &[f64], b: &[f64], out: &mut [f64]) -> Result<()> {
    check_len("residual rhs", a.rows(), b.len())?;
    matvec_into(a, x, out)?;
    for (o, &bi) in out.iter_mut().zip(b) {
        *o = bi - *o;
    }
    Ok(())
}

/// Largest angle in radians between consecutive rows. Small values mean a
/// coherent matrix, the hard case for cyclic sweeps.
pub fn max_consecutive_angle(a: &DenseMatrix) -> Result<f64> {
    if a.rows() < 2 {
        return Err(Error::TooFewRows {
            needed: 2,
            found: a.rows(),
        });
    }
    let mut max = 0.0f64;
    for i in 0..a.rows() - 1 {
        let c = dot(a.row(i), a.row(i + 1)) / libm::sqrt(a.row_norm_sq(i) * a.row_norm_sq(i + 1));
        let theta = libm::acos(c.clamp(-1.0, 1.0));
        max = max.max(theta);
    }
    Ok(max)
}
