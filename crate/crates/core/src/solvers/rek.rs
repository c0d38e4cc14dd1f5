use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use super::{finite_or_diverged, Engine, Step};
use crate::error::{check_len, Result};
use crate::linalg::{axpy, dot, DenseMatrix};
use crate::rng::Prng;
use crate::sampling::{ColumnWeighted, NormWeighted};

/// Randomized extended Kaczmarz: a column projection drives `z` toward the
/// part of `b` outside the range of `A`, and the row step solves against
/// `b − z`.
#[derive(Debug)]
pub struct RekEngine<'a> {
    a: &'a DenseMatrix,
    b: &'a [f64],
    x: Vec<f64>,
    z: Vec<f64>,
    rows: NormWeighted,
    cols: ColumnWeighted,
    rng: Prng,
    iteration: u64,
}

impl<'a> RekEngine<'a> {
    pub fn new(a: &'a DenseMatrix, b: &'a [f64], seed: u64) -> Result<Self> {
        check_len("right-hand side", a.rows(), b.len())?;
        Ok(Self {
            a,
            b,
            x: vec![0.0; a.cols()],
            z: b.to_vec(),
            rows: NormWeighted::new(a),
            cols: ColumnWeighted::new(a)?,
            rng: Prng::from_seed(seed),
            iteration: 0,
        })
    }

    pub fn z(&self) -> &[f64] {
        &self.z
    }
}

impl Engine for RekEngine<'_> {
    fn step(&mut self) -> Result<Step> {
        let a = self.a;
        let n = a.cols();
        let j = self.cols.next_col(&mut self.rng);
        let i = self.rows.next_row(&mut self.rng);
        let col = a.data()[j..].iter().step_by(n);
        let proj: f64 =
            col.clone().zip(&self.z).map(|(c, z)| c * z).sum::<f64>() / self.cols.norms_sq()[j];
        finite_or_diverged(proj, self.iteration)?;
        for (z, c) in self.z.iter_mut().zip(col) {
            *z -= proj * c;
        }

        // the row step sees the freshly projected z
        let row = a.row(i);
        let scale = (self.b[i] - self.z[i] - dot(row, &self.x)) / a.row_norm_sq(i);
        finite_or_diverged(scale, self.iteration)?;
        axpy(scale, row, &mut self.x);
        self.iteration += 1;
        Ok(Step::Advanced)
    }

    fn iterate(&self) -> &[f64] {
        &self.x
    }

    fn into_iterate(self: Box<Self>) -> Vec<f64> {
        self.x
    }
}
