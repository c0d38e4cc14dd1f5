use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use super::{finite_or_diverged, Engine, Step};
use crate::error::{check_len, Result};
use crate::linalg::DenseMatrix;
use crate::rng::Prng;
use crate::sampling::ColumnWeighted;

/// Randomized Gauss–Seidel (coordinate descent on `‖b − Ax‖²`). Keeps the
/// residual `r = b − Ax` up to date so each step touches one column.
#[derive(Debug)]
pub struct RgsEngine<'a> {
    a: &'a DenseMatrix,
    x: Vec<f64>,
    r: Vec<f64>,
    cols: ColumnWeighted,
    rng: Prng,
    iteration: u64,
}

impl<'a> RgsEngine<'a> {
    pub fn new(a: &'a DenseMatrix, b: &[f64], seed: u64) -> Result<Self> {
        check_len("right-hand side", a.rows(), b.len())?;
        Ok(Self {
            a,
            x: vec![0.0; a.cols()],
            r: b.to_vec(),
            cols: ColumnWeighted::new(a)?,
            rng: Prng::from_seed(seed),
            iteration: 0,
        })
    }

    /// The maintained residual.
    pub fn residual(&self) -> &[f64] {
        &self.r
    }
}

impl Engine for RgsEngine<'_> {
    fn step(&mut self) -> Result<Step> {
        let n = self.a.cols();
        let j = self.cols.next_col(&mut self.rng);
        let col = self.a.data()[j..].iter().step_by(n);
        let step =
            col.clone().zip(&self.r).map(|(c, r)| c * r).sum::<f64>() / self.cols.norms_sq()[j];
        finite_or_diverged(step, self.iteration)?;
        self.x[j] += step;
        for (r, c) in self.r.iter_mut().zip(col) {
            *r -= step * c;
        }
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
