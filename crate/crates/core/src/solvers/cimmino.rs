use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use super::{finite_or_diverged, Engine, Step};
use crate::error::Result;
use crate::linalg::{axpy, residual_into, DenseMatrix};

/// Cimmino's simultaneous projections in matrix form:
/// `x ← x + AᵀD(b − Ax)` with `D = diag(λ/(m‖A⁽ⁱ⁾‖²))`.
#[derive(Debug)]
pub struct CimminoEngine<'a> {
    a: &'a DenseMatrix,
    b: &'a [f64],
    x: Vec<f64>,
    r: Vec<f64>,
    d: Vec<f64>,
    iteration: u64,
}

impl<'a> CimminoEngine<'a> {
    pub fn new(a: &'a DenseMatrix, b: &'a [f64], relaxation: f64) -> Self {
        let m = a.rows() as f64;
        Self {
            a,
            b,
            x: vec![0.0; a.cols()],
            r: vec![0.0; a.rows()],
            d: a.row_norms_sq()
                .iter()
                .map(|s| relaxation / (m * s))
                .collect(),
            iteration: 0,
        }
    }
}

impl Engine for CimminoEngine<'_> {
    fn step(&mut self) -> Result<Step> {
        residual_into(self.a, &self.x, self.b, &mut self.r)?;
        let mut total = 0.0;
        for (i, (&r, &d)) in self.r.iter().zip(&self.d).enumerate() {
            let s = r * d;
            total += s.abs();
            axpy(s, self.a.row(i), &mut self.x);
        }
        finite_or_diverged(total, self.iteration)?;
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
