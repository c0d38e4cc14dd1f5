use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use super::{finite_or_diverged, Engine, Step};
use crate::error::Result;
use crate::linalg::{axpy, dot, DenseMatrix};
use crate::sampling::{RowSelector, SelectorKind, StorageMode};

/// Physically reordered copy of the system for materialized without-replacement storage.
#[derive(Debug)]
struct Reordered {
    a: DenseMatrix,
    b: Vec<f64>,
    epoch: u64,
}

impl Reordered {
    fn build(a: &DenseMatrix, b: &[f64], order: &[usize], epoch: u64) -> Result<Self> {
        Ok(Self {
            a: a.reordered_rows(order)?,
            b: order.iter().map(|&i| b[i]).collect(),
            epoch,
        })
    }
}

/// Single-row projection engine; the selector decides which row each step uses.
#[derive(Debug)]
pub struct KaczmarzEngine<'a> {
    a: &'a DenseMatrix,
    b: &'a [f64],
    x: Vec<f64>,
    selector: RowSelector,
    alpha: f64,
    reordered: Option<Reordered>,
    iteration: u64,
}

impl<'a> KaczmarzEngine<'a> {
    pub fn new(
        a: &'a DenseMatrix,
        b: &'a [f64],
        kind: SelectorKind,
        alpha: f64,
        seed: u64,
    ) -> Result<Self> {
        crate::error::check_len("right-hand side", a.rows(), b.len())?;
        let selector = RowSelector::new(kind, a, seed)?;
        let reordered = match kind {
            SelectorKind::WithoutReplacement {
                storage: StorageMode::Materialized,
                ..
            } => {
                let w = selector
                    .without_replacement()
                    .expect("without-replacement selector");
                Some(Reordered::build(a, b, w.permutation(), w.epoch())?)
            }
            _ => None,
        };
        Ok(Self {
            a,
            b,
            x: vec![0.0; a.cols()],
            selector,
            alpha,
            reordered,
            iteration: 0,
        })
    }

    pub fn selector(&self) -> &RowSelector {
        &self.selector
    }
}

impl Engine for KaczmarzEngine<'_> {
    #[inline]
    fn step(&mut self) -> Result<Step> {
        let (row, norm_sq, b_i) = match &mut self.reordered {
            None => {
                let Some(i) = self.selector.next(self.a, self.b, &self.x) else {
                    return Ok(Step::Solved);
                };
                (self.a.row(i), self.a.row_norm_sq(i), self.b[i])
            }
            Some(re) => {
                let (pos, _) = self
                    .selector
                    .next_slot()
                    .expect("without-replacement selector");
                let w = self
                    .selector
                    .without_replacement()
                    .expect("without-replacement selector");
                if w.epoch() != re.epoch {
                    *re = Reordered::build(self.a, self.b, w.permutation(), w.epoch())?;
                }
                (re.a.row(pos), re.a.row_norm_sq(pos), re.b[pos])
            }
        };
        let scale = self.alpha * (b_i - dot(row, &self.x)) / norm_sq;
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

    fn anomalies(&self) -> u64 {
        self.selector.anomalies()
    }
}
