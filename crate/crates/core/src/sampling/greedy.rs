//! Residual-driven row selection.
//!
//! Each call rebuilds the whole selection chain from the live residual:
//! the threshold `ε_k`, the admissible set `𝒰_k`, the masked residual
//! `r̃` and a cumulative table over `|r̃_i|²`.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::{residual_into, DenseMatrix};
use crate::rng::Prng;

#[derive(Debug, Clone)]
pub struct Greedy {
    residual: Vec<f64>,
    cumulative: Vec<f64>,
    inv_frob_norm_sq: f64,
    last_epsilon: f64,
    last_set_size: usize,
}

impl Greedy {
    pub fn new(a: &DenseMatrix) -> Self {
        Self {
            residual: vec![0.0; a.rows()],
            cumulative: vec![0.0; a.rows()],
            inv_frob_norm_sq: 1.0 / a.frob_norm_sq(),
            last_epsilon: f64::NAN,
            last_set_size: 0,
        }
    }

    /// `ε_k` from the most recent selection.
    pub fn last_epsilon(&self) -> f64 {
        self.last_epsilon
    }

    /// `|𝒰_k|` from the most recent selection.
    pub fn last_set_size(&self) -> usize {
        self.last_set_size
    }

    /// Draws a row, or `None` when the residual is exactly zero.
    pub fn select(
        &mut self,
        a: &DenseMatrix,
        b: &[f64],
        x: &[f64],
        rng: &mut Prng,
    ) -> Option<usize> {
        residual_into(a, x, b, &mut self.residual).expect("selector built for this system");
        let res_sq: f64 = self.residual.iter().map(|r| r * r).sum();
        if res_sq == 0.0 {
            return None;
        }

        let norms = a.row_norms_sq();
        let mut max_term = 0.0;
        let mut argmax = 0;
        for (i, (&r, &nrm)) in self.residual.iter().zip(norms).enumerate() {
            let t = r * r / nrm;
            if t > max_term {
                max_term = t;
                argmax = i;
            }
        }
        let epsilon = 0.5 * (max_term / res_sq + self.inv_frob_norm_sq);
        self.last_epsilon = epsilon;

        let cut = epsilon * res_sq;
        let mut acc = 0.0;
        let mut set_size = 0;
        for ((c, &r), &nrm) in self.cumulative.iter_mut().zip(&self.residual).zip(norms) {
            let r2 = r * r;
            if r2 >= cut * nrm {
                acc += r2;
                set_size += 1;
            }
            *c = acc;
        }
        if set_size == 0 {
            // The argmax row satisfies the threshold in exact arithmetic; only
            // rounding can empty the set.
            debug_assert!(
                self.residual[argmax] * self.residual[argmax]
                    >= cut * norms[argmax] * (1.0 - 1e-12),
                "greedy admissible set empty beyond rounding"
            );
            self.last_set_size = 1;
            return Some(argmax);
        }
        self.last_set_size = set_size;

        let target = rng.next_f64() * acc;
        let i = self.cumulative.partition_point(|&c| c <= target);
        if i < self.cumulative.len() {
            Some(i)
        } else {
            // target rounded up to the total: take the last admissible row
            Some(
                self.cumulative
                    .iter()
                    .rposition(|&c| c < acc)
                    .map_or(0, |p| p + 1),
            )
        }
    }
}
