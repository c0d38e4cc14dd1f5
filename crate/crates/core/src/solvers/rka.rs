use alloc::boxed::Box;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{finite_or_diverged, Engine, SolverConfig, Step};
use crate::error::{check_len, Error, Result};
use crate::linalg::{axpy, dot, DenseMatrix};
use crate::rng::Prng;
use crate::sampling::NormWeighted;

/// Randomized Kaczmarz with averaging. Each iteration draws `q` rows
/// (norm-weighted, with replacement), computes every single-row update from
/// the same iterate and applies their weighted mean. The `q` updates would
/// run on separate threads; here they run one after another.
#[derive(Debug)]
pub struct RkaEngine<'a> {
    a: &'a DenseMatrix,
    b: &'a [f64],
    x: Vec<f64>,
    rows: NormWeighted,
    rng: Prng,
    q: usize,
    alpha: f64,
    weights: Option<Vec<f64>>,
    picks: Vec<(usize, f64)>,
    iteration: u64,
}

impl<'a> RkaEngine<'a> {
    pub fn new(a: &'a DenseMatrix, b: &'a [f64], config: &SolverConfig) -> Result<Self> {
        check_len("right-hand side", a.rows(), b.len())?;
        if config.q < 1 {
            return Err(Error::InvalidParameter("q must be at least 1".into()));
        }
        if let Some(w) = &config.weights {
            check_len("row weights", a.rows(), w.len())?;
            if let Some(bad) = w.iter().find(|w| !w.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "non-finite row weight {bad}"
                )));
            }
        }
        Ok(Self {
            a,
            b,
            x: vec![0.0; a.cols()],
            rows: NormWeighted::new(a),
            rng: Prng::from_seed(config.seed),
            q: config.q,
            alpha: config.alpha,
            weights: config.weights.clone(),
            picks: Vec::with_capacity(config.q),
            iteration: 0,
        })
    }
}

impl Engine for RkaEngine<'_> {
    fn step(&mut self) -> Result<Step> {
        self.picks.clear();
        for _ in 0..self.q {
            let i = self.rows.next_row(&mut self.rng);
            let w = self.weights.as_ref().map_or(self.alpha, |w| w[i]);
            let scale = w * (self.b[i] - dot(self.a.row(i), &self.x)) / self.a.row_norm_sq(i);
            finite_or_diverged(scale, self.iteration)?;
            self.picks.push((i, scale));
        }
        let q = self.q as f64;
        for &(i, scale) in &self.picks {
            axpy(scale / q, self.a.row(i), &mut self.x);
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

/// Best uniform weight for RKA on a consistent system, given
/// `s_min = σ_min²/‖A‖_F²` and `s_max = σ_max²/‖A‖_F²`.
pub fn rka_optimal_alpha(q: usize, s_min: f64, s_max: f64) -> Result<f64> {
    if q < 1 {
        return Err(Error::InvalidParameter("q must be at least 1".into()));
    }
    if !(0.0 <= s_min && s_min <= s_max && s_max <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "need 0 ≤ s_min ≤ s_max ≤ 1, got s_min={s_min}, s_max={s_max}"
        )));
    }
    let qf = q as f64;
    // for q = 1 the gap bound 1/(q−1) is infinite and the first branch applies
    let first_branch = q == 1 || s_max - s_min <= 1.0 / (qf - 1.0);
    Ok(if first_branch {
        qf / (1.0 + (qf - 1.0) * s_min)
    } else {
        2.0 * qf / (1.0 + (qf - 1.0) * (s_min + s_max))
    })
}
