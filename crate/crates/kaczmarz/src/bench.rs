//! Calibrate-then-time measurement.
//!
//! [`calibrate`] finds, per seed, the first iteration count whose iterate
//! is within `epsilon` of the reference and aggregates by median.
//! [`timed_run`] then runs exactly that many iterations per seed with no
//! convergence checks and times each run.

use std::time::Instant;

use kaczmarz_core::linalg::dist_sq;
use kaczmarz_core::solvers::{self, Clock};
use kaczmarz_core::{DenseSystem, SolverConfig};

use crate::error::{Error, Result};

pub const DEFAULT_EPSILON: f64 = 1e-8;
pub const DEFAULT_SEEDS: usize = 10;
pub const DEFAULT_ITERATION_CAP: u64 = 10_000_000;

/// Wall clock backed by [`Instant`], reporting nanoseconds since creation.
#[derive(Debug, Clone, Copy)]
pub struct MonotonicClock {
    origin: Instant,
}

impl MonotonicClock {
    pub fn new() -> Self {
        Self {
            origin: Instant::now(),
        }
    }
}

impl Default for MonotonicClock {
    fn default() -> Self {
        Self::new()
    }
}

impl Clock for MonotonicClock {
    fn now_ns(&self) -> u64 {
        self.origin.elapsed().as_nanos() as u64
    }
}

/// Seed of run `run` under `master`; the same derivation as
/// `Prng::stream`.
pub fn run_seed(master: u64, run: u64) -> u64 {
    master ^ run
}

pub fn run_seeds(master: u64, count: usize) -> Vec<u64> {
    (0..count as u64).map(|r| run_seed(master, r)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub enum Calibration {
    Converged {
        /// Median of `per_seed` (the upper middle element for even counts).
        k: u64,
        per_seed: Vec<u64>,
    },
    /// Some seed did not reach the tolerance within `cap` iterations.
    CapReached { cap: u64, seed: u64 },
}

impl Calibration {
    pub fn k(&self) -> Option<u64> {
        match self {
            Calibration::Converged { k, .. } => Some(*k),
            Calibration::CapReached { .. } => None,
        }
    }
}

/// Median iteration count to `‖x⁽ᵏ⁾ − reference‖² < epsilon` over `seeds`.
/// Deterministic methods use only the first seed. Calibration stops at the
/// first seed that exhausts `cap`.
pub fn calibrate(
    system: &DenseSystem,
    template: &SolverConfig,
    reference: &[f64],
    epsilon: f64,
    seeds: &[u64],
    cap: u64,
) -> Result<Calibration> {
    if seeds.is_empty() {
        return Err(Error::Usage("calibration needs at least one seed".into()));
    }
    let seeds = if template.method.is_deterministic() {
        &seeds[..1]
    } else {
        seeds
    };
    let mut per_seed = Vec::with_capacity(seeds.len());
    for &seed in seeds {
        let config = template.clone().with_seed(seed);
        match solvers::iterations_to_tolerance(system, &config, reference, epsilon, cap)? {
            Some(k) => per_seed.push(k),
            None => return Ok(Calibration::CapReached { cap, seed }),
        }
    }
    let mut sorted = per_seed.clone();
    sorted.sort_unstable();
    Ok(Calibration::Converged {
        k: sorted[sorted.len() / 2],
        per_seed,
    })
}

/// Per-seed results of a fixed-budget timing run.
#[derive(Debug, Clone, PartialEq)]
pub struct TimedRun {
    pub k: u64,
    pub seeds: Vec<u64>,
    /// One entry per seed; a seed that failed has time 0.
    pub times_ns: Vec<u64>,
    /// `‖x_final − reference‖²` per seed; NaN for failed seeds.
    pub final_sq_errors: Vec<f64>,
    /// Average of the per-seed final iterates (failed seeds excluded).
    pub x_mean: Vec<f64>,
    /// Seeds whose run returned an error.
    pub failed_seeds: Vec<u64>,
}

impl TimedRun {
    pub fn mean_time_ns(&self) -> f64 {
        mean(self.times_ns.iter().map(|&t| t as f64))
    }

    /// Sample standard deviation of the per-seed times (0 for one seed).
    pub fn std_time_ns(&self) -> f64 {
        let n = self.times_ns.len();
        if n < 2 {
            return 0.0;
        }
        let mu = self.mean_time_ns();
        let ss: f64 = self.times_ns.iter().map(|&t| (t as f64 - mu).powi(2)).sum();
        (ss / (n - 1) as f64).sqrt()
    }

    /// Standard deviation as a percentage of the mean.
    pub fn percent_std(&self) -> f64 {
        let mu = self.mean_time_ns();
        if mu > 0.0 {
            100.0 * self.std_time_ns() / mu
        } else {
            0.0
        }
    }

    pub fn mean_final_sq_error(&self) -> f64 {
        mean(self.final_sq_errors.iter().copied())
    }
}

fn mean(values: impl ExactSizeIterator<Item = f64>) -> f64 {
    let n = values.len();
    if n == 0 {
        return f64::NAN;
    }
    values.sum::<f64>() / n as f64
}

/// Runs exactly `k` iterations per seed after one untimed warm-up run.
/// Engine construction happens before the clock starts; CG's normal
/// equations are formed inside the timed region.
pub fn timed_run(
    system: &DenseSystem,
    template: &SolverConfig,
    reference: &[f64],
    k: u64,
    seeds: &[u64],
) -> Result<TimedRun> {
    if seeds.is_empty() {
        return Err(Error::Usage("a timed run needs at least one seed".into()));
    }
    let clock = MonotonicClock::new();
    let base = SolverConfig {
        max_iterations: k,
        trace_stride: 0,
        ..template.clone()
    };
    // Warm-up; its outcome is reported by the timed runs.
    let _ = solvers::solve(system, &base.clone().with_seed(seeds[0]));

    let n = system.cols();
    let mut out = TimedRun {
        k,
        seeds: seeds.to_vec(),
        times_ns: Vec::with_capacity(seeds.len()),
        final_sq_errors: Vec::with_capacity(seeds.len()),
        x_mean: vec![0.0; n],
        failed_seeds: Vec::new(),
    };
    for &seed in seeds {
        match solvers::solve_with_clock(system, &base.clone().with_seed(seed), &clock) {
            Ok(run) => {
                out.times_ns.push(run.wall_time_ns);
                out.final_sq_errors.push(dist_sq(&run.x_final, reference));
                for (m, x) in out.x_mean.iter_mut().zip(run.x_final.iter()) {
                    *m += x;
                }
            }
            Err(e) => {
                log::warn!("seed {seed}: {e}");
                out.times_ns.push(0);
                out.final_sq_errors.push(f64::NAN);
                out.failed_seeds.push(seed);
            }
        }
    }
    let ok = seeds.len() - out.failed_seeds.len();
    if ok > 0 {
        out.x_mean.iter_mut().for_each(|m| *m /= ok as f64);
    }
    Ok(out)
}
