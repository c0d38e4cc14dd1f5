//! Seeded generators for the three synthetic dataset families.
//!
//! * DS1: row `i` is drawn from `N(μ_i, σ_i²)` with `μ_i ~ U(−5, 5)` and
//!   `σ_i ~ U(1, 20)`, which spreads row norms widely.
//! * DS2: a coherent matrix. The first row is `N(2, 20²)`; every later row
//!   copies its predecessor and redraws five distinct entries.
//! * DS3: a DS1 system with `N(0, 1)` noise added to `b`; the reference is
//!   the least-squares solution.
//!
//! The largest system is generated once and smaller ones are leading
//! blocks of it ([`GeneratedSystem::crop`]).

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{check_len, Error, Result};
use crate::linalg::{matvec, matvec_transpose, residual, DenseMatrix, DenseVector};
use crate::rng::Prng;
use crate::solvers::{CglsEngine, Engine};
use crate::system::DenseSystem;

/// Entries per row redrawn between consecutive DS2 rows.
pub const DS2_CHANGED_ENTRIES: usize = 5;
/// Mean and standard deviation of DS2 entries.
pub const DS2_MEAN: f64 = 2.0;
pub const DS2_STD_DEV: f64 = 20.0;
/// Standard deviation of the DS3 right-hand-side noise.
pub const DS3_NOISE_STD_DEV: f64 = 1.0;
/// Target for `‖Aᵀ(b − A x_LS)‖∞`.
pub const LS_NORMAL_RESIDUAL_TOL: f64 = 1e-8;

const NOISE_STREAM: u64 = 0x9e37_79b9_7f4a_7c15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Ds1,
    Ds2,
    Ds3,
}

impl Family {
    pub fn id(self) -> &'static str {
        match self {
            Family::Ds1 => "DS1",
            Family::Ds2 => "DS2",
            Family::Ds3 => "DS3",
        }
    }

    pub fn is_consistent(self) -> bool {
        self != Family::Ds3
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ds1" => Ok(Family::Ds1),
            "ds2" => Ok(Family::Ds2),
            "ds3" => Ok(Family::Ds3),
            _ => Err(Error::UnknownId(s.into())),
        }
    }
}

/// Everything needed to regenerate a dataset bit for bit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DatasetSpec {
    pub family: Family,
    pub m_max: usize,
    pub n_max: usize,
    pub seed: u64,
    /// Fixes every DS1/DS3 row's σ, giving rows of similar norm.
    pub fixed_sigma: Option<f64>,
}

impl DatasetSpec {
    pub fn new(family: Family, m_max: usize, n_max: usize, seed: u64) -> Self {
        Self {
            family,
            m_max,
            n_max,
            seed,
            fixed_sigma: None,
        }
    }

    pub fn with_fixed_sigma(mut self, sigma: f64) -> Self {
        self.fixed_sigma = Some(sigma);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_max < 1 || self.m_max < self.n_max {
            return Err(Error::InvalidParameter(format!(
                "need m ≥ n ≥ 1 (overdetermined), got m={} n={}",
                self.m_max, self.n_max
            )));
        }
        if self.family == Family::Ds2 && self.n_max < DS2_CHANGED_ENTRIES {
            return Err(Error::InvalidParameter(format!(
                "n < {DS2_CHANGED_ENTRIES}: DS2 redraws {DS2_CHANGED_ENTRIES} distinct columns per row"
            )));
        }
        if let Some(s) = self.fixed_sigma {
            if !(s > 0.0 && s.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "fixed sigma must be positive, got {s}"
                )));
            }
        }
        Ok(())
    }

    /// Seed of the DS3 noise stream.
    pub fn noise_seed(&self) -> u64 {
        self.seed ^ NOISE_STREAM
    }
}

/// A generated system together with the data needed to crop it.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedSystem {
    pub system: DenseSystem,
    pub spec: DatasetSpec,
    /// Solution used to build `b` (`x*` for DS1/DS2).
    pub x_generating: DenseVector,
    /// Per-row noise added to `b` (DS3 only).
    pub noise: Option<DenseVector>,
}

impl GeneratedSystem {
    pub fn generate(spec: &DatasetSpec) -> Result<Self> {
        match spec.family {
            Family::Ds1 => gen_ds1(spec),
            Family::Ds2 => gen_ds2(spec),
            Family::Ds3 => gen_ds3(spec),
        }
    }

    pub fn rows(&self) -> usize {
        self.system.rows()
    }

    pub fn cols(&self) -> usize {
        self.system.cols()
    }

    /// The reference solution: `x*` for consistent families, `x_LS` for DS3.
    pub fn reference(&self) -> &[f64] {
        self.system
            .reference()
            .expect("generated systems carry a reference")
    }

    /// Leading `m × n` block. `b` is rebuilt from the truncated solution
    /// (dropping columns breaks `b = Ax*`), DS3 re-adds the first `m` noise
    /// entries and re-solves for `x_LS`.
    pub fn crop(&self, m: usize, n: usize) -> Result<Self> {
        if m < n || n < 1 || m > self.rows() || n > self.cols() {
            return Err(Error::InvalidParameter(format!(
                "crop to {m}×{n} outside 1 ≤ n ≤ m, m ≤ {}, n ≤ {}",
                self.rows(),
                self.cols()
            )));
        }
        let a = self.system.a.submatrix(m, n)?;
        let x: Vec<f64> = self.x_generating[..n].to_vec();
        let noise = self.noise.as_ref().map(|e| DenseVector::from(&e[..m]));
        assemble(a, x, noise, self.spec)
    }
}

fn assemble(
    a: DenseMatrix,
    x: Vec<f64>,
    noise: Option<DenseVector>,
    spec: DatasetSpec,
) -> Result<GeneratedSystem> {
    let mut b = matvec(&a, &x)?.into_inner();
    let system = match &noise {
        None => DenseSystem::new(a, b)?.with_x_star(x.clone())?,
        Some(e) => {
            for (bi, ei) in b.iter_mut().zip(e.iter()) {
                *bi += ei;
            }
            let x_ls = least_squares_solution(&a, &b)?;
            DenseSystem::new(a, b)?.with_x_ls(x_ls)?
        }
    };
    Ok(GeneratedSystem {
        system,
        spec,
        x_generating: x.into(),
        noise,
    })
}

/// One DS1-style vector of length `n`: draw `μ ~ U(−5,5)` and `σ ~ U(1,20)`
/// (or the fixed σ), then `n` samples of `N(μ, σ²)`.
fn ds1_vector(rng: &mut Prng, n: usize, fixed_sigma: Option<f64>, out: &mut Vec<f64>) {
    let mean = rng.uniform(-5.0, 5.0);
    let sigma = fixed_sigma.unwrap_or_else(|| rng.uniform(1.0, 20.0));
    out.extend((0..n).map(|_| rng.normal(mean, sigma)));
}

fn ds1_matrix_and_solution(spec: &DatasetSpec) -> Result<(DenseMatrix, Vec<f64>)> {
    spec.validate()?;
    let (m, n) = (spec.m_max, spec.n_max);
    let mut rng = Prng::from_seed(spec.seed);
    let mut data = Vec::with_capacity(m * n);
    for _ in 0..m {
        loop {
            let start = data.len();
            ds1_vector(&mut rng, n, spec.fixed_sigma, &mut data);
            if data[start..].iter().any(|v| *v != 0.0) {
                break;
            }
            data.truncate(start);
        }
    }
    let mut x = Vec::with_capacity(n);
    ds1_vector(&mut rng, n, spec.fixed_sigma, &mut x);
    Ok((DenseMatrix::from_row_major(m, n, data)?, x))
}

pub fn gen_ds1(spec: &DatasetSpec) -> Result<GeneratedSystem> {
    if spec.family != Family::Ds1 {
        return Err(Error::InvalidParameter(format!(
            "gen_ds1 called with {}",
            spec.family
        )));
    }
    let (a, x) = ds1_matrix_and_solution(spec)?;
    assemble(a, x, None, *spec)
}

pub fn gen_ds2(spec: &DatasetSpec) -> Result<GeneratedSystem> {
    if spec.family != Family::Ds2 {
        return Err(Error::InvalidParameter(format!(
            "gen_ds2 called with {}",
            spec.family
        )));
    }
    spec.validate()?;
    let (m, n) = (spec.m_max, spec.n_max);
    let mut rng = Prng::from_seed(spec.seed);
    let mut data = Vec::with_capacity(m * n);
    data.extend((0..n).map(|_| rng.normal(DS2_MEAN, DS2_STD_DEV)));
    let mut picked = [0usize; DS2_CHANGED_ENTRIES];
    for i in 1..m {
        data.extend_from_within((i - 1) * n..i * n);
        let row = &mut data[i * n..];
        let mut count = 0;
        while count < DS2_CHANGED_ENTRIES {
            let j = rng.below(n);
            if !picked[..count].contains(&j) {
                picked[count] = j;
                count += 1;
            }
        }
        for &j in &picked {
            row[j] = rng.normal(DS2_MEAN, DS2_STD_DEV);
        }
    }
    let mut x = Vec::with_capacity(n);
    ds1_vector(&mut rng, n, None, &mut x);
    assemble(DenseMatrix::from_row_major(m, n, data)?, x, None, *spec)
}

pub fn gen_ds3(spec: &DatasetSpec) -> Result<GeneratedSystem> {
    if spec.family != Family::Ds3 {
        return Err(Error::InvalidParameter(format!(
            "gen_ds3 called with {}",
            spec.family
        )));
    }
    let (a, x) = ds1_matrix_and_solution(spec)?;
    let mut rng = Prng::from_seed(spec.noise_seed());
    let noise: Vec<f64> = (0..a.rows())
        .map(|_| rng.normal(0.0, DS3_NOISE_STD_DEV))
        .collect();
    assemble(a, x, Some(noise.into()), *spec)
}

/// Least-squares solution by CGLS, restarted from the current iterate with a
/// freshly computed residual until `‖Aᵀ(b − Ax)‖∞` stops improving or drops
/// below a tenth of [`LS_NORMAL_RESIDUAL_TOL`].
pub fn least_squares_solution(a: &DenseMatrix, b: &[f64]) -> Result<Vec<f64>> {
    check_len("right-hand side", a.rows(), b.len())?;
    let n = a.cols();
    let normal_residual = |x: &[f64]| -> Result<f64> {
        let r = residual(a, x, b)?;
        Ok(matvec_transpose(a, &r)?
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs())))
    };
    let mut x = vec![0.0; n];
    let mut best = normal_residual(&x)?;
    let mut stalls = 0;
    for _ in 0..50 {
        let mut eng = CglsEngine::starting_from(a, b, &x);
        for _ in 0..2 * n + 10 {
            if eng.step()? == crate::solvers::Step::Solved {
                break;
            }
        }
        let candidate = alloc::boxed::Box::new(eng).into_iterate();
        let achieved = normal_residual(&candidate)?;
        if achieved < best {
            x = candidate;
            best = achieved;
            stalls = 0;
        } else {
            stalls += 1;
        }
        if best <= 0.1 * LS_NORMAL_RESIDUAL_TOL || stalls >= 3 {
            break;
        }
    }
    if best > LS_NORMAL_RESIDUAL_TOL {
        return Err(Error::NoConvergence {
            what: "least-squares reference",
            achieved: best,
        });
    }
    Ok(x)
}
