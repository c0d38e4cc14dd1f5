//! Solver engines and the shared run contract.
//!
//! Each method is an [`Engine`]: a stepper that owns its iterate and
//! borrows the system read-only. The drivers in this module turn an
//! engine into a fixed-budget run ([`solve`]) or a run-to-tolerance
//! ([`iterations_to_tolerance`]).

mod cimmino;
mod kaczmarz;
mod krylov;
mod rek;
mod rgs;
mod rka;

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

pub use cimmino::CimminoEngine;
pub use kaczmarz::KaczmarzEngine;
pub use krylov::{CgEngine, CglsEngine};
pub use rek::RekEngine;
pub use rgs::RgsEngine;
pub use rka::{rka_optimal_alpha, RkaEngine};

use crate::error::{check_len, Error, Result};
use crate::linalg::{dist_sq, DenseVector};
use crate::sampling::{SelectorKind, ShufflePolicy, StorageMode};
use crate::system::DenseSystem;

/// Every method the crate implements, by CLI id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Ck,
    Rk,
    Srk,
    Srkwor,
    SrkHalton,
    SrkSobol,
    Grk,
    Nssrk,
    Gssrk,
    Rek,
    Rgs,
    Rka,
    Cimmino,
    Cg,
    Cgls,
}

impl Method {
    pub const ALL: [Method; 15] = [
        Method::Ck,
        Method::Rk,
        Method::Srk,
        Method::Srkwor,
        Method::SrkHalton,
        Method::SrkSobol,
        Method::Grk,
        Method::Nssrk,
        Method::Gssrk,
        Method::Rek,
        Method::Rgs,
        Method::Rka,
        Method::Cimmino,
        Method::Cg,
        Method::Cgls,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Method::Ck => "ck",
            Method::Rk => "rk",
            Method::Srk => "srk",
            Method::Srkwor => "srkwor",
            Method::SrkHalton => "srk-halton",
            Method::SrkSobol => "srk-sobol",
            Method::Grk => "grk",
            Method::Nssrk => "nssrk",
            Method::Gssrk => "gssrk",
            Method::Rek => "rek",
            Method::Rgs => "rgs",
            Method::Rka => "rka",
            Method::Cimmino => "cimmino",
            Method::Cg => "cg",
            Method::Cgls => "cgls",
        }
    }

    /// Row selector of the single-row Kaczmarz methods.
    pub fn selector(self) -> Option<SelectorKind> {
        Some(match self {
            Method::Ck => SelectorKind::Cyclic,
            Method::Rk => SelectorKind::NormWeighted,
            Method::Srk => SelectorKind::Uniform,
            Method::Srkwor => SelectorKind::WithoutReplacement {
                policy: ShufflePolicy::Once,
                storage: StorageMode::TwoFold,
            },
            Method::SrkHalton => SelectorKind::Halton { base: 2 },
            Method::SrkSobol => SelectorKind::Sobol,
            Method::Grk => SelectorKind::Greedy,
            Method::Nssrk => SelectorKind::NonRepetitive,
            Method::Gssrk => SelectorKind::GramianSelectable,
            _ => return None,
        })
    }

    /// True when no random draws are involved, so one run stands for all seeds.
    pub fn is_deterministic(self) -> bool {
        matches!(
            self,
            Method::Ck
                | Method::SrkHalton
                | Method::SrkSobol
                | Method::Cimmino
                | Method::Cg
                | Method::Cgls
        )
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.id() == s)
            .ok_or_else(|| Error::UnknownId(String::from(s)))
    }
}

/// Parameters of one solver run.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub method: Method,
    pub max_iterations: u64,
    /// Relaxation parameter; RKA uses it as the uniform row weight.
    pub alpha: f64,
    /// Rows averaged per RKA iteration.
    pub q: usize,
    /// Per-row RKA weights; `None` means uniform `alpha`.
    pub weights: Option<Vec<f64>>,
    pub seed: u64,
    /// Record `‖x⁽ᵏ⁾ − x_ref‖²` every this many iterations; 0 disables the trace.
    pub trace_stride: u64,
    /// Replaces the method's default row selector (single-row Kaczmarz methods only).
    pub selector: Option<SelectorKind>,
}

impl SolverConfig {
    pub fn new(method: Method, max_iterations: u64) -> Self {
        Self {
            method,
            max_iterations,
            alpha: 1.0,
            q: 1,
            weights: None,
            seed: 0,
            trace_stride: 0,
            selector: None,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_q(mut self, q: usize) -> Self {
        self.q = q;
        self
    }

    pub fn with_trace(mut self, stride: u64) -> Self {
        self.trace_stride = stride;
        self
    }

    pub fn with_selector(mut self, selector: SelectorKind) -> Self {
        self.selector = Some(selector);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_iterations < 1 {
            return Err(Error::InvalidParameter(
                "max_iterations must be at least 1".into(),
            ));
        }
        if self.q < 1 {
            return Err(Error::InvalidParameter("q must be at least 1".into()));
        }
        if !self.alpha.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "alpha must be finite, got {}",
                self.alpha
            )));
        }
        if self.selector.is_some() && self.method.selector().is_none() {
            return Err(Error::InvalidParameter(format!(
                "method {} does not take a row selector",
                self.method
            )));
        }
        Ok(())
    }
}

/// Outcome of one call to [`Engine::step`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    /// One iteration was performed.
    Advanced,
    /// The method detected an exactly solved system; nothing was done.
    Solved,
}

/// A method stepping one iterate.
pub trait Engine {
    /// Setup that belongs to the measured solve (CG forms `AᵀA` and `Aᵀb` here).
    fn begin(&mut self) -> Result<()> {
        Ok(())
    }

    fn step(&mut self) -> Result<Step>;

    fn iterate(&self) -> &[f64];

    fn into_iterate(self: Box<Self>) -> Vec<f64>;

    /// Selector fallbacks taken so far.
    fn anomalies(&self) -> u64 {
        0
    }
}

/// Monotonic nanosecond clock. The core has no clock of its own; std
/// callers pass one in.
pub trait Clock {
    fn now_ns(&self) -> u64;
}

/// Clock that always reads zero.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoClock;

impl Clock for NoClock {
    fn now_ns(&self) -> u64 {
        0
    }
}

/// One solver execution.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveRun {
    pub x_final: DenseVector,
    pub iterations_used: u64,
    /// `(iteration, ‖x⁽ᵏ⁾ − x_ref‖²)` pairs; empty when tracing is off.
    pub error_trace: Vec<(u64, f64)>,
    pub wall_time_ns: u64,
    pub anomalies: u64,
}

/// Builds the engine for `config.method`. Allocation and static selector
/// setup happen here, outside any timed region.
pub fn engine<'a>(system: &'a DenseSystem, config: &SolverConfig) -> Result<Box<dyn Engine + 'a>> {
    config.validate()?;
    let a = &system.a;
    let b: &[f64] = &system.b;
    Ok(match config.method {
        Method::Rek => Box::new(RekEngine::new(a, b, config.seed)?),
        Method::Rgs => Box::new(RgsEngine::new(a, b, config.seed)?),
        Method::Rka => Box::new(RkaEngine::new(a, b, config)?),
        Method::Cimmino => Box::new(CimminoEngine::new(a, b, config.alpha)),
        Method::Cg => Box::new(CgEngine::new(a, b)),
        Method::Cgls => Box::new(CglsEngine::new(a, b)),
        m => {
            let kind = config.selector.or(m.selector()).expect("row-action method");
            Box::new(KaczmarzEngine::new(a, b, kind, config.alpha, config.seed)?)
        }
    })
}

/// Runs `config.max_iterations` steps (fewer if the engine reports the
/// system solved). The clock brackets `begin` plus the iteration loop.
pub fn solve_with_clock(
    system: &DenseSystem,
    config: &SolverConfig,
    clock: &dyn Clock,
) -> Result<SolveRun> {
    let mut eng = engine(system, config)?;
    let reference = if config.trace_stride > 0 {
        let r = system.reference().ok_or_else(|| {
            Error::InvalidParameter("an error trace needs a reference solution".into())
        })?;
        check_len("reference solution", system.cols(), r.len())?;
        Some(r)
    } else {
        None
    };
    let mut trace = Vec::new();

    let start = clock.now_ns();
    eng.begin()?;
    let mut used = 0;
    while used < config.max_iterations {
        if eng.step()? == Step::Solved {
            break;
        }
        used += 1;
        if let Some(r) = reference {
            if used % config.trace_stride == 0 {
                trace.push((used, dist_sq(eng.iterate(), r)));
            }
        }
    }
    let wall_time_ns = clock.now_ns().saturating_sub(start);

    let anomalies = eng.anomalies();
    Ok(SolveRun {
        x_final: eng.into_iterate().into(),
        iterations_used: used,
        error_trace: trace,
        wall_time_ns,
        anomalies,
    })
}

pub fn solve(system: &DenseSystem, config: &SolverConfig) -> Result<SolveRun> {
    solve_with_clock(system, config, &NoClock)
}

fn with_method(config: &SolverConfig, method: Method) -> SolverConfig {
    SolverConfig {
        method,
        ..config.clone()
    }
}

/// Single-row Kaczmarz run with an explicit selector (covers CK, RK, SRK,
/// SRKWOR, the quasirandom variants, GRK, NSSRK and GSSRK).
pub fn run_kaczmarz(
    system: &DenseSystem,
    selector: SelectorKind,
    config: &SolverConfig,
) -> Result<SolveRun> {
    let method = if config.method.selector().is_some() {
        config.method
    } else {
        Method::Rk
    };
    solve(system, &with_method(config, method).with_selector(selector))
}

pub fn run_rek(system: &DenseSystem, config: &SolverConfig) -> Result<SolveRun> {
    solve(system, &with_method(config, Method::Rek))
}

pub fn run_rgs(system: &DenseSystem, config: &SolverConfig) -> Result<SolveRun> {
    solve(system, &with_method(config, Method::Rgs))
}

pub fn run_rka(system: &DenseSystem, config: &SolverConfig) -> Result<SolveRun> {
    solve(system, &with_method(config, Method::Rka))
}

pub fn run_cimmino(system: &DenseSystem, config: &SolverConfig) -> Result<SolveRun> {
    solve(system, &with_method(config, Method::Cimmino))
}

pub fn run_cg(system: &DenseSystem, config: &SolverConfig) -> Result<SolveRun> {
    solve(system, &with_method(config, Method::Cg))
}

pub fn run_cgls(system: &DenseSystem, config: &SolverConfig) -> Result<SolveRun> {
    solve(system, &with_method(config, Method::Cgls))
}

/// `‖x − reference‖² < epsilon` (strict).
pub fn check_convergence(x: &[f64], reference: &[f64], epsilon: f64) -> Result<bool> {
    check_len("convergence reference", x.len(), reference.len())?;
    Ok(dist_sq(x, reference) < epsilon)
}

/// First iteration count `k ≥ 1` with `‖x⁽ᵏ⁾ − reference‖² < epsilon`,
/// checking after every step. `None` when `cap` steps are not enough. An
/// engine that reports the system solved stops the search at the current
/// count.
pub fn iterations_to_tolerance(
    system: &DenseSystem,
    config: &SolverConfig,
    reference: &[f64],
    epsilon: f64,
    cap: u64,
) -> Result<Option<u64>> {
    check_len("convergence reference", system.cols(), reference.len())?;
    if !(epsilon > 0.0) {
        return Err(Error::InvalidParameter("epsilon must be positive".into()));
    }
    let mut eng = engine(system, config)?;
    eng.begin()?;
    let mut k = 0;
    while k < cap {
        if eng.step()? == Step::Solved {
            return Ok(if dist_sq(eng.iterate(), reference) < epsilon {
                Some(k.max(1))
            } else {
                None
            });
        }
        k += 1;
        if dist_sq(eng.iterate(), reference) < epsilon {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

#[inline]
pub(crate) fn finite_or_diverged(value: f64, iteration: u64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::Diverged { iteration })
    }
}
