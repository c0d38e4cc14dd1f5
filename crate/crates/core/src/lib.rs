//! Kaczmarz-type row-action solvers for dense overdetermined systems.
//!
//! The crate is `no_std` and needs only `alloc`. It contains:
//!
//! - [`linalg`]: row-major dense storage with cached row norms and the
//!   projection, residual and product kernels.
//! - [`sampling`]: row and column selectors (cyclic, norm-weighted,
//!   uniform, without replacement, Halton, Sobol, greedy and the
//!   selectable-set rules).
//! - [`solvers`]: one engine per method family behind a common step
//!   interface, plus fixed-budget and run-to-tolerance drivers.
//! - [`datasets`]: seeded generators for the DS1/DS2/DS3 families.
//!
//! File formats, timing and the CLI live in the std companion crate.
//!
//! ```
//! use kaczmarz_core::{linalg::DenseMatrix, solvers, DenseSystem, Method, SolverConfig};
//!
//! let a = DenseMatrix::from_rows(&[[1.0, 0.0], [1.0, 1.0], [0.0, 2.0]]).unwrap();
//! let system = DenseSystem::new(a, vec![1.0, 3.0, 4.0]).unwrap();
//! let run = solvers::solve(&system, &SolverConfig::new(Method::Rk, 500).with_seed(1)).unwrap();
//! assert!((run.x_final[0] - 1.0).abs() < 1e-9 && (run.x_final[1] - 2.0).abs() < 1e-9);
//! ```

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod datasets;
mod error;
pub mod linalg;
pub mod rng;
pub mod sampling;
pub mod solvers;
mod system;

pub use datasets::{DatasetSpec, Family, GeneratedSystem};
pub use error::{Error, Result};
pub use linalg::{DenseMatrix, DenseVector};
pub use sampling::{RowSelector, SelectorKind};
pub use solvers::{Method, SolveRun, SolverConfig};
pub use system::DenseSystem;
