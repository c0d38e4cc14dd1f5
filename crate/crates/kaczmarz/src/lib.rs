//! Std companion to `kaczmarz-core`: dataset and matrix files, the
//! calibrate-then-time benchmark harness, campaigns and the `kzm` CLI.

pub mod bench;
pub mod campaign;
pub mod cli;
mod error;
pub mod io;

pub use error::{Error, Result};
pub use kaczmarz_core;
