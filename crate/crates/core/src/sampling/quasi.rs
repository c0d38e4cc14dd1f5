//! One-dimensional low-discrepancy streams and their mapping to row indices.

use crate::error::{Error, Result};

/// Van der Corput / Halton stream in a single dimension.
#[derive(Debug, Clone)]
pub struct Halton {
    base: u64,
    index: u64,
}

impl Halton {
    pub fn new(base: u32) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidParameter(alloc::format!(
                "halton base must be at least 2, got {base}"
            )));
        }
        Ok(Self {
            base: base as u64,
            index: 0,
        })
    }

    pub fn base(&self) -> u32 {
        self.base as u32
    }

    /// Radical inverse of the next index (the first call uses index 1).
    pub fn next_point(&mut self) -> f64 {
        self.index = self.index.wrapping_add(1).max(1);
        radical_inverse(self.index, self.base)
    }
}

/// Digit reversal of `index` in `base` about the radix point. The reversed
/// digits and the denominator are accumulated as integers and divided once,
/// so base-2 values are exact.
pub fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let mut reversed: u128 = 0;
    let mut denom: u128 = 1;
    while index > 0 {
        reversed = reversed * base as u128 + (index % base) as u128;
        denom *= base as u128;
        index /= base;
    }
    reversed as f64 / denom as f64
}

const SOBOL_BITS: u32 = 52;

/// First coordinate of the Sobol sequence (direction numbers `v_k = 2⁻ᵏ`)
/// generated in Gray-code order.
#[derive(Debug, Clone, Default)]
pub struct Sobol {
    index: u64,
    state: u64,
}

impl Sobol {
    pub fn new() -> Self {
        Self::default()
    }

    /// Next point; the origin (index 0) is skipped, so the first call returns 0.5.
    pub fn next_point(&mut self) -> f64 {
        let c = self.index.trailing_ones();
        if c >= SOBOL_BITS {
            self.index = 0;
            self.state = 0;
            return self.next_point();
        }
        self.state ^= 1u64 << (SOBOL_BITS - 1 - c);
        self.index += 1;
        self.state as f64 / (1u64 << SOBOL_BITS) as f64
    }
}

/// `floor(point · m)` clamped to `m − 1`.
#[inline]
pub fn quasirandom_row(point: f64, m: usize) -> usize {
    ((point * m as f64) as usize).min(m - 1)
}

/// Either quasirandom stream behind one interface.
#[derive(Debug, Clone)]
pub enum QuasiStream {
    Halton(Halton),
    Sobol(Sobol),
}

impl QuasiStream {
    pub fn next_point(&mut self) -> f64 {
        match self {
            QuasiStream::Halton(h) => h.next_point(),
            QuasiStream::Sobol(s) => s.next_point(),
        }
    }
}
