use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Normalized cumulative-weight table for discrete sampling by binary search.
#[derive(Debug, Clone)]
pub struct CumulativeTable {
    cumulative: Vec<f64>,
}

impl CumulativeTable {
    /// Builds the table from nonnegative weights with a positive sum.
    pub fn new(weights: &[f64]) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidParameter("empty weight vector".into()));
        }
        if weights.iter().any(|w| !(*w >= 0.0) || !w.is_finite()) {
            return Err(Error::InvalidParameter(
                "weights must be finite and nonnegative".into(),
            ));
        }
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return Err(Error::InvalidParameter("weights sum to zero".into()));
        }
        let mut acc = 0.0;
        let mut cumulative: Vec<f64> = weights
            .iter()
            .map(|w| {
                acc += w;
                acc / total
            })
            .collect();
        // rounding can leave the last entry a few ulps off 1
        *cumulative.last_mut().unwrap() = 1.0;
        Ok(Self { cumulative })
    }

    pub fn len(&self) -> usize {
        self.cumulative.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cumulative.is_empty()
    }

    pub fn entries(&self) -> &[f64] {
        &self.cumulative
    }

    /// Probability mass of index `i`.
    pub fn probability(&self, i: usize) -> f64 {
        let lo = if i == 0 { 0.0 } else { self.cumulative[i - 1] };
        self.cumulative[i] - lo
    }

    /// Maps `u ∈ [0, 1)` to the first index whose cumulative weight exceeds `u`.
    #[inline]
    pub fn sample(&self, u: f64) -> usize {
        let i = self.cumulative.partition_point(|&c| c <= u);
        i.min(self.cumulative.len() - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn probabilities_follow_weights() {
        let t = CumulativeTable::new(&[1.0, 4.0, 4.0]).unwrap();
        assert!((t.probability(0) - 1.0 / 9.0).abs() < 1e-15);
        assert!((t.probability(1) - 4.0 / 9.0).abs() < 1e-15);
        assert!((t.probability(2) - 4.0 / 9.0).abs() < 1e-15);
        assert_eq!(t.sample(0.0), 0);
        assert_eq!(t.sample(0.1111), 0);
        assert_eq!(t.sample(0.12), 1);
        assert_eq!(t.sample(0.99999), 2);
    }

    #[test]
    fn zero_weight_entries_are_never_drawn() {
        let t = CumulativeTable::new(&[0.0, 1.0, 0.0, 1.0, 0.0]).unwrap();
        for k in 0..1000 {
            let i = t.sample(k as f64 / 1000.0);
            assert!(i == 1 || i == 3, "{i}");
        }
    }

    #[test]
    fn rejects_degenerate_weights() {
        assert!(CumulativeTable::new(&[]).is_err());
        assert!(CumulativeTable::new(&[0.0, 0.0]).is_err());
        assert!(CumulativeTable::new(&[1.0, -1.0]).is_err());
        assert!(CumulativeTable::new(&[f64::NAN]).is_err());
    }
}
