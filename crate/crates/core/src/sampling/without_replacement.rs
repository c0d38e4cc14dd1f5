use alloc::vec::Vec;

use crate::rng::Prng;

/// When the row permutation is redrawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShufflePolicy {
    /// Shuffle once at construction; every pass repeats the same order.
    Once,
    /// Reshuffle at the start of every pass after the first.
    EachPass,
}

/// How the solver reaches the permuted rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StorageMode {
    /// Rows are read through the permutation array.
    TwoFold,
    /// The solver keeps a physically reordered copy of the system.
    Materialized,
}

/// Sampling without replacement: a Fisher–Yates permutation walked cyclically.
#[derive(Debug, Clone)]
pub struct WithoutReplacement {
    permutation: Vec<usize>,
    cursor: usize,
    policy: ShufflePolicy,
    epoch: u64,
    rng: Prng,
}

impl WithoutReplacement {
    pub fn new(m: usize, policy: ShufflePolicy, mut rng: Prng) -> Self {
        let mut permutation: Vec<usize> = (0..m).collect();
        rng.shuffle(&mut permutation);
        Self {
            permutation,
            cursor: 0,
            policy,
            epoch: 0,
            rng,
        }
    }

    pub fn policy(&self) -> ShufflePolicy {
        self.policy
    }

    /// The permutation the current pass walks.
    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    /// Incremented whenever the permutation changes.
    pub fn epoch(&self) -> u64 {
        self.epoch
    }

    /// Position inside the current pass and the row it maps to.
    #[inline]
    pub fn next_slot(&mut self) -> (usize, usize) {
        if self.cursor == self.permutation.len() {
            self.cursor = 0;
            if self.policy == ShufflePolicy::EachPass {
                self.rng.shuffle(&mut self.permutation);
                self.epoch += 1;
            }
        }
        let pos = self.cursor;
        self.cursor += 1;
        (pos, self.permutation[pos])
    }

    #[inline]
    pub fn next_row(&mut self) -> usize {
        self.next_slot().1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn take(w: &mut WithoutReplacement, n: usize) -> Vec<usize> {
        (0..n).map(|_| w.next_row()).collect()
    }

    #[test]
    fn shuffle_once_repeats_the_same_pass() {
        let mut w = WithoutReplacement::new(3, ShufflePolicy::Once, Prng::from_seed(9));
        let first = take(&mut w, 3);
        for _ in 0..5 {
            assert_eq!(take(&mut w, 3), first);
        }
        assert_eq!(w.epoch(), 0);
    }

    #[test]
    fn each_pass_is_a_permutation() {
        let mut w = WithoutReplacement::new(3, ShufflePolicy::EachPass, Prng::from_seed(9));
        let mut passes = Vec::new();
        for _ in 0..20 {
            let mut pass = take(&mut w, 3);
            passes.push(pass.clone());
            pass.sort_unstable();
            assert_eq!(pass, [0, 1, 2]);
        }
        passes.dedup();
        assert!(passes.len() > 1, "reshuffling never changed the order");
    }

    #[test]
    fn single_row() {
        for policy in [ShufflePolicy::Once, ShufflePolicy::EachPass] {
            let mut w = WithoutReplacement::new(1, policy, Prng::from_seed(1));
            assert!(take(&mut w, 10).iter().all(|&i| i == 0));
        }
    }
}
