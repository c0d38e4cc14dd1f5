//! Selectable-set bookkeeping for the NSSRK and GSSRK samplers.
//!
//! The set is stored through its complement (the rows currently blocked),
//! which stays tiny for dense matrices: NSSRK blocks one row, GSSRK blocks
//! the last row plus any previously blocked rows orthogonal to it.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::{dot, DenseMatrix};

/// Relative threshold below which a Gramian entry counts as zero.
pub const GRAMIAN_ZERO_TOL: f64 = 1e-12;

/// For each row, the sorted indices of the rows orthogonal to it.
#[derive(Debug, Clone)]
pub struct OrthogonalityPattern {
    orthogonal: Vec<Vec<usize>>,
}

impl OrthogonalityPattern {
    /// Scans all row pairs: `G_ij` is zero when
    /// `|⟨A⁽ⁱ⁾,A⁽ʲ⁾⟩| ≤ 1e-12·‖A⁽ⁱ⁾‖·‖A⁽ʲ⁾‖`.
    pub fn from_matrix(a: &DenseMatrix) -> Self {
        let m = a.rows();
        let norms: Vec<f64> = a.row_norms_sq().iter().map(|s| libm::sqrt(*s)).collect();
        let mut orthogonal = vec![Vec::new(); m];
        for i in 0..m {
            for j in i + 1..m {
                let g = dot(a.row(i), a.row(j));
                if libm::fabs(g) <= GRAMIAN_ZERO_TOL * norms[i] * norms[j] {
                    orthogonal[i].push(j);
                    orthogonal[j].push(i);
                }
            }
        }
        // pairs are pushed in increasing i then j, so row j's list is sorted too
        Self { orthogonal }
    }

    pub fn is_orthogonal(&self, i: usize, j: usize) -> bool {
        self.orthogonal[i].binary_search(&j).is_ok()
    }

    /// True when no two rows are orthogonal.
    pub fn is_fully_dense(&self) -> bool {
        self.orthogonal.iter().all(Vec::is_empty)
    }
}

#[derive(Debug, Clone)]
pub struct SelectableSet {
    blocked: Vec<bool>,
    blocked_rows: Vec<usize>,
}

impl SelectableSet {
    /// Every row starts selectable.
    pub fn new(m: usize) -> Self {
        Self {
            blocked: vec![false; m],
            blocked_rows: Vec::new(),
        }
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        !self.blocked[i]
    }

    pub fn is_empty(&self) -> bool {
        self.blocked_rows.len() == self.blocked.len()
    }

    pub fn len(&self) -> usize {
        self.blocked.len() - self.blocked_rows.len()
    }

    /// Members in increasing order.
    pub fn members(&self) -> Vec<usize> {
        (0..self.blocked.len())
            .filter(|&i| !self.blocked[i])
            .collect()
    }

    /// `𝒮_{k+1} = [m] \ {i_k}`.
    pub fn update_nssrk(&mut self, used: usize) {
        for &j in &self.blocked_rows {
            self.blocked[j] = false;
        }
        self.blocked_rows.clear();
        self.blocked[used] = true;
        self.blocked_rows.push(used);
    }

    /// `𝒮_{k+1} = (𝒮_k ∪ {j : G_{i_k j} ≠ 0}) \ {i_k}`.
    ///
    /// A blocked row stays blocked only when it is orthogonal to the row just used.
    pub fn update_gssrk(&mut self, used: usize, pattern: &OrthogonalityPattern) {
        let blocked = &mut self.blocked;
        self.blocked_rows.retain(|&j| {
            let keep = j != used && pattern.is_orthogonal(used, j);
            if !keep {
                blocked[j] = false;
            }
            keep
        });
        self.blocked[used] = true;
        self.blocked_rows.push(used);
    }
}
