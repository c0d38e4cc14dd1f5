//! Row and column index selection.
//!
//! Every strategy is a stateful selector advanced once per solver
//! iteration. [`RowSelector`] bundles them behind one `next` call; the
//! individual strategies are public for direct use and testing.

mod cumulative;
mod greedy;
mod quasi;
mod selectable;
mod without_replacement;

use alloc::format;
use alloc::string::String;
use core::fmt;
use core::str::FromStr;

pub use cumulative::CumulativeTable;
pub use greedy::Greedy;
pub use quasi::{quasirandom_row, radical_inverse, Halton, QuasiStream, Sobol};
pub use selectable::{OrthogonalityPattern, SelectableSet, GRAMIAN_ZERO_TOL};
pub use without_replacement::{ShufflePolicy, StorageMode, WithoutReplacement};

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::rng::Prng;

/// `k mod m` counter. The counter is stored already reduced, so it never overflows.
#[derive(Debug, Clone)]
pub struct Cyclic {
    m: usize,
    k: usize,
}

impl Cyclic {
    pub fn new(m: usize) -> Self {
        Self::starting_at(m, 0)
    }

    pub fn starting_at(m: usize, k: u64) -> Self {
        Self {
            m,
            k: (k % m as u64) as usize,
        }
    }

    #[inline]
    pub fn next_row(&mut self) -> usize {
        let i = self.k;
        self.k += 1;
        if self.k == self.m {
            self.k = 0;
        }
        i
    }
}

/// Uniform draw over `[0, m)`: `floor(u·m)`.
#[inline]
pub fn uniform_index(rng: &mut Prng, m: usize) -> usize {
    ((rng.next_f64() * m as f64) as usize).min(m - 1)
}

/// Rows drawn with probability `‖A⁽ˡ⁾‖² / ‖A‖_F²`.
#[derive(Debug, Clone)]
pub struct NormWeighted {
    table: CumulativeTable,
}

impl NormWeighted {
    pub fn new(a: &DenseMatrix) -> Self {
        Self {
            table: CumulativeTable::new(a.row_norms_sq()).expect("rows are nonzero"),
        }
    }

    pub fn table(&self) -> &CumulativeTable {
        &self.table
    }

    #[inline]
    pub fn next_row(&mut self, rng: &mut Prng) -> usize {
        self.table.sample(rng.next_f64())
    }
}

/// Columns drawn with probability `‖A₍ₗ₎‖² / ‖A‖_F²`.
#[derive(Debug, Clone)]
pub struct ColumnWeighted {
    table: CumulativeTable,
    norms_sq: alloc::vec::Vec<f64>,
}

impl ColumnWeighted {
    pub fn new(a: &DenseMatrix) -> Result<Self> {
        let norms_sq = a.column_norms_sq();
        if let Some(j) = norms_sq.iter().position(|s| !(*s > 0.0)) {
            return Err(Error::InvalidParameter(format!("column {j} has zero norm")));
        }
        Ok(Self {
            table: CumulativeTable::new(&norms_sq)?,
            norms_sq,
        })
    }

    pub fn table(&self) -> &CumulativeTable {
        &self.table
    }

    pub fn norms_sq(&self) -> &[f64] {
        &self.norms_sq
    }

    #[inline]
    pub fn next_col(&mut self, rng: &mut Prng) -> usize {
        self.table.sample(rng.next_f64())
    }
}

/// Selector kinds with their CLI spellings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelectorKind {
    Cyclic,
    Uniform,
    NormWeighted,
    WithoutReplacement {
        policy: ShufflePolicy,
        storage: StorageMode,
    },
    Halton {
        base: u32,
    },
    Sobol,
    Greedy,
    NonRepetitive,
    GramianSelectable,
}

impl SelectorKind {
    /// True for selectors whose choice depends on the live iterate.
    pub fn needs_iterate(self) -> bool {
        matches!(self, SelectorKind::Greedy)
    }
}

impl FromStr for SelectorKind {
    type Err = Error;

    /// Accepts `cyclic`, `uniform`, `norm`, `wor:once`, `wor:pass`,
    /// `halton:<base>`, `sobol`, `grk`, `nssrk`, `gssrk`. A `wor:*` id may
    /// carry a `:materialized` suffix to select the reordered-copy storage.
    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownId(String::from(s));
        let kind = match s {
            "cyclic" => SelectorKind::Cyclic,
            "uniform" => SelectorKind::Uniform,
            "norm" => SelectorKind::NormWeighted,
            "sobol" => SelectorKind::Sobol,
            "grk" => SelectorKind::Greedy,
            "nssrk" => SelectorKind::NonRepetitive,
            "gssrk" => SelectorKind::GramianSelectable,
            _ => {
                let mut parts = s.split(':');
                match (parts.next(), parts.next(), parts.next(), parts.next()) {
                    (Some("halton"), Some(base), None, None) => {
                        let base = base.parse::<u32>().map_err(|_| unknown())?;
                        if base < 2 {
                            return Err(Error::InvalidParameter(format!(
                                "halton base must be at least 2, got {base}"
                            )));
                        }
                        SelectorKind::Halton { base }
                    }
                    (Some("wor"), Some(policy), storage, None) => {
                        let policy = match policy {
                            "once" => ShufflePolicy::Once,
                            "pass" => ShufflePolicy::EachPass,
                            _ => return Err(unknown()),
                        };
                        let storage = match storage {
                            None | Some("twofold") => StorageMode::TwoFold,
                            Some("materialized") => StorageMode::Materialized,
                            _ => return Err(unknown()),
                        };
                        SelectorKind::WithoutReplacement { policy, storage }
                    }
                    _ => return Err(unknown()),
                }
            }
        };
        Ok(kind)
    }
}

impl fmt::Display for SelectorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SelectorKind::Cyclic => f.write_str("cyclic"),
            SelectorKind::Uniform => f.write_str("uniform"),
            SelectorKind::NormWeighted => f.write_str("norm"),
            SelectorKind::WithoutReplacement { policy, storage } => {
                let p = match policy {
                    ShufflePolicy::Once => "once",
                    ShufflePolicy::EachPass => "pass",
                };
                match storage {
                    StorageMode::TwoFold => write!(f, "wor:{p}"),
                    StorageMode::Materialized => write!(f, "wor:{p}:materialized"),
                }
            }
            SelectorKind::Halton { base } => write!(f, "halton:{base}"),
            SelectorKind::Sobol => f.write_str("sobol"),
            SelectorKind::Greedy => f.write_str("grk"),
            SelectorKind::NonRepetitive => f.write_str("nssrk"),
            SelectorKind::GramianSelectable => f.write_str("gssrk"),
        }
    }
}

#[derive(Debug, Clone)]
enum State {
    Cyclic(Cyclic),
    Uniform,
    NormWeighted(NormWeighted),
    WithoutReplacement(WithoutReplacement),
    Quasi(QuasiStream),
    Greedy(Greedy),
    Selectable {
        weights: NormWeighted,
        set: SelectableSet,
        pattern: Option<OrthogonalityPattern>,
    },
}

/// A row selector bound to one system and one seed.
#[derive(Debug, Clone)]
pub struct RowSelector {
    kind: SelectorKind,
    m: usize,
    state: State,
    rng: Prng,
    last: Option<usize>,
    anomalies: u64,
}

impl RowSelector {
    pub fn new(kind: SelectorKind, a: &DenseMatrix, seed: u64) -> Result<Self> {
        let m = a.rows();
        let mut rng = Prng::from_seed(seed);
        let state = match kind {
            SelectorKind::Cyclic => State::Cyclic(Cyclic::new(m)),
            SelectorKind::Uniform => State::Uniform,
            SelectorKind::NormWeighted => State::NormWeighted(NormWeighted::new(a)),
            SelectorKind::WithoutReplacement { policy, .. } => {
                // the permutation gets its own stream so shuffles never shift other draws
                let perm_rng = Prng::from_seed(rng.next_u64());
                State::WithoutReplacement(WithoutReplacement::new(m, policy, perm_rng))
            }
            SelectorKind::Halton { base } => State::Quasi(QuasiStream::Halton(Halton::new(base)?)),
            SelectorKind::Sobol => State::Quasi(QuasiStream::Sobol(Sobol::new())),
            SelectorKind::Greedy => State::Greedy(Greedy::new(a)),
            SelectorKind::NonRepetitive => State::Selectable {
                weights: NormWeighted::new(a),
                set: SelectableSet::new(m),
                pattern: None,
            },
            SelectorKind::GramianSelectable => State::Selectable {
                weights: NormWeighted::new(a),
                set: SelectableSet::new(m),
                pattern: Some(OrthogonalityPattern::from_matrix(a)),
            },
        };
        Ok(Self {
            kind,
            m,
            state,
            rng,
            last: None,
            anomalies: 0,
        })
    }

    pub fn kind(&self) -> SelectorKind {
        self.kind
    }

    pub fn rows(&self) -> usize {
        self.m
    }

    pub fn last_selected(&self) -> Option<usize> {
        self.last
    }

    /// Times the selectable set ran empty and the full row set was used instead.
    pub fn anomalies(&self) -> u64 {
        self.anomalies
    }

    /// The without-replacement state, if this is that kind of selector.
    pub fn without_replacement(&self) -> Option<&WithoutReplacement> {
        match &self.state {
            State::WithoutReplacement(w) => Some(w),
            _ => None,
        }
    }

    /// Current selectable set for NSSRK/GSSRK selectors.
    pub fn selectable_set(&self) -> Option<&SelectableSet> {
        match &self.state {
            State::Selectable { set, .. } => Some(set),
            _ => None,
        }
    }

    /// Next row index, or `None` when a residual-driven selector finds the
    /// system solved. `b` and `x` are only read by the greedy selector.
    #[inline]
    pub fn next(&mut self, a: &DenseMatrix, b: &[f64], x: &[f64]) -> Option<usize> {
        let i = match &mut self.state {
            State::Cyclic(c) => c.next_row(),
            State::Uniform => uniform_index(&mut self.rng, self.m),
            State::NormWeighted(w) => w.next_row(&mut self.rng),
            State::WithoutReplacement(w) => w.next_row(),
            State::Quasi(q) => quasirandom_row(q.next_point(), self.m),
            State::Greedy(g) => g.select(a, b, x, &mut self.rng)?,
            State::Selectable {
                weights,
                set,
                pattern,
            } => {
                let i = if set.is_empty() {
                    self.anomalies += 1;
                    log::warn!("selectable set empty; drawing from the full row set");
                    weights.next_row(&mut self.rng)
                } else {
                    loop {
                        let i = weights.next_row(&mut self.rng);
                        if set.contains(i) {
                            break i;
                        }
                    }
                };
                match pattern {
                    Some(p) => set.update_gssrk(i, p),
                    None => set.update_nssrk(i),
                }
                i
            }
        };
        self.last = Some(i);
        Some(i)
    }

    /// Position within the current pass, for materialized without-replacement storage.
    pub(crate) fn next_slot(&mut self) -> Option<(usize, usize)> {
        match &mut self.state {
            State::WithoutReplacement(w) => {
                let slot = w.next_slot();
                self.last = Some(slot.1);
                Some(slot)
            }
            _ => None,
        }
    }
}
