//! Greedy recovery algorithms.
//!
//! Serial pursuits grow the support one atom per iteration and share one
//! driver ([`serial`]): select an atom, project `y` onto the enlarged support,
//! and stop (rolling back the last step) as soon as the residual norm grows or
//! the support reaches `K` atoms. They differ only in how the next atom is
//! chosen:
//!
//! | algorithm | selection                                                        |
//! |-----------|------------------------------------------------------------------|
//! | OMP       | largest matched-filter output                                    |
//! | OLS       | smallest one-step residual over every remaining atom             |
//! | POMP      | top-L matched-filter atoms, re-ranked by a joint LS projection   |
//! | LAOLS     | top-L matched-filter atoms, ranked by look-ahead residual norm   |
//! | SOLS      | POMP-style reduction from L to L′ atoms, then look-ahead ranking |
//!
//! Subspace pursuit ([`sp`]) instead refines a full `K`-element support.

mod lookahead;
mod select;
mod serial;
mod sp;

pub use lookahead::{laols, look_ahead_resid_norm, sols};
pub use select::{proj_atom_index, proj_multi_atom_indices};
pub use serial::{ols, omp, pomp};
pub use sp::sp;

use std::fmt;
use std::ops::{Add, AddAssign};
use std::str::FromStr;

use crate::error::{PursuitError, Result};
use crate::linalg::{least_squares_on_support, DenseMatrix, SupportSet, DEFAULT_BETA_TOLERANCE};
use crate::scalar::Scalar;

/// Knobs shared by all algorithms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PursuitConfig<T> {
    /// Target sparsity `K`.
    pub sparsity: usize,
    /// Number of potential atoms `L` examined per iteration (POMP/LAOLS/SOLS).
    pub potential_atoms: usize,
    /// SOLS reduction parameter `γ ∈ [0, 1)`.
    pub gamma: T,
    /// Use the recursive Gram-inverse for look-ahead and OLS projections.
    pub use_recursive_gram: bool,
    pub beta_tolerance: T,
}

impl<T: Scalar> PursuitConfig<T> {
    pub fn new(sparsity: usize) -> Self {
        Self {
            sparsity,
            potential_atoms: 1,
            gamma: T::zero(),
            use_recursive_gram: true,
            beta_tolerance: T::lit(DEFAULT_BETA_TOLERANCE),
        }
    }

    pub fn with_potential_atoms(mut self, l: usize) -> Self {
        self.potential_atoms = l;
        self
    }

    pub fn with_gamma(mut self, gamma: T) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn with_recursive_gram(mut self, on: bool) -> Self {
        self.use_recursive_gram = on;
        self
    }

    /// `L′ = L − ⌊γL⌋`.
    pub fn reduced_atoms(&self) -> usize {
        let cut = (self.gamma * T::lit(self.potential_atoms as f64)).floor();
        self.potential_atoms.saturating_sub(cut.to_usize().unwrap_or(usize::MAX))
    }

    pub fn validate(&self) -> Result<()> {
        if self.sparsity == 0 {
            return Err(PursuitError::InvalidArgument("sparsity K must be at least 1".into()));
        }
        if self.potential_atoms == 0 || self.potential_atoms > self.sparsity {
            return Err(PursuitError::InvalidArgument(format!(
                "potential atoms L must satisfy 1 <= L <= K = {}, got {}",
                self.sparsity, self.potential_atoms
            )));
        }
        if !(self.gamma >= T::zero() && self.gamma < T::one()) {
            return Err(PursuitError::InvalidArgument(format!("gamma must lie in [0, 1), got {}", self.gamma)));
        }
        if self.reduced_atoms() == 0 {
            return Err(PursuitError::InvalidArgument("gamma leaves no potential atoms (L' = 0)".into()));
        }
        if !(self.beta_tolerance >= T::zero()) {
            return Err(PursuitError::InvalidArgument("beta tolerance must be non-negative".into()));
        }
        Ok(())
    }
}

/// Operation counts. Totals include the look-ahead share.
///
/// A projection is one least-squares fit of `y` on a column subset, whether
/// solved directly or through the recursive Gram-inverse. LAOLS and SOLS reuse
/// the look-ahead's initial projection of the chosen atom as the iteration
/// residual, so their only other projections are SOLS's candidate reductions.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCounters {
    pub matched_filters: u64,
    pub projections: u64,
    pub lookahead_projections: u64,
    pub lookahead_matched_filters: u64,
}

impl Add for OpCounters {
    type Output = Self;

    fn add(self, o: Self) -> Self {
        Self {
            matched_filters: self.matched_filters + o.matched_filters,
            projections: self.projections + o.projections,
            lookahead_projections: self.lookahead_projections + o.lookahead_projections,
            lookahead_matched_filters: self.lookahead_matched_filters + o.lookahead_matched_filters,
        }
    }
}

impl AddAssign for OpCounters {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

/// Non-fatal conditions met during a run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Warnings {
    /// Some projection was rank-deficient or ill-conditioned; a minimum-norm solve was used.
    pub rank_deficient: bool,
    /// The residual-increase test fired and the last iteration was rolled back.
    pub early_stop: bool,
    /// Some look-ahead stopped before reaching `K` atoms.
    pub lookahead_early_stop: bool,
    /// Fewer than `L` (or `L′`) candidates were available in some iteration.
    pub candidates_clamped: bool,
    /// A recursive Gram extension was near-singular; the direct solve was used instead.
    pub gram_fallback: bool,
    /// Subspace pursuit was run with `2K > M`.
    pub undersampled: bool,
}

impl Warnings {
    pub fn any(&self) -> bool {
        self.rank_deficient
            || self.early_stop
            || self.lookahead_early_stop
            || self.candidates_clamped
            || self.gram_fallback
            || self.undersampled
    }
}

/// Counters plus warnings, threaded through the selection primitives.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Tally {
    pub counters: OpCounters,
    pub warnings: Warnings,
}

/// Output of any pursuit.
#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryResult<T> {
    /// Full-length estimate, zero off the support.
    pub estimate: Vec<T>,
    pub support: SupportSet,
    /// `‖r_k‖₂` of every retained iteration, `r₀` first.
    pub residual_norms: Vec<T>,
    pub counters: OpCounters,
    pub warnings: Warnings,
}

impl<T: Scalar> RecoveryResult<T> {
    pub fn final_residual_norm(&self) -> T {
        *self.residual_norms.last().expect("residual history is never empty")
    }
}

/// Algorithm selector for callers that dispatch at run time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Omp,
    Ols,
    Sp,
    Pomp,
    Laols,
    Sols,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] =
        [Algorithm::Omp, Algorithm::Ols, Algorithm::Sp, Algorithm::Pomp, Algorithm::Laols, Algorithm::Sols];

    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Omp => "omp",
            Algorithm::Ols => "ols",
            Algorithm::Sp => "sp",
            Algorithm::Pomp => "pomp",
            Algorithm::Laols => "laols",
            Algorithm::Sols => "sols",
        }
    }

    /// Whether the algorithm reads `L`.
    pub fn uses_potential_atoms(&self) -> bool {
        matches!(self, Algorithm::Pomp | Algorithm::Laols | Algorithm::Sols)
    }

    pub fn run<T: Scalar>(&self, a: &DenseMatrix<T>, y: &[T], config: &PursuitConfig<T>) -> Result<RecoveryResult<T>> {
        match self {
            Algorithm::Omp => omp(a, y, config),
            Algorithm::Ols => ols(a, y, config),
            Algorithm::Sp => sp(a, y, config),
            Algorithm::Pomp => pomp(a, y, config),
            Algorithm::Laols => laols(a, y, config),
            Algorithm::Sols => sols(a, y, config),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = PursuitError;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == lower)
            .ok_or_else(|| PursuitError::InvalidArgument(format!("unknown algorithm `{s}`")))
    }
}

/// Checks shared by every pursuit entry point.
pub(crate) fn validate_problem<T: Scalar>(a: &DenseMatrix<T>, y: &[T], config: &PursuitConfig<T>) -> Result<()> {
    config.validate()?;
    if y.len() != a.rows() {
        return Err(PursuitError::DimensionMismatch(format!(
            "observation has length {} but matrix has {} rows",
            y.len(),
            a.rows()
        )));
    }
    if let Some(bad) = y.iter().find(|v| !v.is_finite()) {
        return Err(PursuitError::InvalidArgument(format!("observation contains non-finite value {bad}")));
    }
    if config.sparsity > a.rows() {
        return Err(PursuitError::InvalidArgument(format!(
            "sparsity K = {} exceeds the number of measurements M = {}",
            config.sparsity,
            a.rows()
        )));
    }
    Ok(())
}

/// Result for `y = 0`: nothing to explain.
pub(crate) fn zero_observation<T: Scalar>(n: usize) -> RecoveryResult<T> {
    RecoveryResult {
        estimate: vec![T::zero(); n],
        support: SupportSet::new(),
        residual_norms: vec![T::zero()],
        counters: OpCounters::default(),
        warnings: Warnings::default(),
    }
}

/// Final least-squares estimate on `support`.
pub(crate) fn finish<T: Scalar>(
    a: &DenseMatrix<T>,
    y: &[T],
    support: SupportSet,
    residual_norms: Vec<T>,
    mut tally: Tally,
) -> Result<RecoveryResult<T>> {
    let mut estimate = vec![T::zero(); a.cols()];
    if !support.is_empty() {
        let ls = least_squares_on_support(a, y, &support)?;
        tally.warnings.rank_deficient |= ls.ill_conditioned;
        for (&j, &c) in support.iter().zip(&ls.coefficients) {
            estimate[j] = c;
        }
    }
    Ok(RecoveryResult { estimate, support, residual_norms, counters: tally.counters, warnings: tally.warnings })
}
