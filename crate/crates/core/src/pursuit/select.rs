//! Projection-based selection among potential atoms: fit `y` jointly on the
//! previous support and the candidates, discard the coefficients of the
//! previous support, and rank the candidates by coefficient amplitude.

use crate::error::{PursuitError, Result};
use crate::linalg::{least_squares_on_support, rank_by_amplitude, DenseMatrix, SupportSet};
use crate::scalar::Scalar;

use super::Tally;

/// Counts one projection. Returns candidates ordered by decreasing projected
/// amplitude, truncated to `count`.
pub(crate) fn project_and_rank<T: Scalar>(
    a: &DenseMatrix<T>,
    y: &[T],
    support: &SupportSet,
    potential: &SupportSet,
    count: usize,
    tally: &mut Tally,
) -> Result<Vec<usize>> {
    if potential.is_empty() {
        return Err(PursuitError::InvalidArgument("potential atom set is empty".into()));
    }
    if !support.is_disjoint(potential) {
        return Err(PursuitError::InvalidArgument("potential atoms overlap the previous support".into()));
    }
    let joint = support.union(potential);
    let ls = least_squares_on_support(a, y, &joint)?;
    tally.counters.projections += 1;
    tally.warnings.rank_deficient |= ls.ill_conditioned;
    let pairs = potential.iter().copied().zip(ls.coefficients[support.len()..].iter().copied()).collect();
    Ok(rank_by_amplitude(pairs, count))
}

/// Index of the potential atom with the largest projected coefficient.
/// The result always belongs to `potential`.
pub fn proj_atom_index<T: Scalar>(
    a: &DenseMatrix<T>,
    y: &[T],
    support: &SupportSet,
    potential: &SupportSet,
    tally: &mut Tally,
) -> Result<usize> {
    Ok(project_and_rank(a, y, support, potential, 1, tally)?[0])
}

/// The `reduced` potential atoms with the largest projected coefficients,
/// by decreasing amplitude. `reduced` above `|potential|` is clamped and
/// flagged.
pub fn proj_multi_atom_indices<T: Scalar>(
    a: &DenseMatrix<T>,
    y: &[T],
    support: &SupportSet,
    potential: &SupportSet,
    reduced: usize,
    tally: &mut Tally,
) -> Result<SupportSet> {
    if reduced == 0 {
        return Err(PursuitError::InvalidArgument("reduced candidate count L' must be at least 1".into()));
    }
    if reduced > potential.len() {
        tally.warnings.candidates_clamped = true;
    }
    SupportSet::from_indices(project_and_rank(a, y, support, potential, reduced, tally)?)
}
