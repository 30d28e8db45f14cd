use crate::error::{PursuitError, Result};
use crate::linalg::{residual_on_support, top_amplitude_indices, DenseMatrix, GramInverseState, Residual, SupportSet};
use crate::scalar::{norm2, Scalar};

use super::select::project_and_rank;
use super::{finish, validate_problem, zero_observation, PursuitConfig, RecoveryResult, Tally};

/// Support, residual and (optionally) Gram-inverse of the last accepted iteration.
pub(crate) struct SerialState<T> {
    pub support: SupportSet,
    pub residual: Vec<T>,
    pub norm: T,
    /// `None` when the recursion is disabled or broke down.
    pub gram: Option<GramInverseState<T>>,
}

/// Atom chosen by a selection rule, with its projection residual when the
/// rule already computed it.
pub(crate) struct Selection<T> {
    pub index: usize,
    pub residual: Option<Residual<T>>,
}

impl<T> Selection<T> {
    pub(crate) fn bare(index: usize) -> Self {
        Self { index, residual: None }
    }
}

/// Shared serial loop: select, project, stop on residual growth or at `K` atoms.
pub(crate) fn run_serial<T, F>(
    a: &DenseMatrix<T>,
    y: &[T],
    config: &PursuitConfig<T>,
    maintain_gram: bool,
    mut select: F,
) -> Result<RecoveryResult<T>>
where
    T: Scalar,
    F: FnMut(&SerialState<T>, &mut Tally) -> Result<Selection<T>>,
{
    validate_problem(a, y, config)?;
    if y.iter().all(|v| *v == T::zero()) {
        return Ok(zero_observation(a.cols()));
    }
    let mut tally = Tally::default();
    let mut state = SerialState {
        support: SupportSet::new(),
        residual: y.to_vec(),
        norm: norm2(y),
        gram: (maintain_gram && config.use_recursive_gram).then(GramInverseState::empty),
    };
    let mut norms = vec![state.norm];

    while state.support.len() < config.sparsity {
        let selection = match select(&state, &mut tally) {
            Ok(s) => s,
            Err(PursuitError::EmptyCandidates) => break,
            Err(e) => return Err(e),
        };
        let grown = state.support.with(selection.index)?;
        let projected = match selection.residual {
            Some(r) => r,
            None => {
                tally.counters.projections += 1;
                residual_on_support(a, y, &grown)?
            }
        };
        tally.warnings.rank_deficient |= projected.ill_conditioned;
        if projected.norm > state.norm {
            tally.warnings.early_stop = true;
            break;
        }
        if let Some(g) = state.gram.take() {
            match g.extend(a, y, selection.index, config.beta_tolerance) {
                Ok(next) => state.gram = Some(next),
                Err(_) => tally.warnings.gram_fallback = true,
            }
        }
        state.support = grown;
        state.residual = projected.residual;
        state.norm = projected.norm;
        norms.push(state.norm);
    }
    finish(a, y, state.support, norms, tally)
}

/// Orthogonal matching pursuit.
pub fn omp<T: Scalar>(a: &DenseMatrix<T>, y: &[T], config: &PursuitConfig<T>) -> Result<RecoveryResult<T>> {
    run_serial(a, y, config, false, |state, tally| {
        let mf = a.transpose_mul(&state.residual);
        tally.counters.matched_filters += 1;
        Ok(Selection::bare(top_amplitude_indices(&mf, 1, &state.support)?.as_slice()[0]))
    })
}

/// Orthogonal least squares: every remaining atom is tried and the one with
/// the smallest one-step residual wins (lowest index on ties).
pub fn ols<T: Scalar>(a: &DenseMatrix<T>, y: &[T], config: &PursuitConfig<T>) -> Result<RecoveryResult<T>> {
    run_serial(a, y, config, true, |state, tally| {
        let mut best: Option<(usize, T)> = None;
        for i in (0..a.cols()).filter(|i| !state.support.contains(*i)) {
            tally.counters.projections += 1;
            let extended = state.gram.as_ref().map(|g| g.extend(a, y, i, config.beta_tolerance));
            let norm = match extended {
                Some(Ok(g)) => norm2(&g.residual(a, y)),
                other => {
                    if matches!(other, Some(Err(_))) {
                        tally.warnings.gram_fallback = true;
                    }
                    let r = residual_on_support(a, y, &state.support.with(i)?)?;
                    tally.warnings.rank_deficient |= r.ill_conditioned;
                    r.norm
                }
            };
            if best.is_none_or(|(_, b)| norm < b) {
                best = Some((i, norm));
            }
        }
        best.map(|(i, _)| Selection::bare(i)).ok_or(PursuitError::EmptyCandidates)
    })
}

/// Matched-filter candidates for one iteration, flagging a short pool.
pub(crate) fn potential_atoms<T: Scalar>(
    a: &DenseMatrix<T>,
    state: &SerialState<T>,
    count: usize,
    tally: &mut Tally,
) -> Result<SupportSet> {
    let mf = a.transpose_mul(&state.residual);
    tally.counters.matched_filters += 1;
    let potential = top_amplitude_indices(&mf, count, &state.support)?;
    if potential.len() < count {
        tally.warnings.candidates_clamped = true;
    }
    Ok(potential)
}

/// Projection-based OMP: the top-`L` matched-filter atoms are refit jointly
/// with the current support and the largest projected coefficient wins.
pub fn pomp<T: Scalar>(a: &DenseMatrix<T>, y: &[T], config: &PursuitConfig<T>) -> Result<RecoveryResult<T>> {
    run_serial(a, y, config, false, |state, tally| {
        let potential = potential_atoms(a, state, config.potential_atoms, tally)?;
        let ranked = project_and_rank(a, y, &state.support, &potential, 1, tally)?;
        Ok(Selection::bare(ranked[0]))
    })
}
