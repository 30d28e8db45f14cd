//! Look-ahead atom selection.
//!
//! Each candidate is scored by the residual norm that OMP-style continuation
//! would reach after tentatively adding it: keep picking the largest
//! matched-filter atom and projecting until the support holds `K` atoms or
//! the residual grows (in which case the last step is undone). The
//! continuation's projections run on the recursive Gram-inverse when enabled.

use crate::error::{PursuitError, Result};
use crate::linalg::{
    gram_inverse_init, residual_on_support, top_amplitude_indices, DenseMatrix, GramInverseState, Residual,
    SupportSet,
};
use crate::scalar::{norm2, Scalar};

use super::select::project_and_rank;
use super::serial::{potential_atoms, run_serial, Selection, SerialState};
use super::{validate_problem, PursuitConfig, RecoveryResult, Tally};

pub(crate) struct LookAhead<T> {
    /// Final residual norm of the continuation.
    pub score: T,
    /// Projection of `y` onto `support ∪ {candidate}`.
    pub initial: Residual<T>,
}

pub(crate) fn look_ahead<T: Scalar>(
    a: &DenseMatrix<T>,
    y: &[T],
    config: &PursuitConfig<T>,
    support: &SupportSet,
    base_gram: Option<&GramInverseState<T>>,
    candidate: usize,
    tally: &mut Tally,
) -> Result<LookAhead<T>> {
    let mut current = support.with(candidate)?;
    let initial = residual_on_support(a, y, &current)?;
    tally.counters.projections += 1;
    tally.counters.lookahead_projections += 1;
    tally.warnings.rank_deficient |= initial.ill_conditioned;

    let mut gram = match base_gram {
        Some(g) if config.use_recursive_gram => match g.extend(a, y, candidate, config.beta_tolerance) {
            Ok(next) => Some(next),
            Err(_) => {
                tally.warnings.gram_fallback = true;
                None
            }
        },
        _ => None,
    };
    let mut residual = initial.residual.clone();
    let mut norm = initial.norm;

    while current.len() < config.sparsity {
        let mf = a.transpose_mul(&residual);
        tally.counters.matched_filters += 1;
        tally.counters.lookahead_matched_filters += 1;
        let next = match top_amplitude_indices(&mf, 1, &current) {
            Ok(s) => s.as_slice()[0],
            Err(PursuitError::EmptyCandidates) => break,
            Err(e) => return Err(e),
        };
        tally.counters.projections += 1;
        tally.counters.lookahead_projections += 1;
        let extended = gram.as_ref().map(|g| g.extend(a, y, next, config.beta_tolerance));
        let (next_residual, next_gram) = match extended {
            Some(Ok(g)) => (g.residual(a, y), Some(g)),
            other => {
                if matches!(other, Some(Err(_))) {
                    tally.warnings.gram_fallback = true;
                }
                let r = residual_on_support(a, y, &current.with(next)?)?;
                tally.warnings.rank_deficient |= r.ill_conditioned;
                (r.residual, None)
            }
        };
        let next_norm = norm2(&next_residual);
        if next_norm > norm {
            tally.warnings.lookahead_early_stop = true;
            break;
        }
        current.push(next)?;
        residual = next_residual;
        norm = next_norm;
        gram = next_gram;
    }
    Ok(LookAhead { score: norm, initial })
}

/// Final residual norm reached by continuing OMP-style from `support ∪ {candidate}`
/// up to `config.sparsity` atoms.
pub fn look_ahead_resid_norm<T: Scalar>(
    a: &DenseMatrix<T>,
    y: &[T],
    config: &PursuitConfig<T>,
    support: &SupportSet,
    candidate: usize,
    tally: &mut Tally,
) -> Result<T> {
    validate_problem(a, y, config)?;
    support.check_bounds(a.cols())?;
    if candidate >= a.cols() {
        return Err(PursuitError::InvalidArgument(format!("atom {candidate} out of range")));
    }
    if support.contains(candidate) {
        return Err(PursuitError::InvalidArgument(format!("atom {candidate} is already in the support")));
    }
    if support.len() + 1 > config.sparsity {
        return Err(PursuitError::InvalidArgument(format!(
            "support of size {} leaves no room for a look-ahead with K = {}",
            support.len(),
            config.sparsity
        )));
    }
    let base = if config.use_recursive_gram {
        gram_inverse_init(a, y, support, config.beta_tolerance).ok()
    } else {
        None
    };
    Ok(look_ahead(a, y, config, support, base.as_ref(), candidate, tally)?.score)
}

/// Scores `candidates` and returns the winner's selection.
///
/// Distinct candidates often continue into the same final support, so their
/// scores agree up to rounding. Scores within `sqrt(eps)·‖y‖` count as tied
/// and go to the lower column index; the outcome then depends neither on
/// candidate order nor on which projection path produced the scores.
fn select_by_look_ahead<T: Scalar>(
    a: &DenseMatrix<T>,
    y: &[T],
    config: &PursuitConfig<T>,
    state: &SerialState<T>,
    candidates: &[usize],
    tally: &mut Tally,
) -> Result<Selection<T>> {
    let tie = T::epsilon().sqrt() * norm2(y);
    let mut best: Option<(usize, LookAhead<T>)> = None;
    for &j in candidates {
        let la = look_ahead(a, y, config, &state.support, state.gram.as_ref(), j, tally)?;
        let better = match &best {
            None => true,
            Some((bj, b)) => {
                if (la.score - b.score).abs() <= tie {
                    j < *bj
                } else {
                    la.score < b.score
                }
            }
        };
        if better {
            best = Some((j, la));
        }
    }
    let (index, la) = best.ok_or(PursuitError::EmptyCandidates)?;
    Ok(Selection { index, residual: Some(la.initial) })
}

/// Look-ahead OLS.
pub fn laols<T: Scalar>(a: &DenseMatrix<T>, y: &[T], config: &PursuitConfig<T>) -> Result<RecoveryResult<T>> {
    run_serial(a, y, config, true, |state, tally| {
        let potential = potential_atoms(a, state, config.potential_atoms, tally)?;
        select_by_look_ahead(a, y, config, state, potential.as_slice(), tally)
    })
}

/// Structured OLS: the `L` matched-filter candidates are first cut to
/// `L′ = L − ⌊γL⌋` by joint projection, then ranked by look-ahead.
pub fn sols<T: Scalar>(a: &DenseMatrix<T>, y: &[T], config: &PursuitConfig<T>) -> Result<RecoveryResult<T>> {
    let reduced = config.reduced_atoms();
    run_serial(a, y, config, true, |state, tally| {
        let potential = potential_atoms(a, state, config.potential_atoms, tally)?;
        let survivors = project_and_rank(a, y, &state.support, &potential, reduced, tally)?;
        select_by_look_ahead(a, y, config, state, &survivors, tally)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pursuit::omp;
    use crate::signal::{generate_sensing_matrix, SeededRng};

    #[test]
    fn depth_zero_look_ahead_is_plain_projection() {
        let mut rng = SeededRng::new(4);
        let a: DenseMatrix<f64> = generate_sensing_matrix(10, 20, &mut rng).unwrap();
        let y: Vec<f64> = (0..10).map(|_| rng.standard_normal()).collect();
        let support = SupportSet::from_indices(vec![3, 7]).unwrap();
        let cfg = PursuitConfig::new(3);
        let mut t = Tally::default();
        let got = look_ahead_resid_norm(&a, &y, &cfg, &support, 11, &mut t).unwrap();
        let want = residual_on_support(&a, &y, &support.with(11).unwrap()).unwrap().norm;
        assert_eq!(got, want);
        assert_eq!(t.counters.lookahead_projections, 1);
        assert_eq!(t.counters.lookahead_matched_filters, 0);
    }

    #[test]
    fn look_ahead_rejects_full_support() {
        let a = DenseMatrix::<f64>::identity(4);
        let support = SupportSet::from_indices(vec![0, 1]).unwrap();
        let mut t = Tally::default();
        assert!(look_ahead_resid_norm(&a, &[1.0; 4], &PursuitConfig::new(2), &support, 2, &mut t).is_err());
        assert!(look_ahead_resid_norm(&a, &[1.0; 4], &PursuitConfig::new(3), &support, 1, &mut t).is_err());
    }

    #[test]
    fn orthonormal_true_atom_gives_zero_look_ahead() {
        let a = DenseMatrix::<f64>::identity(6);
        let y = [0.0, 2.0, 0.0, -1.0, 0.5, 0.0];
        let mut t = Tally::default();
        let n = look_ahead_resid_norm(&a, &y, &PursuitConfig::new(3), &SupportSet::new(), 4, &mut t).unwrap();
        assert!(n <= 1e-10 * norm2(&y));
    }

    #[test]
    fn single_candidate_variants_match_omp() {
        let mut rng = SeededRng::new(12);
        let a: DenseMatrix<f64> = generate_sensing_matrix(15, 40, &mut rng).unwrap();
        let y: Vec<f64> = (0..15).map(|_| rng.standard_normal()).collect();
        let base = PursuitConfig::new(5);
        let o = omp(&a, &y, &base).unwrap();
        let l = laols(&a, &y, &base).unwrap();
        let s = sols(&a, &y, &base.with_potential_atoms(4).with_gamma(0.8)).unwrap();
        let p = crate::pursuit::pomp(&a, &y, &base.with_potential_atoms(4)).unwrap();
        assert_eq!(o.support, l.support);
        assert_eq!(o.estimate, l.estimate);
        assert_eq!(o.residual_norms, l.residual_norms);
        assert_eq!(p.support, s.support);
        assert_eq!(p.residual_norms, s.residual_norms);
    }
}
