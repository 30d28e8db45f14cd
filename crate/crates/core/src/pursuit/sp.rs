use crate::error::Result;
use crate::linalg::{least_squares_on_support, rank_by_amplitude, residual_on_support, top_amplitude_indices};
use crate::linalg::{DenseMatrix, SupportSet};
use crate::scalar::Scalar;

use super::{finish, validate_problem, zero_observation, PursuitConfig, RecoveryResult, Tally};

/// Subspace pursuit. Refines a `K`-element support: merge it with the top-`K`
/// matched-filter atoms, refit, keep the `K` largest coefficients, and stop
/// once the residual grows. At most `K` refinement rounds are run.
pub fn sp<T: Scalar>(a: &DenseMatrix<T>, y: &[T], config: &PursuitConfig<T>) -> Result<RecoveryResult<T>> {
    validate_problem(a, y, config)?;
    if y.iter().all(|v| *v == T::zero()) {
        return Ok(zero_observation(a.cols()));
    }
    let k = config.sparsity;
    let mut tally = Tally::default();
    tally.warnings.undersampled = 2 * k > a.rows();

    let none = SupportSet::new();
    tally.counters.matched_filters += 1;
    let mut support = top_amplitude_indices(&a.transpose_mul(y), k, &none)?;
    tally.counters.projections += 1;
    let first = residual_on_support(a, y, &support)?;
    tally.warnings.rank_deficient |= first.ill_conditioned;
    let mut residual = first.residual;
    let mut norm = first.norm;
    let mut norms = vec![norm];

    for _ in 0..k {
        tally.counters.matched_filters += 1;
        let potential = top_amplitude_indices(&a.transpose_mul(&residual), k, &none)?;
        let merged = support.union(&potential);
        tally.counters.projections += 1;
        let ls = least_squares_on_support(a, y, &merged)?;
        tally.warnings.rank_deficient |= ls.ill_conditioned;
        let pairs = merged.iter().copied().zip(ls.coefficients.iter().copied()).collect();
        let candidate = SupportSet::from_indices(rank_by_amplitude(pairs, k))?;
        tally.counters.projections += 1;
        let next = residual_on_support(a, y, &candidate)?;
        tally.warnings.rank_deficient |= next.ill_conditioned;
        if next.norm > norm {
            tally.warnings.early_stop = true;
            break;
        }
        support = candidate;
        residual = next.residual;
        norm = next.norm;
        norms.push(norm);
    }
    finish(a, y, support, norms, tally)
}
