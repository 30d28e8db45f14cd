//! Dense real linear algebra shared by every pursuit: matched filtering,
//! amplitude ranking, least squares restricted to a column subset, and the
//! recursive Gram-inverse used to accelerate repeated projections.

mod gram;
mod lstsq;
mod matrix;
mod support;

pub use gram::{gram_inverse_extend, gram_inverse_init, GramInverseState, DEFAULT_BETA_TOLERANCE};
pub use lstsq::{
    least_squares_on_support, residual_on_support, LeastSquares, Residual, CONDITION_WARNING,
};
pub use matrix::DenseMatrix;
pub use support::SupportSet;

pub(crate) use lstsq::spd_inverse;

use std::cmp::Ordering;

use crate::error::{PursuitError, Result};
use crate::scalar::Scalar;

/// Correlates every atom with `r`, i.e. returns `Aᵗr`.
pub fn matched_filter<T: Scalar>(a: &DenseMatrix<T>, r: &[T]) -> Result<Vec<T>> {
    if r.len() != a.rows() {
        return Err(PursuitError::DimensionMismatch(format!(
            "matched filter: vector has length {} but matrix has {} rows",
            r.len(),
            a.rows()
        )));
    }
    Ok(a.transpose_mul(r))
}

/// Total order used by every amplitude ranking: larger `|v|` first, lower
/// index first among equal amplitudes.
#[inline]
pub(crate) fn amplitude_order<T: Scalar>(a: (usize, T), b: (usize, T)) -> Ordering {
    b.1.abs()
        .partial_cmp(&a.1.abs())
        .unwrap_or(Ordering::Equal)
        .then(a.0.cmp(&b.0))
}

/// Ranks `(index, value)` pairs by amplitude and keeps the first `count`.
pub(crate) fn rank_by_amplitude<T: Scalar>(mut pairs: Vec<(usize, T)>, count: usize) -> Vec<usize> {
    let count = count.min(pairs.len());
    if count == 0 {
        return Vec::new();
    }
    if count < pairs.len() {
        pairs.select_nth_unstable_by(count - 1, |x, y| amplitude_order(*x, *y));
        pairs.truncate(count);
    }
    pairs.sort_unstable_by(|x, y| amplitude_order(*x, *y));
    pairs.into_iter().map(|(i, _)| i).collect()
}

/// Indices of the `count` largest `|v_i|` outside `excluded`, ordered by
/// decreasing amplitude. Fewer than `count` are returned when the pool is
/// smaller.
pub fn top_amplitude_indices<T: Scalar>(
    v: &[T],
    count: usize,
    excluded: &SupportSet,
) -> Result<SupportSet> {
    if count == 0 {
        return Err(PursuitError::InvalidArgument(
            "top_amplitude_indices: count must be at least 1".into(),
        ));
    }
    let mut mask = vec![false; v.len()];
    for &i in excluded.iter() {
        if i < v.len() {
            mask[i] = true;
        }
    }
    if count == 1 {
        let mut best: Option<(usize, T)> = None;
        for (i, &x) in v.iter().enumerate() {
            if mask[i] {
                continue;
            }
            best = match best {
                Some(b) if amplitude_order(b, (i, x)) != Ordering::Greater => Some(b),
                _ => Some((i, x)),
            };
        }
        return best
            .map(|(i, _)| SupportSet::from_ordered_unchecked(vec![i]))
            .ok_or(PursuitError::EmptyCandidates);
    }
    let pairs: Vec<(usize, T)> = v
        .iter()
        .enumerate()
        .filter(|(i, _)| !mask[*i])
        .map(|(i, &x)| (i, x))
        .collect();
    if pairs.is_empty() {
        return Err(PursuitError::EmptyCandidates);
    }
    Ok(SupportSet::from_ordered_unchecked(rank_by_amplitude(pairs, count)))
}
