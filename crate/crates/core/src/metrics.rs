//! Recovery quality measures pooled over trials.
//!
//! SRNR is a ratio of pooled energies, `Σ‖x‖² / Σ‖x − x̂‖²`, in dB. ASCE is the
//! mean support distortion `1 − |I ∩ Î| / K`. Sums are kept in `f64` whatever
//! the working precision.

use std::ops::{Add, AddAssign};

use crate::error::{PursuitError, Result};
use crate::linalg::{rank_by_amplitude, SupportSet};
use crate::scalar::Scalar;
use crate::signal::SparseSignal;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MetricsAccumulator {
    pub sum_signal_energy: f64,
    pub sum_error_energy: f64,
    pub sum_support_distortion: f64,
    pub trials: u64,
    pub sparsity: usize,
}

impl MetricsAccumulator {
    pub fn new(sparsity: usize) -> Self {
        Self { sparsity, ..Self::default() }
    }

    /// Adds one trial.
    pub fn accumulate<T: Scalar>(
        &mut self,
        x_true: &SparseSignal<T>,
        x_hat: &[T],
        support_hat: &SupportSet,
    ) -> Result<()> {
        if x_hat.len() != x_true.len() {
            return Err(PursuitError::DimensionMismatch(format!(
                "estimate has length {} but signal has length {}",
                x_hat.len(),
                x_true.len()
            )));
        }
        if self.sparsity == 0 {
            return Err(PursuitError::InvalidState("accumulator sparsity K must be at least 1".into()));
        }
        if support_hat.len() > self.sparsity {
            return Err(PursuitError::DimensionMismatch(format!(
                "estimated support has {} atoms, more than K = {}",
                support_hat.len(),
                self.sparsity
            )));
        }
        let dense = x_true.to_dense();
        let error: f64 = dense.iter().zip(x_hat).map(|(a, b)| (*a - *b).as_f64().powi(2)).sum();
        let hits = x_true.support().intersection_count(support_hat);
        self.sum_signal_energy += x_true.energy().as_f64();
        self.sum_error_energy += error;
        self.sum_support_distortion += 1.0 - hits as f64 / self.sparsity as f64;
        self.trials += 1;
        Ok(())
    }

    /// Combines two partial accumulators over the same `K`.
    pub fn merge(&self, other: &Self) -> Result<Self> {
        let sparsity = match (self.trials, other.trials) {
            (0, _) if self.sparsity == 0 => other.sparsity,
            (_, 0) if other.sparsity == 0 => self.sparsity,
            _ if self.sparsity == other.sparsity => self.sparsity,
            _ => {
                return Err(PursuitError::InvalidState(format!(
                    "cannot merge accumulators with K = {} and K = {}",
                    self.sparsity, other.sparsity
                )))
            }
        };
        Ok(Self {
            sum_signal_energy: self.sum_signal_energy + other.sum_signal_energy,
            sum_error_energy: self.sum_error_energy + other.sum_error_energy,
            sum_support_distortion: self.sum_support_distortion + other.sum_support_distortion,
            trials: self.trials + other.trials,
            sparsity,
        })
    }

    /// Pooled SRNR in dB; `+∞` when every trial was error-free.
    pub fn srnr_db(&self) -> Result<f64> {
        self.require_trials()?;
        if self.sum_error_energy == 0.0 {
            return Ok(f64::INFINITY);
        }
        Ok(10.0 * (self.sum_signal_energy / self.sum_error_energy).log10())
    }

    /// Average support-cardinality error in `[0, 1]`.
    pub fn asce(&self) -> Result<f64> {
        self.require_trials()?;
        Ok((self.sum_support_distortion / self.trials as f64).clamp(0.0, 1.0))
    }

    fn require_trials(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(PursuitError::InvalidState("no trials accumulated".into()));
        }
        Ok(())
    }
}

impl Add for MetricsAccumulator {
    type Output = Self;

    /// Panics on mismatched `K`; use [`MetricsAccumulator::merge`] to get an error instead.
    fn add(self, o: Self) -> Self {
        self.merge(&o).expect("mismatched sparsity")
    }
}

impl AddAssign for MetricsAccumulator {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

/// Indices of the `k` largest-amplitude entries of `x_hat`, lowest index on ties.
pub fn support_of<T: Scalar>(x_hat: &[T], k: usize) -> SupportSet {
    let pairs = x_hat.iter().copied().enumerate().collect();
    SupportSet::from_ordered_unchecked(rank_by_amplitude(pairs, k.min(x_hat.len())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn signal(n: usize, support: &[usize], values: &[f64]) -> SparseSignal<f64> {
        SparseSignal::new(n, SupportSet::from_indices(support.to_vec()).unwrap(), values.to_vec()).unwrap()
    }

    #[test]
    fn support_of_examples() {
        assert_eq!(support_of(&[0.1, -9.0, 0.0, 3.0], 2).sorted(), vec![1, 3]);
        assert_eq!(support_of(&[0.0f64; 4], 2).sorted(), vec![0, 1]);
        assert_eq!(support_of(&[0.0, 2.0, 0.0, -1.0, 0.0], 2).sorted(), vec![1, 3]);
    }

    #[test]
    fn srnr_trivial_ratios() {
        let mut acc = MetricsAccumulator::new(1);
        let x = signal(2, &[0], &[1.0]);
        acc.accumulate(&x, &[0.0, 0.0], &SupportSet::new()).unwrap();
        assert!((acc.srnr_db().unwrap() - 0.0).abs() < 1e-12);

        let mut acc = MetricsAccumulator::new(1);
        acc.accumulate(&x, &[0.9, 0.0], &SupportSet::from_indices(vec![0]).unwrap()).unwrap();
        assert!((acc.srnr_db().unwrap() - 20.0).abs() < 1e-9);
        assert_eq!(acc.asce().unwrap(), 0.0);
    }

    #[test]
    fn perfect_recovery_is_infinite() {
        let mut acc = MetricsAccumulator::new(2);
        let x = signal(4, &[1, 2], &[1.0, -2.0]);
        acc.accumulate(&x, &x.to_dense(), x.support()).unwrap();
        assert_eq!(acc.srnr_db().unwrap(), f64::INFINITY);
    }

    #[test]
    fn empty_accumulator_is_invalid() {
        let acc = MetricsAccumulator::new(3);
        assert!(matches!(acc.srnr_db(), Err(PursuitError::InvalidState(_))));
        assert!(matches!(acc.asce(), Err(PursuitError::InvalidState(_))));
    }

    #[test]
    fn rejects_mismatched_input() {
        let mut acc = MetricsAccumulator::new(1);
        let x = signal(3, &[0], &[1.0]);
        assert!(acc.accumulate(&x, &[1.0, 0.0], &SupportSet::new()).is_err());
        let too_many = SupportSet::from_indices(vec![0, 1]).unwrap();
        assert!(acc.accumulate(&x, &[1.0, 0.0, 0.0], &too_many).is_err());
        assert_eq!(acc.trials, 0);
    }

    #[test]
    fn merge_is_fieldwise() {
        let x = signal(3, &[0, 2], &[1.0, 1.0]);
        let mut a = MetricsAccumulator::new(2);
        let mut b = MetricsAccumulator::new(2);
        a.accumulate(&x, &[1.0, 0.0, 0.0], &SupportSet::from_indices(vec![0]).unwrap()).unwrap();
        b.accumulate(&x, &[0.0, 1.0, 0.0], &SupportSet::from_indices(vec![1]).unwrap()).unwrap();
        let m = a.merge(&b).unwrap();
        assert_eq!(m.trials, 2);
        assert_eq!(m.sum_signal_energy, 4.0);
        assert_eq!(m.sum_error_energy, 4.0);
        assert_eq!(m.asce().unwrap(), 0.75);
        assert_eq!(MetricsAccumulator::default().merge(&a).unwrap(), a);
        assert!(a.merge(&MetricsAccumulator::new(3)).is_err());
    }
}
