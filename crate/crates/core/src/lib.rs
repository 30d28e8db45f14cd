//! Greedy sparse recovery.
//!
//! Given `y = A x + w` with a `K`-sparse `x`, the pursuits in [`pursuit`]
//! estimate the support of `x` atom by atom. Besides the classic OMP, OLS and
//! subspace pursuit, three selection rules trade extra projections for better
//! atom choices:
//!
//! * POMP refits the top-`L` matched-filter atoms jointly and keeps the one
//!   with the largest coefficient.
//! * LAOLS scores each of the top-`L` atoms by the residual norm OMP would
//!   reach after taking it.
//! * SOLS first cuts the `L` candidates down by joint projection, then runs
//!   the look-ahead on the survivors.
//!
//! ```
//! use atomsel_core::{omp, laols, Matrix, PursuitConfig};
//!
//! let a = Matrix::identity(6);
//! let y = [0.0, 2.0, 0.0, -3.0, 0.0, 0.5];
//! let cfg = PursuitConfig::new(2).with_potential_atoms(2);
//! assert_eq!(omp(&a, &y, &cfg).unwrap().support.as_slice(), &[3, 1]);
//! assert_eq!(laols(&a, &y, &cfg).unwrap().support.sorted(), vec![1, 3]);
//! ```
//!
//! Everything is generic over [`Scalar`] (`f32` or `f64`); the aliases below
//! fix the precision.

pub mod error;
pub mod linalg;
pub mod metrics;
pub mod pursuit;
mod scalar;
pub mod signal;

pub use error::{PursuitError, Result};
pub use linalg::{
    gram_inverse_extend, gram_inverse_init, least_squares_on_support, matched_filter, residual_on_support,
    top_amplitude_indices, DenseMatrix, GramInverseState, LeastSquares, Residual, SupportSet,
};
pub use metrics::{support_of, MetricsAccumulator};
pub use pursuit::{
    laols, look_ahead_resid_norm, ols, omp, pomp, proj_atom_index, proj_multi_atom_indices, sols, sp, Algorithm,
    OpCounters, PursuitConfig, RecoveryResult, Tally, Warnings,
};
pub use scalar::Scalar;
pub use signal::{NoiseSpec, SeededRng, SignalKind, SparseSignal};

pub type Matrix = DenseMatrix<f64>;
pub type Matrix32 = DenseMatrix<f32>;
pub type Config = PursuitConfig<f64>;
pub type Config32 = PursuitConfig<f32>;
pub type Recovery = RecoveryResult<f64>;
pub type Recovery32 = RecoveryResult<f32>;
pub type Signal = SparseSignal<f64>;
pub type Signal32 = SparseSignal<f32>;
