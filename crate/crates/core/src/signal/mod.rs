//! Random ensembles for the measurement model `y = A x + w`: Gaussian sensing
//! matrices with unit-norm columns, K-sparse Gaussian or binary signals, and
//! noise calibrated to a signal-to-measurement-noise ratio (SMNR).

mod dump;

pub use dump::{read_matrix, read_vector, write_matrix, write_vector, DumpError, DUMP_MAGIC};

use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{PursuitError, Result};
use crate::linalg::{DenseMatrix, SupportSet};
use crate::scalar::Scalar;

/// Deterministic pseudo-random stream (ChaCha20) tagged with its seed.
#[derive(Debug, Clone)]
pub struct SeededRng {
    seed: u64,
    stream: ChaCha20Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self { seed, stream: ChaCha20Rng::seed_from_u64(seed) }
    }

    /// Child stream whose seed is [`derive_seed`]`(self.seed, path)`.
    pub fn derive(&self, path: &[u64]) -> Self {
        Self::new(derive_seed(self.seed, path))
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn standard_normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.stream)
    }

    /// `count` distinct indices drawn uniformly from `0..n`.
    pub fn distinct_indices(&mut self, n: usize, count: usize) -> Vec<usize> {
        index::sample(&mut self.stream, n, count).into_vec()
    }
}

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes a master seed with a path of coordinates (matrix index, signal
/// index, ...) into an independent sub-seed. Order of the path matters.
pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    path.iter().fold(splitmix64(master), |h, &p| splitmix64(h ^ splitmix64(p).rotate_left(17)))
}

/// Distribution of the non-zero entries of a sparse signal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SignalKind {
    /// i.i.d. standard normal amplitudes.
    Gaussian,
    /// All amplitudes equal to one.
    Binary,
}

impl fmt::Display for SignalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SignalKind::Gaussian => "gaussian",
            SignalKind::Binary => "binary",
        })
    }
}

impl FromStr for SignalKind {
    type Err = PursuitError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gaussian" => Ok(SignalKind::Gaussian),
            "binary" => Ok(SignalKind::Binary),
            other => Err(PursuitError::InvalidArgument(format!("unknown signal kind `{other}`"))),
        }
    }
}

/// Ground-truth K-sparse vector.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSignal<T> {
    length: usize,
    support: SupportSet,
    values: Vec<T>,
}

impl<T: Scalar> SparseSignal<T> {
    /// Validates that every value is finite and non-zero and the support fits.
    pub fn new(length: usize, support: SupportSet, values: Vec<T>) -> Result<Self> {
        if support.len() != values.len() {
            return Err(PursuitError::DimensionMismatch(format!(
                "{} support indices but {} values",
                support.len(),
                values.len()
            )));
        }
        support.check_bounds(length)?;
        if values.iter().any(|v| *v == T::zero() || !v.is_finite()) {
            return Err(PursuitError::InvalidArgument("sparse signal values must be finite and non-zero".into()));
        }
        Ok(Self { length, support, values })
    }

    pub fn len(&self) -> usize {
        self.length
    }

    pub fn is_empty(&self) -> bool {
        self.length == 0
    }

    pub fn sparsity(&self) -> usize {
        self.support.len()
    }

    pub fn support(&self) -> &SupportSet {
        &self.support
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn to_dense(&self) -> Vec<T> {
        let mut x = vec![T::zero(); self.length];
        for (&i, &v) in self.support.iter().zip(&self.values) {
            x[i] = v;
        }
        x
    }

    /// `‖x‖₂²`.
    pub fn energy(&self) -> T {
        self.values.iter().map(|v| *v * *v).sum()
    }
}

/// Additive measurement noise `w ~ N(0, σ² I)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseSpec<T> {
    Clean,
    Gaussian { sigma: T },
}

impl<T: Scalar> NoiseSpec<T> {
    pub fn sigma(&self) -> T {
        match self {
            NoiseSpec::Clean => T::zero(),
            NoiseSpec::Gaussian { sigma } => *sigma,
        }
    }
}

/// Gaussian `M x N` matrix with entries `N(0, 1/M)`, columns scaled to unit norm.
pub fn generate_sensing_matrix<T: Scalar>(m: usize, n: usize, rng: &mut SeededRng) -> Result<DenseMatrix<T>> {
    if m == 0 || n == 0 {
        return Err(PursuitError::InvalidArgument(format!("sensing matrix must be non-empty, got {m}x{n}")));
    }
    if m > n {
        return Err(PursuitError::InvalidArgument(format!(
            "sensing matrix must have M <= N, got M = {m}, N = {n}"
        )));
    }
    let std_dev = (1.0 / m as f64).sqrt();
    let mut data = vec![0.0f64; m * n];
    for v in data.iter_mut() {
        *v = std_dev * rng.standard_normal();
    }
    for j in 0..n {
        let norm = (0..m).map(|i| data[i * n + j].powi(2)).sum::<f64>().sqrt();
        for i in 0..m {
            data[i * n + j] /= norm;
        }
    }
    DenseMatrix::new(m, n, data.into_iter().map(T::lit).collect())
}

/// K-sparse signal with a uniformly drawn support.
pub fn generate_sparse_signal<T: Scalar>(
    n: usize,
    k: usize,
    kind: SignalKind,
    rng: &mut SeededRng,
) -> Result<SparseSignal<T>> {
    if k == 0 || k >= n {
        return Err(PursuitError::InvalidArgument(format!("sparsity must satisfy 1 <= K < N, got K = {k}, N = {n}")));
    }
    let support = SupportSet::from_indices(rng.distinct_indices(n, k))?;
    let values = (0..k)
        .map(|_| match kind {
            SignalKind::Binary => T::one(),
            SignalKind::Gaussian => loop {
                let v = T::lit(rng.standard_normal());
                if v != T::zero() {
                    break v;
                }
            },
        })
        .collect();
    SparseSignal::new(n, support, values)
}

/// Expected signal energy `E‖x‖²` of a K-sparse signal of either kind.
pub fn expected_signal_energy(k: usize, _kind: SignalKind) -> f64 {
    k as f64
}

/// Noise standard deviation giving `SMNR = E‖x‖² / (σ² M)` at `smnr_db`.
pub fn noise_sigma_for_smnr(k: usize, m: usize, smnr_db: f64, kind: SignalKind) -> f64 {
    noise_sigma_for_energy(expected_signal_energy(k, kind), m, smnr_db)
}

/// Same calibration against an arbitrary signal energy (e.g. a realized `‖x‖²`).
pub fn noise_sigma_for_energy(signal_energy: f64, m: usize, smnr_db: f64) -> f64 {
    (signal_energy / (m as f64 * 10f64.powf(smnr_db / 10.0))).sqrt()
}

/// `y = A x + w`.
pub fn apply_measurement<T: Scalar>(
    a: &DenseMatrix<T>,
    x: &SparseSignal<T>,
    noise: NoiseSpec<T>,
    rng: &mut SeededRng,
) -> Result<Vec<T>> {
    if x.len() != a.cols() {
        return Err(PursuitError::DimensionMismatch(format!(
            "signal has length {} but matrix has {} columns",
            x.len(),
            a.cols()
        )));
    }
    let mut y = vec![T::zero(); a.rows()];
    for (&j, &v) in x.support().iter().zip(x.values()) {
        for (yi, &aij) in y.iter_mut().zip(a.column(j)) {
            *yi += v * aij;
        }
    }
    if let NoiseSpec::Gaussian { sigma } = noise {
        if sigma < T::zero() || !sigma.is_finite() {
            return Err(PursuitError::InvalidArgument("noise sigma must be finite and non-negative".into()));
        }
        for yi in y.iter_mut() {
            *yi += sigma * T::lit(rng.standard_normal());
        }
    }
    Ok(y)
}
