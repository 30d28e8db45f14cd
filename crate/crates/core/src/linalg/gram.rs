//! Recursive inverse of the Gram matrix `P = A_Iᵗ A_I` under one-atom growth.
//!
//! Appending atom `a` to the support gives the bordered matrix
//!
//! ```text
//!   P' = | P    q   |      q = A_Iᵗ a,   β = aᵗa − qᵗ P⁻¹ q
//!        | qᵗ  aᵗa  |
//!
//!   P'⁻¹ = | P⁻¹ + u uᵗ/β   −u/β |      u = P⁻¹ q
//!          | −uᵗ/β           1/β |
//! ```
//!
//! For unit-norm atoms `aᵗa = 1`. The update costs `O(k² + kM)` instead of a
//! fresh `O(k³ + k²M)` factorization.

use crate::error::{PursuitError, Result};
use crate::scalar::{dot, Scalar};

use super::{spd_inverse, DenseMatrix, SupportSet};

/// Absolute threshold on the Schur complement `β` below which an extension
/// is treated as rank collapse.
pub const DEFAULT_BETA_TOLERANCE: f64 = 1e-12;

/// `[A_Iᵗ A_I]⁻¹` and `A_Iᵗ y` for the current support.
#[derive(Debug, Clone, PartialEq)]
pub struct GramInverseState<T> {
    support: SupportSet,
    /// Row-major `k x k`, exactly symmetric by construction.
    gram_inverse: Vec<T>,
    projected_observation: Vec<T>,
}

impl<T: Scalar> Default for GramInverseState<T> {
    fn default() -> Self {
        Self::empty()
    }
}

impl<T: Scalar> GramInverseState<T> {
    /// State for the empty support, the seed of every recursion.
    pub fn empty() -> Self {
        Self { support: SupportSet::new(), gram_inverse: Vec::new(), projected_observation: Vec::new() }
    }

    pub fn support(&self) -> &SupportSet {
        &self.support
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn gram_inverse(&self) -> &[T] {
        &self.gram_inverse
    }

    pub fn projected_observation(&self) -> &[T] {
        &self.projected_observation
    }

    /// Least-squares coefficients `P⁻¹ A_Iᵗ y`, in support order.
    pub fn coefficients(&self) -> Vec<T> {
        let k = self.len();
        (0..k)
            .map(|i| dot(&self.gram_inverse[i * k..(i + 1) * k], &self.projected_observation))
            .collect()
    }

    /// `y − A_I P⁻¹ A_Iᵗ y`.
    pub fn residual(&self, a: &DenseMatrix<T>, y: &[T]) -> Vec<T> {
        super::lstsq::residual_from_coefficients(a, y, &self.support, &self.coefficients())
    }

    fn extend_unchecked(&self, a: &DenseMatrix<T>, y: &[T], new_index: usize, beta_tolerance: T) -> Result<Self> {
        let k = self.len();
        let atom = a.column(new_index);
        let q: Vec<T> = self.support.iter().map(|&j| dot(a.column(j), atom)).collect();
        let u: Vec<T> = (0..k).map(|i| dot(&self.gram_inverse[i * k..(i + 1) * k], &q)).collect();
        let beta = dot(atom, atom) - dot(&q, &u);
        if !(beta > beta_tolerance) {
            let mut support = self.support.clone().into_vec();
            support.push(new_index);
            return Err(PursuitError::NearSingular { support, pivot: beta.as_f64() });
        }
        let inv_beta = T::one() / beta;
        let n = k + 1;
        let mut g = vec![T::zero(); n * n];
        for i in 0..k {
            let ui = u[i] * inv_beta;
            for j in 0..k {
                g[i * n + j] = self.gram_inverse[i * k + j] + ui * u[j];
            }
            g[i * n + k] = -ui;
            g[k * n + i] = -ui;
        }
        g[k * n + k] = inv_beta;

        let mut projected_observation = Vec::with_capacity(n);
        projected_observation.extend_from_slice(&self.projected_observation);
        projected_observation.push(dot(atom, y));
        let mut support = self.support.clone();
        support.push(new_index)?;
        Ok(Self { support, gram_inverse: g, projected_observation })
    }
}

fn check<T: Scalar>(a: &DenseMatrix<T>, y: &[T]) -> Result<()> {
    if y.len() != a.rows() {
        return Err(PursuitError::DimensionMismatch(format!(
            "observation has length {} but matrix has {} rows",
            y.len(),
            a.rows()
        )));
    }
    Ok(())
}

/// Direct `(A_IᵗA_I)⁻¹` by Cholesky. A pivot at or below `beta_tolerance`
/// reports the support as near-singular.
pub fn gram_inverse_init<T: Scalar>(
    a: &DenseMatrix<T>,
    y: &[T],
    support: &SupportSet,
    beta_tolerance: T,
) -> Result<GramInverseState<T>> {
    check(a, y)?;
    support.check_bounds(a.cols())?;
    let k = support.len();
    let mut g = vec![T::zero(); k * k];
    for (p, &i) in support.iter().enumerate() {
        for (q, &j) in support.iter().enumerate().skip(p) {
            let v = dot(a.column(i), a.column(j));
            g[p * k + q] = v;
            g[q * k + p] = v;
        }
    }
    let gram_inverse = spd_inverse(&g, k, beta_tolerance).map_err(|(_, pivot)| PursuitError::NearSingular {
        support: support.as_slice().to_vec(),
        pivot: pivot.as_f64(),
    })?;
    let projected_observation = support.iter().map(|&j| dot(a.column(j), y)).collect();
    Ok(GramInverseState { support: support.clone(), gram_inverse, projected_observation })
}

/// Block-wise rank-one extension of `state` by atom `new_index`.
pub fn gram_inverse_extend<T: Scalar>(
    state: &GramInverseState<T>,
    a: &DenseMatrix<T>,
    y: &[T],
    new_index: usize,
    beta_tolerance: T,
) -> Result<GramInverseState<T>> {
    check(a, y)?;
    if new_index >= a.cols() {
        return Err(PursuitError::InvalidArgument(format!(
            "atom {new_index} out of range for {} columns",
            a.cols()
        )));
    }
    if state.support.contains(new_index) {
        return Err(PursuitError::InvalidArgument(format!("atom {new_index} is already in the support")));
    }
    state.extend_unchecked(a, y, new_index, beta_tolerance)
}

impl<T: Scalar> GramInverseState<T> {
    /// Method form of [`gram_inverse_extend`].
    pub fn extend(&self, a: &DenseMatrix<T>, y: &[T], new_index: usize, beta_tolerance: T) -> Result<Self> {
        gram_inverse_extend(self, a, y, new_index, beta_tolerance)
    }
}
