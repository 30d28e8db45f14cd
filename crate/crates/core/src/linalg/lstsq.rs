use crate::error::{PursuitError, Result};
use crate::scalar::{dot, norm2, Scalar};

use super::{DenseMatrix, SupportSet};

/// Estimated 2-norm condition number above which a solve is flagged.
pub const CONDITION_WARNING: f64 = 1e10;

/// Coefficients of `min ‖y − A_I c‖₂`, in support order.
#[derive(Debug, Clone, PartialEq)]
pub struct LeastSquares<T> {
    pub coefficients: Vec<T>,
    /// Numerical rank of `A_I`.
    pub rank: usize,
    /// `|R₀₀| / |R_{n−1,n−1}|` from the pivoted QR; infinite when rank-deficient.
    pub condition: T,
    /// Set when `A_I` is rank-deficient or `condition > CONDITION_WARNING`.
    /// The coefficients are then the minimum-norm minimizer.
    pub ill_conditioned: bool,
}

/// `r = y − A_I A_I† y` together with `‖r‖₂`.
#[derive(Debug, Clone, PartialEq)]
pub struct Residual<T> {
    pub residual: Vec<T>,
    pub norm: T,
    pub ill_conditioned: bool,
}

fn check_inputs<T: Scalar>(a: &DenseMatrix<T>, y: &[T], support: &SupportSet) -> Result<()> {
    if y.len() != a.rows() {
        return Err(PursuitError::DimensionMismatch(format!(
            "observation has length {} but matrix has {} rows",
            y.len(),
            a.rows()
        )));
    }
    support.check_bounds(a.cols())
}

/// Least-squares fit of `y` on the atoms in `support`.
pub fn least_squares_on_support<T: Scalar>(
    a: &DenseMatrix<T>,
    y: &[T],
    support: &SupportSet,
) -> Result<LeastSquares<T>> {
    check_inputs(a, y, support)?;
    let cols = a.gather_columns(support);
    Ok(solve_columns(&cols, a.rows(), support.len(), y))
}

/// Orthogonal-projection residual of `y` onto the span of `A_I`. An empty
/// support returns `(y, ‖y‖₂)`.
pub fn residual_on_support<T: Scalar>(
    a: &DenseMatrix<T>,
    y: &[T],
    support: &SupportSet,
) -> Result<Residual<T>> {
    check_inputs(a, y, support)?;
    if support.is_empty() {
        return Ok(Residual { residual: y.to_vec(), norm: norm2(y), ill_conditioned: false });
    }
    let ls = least_squares_on_support(a, y, support)?;
    let residual = residual_from_coefficients(a, y, support, &ls.coefficients);
    let norm = norm2(&residual);
    Ok(Residual { residual, norm, ill_conditioned: ls.ill_conditioned })
}

pub(crate) fn residual_from_coefficients<T: Scalar>(
    a: &DenseMatrix<T>,
    y: &[T],
    support: &SupportSet,
    coefficients: &[T],
) -> Vec<T> {
    let mut r = y.to_vec();
    for (&j, &c) in support.iter().zip(coefficients) {
        for (ri, &aij) in r.iter_mut().zip(a.column(j)) {
            *ri -= c * aij;
        }
    }
    r
}

/// Householder reflector for `x`: returns `(v, alpha)` with
/// `(I − 2vvᵗ/vᵗv) x = alpha·e₀`, or `None` for a zero vector.
fn reflector<T: Scalar>(x: &[T]) -> Option<(Vec<T>, T, T)> {
    let nx = norm2(x);
    if nx == T::zero() {
        return None;
    }
    let alpha = if x[0] >= T::zero() { -nx } else { nx };
    let mut v = x.to_vec();
    v[0] -= alpha;
    let vv = dot(&v, &v);
    if vv == T::zero() {
        return None;
    }
    Some((v, alpha, T::lit(2.0) / vv))
}

#[inline]
fn reflect<T: Scalar>(v: &[T], scale: T, target: &mut [T]) {
    let s = dot(v, target) * scale;
    for (t, &vi) in target.iter_mut().zip(v) {
        *t -= s * vi;
    }
}

/// Solves `min ‖y − B c‖₂` for the column-major `m x n` matrix `cols` using
/// Householder QR with column pivoting. Rank-deficient systems get the
/// minimum-norm solution through a second QR of the leading block rows.
pub(crate) fn solve_columns<T: Scalar>(cols: &[T], m: usize, n: usize, y: &[T]) -> LeastSquares<T> {
    debug_assert_eq!(cols.len(), m * n);
    debug_assert_eq!(y.len(), m);
    if n == 0 {
        return LeastSquares {
            coefficients: Vec::new(),
            rank: 0,
            condition: T::one(),
            ill_conditioned: false,
        };
    }
    let mut a = cols.to_vec();
    let mut qty = y.to_vec();
    let mut perm: Vec<usize> = (0..n).collect();
    let steps = m.min(n);

    for k in 0..steps {
        let mut pivot = k;
        let mut best = T::neg_infinity();
        for j in k..n {
            let tail = &a[j * m + k..(j + 1) * m];
            let s = dot(tail, tail);
            if s > best {
                best = s;
                pivot = j;
            }
        }
        if pivot != k {
            for i in 0..m {
                a.swap(k * m + i, pivot * m + i);
            }
            perm.swap(k, pivot);
        }
        let Some((v, alpha, scale)) = reflector(&a[k * m + k..(k + 1) * m]) else {
            break;
        };
        for j in k + 1..n {
            reflect(&v, scale, &mut a[j * m + k..(j + 1) * m]);
        }
        reflect(&v, scale, &mut qty[k..]);
        a[k * m + k] = alpha;
        for i in k + 1..m {
            a[k * m + i] = T::zero();
        }
    }

    let r = |i: usize, j: usize| a[j * m + i];
    let r00 = r(0, 0).abs();
    let tol = r00 * T::epsilon() * T::lit(m.max(n) as f64);
    let rank = if r00 == T::zero() {
        0
    } else {
        (0..steps).take_while(|&k| r(k, k).abs() > tol).count()
    };

    let mut z = vec![T::zero(); n];
    let condition;
    if rank == n {
        for i in (0..n).rev() {
            let mut s = qty[i];
            for j in i + 1..n {
                s -= r(i, j) * z[j];
            }
            z[i] = s / r(i, i);
        }
        condition = r00 / r(n - 1, n - 1).abs();
    } else {
        condition = T::infinity();
        if rank > 0 {
            // [R11 R12] = Tᵗ Zᵗ via QR of its transpose (n x rank).
            let mut bt = vec![T::zero(); n * rank];
            for i in 0..rank {
                for j in i..n {
                    bt[i * n + j] = r(i, j);
                }
            }
            let mut reflectors = Vec::with_capacity(rank);
            for k in 0..rank {
                let h = reflector(&bt[k * n + k..(k + 1) * n]);
                if let Some((v, alpha, scale)) = &h {
                    for j in k + 1..rank {
                        reflect(v, *scale, &mut bt[j * n + k..(j + 1) * n]);
                    }
                    bt[k * n + k] = *alpha;
                    for i in k + 1..n {
                        bt[k * n + i] = T::zero();
                    }
                }
                reflectors.push(h);
            }
            // Tᵗ w = (Qᵗy)[..rank], forward substitution on the lower triangle.
            let t = |i: usize, j: usize| bt[j * n + i];
            let mut w = vec![T::zero(); n];
            for i in 0..rank {
                let mut s = qty[i];
                for j in 0..i {
                    s -= t(j, i) * w[j];
                }
                w[i] = s / t(i, i);
            }
            for (k, h) in reflectors.iter().enumerate().rev() {
                if let Some((v, _, scale)) = h {
                    reflect(v, *scale, &mut w[k..]);
                }
            }
            z = w;
        }
    }

    let mut coefficients = vec![T::zero(); n];
    for (j, &p) in perm.iter().enumerate() {
        coefficients[p] = z[j];
    }
    LeastSquares {
        coefficients,
        rank,
        condition,
        ill_conditioned: rank < n || condition > T::lit(CONDITION_WARNING),
    }
}

/// Inverse of the symmetric positive-definite `k x k` matrix `g` (row-major)
/// via Cholesky. Fails with `(position, pivot)` when a pivot is `<= tol`.
pub(crate) fn spd_inverse<T: Scalar>(g: &[T], k: usize, tol: T) -> std::result::Result<Vec<T>, (usize, T)> {
    let mut l = vec![T::zero(); k * k];
    for j in 0..k {
        let mut d = g[j * k + j];
        for p in 0..j {
            d -= l[j * k + p] * l[j * k + p];
        }
        if !(d > tol) {
            return Err((j, d));
        }
        let ljj = d.sqrt();
        l[j * k + j] = ljj;
        for i in j + 1..k {
            let mut s = g[i * k + j];
            for p in 0..j {
                s -= l[i * k + p] * l[j * k + p];
            }
            l[i * k + j] = s / ljj;
        }
    }
    // L⁻¹, lower triangular.
    let mut li = vec![T::zero(); k * k];
    for j in 0..k {
        li[j * k + j] = T::one() / l[j * k + j];
        for i in j + 1..k {
            let mut s = T::zero();
            for p in j..i {
                s += l[i * k + p] * li[p * k + j];
            }
            li[i * k + j] = -s / l[i * k + i];
        }
    }
    // G⁻¹ = L⁻ᵗ L⁻¹, filled symmetrically.
    let mut inv = vec![T::zero(); k * k];
    for i in 0..k {
        for j in i..k {
            let mut s = T::zero();
            for p in j..k {
                s += li[p * k + i] * li[p * k + j];
            }
            inv[i * k + j] = s;
            inv[j * k + i] = s;
        }
    }
    Ok(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(m: usize, n: usize, seed: u64) -> DenseMatrix<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data = (0..m * n).map(|_| rng.random_range(-1.0..1.0)).collect();
        DenseMatrix::new(m, n, data).unwrap()
    }

    /// Gauss-Jordan inverse with partial pivoting; independent oracle.
    fn gauss_jordan(mut g: Vec<f64>, k: usize) -> Vec<f64> {
        let mut inv = vec![0.0; k * k];
        for i in 0..k {
            inv[i * k + i] = 1.0;
        }
        for c in 0..k {
            let p = (c..k).max_by(|&a, &b| g[a * k + c].abs().total_cmp(&g[b * k + c].abs())).unwrap();
            for j in 0..k {
                g.swap(c * k + j, p * k + j);
                inv.swap(c * k + j, p * k + j);
            }
            let d = g[c * k + c];
            for j in 0..k {
                g[c * k + j] /= d;
                inv[c * k + j] /= d;
            }
            for i in 0..k {
                if i != c {
                    let f = g[i * k + c];
                    for j in 0..k {
                        g[i * k + j] -= f * g[c * k + j];
                        inv[i * k + j] -= f * inv[c * k + j];
                    }
                }
            }
        }
        inv
    }

    fn normal_equations(a: &DenseMatrix<f64>, y: &[f64], s: &SupportSet) -> Vec<f64> {
        let k = s.len();
        let mut g = vec![0.0; k * k];
        let mut b = vec![0.0; k];
        for (p, &i) in s.iter().enumerate() {
            b[p] = dot(a.column(i), y);
            for (q, &j) in s.iter().enumerate() {
                g[p * k + q] = dot(a.column(i), a.column(j));
            }
        }
        let inv = gauss_jordan(g, k);
        (0..k).map(|p| (0..k).map(|q| inv[p * k + q] * b[q]).sum()).collect()
    }

    #[test]
    fn orthonormal_columns_pick_coordinates() {
        let a = DenseMatrix::<f64>::identity(3);
        let s = SupportSet::from_indices(vec![0, 2]).unwrap();
        let ls = least_squares_on_support(&a, &[1.0, 2.0, 3.0], &s).unwrap();
        assert_eq!(ls.coefficients, vec![1.0, 3.0]);
        assert!(!ls.ill_conditioned);
    }

    #[test]
    fn consistent_system_is_solved_exactly() {
        let a = random_matrix(8, 16, 3);
        let s = SupportSet::from_indices(vec![5, 1, 12]).unwrap();
        let truth = [0.7, -1.3, 2.1];
        let mut c = vec![0.0; 16];
        for (&j, &v) in s.iter().zip(&truth) {
            c[j] = v;
        }
        let y = a.mul_vec(&c).unwrap();
        let ls = least_squares_on_support(&a, &y, &s).unwrap();
        for (got, want) in ls.coefficients.iter().zip(&truth) {
            assert!((got - want).abs() <= 1e-10 * want.abs());
        }
    }

    #[test]
    fn matches_normal_equation_oracle() {
        for seed in 0..20 {
            let a = random_matrix(8, 16, 100 + seed);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut idx: Vec<usize> = (0..16).collect();
            for i in 0..3 {
                let j = rng.random_range(i..16);
                idx.swap(i, j);
            }
            let s = SupportSet::from_indices(idx[..3].to_vec()).unwrap();
            let y: Vec<f64> = (0..8).map(|_| rng.random_range(-1.0..1.0)).collect();
            let got = least_squares_on_support(&a, &y, &s).unwrap().coefficients;
            let want = normal_equations(&a, &y, &s);
            let scale = want.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            for (g, w) in got.iter().zip(&want) {
                assert!((g - w).abs() <= 1e-8 * scale, "seed {seed}: {g} vs {w}");
            }
        }
    }

    #[test]
    fn residual_examples() {
        let a = random_matrix(6, 10, 9);
        let y = vec![1.0, -2.0, 0.5, 0.0, 3.0, 1.0];
        let r = residual_on_support(&a, &y, &SupportSet::new()).unwrap();
        assert_eq!(r.residual, y);
        assert_eq!(r.norm, norm2(&y));

        let s = SupportSet::from_indices(vec![2, 7]).unwrap();
        let mut c = vec![0.0; 10];
        c[2] = 1.5;
        c[7] = -0.25;
        let y_in = a.mul_vec(&c).unwrap();
        let r = residual_on_support(&a, &y_in, &s).unwrap();
        assert!(r.norm <= 1e-10 * norm2(&y_in));

        let s = SupportSet::from_indices(vec![1, 4, 8]).unwrap();
        let r = residual_on_support(&a, &y, &s).unwrap();
        for &j in &s {
            assert!(dot(a.column(j), &r.residual).abs() <= 1e-8 * norm2(&y));
        }
    }

    #[test]
    fn rank_deficient_gives_minimum_norm_solution() {
        // Two identical columns: the minimum-norm split is even.
        let a = DenseMatrix::<f64>::from_columns(&[vec![1.0, 0.0, 0.0], vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]])
            .unwrap();
        let s = SupportSet::from_indices(vec![0, 1, 2]).unwrap();
        let ls = least_squares_on_support(&a, &[2.0, 3.0, 5.0], &s).unwrap();
        assert!(ls.ill_conditioned);
        assert_eq!(ls.rank, 2);
        let want = [1.0, 1.0, 3.0];
        for (g, w) in ls.coefficients.iter().zip(&want) {
            assert!((g - w).abs() < 1e-12, "{:?}", ls.coefficients);
        }
    }

    #[test]
    fn wide_system_is_minimum_norm() {
        // More atoms than rows: x = Bᵗ(BBᵗ)⁻¹y is the minimum-norm solution.
        let a = random_matrix(3, 5, 21);
        let s = SupportSet::from_indices(vec![0, 1, 2, 3, 4]).unwrap();
        let y = [0.3, -1.0, 2.0];
        let ls = least_squares_on_support(&a, &y, &s).unwrap();
        assert!(ls.ill_conditioned);
        let mut bbt = vec![0.0; 9];
        for i in 0..3 {
            for j in 0..3 {
                bbt[i * 3 + j] = dot(a.row(i), a.row(j));
            }
        }
        let inv = gauss_jordan(bbt, 3);
        let u: Vec<f64> = (0..3).map(|i| (0..3).map(|j| inv[i * 3 + j] * y[j]).sum()).collect();
        for j in 0..5 {
            let want: f64 = (0..3).map(|i| a.get(i, j) * u[i]).sum();
            assert!((ls.coefficients[j] - want).abs() < 1e-10);
        }
    }

    #[test]
    fn spd_inverse_matches_oracle_and_rejects_singular() {
        let a = random_matrix(10, 4, 5);
        let mut g = vec![0.0; 16];
        for i in 0..4 {
            for j in 0..4 {
                g[i * 4 + j] = dot(a.column(i), a.column(j));
            }
        }
        let got = spd_inverse(&g, 4, 1e-12).unwrap();
        let want = gauss_jordan(g.clone(), 4);
        for (x, y) in got.iter().zip(&want) {
            assert!((x - y).abs() < 1e-9 * y.abs().max(1.0));
        }
        assert!(spd_inverse(&[1.0, 1.0, 1.0, 1.0], 2, 1e-12).is_err());
    }
}
