#![allow(dead_code)]

use atomsel_core::signal::{apply_measurement, generate_sensing_matrix, generate_sparse_signal};
use atomsel_core::{Matrix, NoiseSpec, SeededRng, Signal, SignalKind};

/// Solves `G z = b` by Gauss-Jordan elimination with partial pivoting.
pub fn gauss_solve(mut g: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| g[i][c].abs().total_cmp(&g[j][c].abs())).unwrap();
        g.swap(c, p);
        b.swap(c, p);
        let d = g[c][c];
        assert!(d.abs() > 1e-14, "singular system in oracle");
        for r in 0..n {
            if r != c {
                let f = g[r][c] / d;
                for k in c..n {
                    g[r][k] -= f * g[c][k];
                }
                b[r] -= f * b[c];
            }
        }
    }
    (0..n).map(|i| b[i] / g[i][i]).collect()
}

/// Inverse of a square matrix by Gauss-Jordan.
pub fn gauss_inverse(g: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = g.len();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        cols.push(gauss_solve(g.to_vec(), e));
    }
    (0..n).map(|i| (0..n).map(|j| cols[j][i]).collect()).collect()
}

pub fn gram(a: &Matrix, idx: &[usize]) -> Vec<Vec<f64>> {
    idx.iter()
        .map(|&i| idx.iter().map(|&j| dot(a.column(i), a.column(j))).collect())
        .collect()
}

/// Least squares through the normal equations.
pub fn ls_coefficients(a: &Matrix, y: &[f64], idx: &[usize]) -> Vec<f64> {
    let rhs = idx.iter().map(|&i| dot(a.column(i), y)).collect();
    gauss_solve(gram(a, idx), rhs)
}

pub fn ls_residual(a: &Matrix, y: &[f64], idx: &[usize]) -> Vec<f64> {
    let c = ls_coefficients(a, y, idx);
    let mut r = y.to_vec();
    for (&j, &cj) in idx.iter().zip(&c) {
        for (ri, aij) in r.iter_mut().zip(a.column(j)) {
            *ri -= cj * aij;
        }
    }
    r
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `argmax |v_i|` over `i ∉ excluded`, lowest index on ties.
pub fn argmax_abs(v: &[f64], excluded: &[usize]) -> usize {
    let mut best = usize::MAX;
    for i in 0..v.len() {
        if excluded.contains(&i) {
            continue;
        }
        if best == usize::MAX || v[i].abs() > v[best].abs() {
            best = i;
        }
    }
    best
}

pub fn top_abs(v: &[(usize, f64)], k: usize) -> Vec<usize> {
    let mut s = v.to_vec();
    s.sort_by(|x, y| y.1.abs().total_cmp(&x.1.abs()).then(x.0.cmp(&y.0)));
    s.into_iter().take(k).map(|(i, _)| i).collect()
}

pub fn mf(a: &Matrix, r: &[f64]) -> Vec<f64> {
    (0..a.cols()).map(|j| dot(a.column(j), r)).collect()
}

pub struct Instance {
    pub a: Matrix,
    pub x: Signal,
    pub y: Vec<f64>,
}

pub fn instance(seed: u64, m: usize, n: usize, k: usize, sigma: Option<f64>) -> Instance {
    let mut rng = SeededRng::new(seed);
    let a = generate_sensing_matrix(m, n, &mut rng).unwrap();
    let x = generate_sparse_signal(n, k, SignalKind::Gaussian, &mut rng).unwrap();
    let noise = sigma.map_or(NoiseSpec::Clean, |sigma| NoiseSpec::Gaussian { sigma });
    let y = apply_measurement(&a, &x, noise, &mut rng).unwrap();
    Instance { a, x, y }
}

pub fn rel_diff(a: &[f64], b: &[f64]) -> f64 {
    let d: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    d / norm(b).max(f64::MIN_POSITIVE)
}
