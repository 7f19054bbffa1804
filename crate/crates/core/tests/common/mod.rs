#![allow(dead_code)]

//! Test-only oracles, independent of the library's evaluation paths.

use pouspec::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn choose(n: usize, k: usize) -> f64 {
    let mut r = 1.0;
    for i in 0..k {
        r = r * (n - i) as f64 / (i + 1) as f64;
    }
    r
}

/// Explicit binomial form of the Bernstein basis polynomial.
pub fn bernstein(n: usize, k: usize, x: f64) -> f64 {
    if k > n {
        return 0.0;
    }
    choose(n, k) * x.powi(k as i32) * (1.0 - x).powi((n - k) as i32)
}

/// Integral of `b_{n,j}` over `[a, b]` from the antiderivative
/// `(n+1)^-1 sum_{i > j} b_{n+1,i}`.
pub fn bernstein_integral(n: usize, j: usize, a: f64, b: f64) -> f64 {
    let anti = |x: f64| (j + 1..=n + 1).map(|i| bernstein(n + 1, i, x)).sum::<f64>() / (n + 1) as f64;
    anti(b) - anti(a)
}

/// Kantorovich collocation matrix from the antiderivative.
pub fn kantorovich_matrix(n: usize) -> Vec<Vec<f64>> {
    let cells = (n + 1) as f64;
    (0..=n)
        .map(|k| {
            let (a, b) = (k as f64 / cells, (k + 1) as f64 / cells);
            (0..=n).map(|j| cells * bernstein_integral(n, j, a, b)).collect()
        })
        .collect()
}

/// Eigenvalues of the Bernstein point-evaluation matrix:
/// `prod_{i<k} (1 - i/n)`, `k = 0..n`.
pub fn bernstein_eigen_product(n: usize) -> Vec<Complex64> {
    (0..=n)
        .map(|k| {
            let v: f64 = (0..k).map(|i| 1.0 - i as f64 / n as f64).product();
            Complex64::new(v, 0.0)
        })
        .collect()
}

/// Dense random row-stochastic matrix; some entries are zeroed to vary the
/// sparsity pattern.
pub fn random_stochastic(rng: &mut impl Rng, n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| {
            let mut row: Vec<f64> = (0..n)
                .map(|_| {
                    if rng.gen_bool(0.25) {
                        0.0
                    } else {
                        rng.gen_range(0.0..1.0)
                    }
                })
                .collect();
            if row.iter().all(|&v| v == 0.0) {
                row[rng.gen_range(0..n)] = 1.0;
            }
            let s: f64 = row.iter().sum();
            row.into_iter().map(|v| v / s).collect()
        })
        .collect()
}
