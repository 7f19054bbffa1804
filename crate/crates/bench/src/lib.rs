//! Shared fixtures for the criterion benchmarks.

use pouspec::spectrum::CollocationMatrix;
use pouspec::{catalog, OperatorSpec};

/// Operators of increasing rank used across benchmark groups.
pub fn operator_sweep() -> Vec<OperatorSpec> {
    [4, 8, 16, 32]
        .into_iter()
        .flat_map(|n| [catalog::bernstein(n).unwrap(), catalog::kantorovich(n).unwrap()])
        .collect()
}

/// Dense row-stochastic matrix with a deterministic pattern.
pub fn stochastic_matrix(n: usize) -> CollocationMatrix {
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let raw: Vec<f64> = (0..n).map(|j| 1.0 + ((i * 7 + j * 13) % 11) as f64).collect();
            let s: f64 = raw.iter().sum();
            raw.into_iter().map(|v| v / s).collect()
        })
        .collect();
    CollocationMatrix::from_rows(&rows).unwrap()
}
