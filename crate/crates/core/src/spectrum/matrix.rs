use serde::Serialize;

use crate::check::CheckReport;
use crate::error::{config, Error, Result};
use crate::operator::OperatorSpec;

/// Default tolerance for row sums of collocation matrices.
pub const DEFAULT_STOCHASTIC_TOL: f64 = 1e-10;

/// Dense square matrix, row-major.
///
/// Built from an operator it holds `M[k][j] = a_k(e_j)`; it is also used for
/// powers and limits of such matrices. Construction from raw rows accepts
/// any finite square matrix, so stochasticity is a checked property rather
/// than a type invariant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CollocationMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl CollocationMatrix {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(config("matrix must have at least one row"));
        }
        let mut entries = Vec::with_capacity(n * n);
        for (k, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(config(format!("row {k} has {} entries, expected {n}", row.len())));
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(config(format!("row {k} has a non-finite entry")));
            }
            entries.extend_from_slice(row);
        }
        Ok(Self { n, entries })
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1.0;
        }
        Self { n, entries }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.n + col]
    }

    pub fn row(&self, k: usize) -> &[f64] {
        &self.entries[k * self.n..(k + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.n).map(<[f64]>::to_vec).collect()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.entries.chunks(self.n).map(|r| r.iter().sum()).collect()
    }

    /// `max_k |sum_j M[k][j] - 1|`.
    pub fn row_sum_max_deviation(&self) -> f64 {
        self.row_sums()
            .into_iter()
            .fold(0.0, |m, s| m.max((s - 1.0).abs()))
    }

    pub fn diag_min(&self) -> f64 {
        self.diagonal().into_iter().fold(f64::INFINITY, f64::min)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.n;
        assert_eq!(n, other.n, "dimension mismatch");
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == 0.0 {
                    continue;
                }
                let src = &other.entries[k * n..(k + 1) * n];
                for (o, b) in out[i * n..(i + 1) * n].iter_mut().zip(src) {
                    *o += a * b;
                }
            }
        }
        Self { n, entries: out }
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.n, "dimension mismatch");
        self.entries
            .chunks(self.n)
            .map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Maximum absolute row sum.
    pub fn inf_norm(&self) -> f64 {
        self.entries
            .chunks(self.n)
            .map(|r| r.iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// `|| self - other ||_inf`.
    pub fn inf_distance(&self, other: &Self) -> f64 {
        assert_eq!(self.n, other.n, "dimension mismatch");
        self.entries
            .chunks(self.n)
            .zip(other.entries.chunks(self.n))
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

/// `M[k][j] = a_k(e_j)`.
pub fn build_collocation_matrix(op: &OperatorSpec) -> Result<CollocationMatrix> {
    let n = op.rank();
    let mut entries = Vec::with_capacity(n * n);
    for (k, a) in op.functionals().iter().enumerate() {
        for (j, e) in op.basis().functions().iter().enumerate() {
            let v = a.apply(e).map_err(|source| Error::Entry {
                row: k,
                col: j,
                source: Box::new(source),
            })?;
            entries.push(v);
        }
    }
    Ok(CollocationMatrix { n, entries })
}

/// Nonnegative entries and unit row sums, both within `tol`.
pub fn check_row_stochastic(m: &CollocationMatrix, tol: f64) -> CheckReport {
    let mut worst_row = 0;
    let mut worst_dev = 0.0;
    for (k, s) in m.row_sums().into_iter().enumerate() {
        let dev = (s - 1.0).abs();
        if dev > worst_dev {
            worst_dev = dev;
            worst_row = k;
        }
    }
    let min_entry = m.entries.iter().copied().fold(f64::INFINITY, f64::min);
    let nonneg = min_entry >= -tol;
    let mut report =
        CheckReport::new("row_stochastic", worst_dev <= tol && nonneg, worst_dev, tol).index(worst_row);
    if !nonneg {
        report = report.detail(format!("negative entry {min_entry}"));
    }
    report
}

/// `M^power` by repeated squaring.
pub fn matrix_power(m: &CollocationMatrix, power: u64) -> CollocationMatrix {
    let mut result = CollocationMatrix::identity(m.n);
    let mut base = m.clone();
    let mut e = power;
    while e > 0 {
        if e & 1 == 1 {
            result = result.mul(&base);
        }
        e >>= 1;
        if e > 0 {
            base = base.mul(&base);
        }
    }
    result
}

/// Step differences below this are treated as roundoff when estimating the
/// convergence rate.
const RATE_FLOOR: f64 = 1e-8;
/// Longest period looked for when iterates fail to converge.
const MAX_PERIOD: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum IterateOutcome {
    Converged {
        limit: CollocationMatrix,
        /// Power at which the stopping test first held.
        m: u64,
        /// `||M^{k+1} - M^k|| / ||M^k - M^{k-1}||` at the largest doubling
        /// stage whose step difference is still above roundoff; `None` when
        /// every step difference vanishes.
        rate: Option<f64>,
    },
    NoConvergence {
        m_reached: u64,
        /// Smallest `p` with `M^{m+p} = M^m` within tolerance, if any.
        period: Option<usize>,
        obstruction: String,
    },
}

/// Doubles `m` until `M^{2m}` and `M^{m+1}` both agree with `M^m` within
/// `tol`, or `m` would exceed `m_max`.
pub fn iterate_limit(m: &CollocationMatrix, tol: f64, m_max: u64) -> Result<IterateOutcome> {
    if m_max < 2 {
        return Err(config("m_max must be >= 2"));
    }
    let mut power = 1u64;
    let mut current = m.clone();
    let mut rate = None;
    loop {
        let next = current.mul(m);
        let after = next.mul(m);
        let step = next.inf_distance(&current);
        let step_after = after.inf_distance(&next);
        if step >= RATE_FLOOR || rate.is_none() && step > 0.0 {
            rate = Some(step_after / step);
        }
        let doubled = current.mul(&current);
        if doubled.inf_distance(&current) <= tol && step <= tol {
            return Ok(IterateOutcome::Converged {
                limit: current,
                m: power,
                rate,
            });
        }
        if power * 2 > m_max {
            let mut probe = current.clone();
            let mut period = None;
            for p in 1..=MAX_PERIOD {
                probe = probe.mul(m);
                if probe.inf_distance(&current) <= tol {
                    period = Some(p);
                    break;
                }
            }
            let obstruction = match period {
                Some(p) => {
                    format!("iterates are periodic with period {p}: peripheral eigenvalues other than 1")
                }
                None => format!("no convergence up to m = {power}; step difference {step:e}"),
            };
            return Ok(IterateOutcome::NoConvergence {
                m_reached: power,
                period,
                obstruction,
            });
        }
        current = doubled;
        power *= 2;
    }
}
