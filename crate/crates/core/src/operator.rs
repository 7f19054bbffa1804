//! The finite-rank operator `Tf = sum_k a_k(f) e_k`.

use std::sync::Arc;

use crate::basis::{check_nonnegativity, check_partition_of_unity, BasisSystem, DEFAULT_GRID_POINTS};
use crate::check::CheckReport;
use crate::error::{config, Error, Result};
use crate::function::{ClosedForm, FunctionHandle, Interval};
use crate::functional::{check_functional_normalization_seeded, Functional};
use crate::sampling::FunctionSampler;
use crate::spectrum::matrix::{build_collocation_matrix, CollocationMatrix};

/// Basis functions paired with positive normalised functionals.
///
/// [`OperatorSpec::new`] only checks that the two sequences have equal
/// length and compatible supports; the positivity and normalisation
/// contracts are reported by [`OperatorSpec::validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorSpec {
    name: String,
    basis: BasisSystem,
    functionals: Vec<Functional>,
}

impl OperatorSpec {
    pub fn new(name: impl Into<String>, basis: BasisSystem, functionals: Vec<Functional>) -> Result<Self> {
        if basis.len() != functionals.len() {
            return Err(config(format!(
                "operator has {} basis functions but {} functionals",
                basis.len(),
                functionals.len()
            )));
        }
        if let Some((k, _)) = functionals
            .iter()
            .enumerate()
            .find(|(_, a)| !a.supported_in(basis.domain()))
        {
            return Err(config(format!(
                "functional {k} is supported outside the basis domain {}",
                basis.domain()
            )));
        }
        Ok(Self {
            name: name.into(),
            basis,
            functionals,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn basis(&self) -> &BasisSystem {
        &self.basis
    }

    pub fn functionals(&self) -> &[Functional] {
        &self.functionals
    }

    pub fn domain(&self) -> Interval {
        self.basis.domain()
    }

    /// Rank bound `n`.
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn grid(&self, points: usize) -> Vec<f64> {
        self.domain().uniform_grid(points)
    }

    /// `(a_k(f))_k`.
    pub fn coefficients(&self, f: &FunctionHandle) -> Result<Vec<f64>> {
        self.functionals.iter().map(|a| a.apply(f)).collect()
    }

    /// `sum_k coefficients[k] e_k`.
    pub fn combine(&self, coefficients: Vec<f64>) -> FunctionHandle {
        FunctionHandle::closed(
            self.domain(),
            ClosedForm::Combination {
                coefficients,
                terms: self.basis.shared_functions(),
            },
        )
    }

    /// Partition of unity, nonnegativity and per-functional normalisation.
    pub fn validate(&self, grid: &[f64], tol: f64) -> Result<Vec<CheckReport>> {
        let mut reports = vec![
            check_partition_of_unity(&self.basis, grid, tol)?,
            check_nonnegativity(&self.basis, grid, tol)?,
        ];
        let mut worst: Option<(usize, CheckReport)> = None;
        for (k, a) in self.functionals.iter().enumerate() {
            let r = check_functional_normalization_seeded(a, tol, k as u64);
            let replace = match &worst {
                None => true,
                Some((_, w)) => (w.passed && !r.passed) || (w.passed == r.passed && r.measured > w.measured),
            };
            if replace {
                worst = Some((k, r));
            }
        }
        if let Some((k, r)) = worst {
            reports.push(r.index(k));
        }
        Ok(reports)
    }
}

pub fn apply_operator(op: &OperatorSpec, f: &FunctionHandle) -> Result<FunctionHandle> {
    Ok(op.combine(op.coefficients(f)?))
}

/// `(T* dual)(f) = sum_k dual(e_k) a_k(f)`.
pub fn apply_adjoint(op: &OperatorSpec, dual: &Functional, f: &FunctionHandle) -> Result<f64> {
    let coeffs = op.coefficients(f)?;
    op.basis
        .functions()
        .iter()
        .zip(coeffs)
        .map(|(e, c)| dual.apply(e).map(|d| d * c))
        .sum()
}

fn sampler_for(op: &OperatorSpec, seed: u64) -> FunctionSampler {
    FunctionSampler::new(seed, op.domain())
}

/// Minimum of `Tf` over the verification grid for `trials` random
/// nonnegative `f` (the zero function is always the first trial).
pub fn verify_positivity(op: &OperatorSpec, trials: usize, tol: f64, seed: u64) -> Result<CheckReport> {
    if trials == 0 {
        return Err(config("trials must be >= 1"));
    }
    let grid = op.grid(DEFAULT_GRID_POINTS);
    let mut sampler = sampler_for(op, seed);
    let mut worst = (f64::INFINITY, grid[0], 0);
    for t in 0..trials {
        let f = if t == 0 {
            FunctionHandle::constant(0.0).with_domain(op.domain())
        } else {
            sampler.nonnegative()
        };
        let tf = apply_operator(op, &f)?;
        for &x in &grid {
            let v = tf.eval(x)?;
            if v < worst.0 {
                worst = (v, x, t);
            }
        }
    }
    Ok(CheckReport::new("positivity", worst.0 >= -tol, worst.0, tol)
        .at(worst.1)
        .index(worst.2))
}

/// `max_x |T1(x) - 1|` over the grid.
pub fn verify_constant_reproduction(op: &OperatorSpec, grid: &[f64], tol: f64) -> Result<CheckReport> {
    if grid.is_empty() {
        return Err(config("verification grid is empty"));
    }
    let one = FunctionHandle::one().with_domain(op.domain());
    let t1 = apply_operator(op, &one)?;
    let mut worst = (0.0_f64, grid[0]);
    for &x in grid {
        let dev = (t1.eval(x)? - 1.0).abs();
        if dev > worst.0 || dev.is_nan() {
            worst = (dev, x);
        }
    }
    Ok(CheckReport::new("constant_reproduction", worst.0 <= tol, worst.0, tol).at(worst.1))
}

/// `max ||Tf||_inf / ||f||_inf` over `trials` functions, the first being
/// `f = 1`. `||Tf||` is a grid sup; `||f||` is the refined sup of
/// [`FunctionHandle::sup_norm`], so the estimate never exceeds the true
/// ratio by more than roundoff.
pub fn estimate_operator_norm(op: &OperatorSpec, trials: usize, seed: u64) -> Result<f64> {
    if trials == 0 {
        return Err(config("trials must be >= 1"));
    }
    let grid = op.grid(DEFAULT_GRID_POINTS);
    let mut sampler = sampler_for(op, seed);
    let mut best: f64 = 0.0;
    for t in 0..trials {
        let f = if t == 0 {
            FunctionHandle::one().with_domain(op.domain())
        } else {
            sampler.any()
        };
        best = best.max(norm_ratio(op, &f, &grid)?);
    }
    Ok(best)
}

/// `||Tf||_inf / ||f||_inf` for a single function.
pub fn norm_ratio(op: &OperatorSpec, f: &FunctionHandle, grid: &[f64]) -> Result<f64> {
    let denom = f.sup_norm(grid)?;
    if denom == 0.0 {
        return Ok(0.0);
    }
    Ok(apply_operator(op, f)?.grid_sup(grid)? / denom)
}

/// A nonzero function annihilated by every functional of `op`.
///
/// Point-type functionals (Dirac and weighted quadrature) are killed by a
/// sine when their points lie on a uniform lattice of the domain, and by a
/// product of root factors otherwise. Interval averages over an equal
/// partition into `m` cells are killed by `sin(2 m pi t)` in the local
/// variable `t`. The result is scaled to unit sup norm on the default grid.
pub fn kernel_witness(op: &OperatorSpec) -> Result<FunctionHandle> {
    let domain = op.domain();
    let grid = domain.uniform_grid(DEFAULT_GRID_POINTS);
    let mut points = Vec::new();
    let mut cells = Vec::new();
    for a in op.functionals() {
        match a {
            Functional::Dirac { x } => points.push(*x),
            Functional::WeightedQuadrature { nodes, .. } => points.extend_from_slice(nodes),
            Functional::IntervalAverage { a, b, .. } => cells.push((*a, *b)),
        }
    }
    let raw = match (points.is_empty(), cells.is_empty()) {
        (false, true) => point_witness(domain, points),
        (true, false) => cell_witness(domain, cells)?,
        _ => {
            return Err(Error::NotConstructible(
                "mixed point and interval functionals".into(),
            ))
        }
    };
    let norm = raw.grid_sup(&grid)?;
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::NotConstructible("witness vanished on the grid".into()));
    }
    Ok(raw.scaled(1.0 / norm))
}

fn point_witness(domain: Interval, mut points: Vec<f64>) -> FunctionHandle {
    points.sort_by(f64::total_cmp);
    points.dedup();
    let (lo, w) = (domain.lo(), domain.width());
    // smallest lattice lo + i w / N containing every point
    let lattice = (1..=4 * points.len().max(1)).find(|&n| {
        points.iter().all(|&x| {
            let s = (x - lo) / w * n as f64;
            (s - s.round()).abs() <= 1e-12
        })
    });
    match lattice {
        // sin(N pi t) vanishes on t = i / N
        Some(n) => FunctionHandle::closed(
            domain,
            ClosedForm::Sine {
                amplitude: 1.0,
                frequency: n as f64 / (2.0 * w),
                phase: 0.0,
                origin: lo,
            },
        ),
        None => FunctionHandle::closed(
            domain,
            ClosedForm::RootProduct {
                roots: Arc::from(points),
                scale: 1.0,
            },
        ),
    }
}

fn cell_witness(domain: Interval, mut cells: Vec<(f64, f64)>) -> Result<FunctionHandle> {
    cells.sort_by(|a, b| a.0.total_cmp(&b.0));
    cells.dedup();
    let m = cells.len();
    let (lo, w) = (domain.lo(), domain.width());
    let h = w / m as f64;
    let equal = cells.iter().enumerate().all(|(i, &(a, b))| {
        ((a - lo) - i as f64 * h).abs() <= 1e-12 * w && ((b - lo) - (i + 1) as f64 * h).abs() <= 1e-12 * w
    });
    if !equal {
        return Err(Error::NotConstructible(
            "interval functionals do not form an equal partition of the domain".into(),
        ));
    }
    Ok(FunctionHandle::closed(
        domain,
        ClosedForm::Sine {
            amplitude: 1.0,
            frequency: m as f64 / w,
            phase: 0.0,
            origin: lo,
        },
    ))
}

/// `T^m f` through the coefficient recursion `c <- M c`.
pub fn operator_power_apply(op: &OperatorSpec, f: &FunctionHandle, m: usize) -> Result<FunctionHandle> {
    let matrix = build_collocation_matrix(op)?;
    operator_power_apply_with(op, &matrix, f, m)
}

/// As [`operator_power_apply`] with a precomputed collocation matrix.
pub fn operator_power_apply_with(
    op: &OperatorSpec,
    matrix: &CollocationMatrix,
    f: &FunctionHandle,
    m: usize,
) -> Result<FunctionHandle> {
    if m == 0 {
        return Err(config("power m must be >= 1"));
    }
    let mut c = op.coefficients(f)?;
    for _ in 1..m {
        c = matrix.mul_vec(&c);
    }
    Ok(op.combine(c))
}
