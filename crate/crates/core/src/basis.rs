//! Positive basis systems forming a partition of unity.

use std::sync::Arc;

use crate::check::CheckReport;
use crate::error::{config, Result};
use crate::function::{bernstein_value, ClosedForm, FunctionHandle, Interval};

/// Default tolerance for partition-of-unity and positivity checks.
pub const DEFAULT_POU_TOL: f64 = 1e-10;
/// Default number of points in the verification grid.
pub const DEFAULT_GRID_POINTS: usize = 1001;

#[derive(Debug, Clone, PartialEq)]
pub enum BasisKind {
    Bernstein { degree: usize },
    BSpline { knots: Arc<[f64]>, degree: usize },
    Hat { nodes: Arc<[f64]> },
    Custom,
}

/// Ordered basis functions `e_1, ..., e_n` on a common domain.
///
/// Constructors for the catalog families guarantee nonnegativity and the
/// partition of unity; [`BasisSystem::custom`] does not, so custom systems
/// should be run through [`check_partition_of_unity`] and
/// [`check_nonnegativity`].
#[derive(Debug, Clone, PartialEq)]
pub struct BasisSystem {
    domain: Interval,
    evaluators: Arc<[FunctionHandle]>,
    kind: BasisKind,
}

impl BasisSystem {
    /// The `n + 1` Bernstein polynomials of degree `n` on `[0, 1]`.
    pub fn bernstein(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(config("Bernstein degree n must be >= 1"));
        }
        let domain = Interval::unit();
        let evaluators = (0..=n)
            .map(|k| FunctionHandle::closed(domain, ClosedForm::Bernstein { degree: n, index: k }))
            .collect();
        Ok(Self {
            domain,
            evaluators,
            kind: BasisKind::Bernstein { degree: n },
        })
    }

    /// B-splines of the given degree over a clamped knot vector.
    pub fn bspline(knots: &[f64], degree: usize) -> Result<Self> {
        if knots.iter().any(|t| !t.is_finite()) {
            return Err(config("knots must be finite"));
        }
        if knots.windows(2).any(|w| w[1] < w[0]) {
            return Err(config("knot vector must be nondecreasing"));
        }
        if knots.len() < 2 * (degree + 1) {
            return Err(config(format!(
                "degree {degree} needs at least {} knots, got {}",
                2 * (degree + 1),
                knots.len()
            )));
        }
        let (first, last) = (knots[0], knots[knots.len() - 1]);
        let clamped = knots[..=degree].iter().all(|&t| t == first)
            && knots[knots.len() - degree - 1..].iter().all(|&t| t == last);
        if !clamped {
            return Err(config(format!(
                "knot vector must be clamped: end knots repeated {} times",
                degree + 1
            )));
        }
        // clamping and the knot-count rule leave at least one span only if first < last
        let domain = Interval::new(first, last).map_err(|_| config("knot vector has no interior span"))?;
        // repeated knots may not exceed multiplicity degree + 1
        let count = knots.len() - degree - 1;
        for i in 0..count {
            if knots[i] == knots[i + degree + 1] {
                return Err(config(format!(
                    "knot {} has multiplicity above degree + 1",
                    knots[i]
                )));
            }
        }
        let shared: Arc<[f64]> = knots.into();
        let evaluators = (0..count)
            .map(|i| {
                FunctionHandle::closed(
                    domain,
                    ClosedForm::BSpline {
                        knots: shared.clone(),
                        degree,
                        index: i,
                    },
                )
            })
            .collect();
        Ok(Self {
            domain,
            evaluators,
            kind: BasisKind::BSpline {
                knots: shared,
                degree,
            },
        })
    }

    /// Nodal hat functions over strictly increasing nodes. The domain is
    /// `[nodes[0], nodes[last]]`.
    pub fn hat(nodes: &[f64]) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(config("hat basis needs at least 2 nodes"));
        }
        if nodes.iter().any(|t| !t.is_finite()) {
            return Err(config("nodes must be finite"));
        }
        if nodes
            .windows(2)
            .any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less))
        {
            return Err(config("hat nodes must be strictly increasing"));
        }
        let domain = Interval::new(nodes[0], nodes[nodes.len() - 1])?;
        let shared: Arc<[f64]> = nodes.into();
        let evaluators = (0..nodes.len())
            .map(|k| {
                FunctionHandle::closed(
                    domain,
                    ClosedForm::Hat {
                        nodes: shared.clone(),
                        index: k,
                    },
                )
            })
            .collect();
        Ok(Self {
            domain,
            evaluators,
            kind: BasisKind::Hat { nodes: shared },
        })
    }

    /// Arbitrary functions on `domain`, not validated beyond being nonempty.
    pub fn custom(domain: Interval, evaluators: Vec<FunctionHandle>) -> Result<Self> {
        if evaluators.is_empty() {
            return Err(config("basis must contain at least one function"));
        }
        let evaluators = evaluators.into_iter().map(|f| f.with_domain(domain)).collect();
        Ok(Self {
            domain,
            evaluators,
            kind: BasisKind::Custom,
        })
    }

    /// Every basis function multiplied by `factor` (breaks the partition of
    /// unity unless `factor == 1`).
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            domain: self.domain,
            evaluators: self.evaluators.iter().map(|e| e.scaled(factor)).collect(),
            kind: BasisKind::Custom,
        }
    }

    pub fn len(&self) -> usize {
        self.evaluators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.evaluators.is_empty()
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn kind(&self) -> &BasisKind {
        &self.kind
    }

    pub fn functions(&self) -> &[FunctionHandle] {
        &self.evaluators
    }

    pub(crate) fn shared_functions(&self) -> Arc<[FunctionHandle]> {
        self.evaluators.clone()
    }

    /// All basis values at `x`.
    pub fn eval_all(&self, x: f64) -> Result<Vec<f64>> {
        if let BasisKind::Bernstein { degree } = self.kind {
            if self.domain.contains(x) {
                return Ok((0..=degree).map(|k| bernstein_value(degree, k, x)).collect());
            }
        }
        self.evaluators.iter().map(|e| e.eval(x)).collect()
    }

    /// `sum_k e_k(x)`.
    pub fn sum_at(&self, x: f64) -> Result<f64> {
        Ok(self.eval_all(x)?.into_iter().sum())
    }
}

fn require_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        Err(config("verification grid is empty"))
    } else {
        Ok(())
    }
}

/// Largest deviation of `sum_k e_k(x)` from 1 over the grid.
pub fn check_partition_of_unity(basis: &BasisSystem, grid: &[f64], tol: f64) -> Result<CheckReport> {
    require_grid(grid)?;
    let mut worst = (0.0_f64, grid[0]);
    for &x in grid {
        let dev = (basis.sum_at(x)? - 1.0).abs();
        if dev > worst.0 || dev.is_nan() {
            worst = (dev, x);
        }
    }
    Ok(CheckReport::new("partition_of_unity", worst.0 <= tol, worst.0, tol).at(worst.1))
}

/// Smallest basis value over the grid; passes iff it is at least `-tol`.
pub fn check_nonnegativity(basis: &BasisSystem, grid: &[f64], tol: f64) -> Result<CheckReport> {
    require_grid(grid)?;
    let mut worst = (f64::INFINITY, grid[0], 0usize);
    for &x in grid {
        for (k, v) in basis.eval_all(x)?.into_iter().enumerate() {
            if v < worst.0 || v.is_nan() {
                worst = (v, x, k);
            }
        }
    }
    Ok(CheckReport::new("nonnegativity", worst.0 >= -tol, worst.0, tol)
        .at(worst.1)
        .index(worst.2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn unit_grid() -> Vec<f64> {
        Interval::unit().uniform_grid(DEFAULT_GRID_POINTS)
    }

    #[test]
    fn bernstein_values_at_half() {
        let b = BasisSystem::bernstein(2).unwrap();
        assert_eq!(b.len(), 3);
        let v = b.eval_all(0.5).unwrap();
        for (got, want) in v.iter().zip([0.25, 0.5, 0.25]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-15);
        }
        assert_eq!(
            BasisSystem::bernstein(1).unwrap().eval_all(0.0).unwrap(),
            vec![1.0, 0.0]
        );
        assert_abs_diff_eq!(b.sum_at(0.3).unwrap(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn bernstein_rejects_zero_degree() {
        assert!(matches!(BasisSystem::bernstein(0), Err(crate::Error::Config(_))));
    }

    #[test]
    fn degree_zero_bspline_is_indicator() {
        let b = BasisSystem::bspline(&[0.0, 0.5, 1.0], 0).unwrap();
        assert_eq!(b.len(), 2);
        assert_eq!(b.eval_all(0.0).unwrap(), vec![1.0, 0.0]);
        assert_eq!(b.eval_all(0.4999).unwrap(), vec![1.0, 0.0]);
        assert_eq!(b.eval_all(0.5).unwrap(), vec![0.0, 1.0]);
        assert_eq!(b.eval_all(1.0).unwrap(), vec![0.0, 1.0]);
    }

    #[test]
    fn linear_bspline_is_hat() {
        let b = BasisSystem::bspline(&[0.0, 0.0, 0.5, 1.0, 1.0], 1).unwrap();
        let h = BasisSystem::hat(&[0.0, 0.5, 1.0]).unwrap();
        assert_eq!(b.len(), 3);
        assert_eq!(b.eval_all(0.0).unwrap(), vec![1.0, 0.0, 0.0]);
        assert_eq!(b.eval_all(0.5).unwrap(), vec![0.0, 1.0, 0.0]);
        assert_eq!(b.eval_all(1.0).unwrap(), vec![0.0, 0.0, 1.0]);
        for x in unit_grid() {
            for (u, v) in b.eval_all(x).unwrap().iter().zip(h.eval_all(x).unwrap()) {
                assert_abs_diff_eq!(*u, v, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn bspline_validation() {
        assert!(BasisSystem::bspline(&[0.0, 0.0, 0.6, 0.5, 1.0, 1.0], 1).is_err());
        assert!(BasisSystem::bspline(&[0.0, 1.0], 1).is_err());
        assert!(BasisSystem::bspline(&[0.0, 0.3, 1.0, 1.0], 1).is_err());
        assert!(BasisSystem::bspline(&[0.0, 0.0, 0.0, 0.0], 1).is_err());
    }

    #[test]
    fn cubic_bspline_partition_of_unity() {
        let knots = [0.0, 0.0, 0.0, 0.0, 0.13, 0.4, 0.41, 0.77, 1.0, 1.0, 1.0, 1.0];
        let b = BasisSystem::bspline(&knots, 3).unwrap();
        let grid = unit_grid();
        let r = check_partition_of_unity(&b, &grid, 1e-12).unwrap();
        assert!(r.passed, "{r:?}");
        assert!(check_nonnegativity(&b, &grid, 0.0).unwrap().passed);
    }

    #[test]
    fn hat_examples() {
        let h = BasisSystem::hat(&[0.0, 1.0]).unwrap();
        let v = h.eval_all(0.3).unwrap();
        assert_abs_diff_eq!(v[0], 0.7, epsilon = 1e-15);
        assert_abs_diff_eq!(v[1], 0.3, epsilon = 1e-15);
        let h = BasisSystem::hat(&[0.0, 0.5, 1.0]).unwrap();
        assert_eq!(h.functions()[1].eval(0.25).unwrap(), 0.5);
        assert!(BasisSystem::hat(&[0.0, 0.5, 0.5, 1.0]).is_err());
        assert!(BasisSystem::hat(&[0.0, 0.7, 0.5, 1.0]).is_err());
        assert!(BasisSystem::hat(&[0.0]).is_err());
    }

    #[test]
    fn hat_is_interpolatory() {
        let nodes = [0.0, 0.1, 0.35, 0.36, 0.8, 1.0];
        let h = BasisSystem::hat(&nodes).unwrap();
        for (j, &x) in nodes.iter().enumerate() {
            let v = h.eval_all(x).unwrap();
            for (k, val) in v.into_iter().enumerate() {
                assert_eq!(val, if j == k { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn bernstein_checks_pass() {
        let grid = unit_grid();
        let b = BasisSystem::bernstein(5).unwrap();
        assert!(check_partition_of_unity(&b, &grid, 1e-12).unwrap().passed);
        assert!(
            check_nonnegativity(&BasisSystem::bernstein(4).unwrap(), &grid, 0.0)
                .unwrap()
                .passed
        );
    }

    #[test]
    fn scaled_basis_fails_partition() {
        let b = BasisSystem::bernstein(5).unwrap().scaled(0.9);
        let r = check_partition_of_unity(&b, &unit_grid(), 1e-12).unwrap();
        assert!(!r.passed);
        assert_abs_diff_eq!(r.measured, 0.1, epsilon = 1e-12);
    }

    #[test]
    fn hat_nonnegativity_min_is_zero() {
        let r = check_nonnegativity(&BasisSystem::hat(&[0.0, 0.5, 1.0]).unwrap(), &unit_grid(), 0.0).unwrap();
        assert!(r.passed);
        assert_eq!(r.measured, 0.0);
    }

    #[test]
    fn negative_basis_function_fails() {
        let b = BasisSystem::custom(
            Interval::unit(),
            vec![
                FunctionHandle::polynomial(vec![-1.0, 2.0]),
                FunctionHandle::polynomial(vec![2.0, -2.0]),
            ],
        )
        .unwrap();
        let r = check_nonnegativity(&b, &unit_grid(), 1e-12).unwrap();
        assert!(!r.passed);
        assert_eq!(r.worst_at, Some(0.0));
        assert_eq!(r.measured, -1.0);
        // sums to 1 nonetheless
        assert!(check_partition_of_unity(&b, &unit_grid(), 1e-12).unwrap().passed);
    }

    #[test]
    fn empty_grid_is_config_error() {
        let b = BasisSystem::bernstein(3).unwrap();
        assert!(matches!(
            check_partition_of_unity(&b, &[], 1e-10),
            Err(crate::Error::Config(_))
        ));
        assert!(matches!(
            check_nonnegativity(&b, &[], 1e-10),
            Err(crate::Error::Config(_))
        ));
    }
}
