//! Real-valued functions on a compact interval.
//!
//! A [`FunctionHandle`] is either a closed form from a small catalog or a
//! sampled function evaluated by piecewise-linear interpolation. Basis
//! functions, operator images and kernel witnesses are all closed forms, so
//! every function in the crate can be evaluated pointwise without
//! approximation beyond floating point.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{config, domain, Result};

/// Closed interval `[lo, hi]` with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(config(format!(
                "interval endpoints must be finite, got [{lo}, {hi}]"
            )));
        }
        if lo >= hi {
            return Err(config(format!("interval requires lo < hi, got [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    /// The unit interval `[0, 1]`.
    pub const fn unit() -> Self {
        Self { lo: 0.0, hi: 1.0 }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    pub fn contains_interval(&self, a: f64, b: f64) -> bool {
        self.contains(a) && self.contains(b)
    }

    /// `points` equally spaced abscissae; the endpoints are hit exactly.
    pub fn uniform_grid(&self, points: usize) -> Vec<f64> {
        match points {
            0 => Vec::new(),
            1 => vec![self.lo],
            _ => {
                let last = points - 1;
                (0..points)
                    .map(|i| {
                        if i == last {
                            self.hi
                        } else {
                            self.lo + self.width() * (i as f64 / last as f64)
                        }
                    })
                    .collect()
            }
        }
    }
}

impl Default for Interval {
    fn default() -> Self {
        Self::unit()
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Catalog of closed-form functions.
#[derive(Debug, Clone, PartialEq)]
pub enum ClosedForm {
    Constant(f64),
    /// Monomial coefficients, constant term first.
    Polynomial(Vec<f64>),
    /// `amplitude * sin(2 pi frequency (x - origin) + phase)`.
    Sine {
        amplitude: f64,
        frequency: f64,
        phase: f64,
        origin: f64,
    },
    /// `amplitude * cos(2 pi frequency x + phase)`.
    Cosine {
        amplitude: f64,
        frequency: f64,
        phase: f64,
    },
    /// `exp(rate * x)`.
    Exp {
        rate: f64,
    },
    /// Bernstein basis polynomial `C(n, k) x^k (1 - x)^(n - k)` on `[0, 1]`.
    Bernstein {
        degree: usize,
        index: usize,
    },
    /// B-spline `N_{index, degree}` over a clamped knot vector.
    BSpline {
        knots: Arc<[f64]>,
        degree: usize,
        index: usize,
    },
    /// Piecewise-linear nodal hat function.
    Hat {
        nodes: Arc<[f64]>,
        index: usize,
    },
    /// `scale * prod_i (x - roots_i)`.
    RootProduct {
        roots: Arc<[f64]>,
        scale: f64,
    },
    /// `sum_k coefficients[k] * terms[k](x)`.
    Combination {
        coefficients: Vec<f64>,
        terms: Arc<[FunctionHandle]>,
    },
    Scaled {
        factor: f64,
        inner: Arc<FunctionHandle>,
    },
    /// `inner(x)^2`.
    Squared(Arc<FunctionHandle>),
    /// `factor * (offset + inner(x))`.
    Affine {
        factor: f64,
        offset: f64,
        inner: Arc<FunctionHandle>,
    },
}

impl ClosedForm {
    pub fn name(&self) -> &'static str {
        match self {
            ClosedForm::Constant(_) => "constant",
            ClosedForm::Polynomial(_) => "polynomial",
            ClosedForm::Sine { .. } => "sine",
            ClosedForm::Cosine { .. } => "cosine",
            ClosedForm::Exp { .. } => "exp",
            ClosedForm::Bernstein { .. } => "bernstein",
            ClosedForm::BSpline { .. } => "bspline",
            ClosedForm::Hat { .. } => "hat",
            ClosedForm::RootProduct { .. } => "root-product",
            ClosedForm::Combination { .. } => "combination",
            ClosedForm::Scaled { .. } => "scaled",
            ClosedForm::Squared(_) => "squared",
            ClosedForm::Affine { .. } => "affine",
        }
    }

    fn eval(&self, x: f64) -> f64 {
        match self {
            ClosedForm::Constant(c) => *c,
            ClosedForm::Polynomial(coeffs) => horner(coeffs, x),
            ClosedForm::Sine {
                amplitude,
                frequency,
                phase,
                origin,
            } => amplitude * (2.0 * PI * frequency * (x - origin) + phase).sin(),
            ClosedForm::Cosine {
                amplitude,
                frequency,
                phase,
            } => amplitude * (2.0 * PI * frequency * x + phase).cos(),
            ClosedForm::Exp { rate } => (rate * x).exp(),
            ClosedForm::Bernstein { degree, index } => bernstein_value(*degree, *index, x),
            ClosedForm::BSpline { knots, degree, index } => bspline_value(knots, *degree, *index, x),
            ClosedForm::Hat { nodes, index } => hat_value(nodes, *index, x),
            ClosedForm::RootProduct { roots, scale } => roots.iter().fold(*scale, |acc, r| acc * (x - r)),
            ClosedForm::Combination { coefficients, terms } => coefficients
                .iter()
                .zip(terms.iter())
                .map(|(c, t)| c * t.eval_unchecked(x))
                .sum(),
            ClosedForm::Scaled { factor, inner } => factor * inner.eval_unchecked(x),
            ClosedForm::Squared(inner) => {
                let v = inner.eval_unchecked(x);
                v * v
            }
            ClosedForm::Affine {
                factor,
                offset,
                inner,
            } => factor * (offset + inner.eval_unchecked(x)),
        }
    }
}

/// Piecewise-linear interpolant through `(xs[i], ys[i])`.
#[derive(Debug, Clone, PartialEq)]
pub struct Sampled {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl Sampled {
    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    fn eval(&self, x: f64) -> f64 {
        // first index with xs[i] > x, clamped so that [i-1, i] is a valid span
        let i = self.xs.partition_point(|&t| t <= x).clamp(1, self.xs.len() - 1);
        let (x0, x1) = (self.xs[i - 1], self.xs[i]);
        let (y0, y1) = (self.ys[i - 1], self.ys[i]);
        let s = (x - x0) / (x1 - x0);
        y0 + s * (y1 - y0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FunctionKind {
    Closed(ClosedForm),
    Sampled(Sampled),
}

/// An evaluable real-valued function on a closed interval.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionHandle {
    domain: Interval,
    kind: FunctionKind,
}

impl FunctionHandle {
    pub fn closed(domain: Interval, form: ClosedForm) -> Self {
        Self {
            domain,
            kind: FunctionKind::Closed(form),
        }
    }

    pub fn constant(c: f64) -> Self {
        Self::closed(Interval::unit(), ClosedForm::Constant(c))
    }

    /// The unit function `1` on `[0, 1]`.
    pub fn one() -> Self {
        Self::constant(1.0)
    }

    pub fn polynomial(coeffs: Vec<f64>) -> Self {
        Self::closed(Interval::unit(), ClosedForm::Polynomial(coeffs))
    }

    /// `sin(2 pi frequency x)` on `[0, 1]`.
    pub fn sine(frequency: f64) -> Self {
        Self::closed(
            Interval::unit(),
            ClosedForm::Sine {
                amplitude: 1.0,
                frequency,
                phase: 0.0,
                origin: 0.0,
            },
        )
    }

    pub fn exp(rate: f64) -> Self {
        Self::closed(Interval::unit(), ClosedForm::Exp { rate })
    }

    /// Piecewise-linear interpolant; the domain is `[xs[0], xs[last]]`.
    pub fn sampled(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() < 2 {
            return Err(config("sampled function needs at least 2 grid points"));
        }
        if xs.len() != ys.len() {
            return Err(config(format!(
                "sampled function has {} abscissae but {} values",
                xs.len(),
                ys.len()
            )));
        }
        if xs
            .windows(2)
            .any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less))
        {
            return Err(config("sampled grid must be strictly increasing"));
        }
        if ys.iter().any(|y| !y.is_finite()) {
            return Err(config("sampled values must be finite"));
        }
        let domain = Interval::new(xs[0], xs[xs.len() - 1])?;
        Ok(Self {
            domain,
            kind: FunctionKind::Sampled(Sampled { xs, ys }),
        })
    }

    /// Same function restricted or extended to another domain label.
    pub fn with_domain(mut self, domain: Interval) -> Self {
        self.domain = domain;
        self
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn kind(&self) -> &FunctionKind {
        &self.kind
    }

    /// Catalog name of the function.
    pub fn name(&self) -> &'static str {
        match &self.kind {
            FunctionKind::Closed(c) => c.name(),
            FunctionKind::Sampled(_) => "sampled",
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self::closed(
            self.domain,
            ClosedForm::Scaled {
                factor,
                inner: Arc::new(self.clone()),
            },
        )
    }

    pub fn squared(&self) -> Self {
        Self::closed(self.domain, ClosedForm::Squared(Arc::new(self.clone())))
    }

    pub fn affine(&self, factor: f64, offset: f64) -> Self {
        Self::closed(
            self.domain,
            ClosedForm::Affine {
                factor,
                offset,
                inner: Arc::new(self.clone()),
            },
        )
    }

    /// Coefficients of a basis combination, e.g. the result of applying an
    /// operator.
    pub fn combination_coefficients(&self) -> Option<&[f64]> {
        match &self.kind {
            FunctionKind::Closed(ClosedForm::Combination { coefficients, .. }) => Some(coefficients),
            _ => None,
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        if !self.domain.contains(x) {
            return Err(domain(format!("x = {x} outside {}", self.domain)));
        }
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: f64) -> f64 {
        match &self.kind {
            FunctionKind::Closed(c) => c.eval(x),
            FunctionKind::Sampled(s) => s.eval(x),
        }
    }

    /// Evaluates on every grid point.
    pub fn eval_grid(&self, grid: &[f64]) -> Result<Vec<f64>> {
        grid.iter().map(|&x| self.eval(x)).collect()
    }

    /// `max |f|` over the grid points.
    pub fn grid_sup(&self, grid: &[f64]) -> Result<f64> {
        self.eval_grid(grid)
            .map(|v| v.into_iter().fold(0.0, |m: f64, y| m.max(y.abs())))
    }

    /// Sup norm over the whole domain.
    ///
    /// Exact for sampled functions. Closed forms start from the grid maximum
    /// and refine every local maximum of `|f|` by golden-section search in
    /// the two adjacent grid cells.
    pub fn sup_norm(&self, grid: &[f64]) -> Result<f64> {
        if let FunctionKind::Sampled(s) = &self.kind {
            return Ok(s.ys.iter().fold(0.0, |m: f64, y| m.max(y.abs())));
        }
        let values = self.eval_grid(grid)?;
        let mut best = values.iter().fold(0.0, |m: f64, y| m.max(y.abs()));
        let abs = |x: f64| self.eval_unchecked(x).abs();
        for i in 0..values.len() {
            let v = values[i].abs();
            let left_ok = i == 0 || values[i - 1].abs() <= v;
            let right_ok = i + 1 == values.len() || values[i + 1].abs() <= v;
            if !(left_ok && right_ok) {
                continue;
            }
            let lo = if i == 0 { grid[i] } else { grid[i - 1] };
            let hi = if i + 1 == values.len() {
                grid[i]
            } else {
                grid[i + 1]
            };
            if hi > lo {
                best = best.max(golden_max(abs, lo, hi));
            }
        }
        Ok(best)
    }
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..80 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        if b - a < 1e-15 {
            break;
        }
    }
    fc.max(fd).max(f(a)).max(f(b))
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// Largest degree evaluated through the explicit binomial formula.
const BERNSTEIN_EXPLICIT_MAX: usize = 30;

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

pub(crate) fn bernstein_value(n: usize, k: usize, x: f64) -> f64 {
    if k > n {
        return 0.0;
    }
    if n <= BERNSTEIN_EXPLICIT_MAX {
        return binomial(n, k) * x.powi(k as i32) * (1.0 - x).powi((n - k) as i32);
    }
    // b_{m,j} = (1 - x) b_{m-1,j} + x b_{m-1,j-1}, only the band that feeds b_{n,k}
    let lo_j = |m: usize| (k + m).saturating_sub(n);
    let mut row = vec![0.0; k + 1];
    row[0] = 1.0;
    for m in 1..=n {
        let hi = m.min(k);
        for j in (lo_j(m)..=hi).rev() {
            let left = if j > 0 { row[j - 1] } else { 0.0 };
            let keep = if j < m { row[j] } else { 0.0 };
            row[j] = (1.0 - x) * keep + x * left;
        }
    }
    row[k]
}

/// Cox-de Boor recursion with `0/0 := 0`. The degree-0 functions are
/// half-open indicators, except that the last non-empty span also owns the
/// right end of the knot range.
pub(crate) fn bspline_value(knots: &[f64], degree: usize, i: usize, x: f64) -> f64 {
    if degree == 0 {
        let (a, b) = (knots[i], knots[i + 1]);
        let end = knots[knots.len() - 1];
        let inside = (a <= x && x < b) || (x == end && b == end && a < b);
        return if inside { 1.0 } else { 0.0 };
    }
    let mut value = 0.0;
    let d1 = knots[i + degree] - knots[i];
    if d1 > 0.0 {
        value += (x - knots[i]) / d1 * bspline_value(knots, degree - 1, i, x);
    }
    let d2 = knots[i + degree + 1] - knots[i + 1];
    if d2 > 0.0 {
        value += (knots[i + degree + 1] - x) / d2 * bspline_value(knots, degree - 1, i + 1, x);
    }
    value
}

pub(crate) fn hat_value(nodes: &[f64], k: usize, x: f64) -> f64 {
    let xk = nodes[k];
    if x == xk {
        return 1.0;
    }
    if x < xk {
        if k == 0 {
            return 0.0;
        }
        let xl = nodes[k - 1];
        if x <= xl {
            0.0
        } else {
            (x - xl) / (xk - xl)
        }
    } else {
        if k + 1 == nodes.len() {
            return 0.0;
        }
        let xr = nodes[k + 1];
        if x >= xr {
            0.0
        } else {
            (xr - x) / (xr - xk)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn eval_examples() {
        assert_eq!(FunctionHandle::one().eval(0.37).unwrap(), 1.0);
        let lin = FunctionHandle::sampled(vec![0.0, 1.0], vec![0.0, 1.0]).unwrap();
        assert_eq!(lin.eval(0.25).unwrap(), 0.25);
        assert_abs_diff_eq!(
            FunctionHandle::sine(1.0).eval(0.25).unwrap(),
            1.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn out_of_domain_is_rejected() {
        let f = FunctionHandle::one();
        assert!(matches!(f.eval(1.5), Err(crate::Error::Domain(_))));
        assert!(matches!(f.eval(-1e-300), Err(crate::Error::Domain(_))));
        assert!(f.eval(0.0).is_ok() && f.eval(1.0).is_ok());
    }

    #[test]
    fn sampled_validation() {
        assert!(FunctionHandle::sampled(vec![0.0], vec![1.0]).is_err());
        assert!(FunctionHandle::sampled(vec![0.0, 0.0, 1.0], vec![1.0, 2.0, 3.0]).is_err());
        assert!(FunctionHandle::sampled(vec![0.0, 1.0], vec![1.0]).is_err());
        let f = FunctionHandle::sampled(vec![0.0, 0.5, 1.0], vec![0.0, 2.0, 1.0]).unwrap();
        assert_eq!(f.eval(1.0).unwrap(), 1.0);
        assert_eq!(f.eval(0.75).unwrap(), 1.5);
        assert_eq!(f.sup_norm(&[0.0, 1.0]).unwrap(), 2.0);
    }

    #[test]
    fn grid_hits_endpoints() {
        let g = Interval::new(0.2, 0.9).unwrap().uniform_grid(7);
        assert_eq!(g[0], 0.2);
        assert_eq!(g[6], 0.9);
        assert!(Interval::new(1.0, 1.0).is_err());
    }

    #[test]
    fn refined_sup_beats_grid() {
        // peak of sin(2 pi 3 x) at x = 1/12 is not on an 11-point grid
        let f = FunctionHandle::sine(3.0);
        let grid = Interval::unit().uniform_grid(11);
        assert!(f.grid_sup(&grid).unwrap() < 0.99);
        assert_abs_diff_eq!(f.sup_norm(&grid).unwrap(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn bernstein_recurrence_matches_explicit() {
        for &x in &[0.0f64, 0.1, 0.37, 0.5, 0.93, 1.0] {
            for k in 0..=40 {
                let explicit = binomial(40, k) * x.powi(k as i32) * (1.0 - x).powi(40 - k as i32);
                assert_abs_diff_eq!(bernstein_value(40, k, x), explicit, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn bernstein_large_degree_is_finite() {
        let s: f64 = (0..=400).map(|k| bernstein_value(400, k, 0.3)).sum();
        assert_abs_diff_eq!(s, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn horner_orders_coefficients_low_first() {
        assert_eq!(horner(&[-1.0, 2.0], 0.0), -1.0);
        assert_eq!(horner(&[0.0, 0.0, 0.0, 1.0], 0.5), 0.125);
    }
}
