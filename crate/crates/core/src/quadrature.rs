//! Composite Gauss-Legendre quadrature.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{config, domain, Result};
use crate::function::FunctionHandle;

/// Nodes and weights of the `order`-point Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(order: usize) -> Result<Self> {
        if order == 0 {
            return Err(config("quadrature order must be >= 1"));
        }
        let mut nodes = vec![0.0; order];
        let mut weights = vec![0.0; order];
        let n = order as f64;
        // roots are symmetric; Newton from the Chebyshev-like initial guess
        for i in 0..order.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(order, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(order, x);
            if d.is_finite() {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[order - 1 - i] = x;
            weights[i] = w;
            weights[order - 1 - i] = w;
        }
        if order % 2 == 1 {
            nodes[order / 2] = 0.0;
        }
        Ok(Self { nodes, weights })
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Integral of `f` over `[a, b]` split into `panels` equal panels.
    pub fn integrate(&self, f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
        let h = (b - a) / panels as f64;
        let mut total = 0.0;
        for p in 0..panels {
            let lo = a + h * p as f64;
            let hi = if p + 1 == panels { b } else { lo + h };
            let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
            let panel: f64 = self
                .nodes
                .iter()
                .zip(&self.weights)
                .map(|(t, w)| w * f(mid + half * t))
                .sum();
            total += half * panel;
        }
        total
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Order and panel count used by integral functionals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QuadratureRule {
    pub order: usize,
    pub panels: usize,
}

impl Default for QuadratureRule {
    fn default() -> Self {
        Self { order: 8, panels: 4 }
    }
}

/// Composite Gauss-Legendre approximation of the integral of `f` over `[a, b]`.
pub fn integrate_gauss_legendre(
    f: &FunctionHandle,
    a: f64,
    b: f64,
    order: usize,
    panels: usize,
) -> Result<f64> {
    if a.partial_cmp(&b) != Some(std::cmp::Ordering::Less) {
        return Err(domain(format!(
            "integration bounds require a < b, got [{a}, {b}]"
        )));
    }
    if !f.domain().contains_interval(a, b) {
        return Err(domain(format!("[{a}, {b}] outside {}", f.domain())));
    }
    if panels == 0 {
        return Err(config("panel count must be >= 1"));
    }
    let rule = GaussLegendre::new(order)?;
    Ok(rule.integrate(|x| f.eval_unchecked(x), a, b, panels))
}
