//! Positive linear functionals normalised by `a(1) = 1`.

use crate::check::CheckReport;
use crate::error::{config, domain, Result};
use crate::function::{FunctionHandle, Interval};
use crate::quadrature::{integrate_gauss_legendre, QuadratureRule};
use crate::sampling::{FunctionSampler, DEFAULT_SEED};

/// Number of random nonnegative functions used by the positivity probe.
pub const POSITIVITY_PROBES: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub enum Functional {
    /// Point evaluation `f -> f(x)`.
    Dirac { x: f64 },
    /// Normalised mean `f -> (b - a)^-1 * integral_a^b f`.
    IntervalAverage { a: f64, b: f64, rule: QuadratureRule },
    /// `f -> sum_i w_i f(x_i)`.
    WeightedQuadrature { nodes: Vec<f64>, weights: Vec<f64> },
}

impl Functional {
    pub fn dirac(x: f64) -> Self {
        Functional::Dirac { x }
    }

    pub fn interval_average(a: f64, b: f64) -> Result<Self> {
        Self::interval_average_with(a, b, QuadratureRule::default())
    }

    pub fn interval_average_with(a: f64, b: f64, rule: QuadratureRule) -> Result<Self> {
        if a.partial_cmp(&b) != Some(std::cmp::Ordering::Less) {
            return Err(config(format!("interval average needs a < b, got [{a}, {b}]")));
        }
        if rule.order == 0 || rule.panels == 0 {
            return Err(config("quadrature order and panels must be >= 1"));
        }
        Ok(Functional::IntervalAverage { a, b, rule })
    }

    /// Weights are not required to be normalised or nonnegative here; see
    /// [`check_functional_normalization`].
    pub fn weighted_quadrature(nodes: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(config("weighted quadrature needs at least one node"));
        }
        if nodes.len() != weights.len() {
            return Err(config(format!(
                "weighted quadrature has {} nodes but {} weights",
                nodes.len(),
                weights.len()
            )));
        }
        Ok(Functional::WeightedQuadrature { nodes, weights })
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Functional::Dirac { .. } => "dirac",
            Functional::IntervalAverage { .. } => "interval-average",
            Functional::WeightedQuadrature { .. } => "weighted-quadrature",
        }
    }

    /// Smallest closed interval containing the support.
    pub fn support(&self) -> (f64, f64) {
        match self {
            Functional::Dirac { x } => (*x, *x),
            Functional::IntervalAverage { a, b, .. } => (*a, *b),
            Functional::WeightedQuadrature { nodes, .. } => nodes
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
                    (lo.min(x), hi.max(x))
                }),
        }
    }

    /// Whether the support lies inside `interval`.
    pub fn supported_in(&self, interval: Interval) -> bool {
        let (lo, hi) = self.support();
        interval.contains_interval(lo, hi)
    }

    pub fn apply(&self, f: &FunctionHandle) -> Result<f64> {
        if !self.supported_in(f.domain()) {
            let (lo, hi) = self.support();
            return Err(domain(format!(
                "{} functional supported on [{lo}, {hi}] outside {}",
                self.kind_name(),
                f.domain()
            )));
        }
        match self {
            Functional::Dirac { x } => f.eval(*x),
            Functional::IntervalAverage { a, b, rule } => {
                Ok(integrate_gauss_legendre(f, *a, *b, rule.order, rule.panels)? / (b - a))
            }
            Functional::WeightedQuadrature { nodes, weights } => nodes
                .iter()
                .zip(weights)
                .map(|(&x, w)| f.eval(x).map(|v| w * v))
                .sum(),
        }
    }
}

pub fn apply_functional(a: &Functional, f: &FunctionHandle) -> Result<f64> {
    a.apply(f)
}

/// Averages over the `n + 1` cells `[k/(n+1), (k+1)/(n+1)]`.
pub fn make_kantorovich_functionals(n: usize) -> Result<Vec<Functional>> {
    if n == 0 {
        return Err(config("n must be >= 1"));
    }
    let cells = (n + 1) as f64;
    (0..=n)
        .map(|k| {
            let a = k as f64 / cells;
            let b = if k == n { 1.0 } else { (k + 1) as f64 / cells };
            Functional::interval_average(a, b)
        })
        .collect()
}

/// `|a(1) - 1| <= tol` plus a positivity probe on random nonnegative
/// functions drawn with the default seed.
pub fn check_functional_normalization(a: &Functional, tol: f64) -> CheckReport {
    check_functional_normalization_seeded(a, tol, DEFAULT_SEED)
}

pub fn check_functional_normalization_seeded(a: &Functional, tol: f64, seed: u64) -> CheckReport {
    let (lo, hi) = a.support();
    // a point support still needs a nondegenerate domain for the probes
    let domain = Interval::new(lo, hi)
        .or_else(|_| Interval::new(lo - 1.0, hi + 1.0))
        .unwrap_or_default();
    let one = FunctionHandle::constant(1.0).with_domain(domain);
    let value = match a.apply(&one) {
        Ok(v) => v,
        Err(e) => {
            return CheckReport::new("functional_normalization", false, f64::NAN, tol).detail(e.to_string())
        }
    };
    let deviation = (value - 1.0).abs();
    let mut sampler = FunctionSampler::new(seed, domain);
    let mut min_probe = f64::INFINITY;
    let mut worst = 0;
    for i in 0..POSITIVITY_PROBES {
        let f = sampler.nonnegative();
        match a.apply(&f) {
            Ok(v) if v < min_probe => {
                min_probe = v;
                worst = i;
            }
            Ok(_) => {}
            Err(e) => {
                return CheckReport::new("functional_normalization", false, deviation, tol)
                    .detail(format!("probe {i}: {e}"))
            }
        }
    }
    let positive = min_probe >= -tol;
    let mut report = CheckReport::new(
        "functional_normalization",
        deviation <= tol && positive,
        deviation,
        tol,
    );
    if !positive {
        report = report
            .index(worst)
            .detail(format!("positivity probe {worst} gave {min_probe}"));
    }
    report
}
