//! Built-in operators.

use rand::Rng;

use crate::basis::BasisSystem;
use crate::error::{config, Result};
use crate::functional::{make_kantorovich_functionals, Functional};
use crate::operator::OperatorSpec;

/// Bernstein basis of degree `n` with point evaluations at `k / n`.
pub fn bernstein(n: usize) -> Result<OperatorSpec> {
    let basis = BasisSystem::bernstein(n)?;
    let functionals = (0..=n)
        .map(|k| Functional::dirac(if k == n { 1.0 } else { k as f64 / n as f64 }))
        .collect();
    OperatorSpec::new(format!("bernstein(n={n})"), basis, functionals)
}

/// Bernstein basis of degree `n` with averages over `[k/(n+1), (k+1)/(n+1)]`.
pub fn kantorovich(n: usize) -> Result<OperatorSpec> {
    let basis = BasisSystem::bernstein(n)?;
    OperatorSpec::new(
        format!("kantorovich(n={n})"),
        basis,
        make_kantorovich_functionals(n)?,
    )
}

/// Knot averages `(t_{i+1} + ... + t_{i+p}) / p`; span midpoints for `p = 0`.
pub fn greville_abscissae(knots: &[f64], degree: usize) -> Vec<f64> {
    let count = knots.len().saturating_sub(degree + 1);
    (0..count)
        .map(|i| {
            if degree == 0 {
                0.5 * (knots[i] + knots[i + 1])
            } else {
                knots[i + 1..=i + degree].iter().sum::<f64>() / degree as f64
            }
        })
        .collect()
}

/// B-spline basis with point evaluations at the Greville abscissae.
pub fn schoenberg(knots: &[f64], degree: usize) -> Result<OperatorSpec> {
    let basis = BasisSystem::bspline(knots, degree)?;
    let functionals = greville_abscissae(knots, degree)
        .into_iter()
        .map(|x| Functional::dirac(x.clamp(knots[0], knots[knots.len() - 1])))
        .collect();
    OperatorSpec::new(
        format!("schoenberg(degree={degree}, knots={})", knots.len()),
        basis,
        functionals,
    )
}

/// Hat basis over `nodes` with point evaluations at the nodes themselves.
pub fn hat_dirac(nodes: &[f64]) -> Result<OperatorSpec> {
    let basis = BasisSystem::hat(nodes)?;
    let functionals = nodes.iter().map(|&x| Functional::dirac(x)).collect();
    OperatorSpec::new(format!("hat-dirac(nodes={})", nodes.len()), basis, functionals)
}

/// Two hats on `{0, 1}` with the evaluations swapped: `a_1 = delta_1`,
/// `a_2 = delta_0`. The collocation matrix has a zero diagonal.
pub fn crossed_dirac() -> Result<OperatorSpec> {
    let basis = BasisSystem::hat(&[0.0, 1.0])?;
    OperatorSpec::new(
        "crossed-dirac",
        basis,
        vec![Functional::dirac(1.0), Functional::dirac(0.0)],
    )
}

/// Clamped knot vector on `[0, 1]` with `interior` sorted uniform interior
/// knots.
pub fn random_clamped_knots(rng: &mut impl Rng, degree: usize, interior: usize) -> Vec<f64> {
    let mut inner: Vec<f64> = (0..interior).map(|_| rng.gen_range(0.02..0.98)).collect();
    inner.sort_by(f64::total_cmp);
    let mut knots = vec![0.0; degree + 1];
    knots.extend(inner);
    knots.extend(std::iter::repeat_n(1.0, degree + 1));
    knots
}

/// `0 = x_1 < ... < x_m = 1` with `m - 2` uniform interior nodes.
pub fn random_partition(rng: &mut impl Rng, m: usize) -> Result<Vec<f64>> {
    if m < 2 {
        return Err(config("a partition needs at least 2 nodes"));
    }
    loop {
        let mut nodes: Vec<f64> = (0..m - 2).map(|_| rng.gen_range(0.0..1.0)).collect();
        nodes.push(0.0);
        nodes.push(1.0);
        nodes.sort_by(f64::total_cmp);
        if nodes.windows(2).all(|w| w[0] < w[1]) {
            return Ok(nodes);
        }
    }
}

/// Short descriptions of the built-in operator families.
pub fn describe() -> Vec<(&'static str, &'static str)> {
    vec![
        (
            "bernstein",
            "Bernstein basis of degree n, point evaluations at k/n (n >= 1)",
        ),
        (
            "kantorovich",
            "Bernstein basis of degree n, averages over [k/(n+1), (k+1)/(n+1)] (n >= 1)",
        ),
        (
            "schoenberg",
            "clamped B-splines (knots, degree), point evaluations at Greville abscissae",
        ),
        (
            "hat-dirac",
            "piecewise-linear hats over nodes, point evaluations at the nodes",
        ),
        (
            "custom",
            "explicit basis spec plus one functional per basis function",
        ),
    ]
}
