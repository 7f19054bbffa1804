//! Independent eigenvalue route for small matrices: characteristic
//! polynomial coefficients by the Leverrier-Faddeev recursion, roots by
//! the quadratic formula or Aberth-Ehrlich simultaneous iteration.
//!
//! A `k`-fold root is only resolved to about `eps^(1/k)` from polynomial
//! values, so clusters of Aberth roots are re-solved as simple roots of
//! `p^(k-1)` and merged when `p, ..., p^(k-1)` all vanish there to
//! rounding accuracy.

use num_complex::Complex64;

use super::eigen::sort_spectrum;
use super::matrix::CollocationMatrix;
use crate::error::{Error, Result};

pub const ORACLE_MAX_DIM: usize = 5;

/// Roots closer than this (relative to `max(1, |z|)`) are candidates for
/// one multiple root; covers the `eps^(1/5)` scatter of a 5-fold root.
const CLUSTER_REL: f64 = 1e-3;
/// Slack over the Horner rounding bound when confirming a multiple root.
const VANISH_FACTOR: f64 = 100.0;

/// Coefficients `c_0, ..., c_n` of `det(lambda I - M) = sum_i c_i lambda^i`,
/// with `c_n = 1`.
pub fn characteristic_polynomial(m: &CollocationMatrix) -> Vec<f64> {
    let n = m.dim();
    let a = m.rows();
    let mut c = vec![0.0; n + 1];
    c[n] = 1.0;
    // M_k = A M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(A M_k) / k
    let mut mk = vec![vec![0.0; n]; n];
    for k in 1..=n {
        let mut next = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                next[i][j] = (0..n).map(|l| a[i][l] * mk[l][j]).sum::<f64>();
            }
            next[i][i] += c[n - k + 1];
        }
        let trace: f64 = (0..n)
            .map(|i| (0..n).map(|l| a[i][l] * next[l][i]).sum::<f64>())
            .sum();
        c[n - k] = -trace / k as f64;
        mk = next;
    }
    c
}

/// Eigenvalues of `m` via its characteristic polynomial, sorted like
/// [`super::eigenvalues`]. Only for `n <= 5`.
pub fn char_poly_eigen_oracle(m: &CollocationMatrix) -> Result<Vec<Complex64>> {
    if m.dim() > ORACLE_MAX_DIM {
        return Err(Error::UnsupportedSize(format!(
            "characteristic-polynomial oracle supports n <= {ORACLE_MAX_DIM}, got {}",
            m.dim()
        )));
    }
    let mut roots = polynomial_roots(&characteristic_polynomial(m))?;
    sort_spectrum(&mut roots);
    Ok(roots)
}

/// Roots of the monic real polynomial `sum_i c_i x^i`.
pub fn polynomial_roots(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    let n = coeffs.len() - 1;
    match n {
        0 => Ok(Vec::new()),
        1 => Ok(vec![Complex64::new(-coeffs[0] / coeffs[1], 0.0)]),
        2 => Ok(quadratic_roots(coeffs[2], coeffs[1], coeffs[0]).to_vec()),
        _ => {
            let mut roots = aberth(coeffs)?;
            merge_multiple_roots(coeffs, &mut roots);
            Ok(roots)
        }
    }
}

/// Coefficients of the `j`-th derivative.
fn derivative(coeffs: &[f64], j: usize) -> Vec<f64> {
    coeffs
        .iter()
        .enumerate()
        .skip(j)
        .map(|(i, &c)| c * ((i - j + 1)..=i).map(|f| f as f64).product::<f64>())
        .collect()
}

fn horner(coeffs: &[f64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// Forward error bound of Horner evaluation, `gamma_{2n} sum |c_i| |z|^i`.
fn horner_bound(coeffs: &[f64], z: Complex64) -> f64 {
    let r = z.norm();
    let n = coeffs.len() as f64;
    let magnitude = coeffs.iter().rev().fold(0.0, |acc, &c| acc * r + c.abs());
    2.0 * n * f64::EPSILON * magnitude
}

fn merge_multiple_roots(coeffs: &[f64], roots: &mut [Complex64]) {
    let n = roots.len();
    // connected components of the "close" relation
    let mut label: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in 0..i {
            let scale = roots[i].norm().max(roots[j].norm()).max(1.0);
            if (roots[i] - roots[j]).norm() <= CLUSTER_REL * scale {
                let (a, b) = (label[i], label[j]);
                for l in label.iter_mut() {
                    if *l == a {
                        *l = b;
                    }
                }
            }
        }
    }
    let mut seen = vec![false; n];
    for i in 0..n {
        if seen[i] {
            continue;
        }
        let members: Vec<usize> = (0..n).filter(|&j| label[j] == label[i]).collect();
        for &j in &members {
            seen[j] = true;
        }
        let k = members.len();
        if k < 2 {
            continue;
        }
        let target = derivative(coeffs, k - 1);
        let slope = derivative(coeffs, k);
        let mut z = members.iter().map(|&j| roots[j]).sum::<Complex64>() / k as f64;
        for _ in 0..50 {
            let d = horner(&slope, z);
            if d.norm() == 0.0 {
                break;
            }
            let step = horner(&target, z) / d;
            z -= step;
            if step.norm() <= f64::EPSILON * z.norm().max(1.0) {
                break;
            }
        }
        let confirmed = z.is_finite()
            && (0..k).all(|j| {
                let dj = derivative(coeffs, j);
                horner(&dj, z).norm() <= VANISH_FACTOR * horner_bound(&dj, z)
            });
        if confirmed {
            if z.im.abs() <= 1e-14 * z.norm().max(1.0) {
                z.im = 0.0;
            }
            for &j in &members {
                roots[j] = z;
            }
        }
    }
}

/// Roots of `a x^2 + b x + c`, cancellation-free form for real roots.
fn quadratic_roots(a: f64, b: f64, c: f64) -> [Complex64; 2] {
    let disc = b * b - 4.0 * a * c;
    if disc >= 0.0 {
        let q = -0.5 * (b + b.signum() * disc.sqrt());
        if q == 0.0 {
            return [Complex64::new(0.0, 0.0); 2];
        }
        [Complex64::new(q / a, 0.0), Complex64::new(c / q, 0.0)]
    } else {
        let re = -b / (2.0 * a);
        let im = (-disc).sqrt() / (2.0 * a);
        [Complex64::new(re, im), Complex64::new(re, -im)]
    }
}

fn horner_with_derivative(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut d = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        d = d * z + p;
        p = p * z + c;
    }
    (p, d)
}

fn aberth(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    // Cauchy-type bound for the starting circle
    let radius = 1.0 + coeffs[..n].iter().map(|c| (c / lead).abs()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = std::f64::consts::TAU * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(0.5 * radius, theta)
        })
        .collect();
    for _ in 0..500 {
        let mut max_step: f64 = 0.0;
        for i in 0..n {
            let (p, d) = horner_with_derivative(coeffs, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / d;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| {
                    let diff = z[i] - z[j];
                    if diff.norm() == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        diff.inv()
                    }
                })
                .sum();
            let denom = Complex64::new(1.0, 0.0) - ratio * repulsion;
            let step = if denom.norm() == 0.0 { ratio } else { ratio / denom };
            if step.is_finite() {
                z[i] -= step;
                max_step = max_step.max(step.norm() / z[i].norm().max(1.0));
            }
        }
        if max_step <= 1e-16 {
            break;
        }
    }
    if z.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical {
            message: "polynomial root iteration diverged".into(),
            partial: Vec::new(),
        });
    }
    // real polynomial: snap near-real roots only when the imaginary part is
    // pure noise relative to the root
    for v in z.iter_mut() {
        if v.im.abs() <= 1e-14 * v.norm().max(1.0) {
            v.im = 0.0;
        }
    }
    Ok(z)
}
