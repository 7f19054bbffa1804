//! Eigenvalues of a real square matrix: balancing, Householder reduction to
//! upper Hessenberg form, then Francis double-shift QR with deflation.

// index loops mirror the reference algorithms
#![allow(clippy::needless_range_loop)]

use num_complex::Complex64;

use super::matrix::CollocationMatrix;
use crate::error::{Error, Result};

/// QR sweeps allowed per eigenvalue before giving up.
pub const MAX_ITERATIONS_PER_EIGENVALUE: usize = 40;

type Dense = Vec<Vec<f64>>;

/// All `n` eigenvalues, sorted by decreasing modulus, then decreasing real
/// part, then decreasing imaginary part. Complex pairs are exact conjugates.
pub fn eigenvalues(m: &CollocationMatrix) -> Result<Vec<Complex64>> {
    let mut a = m.rows();
    balance(&mut a);
    hessenberg(&mut a);
    let mut values = hqr(&mut a)?;
    sort_spectrum(&mut values);
    Ok(values)
}

pub fn sort_spectrum(values: &mut [Complex64]) {
    values.sort_by(|x, y| {
        y.norm()
            .total_cmp(&x.norm())
            .then(y.re.total_cmp(&x.re))
            .then(y.im.total_cmp(&x.im))
    });
}

/// Diagonal similarity scaling by powers of two so that row and column
/// norms are comparable.
fn balance(a: &mut Dense) {
    const RADIX: f64 = 2.0;
    const SQRDX: f64 = RADIX * RADIX;
    let n = a.len();
    loop {
        let mut done = true;
        for i in 0..n {
            let (mut r, mut c) = (0.0, 0.0);
            for j in 0..n {
                if j != i {
                    c += a[j][i].abs();
                    r += a[i][j].abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut g = r / RADIX;
            let mut f = 1.0;
            while c < g {
                f *= RADIX;
                c *= SQRDX;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= SQRDX;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                let g = 1.0 / f;
                for v in a[i].iter_mut() {
                    *v *= g;
                }
                for row in a.iter_mut() {
                    row[i] *= f;
                }
            }
        }
        if done {
            break;
        }
    }
}

/// Householder similarity reduction to upper Hessenberg form.
fn hessenberg(a: &mut Dense) {
    let n = a.len();
    if n < 3 {
        return;
    }
    for k in 0..n - 2 {
        let norm = (k + 1..n).map(|i| a[i][k] * a[i][k]).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let alpha = if a[k + 1][k] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (k + 1..n).map(|i| a[i][k]).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        // A <- H A with H = I - 2 v v^T / (v^T v), acting on rows k+1..n
        for j in k..n {
            let dot: f64 = v.iter().enumerate().map(|(i, vi)| vi * a[k + 1 + i][j]).sum();
            let s = 2.0 * dot / vnorm2;
            for (i, vi) in v.iter().enumerate() {
                a[k + 1 + i][j] -= s * vi;
            }
        }
        // A <- A H, acting on columns k+1..n
        for row in a.iter_mut() {
            let dot: f64 = v.iter().enumerate().map(|(i, vi)| vi * row[k + 1 + i]).sum();
            let s = 2.0 * dot / vnorm2;
            for (i, vi) in v.iter().enumerate() {
                row[k + 1 + i] -= s * vi;
            }
        }
        a[k + 1][k] = alpha;
        for row in a.iter_mut().skip(k + 2) {
            row[k] = 0.0;
        }
    }
}

fn sign(a: f64, b: f64) -> f64 {
    if b >= 0.0 {
        a.abs()
    } else {
        -a.abs()
    }
}

/// Francis double-shift QR on an upper Hessenberg matrix (destroyed).
fn hqr(a: &mut Dense) -> Result<Vec<Complex64>> {
    let n = a.len();
    let mut wr = vec![0.0; n];
    let mut wi = vec![0.0; n];
    let mut found = vec![false; n];
    let mut anorm = 0.0;
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += a[i][j].abs();
        }
    }
    let mut nn = n as isize - 1;
    let mut t = 0.0;
    while nn >= 0 {
        let nu = nn as usize;
        let mut its = 0;
        loop {
            // locate the last negligible subdiagonal entry
            let mut l = nu;
            while l >= 1 {
                let mut s = a[l - 1][l - 1].abs() + a[l][l].abs();
                if s == 0.0 {
                    s = anorm;
                }
                if a[l][l - 1].abs() <= f64::EPSILON * s {
                    a[l][l - 1] = 0.0;
                    break;
                }
                l -= 1;
            }
            let mut x = a[nu][nu];
            if l == nu {
                wr[nu] = x + t;
                wi[nu] = 0.0;
                found[nu] = true;
                nn -= 1;
                break;
            }
            let mut y = a[nu - 1][nu - 1];
            let mut w = a[nu][nu - 1] * a[nu - 1][nu];
            if l == nu - 1 {
                let p = 0.5 * (y - x);
                let q = p * p + w;
                let mut z = q.abs().sqrt();
                x += t;
                if q >= 0.0 {
                    z = p + sign(z, p);
                    wr[nu - 1] = x + z;
                    wr[nu] = if z != 0.0 { x - w / z } else { x + z };
                    wi[nu - 1] = 0.0;
                    wi[nu] = 0.0;
                } else {
                    wr[nu - 1] = x + p;
                    wr[nu] = x + p;
                    wi[nu - 1] = -z;
                    wi[nu] = z;
                }
                found[nu - 1] = true;
                found[nu] = true;
                nn -= 2;
                break;
            }
            if its == MAX_ITERATIONS_PER_EIGENVALUE {
                let partial = (0..n).filter(|&i| found[i]).map(|i| (wr[i], wi[i])).collect();
                return Err(Error::Numerical {
                    message: format!(
                        "QR iteration did not converge within {MAX_ITERATIONS_PER_EIGENVALUE} sweeps at index {nu}"
                    ),
                    partial,
                });
            }
            if its > 0 && its % 10 == 0 {
                // exceptional shift
                t += x;
                for i in 0..=nu {
                    a[i][i] -= x;
                }
                let s = a[nu][nu - 1].abs() + a[nu - 1][nu - 2].abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            its += 1;

            // look for two consecutive small subdiagonal elements
            let mut m = nu - 2;
            let (mut p, mut q, mut r);
            loop {
                let z = a[m][m];
                let rr = x - z;
                let ss = y - z;
                p = (rr * ss - w) / a[m + 1][m] + a[m][m + 1];
                q = a[m + 1][m + 1] - z - rr - ss;
                r = a[m + 2][m + 1];
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = a[m][m - 1].abs() * (q.abs() + r.abs());
                let v = p.abs() * (a[m - 1][m - 1].abs() + z.abs() + a[m + 1][m + 1].abs());
                if u <= f64::EPSILON * v {
                    break;
                }
                m -= 1;
            }
            for i in m + 2..=nu {
                a[i][i - 2] = 0.0;
                if i != m + 2 {
                    a[i][i - 3] = 0.0;
                }
            }
            // double QR step on rows l..=nu and columns m..=nu
            let mut k = m;
            while k < nu {
                let mut xk = 0.0;
                if k != m {
                    p = a[k][k - 1];
                    q = a[k + 1][k - 1];
                    r = if k != nu - 1 { a[k + 2][k - 1] } else { 0.0 };
                    xk = p.abs() + q.abs() + r.abs();
                    if xk != 0.0 {
                        p /= xk;
                        q /= xk;
                        r /= xk;
                    }
                }
                let s = sign((p * p + q * q + r * r).sqrt(), p);
                if s != 0.0 {
                    if k == m {
                        if l != m {
                            a[k][k - 1] = -a[k][k - 1];
                        }
                    } else {
                        a[k][k - 1] = -s * xk;
                    }
                    p += s;
                    let xq = p / s;
                    let yq = q / s;
                    let zq = r / s;
                    q /= p;
                    r /= p;
                    for j in k..=nu {
                        let mut pp = a[k][j] + q * a[k + 1][j];
                        if k != nu - 1 {
                            pp += r * a[k + 2][j];
                            a[k + 2][j] -= pp * zq;
                        }
                        a[k + 1][j] -= pp * yq;
                        a[k][j] -= pp * xq;
                    }
                    let mmin = if nu < k + 3 { nu } else { k + 3 };
                    for row in a.iter_mut().take(mmin + 1).skip(l) {
                        let mut pp = xq * row[k] + yq * row[k + 1];
                        if k != nu - 1 {
                            pp += zq * row[k + 2];
                            row[k + 2] -= pp * r;
                        }
                        row[k + 1] -= pp * q;
                        row[k] -= pp;
                    }
                }
                k += 1;
            }
        }
    }
    Ok(wr
        .into_iter()
        .zip(wi)
        .map(|(re, im)| Complex64::new(re, im))
        .collect())
}
