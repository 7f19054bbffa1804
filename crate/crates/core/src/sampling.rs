//! Seeded random test functions.
//!
//! The catalog draws polynomials up to degree 6, sines and cosines with
//! frequency up to 8, and piecewise-linear functions with at most 16 random
//! interior breakpoints.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::function::{ClosedForm, FunctionHandle, Interval};

pub const DEFAULT_SEED: u64 = 42;

const MAX_POLY_DEGREE: usize = 6;
const MAX_FREQUENCY: u32 = 8;
const MAX_BREAKPOINTS: usize = 16;

/// Deterministic generator of catalog test functions on a fixed domain.
#[derive(Debug, Clone)]
pub struct FunctionSampler {
    rng: ChaCha8Rng,
    domain: Interval,
}

impl FunctionSampler {
    pub fn new(seed: u64, domain: Interval) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            domain,
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    /// Uniform point in the domain.
    pub fn point(&mut self) -> f64 {
        let (lo, hi) = (self.domain.lo(), self.domain.hi());
        self.rng.gen_range(lo..=hi)
    }

    fn polynomial(&mut self) -> FunctionHandle {
        let degree = self.rng.gen_range(0..=MAX_POLY_DEGREE);
        // in the local variable t = (x - lo) / width, expanded into x below
        let t_coeffs: Vec<f64> = (0..=degree).map(|_| self.rng.gen_range(-1.0..=1.0)).collect();
        let coeffs = rescale_polynomial(&t_coeffs, self.domain);
        FunctionHandle::closed(self.domain, ClosedForm::Polynomial(coeffs))
    }

    fn trigonometric(&mut self) -> FunctionHandle {
        let frequency = self.rng.gen_range(1..=MAX_FREQUENCY) as f64 / self.domain.width();
        let amplitude = self.rng.gen_range(0.25..=1.0);
        let phase = self.rng.gen_range(0.0..std::f64::consts::TAU);
        let form = if self.rng.gen_bool(0.5) {
            ClosedForm::Sine {
                amplitude,
                frequency,
                phase,
                origin: self.domain.lo(),
            }
        } else {
            ClosedForm::Cosine {
                amplitude,
                frequency,
                phase,
            }
        };
        FunctionHandle::closed(self.domain, form)
    }

    fn piecewise_linear(&mut self, lo_val: f64, hi_val: f64) -> FunctionHandle {
        let breaks = self.rng.gen_range(0..=MAX_BREAKPOINTS);
        let mut xs: Vec<f64> = (0..breaks).map(|_| self.point()).collect();
        xs.push(self.domain.lo());
        xs.push(self.domain.hi());
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        let ys = xs.iter().map(|_| self.rng.gen_range(lo_val..=hi_val)).collect();
        FunctionHandle::sampled(xs, ys).expect("sorted distinct grid")
    }

    /// Any catalog function, sign unrestricted.
    pub fn any(&mut self) -> FunctionHandle {
        match self.rng.gen_range(0..3) {
            0 => self.polynomial(),
            1 => self.trigonometric(),
            _ => self.piecewise_linear(-1.0, 1.0),
        }
    }

    /// A catalog function that is nonnegative on the whole domain.
    pub fn nonnegative(&mut self) -> FunctionHandle {
        match self.rng.gen_range(0..4) {
            0 => self.polynomial().squared(),
            1 => {
                let t = self.trigonometric();
                t.affine(0.5, 1.0).squared()
            }
            2 => FunctionHandle::closed(
                self.domain,
                ClosedForm::Exp {
                    rate: self.rng.gen_range(-3.0..=3.0),
                },
            ),
            _ => self.piecewise_linear(0.0, 1.0),
        }
    }
}

/// Expands `sum c_i ((x - lo) / w)^i` into monomial coefficients in `x`.
fn rescale_polynomial(t_coeffs: &[f64], domain: Interval) -> Vec<f64> {
    let (lo, w) = (domain.lo(), domain.width());
    let mut out = vec![0.0; t_coeffs.len()];
    // power = ((x - lo)/w)^i as monomial coefficients
    let mut power = vec![1.0];
    for &c in t_coeffs {
        for (o, p) in out.iter_mut().zip(&power) {
            *o += c * p;
        }
        let mut next = vec![0.0; power.len() + 1];
        for (i, p) in power.iter().enumerate() {
            next[i] -= p * lo / w;
            next[i + 1] += p / w;
        }
        power = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nonnegative_functions_are_nonnegative() {
        let mut s = FunctionSampler::new(7, Interval::unit());
        let grid = Interval::unit().uniform_grid(501);
        for _ in 0..200 {
            let f = s.nonnegative();
            for v in f.eval_grid(&grid).unwrap() {
                assert!(v >= 0.0, "{} went negative: {v}", f.name());
            }
        }
    }

    #[test]
    fn sampler_is_deterministic() {
        let grid = Interval::unit().uniform_grid(11);
        let mut a = FunctionSampler::new(3, Interval::unit());
        let mut b = FunctionSampler::new(3, Interval::unit());
        for _ in 0..20 {
            assert_eq!(
                a.any().eval_grid(&grid).unwrap(),
                b.any().eval_grid(&grid).unwrap()
            );
        }
    }

    #[test]
    fn rescaled_polynomial_matches_local_variable() {
        let d = Interval::new(0.25, 2.25).unwrap();
        let t = [0.5f64, -1.0, 2.0, 0.25];
        let c = rescale_polynomial(&t, d);
        for &x in &[0.25f64, 1.0, 2.25] {
            let s = (x - 0.25) / 2.0;
            let want: f64 = t.iter().enumerate().map(|(i, c)| c * s.powi(i as i32)).sum();
            let got: f64 = c.iter().enumerate().map(|(i, c)| c * x.powi(i as i32)).sum();
            assert!((want - got).abs() < 1e-13);
        }
    }
}
