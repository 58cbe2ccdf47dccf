//! Seeded point sampling and random polynomial test functions.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{PlgError, Result};
use crate::field::{Guard, ScalarField};

pub const DEFAULT_SEED: u64 = 0x5eed_2024;

/// `PLG_SEED` when set to an integer, the default seed otherwise.
pub fn seed_from_env() -> u64 {
    std::env::var("PLG_SEED")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

/// Axis-aligned box with an optional stricter acceptance predicate.
#[derive(Clone)]
pub struct SampleBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub accept: Guard,
}

impl std::fmt::Debug for SampleBox {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SampleBox")
            .field("lo", &self.lo)
            .field("hi", &self.hi)
            .finish()
    }
}

impl SampleBox {
    pub fn cube(dim: usize, half_width: f64) -> Self {
        Self::around(&vec![0.0; dim], half_width)
    }

    pub fn around(center: &[f64], half_width: f64) -> Self {
        SampleBox {
            lo: center.iter().map(|c| c - half_width).collect(),
            hi: center.iter().map(|c| c + half_width).collect(),
            accept: Arc::new(|_: &[f64]| true),
        }
    }

    pub fn with_accept(mut self, accept: Guard) -> Self {
        self.accept = accept;
        self
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }
}

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..hi)
    }

    /// `count` points of `bx` accepted by both `bx.accept` and `guard`.
    pub fn points(&mut self, bx: &SampleBox, guard: &Guard, count: usize) -> Result<Vec<Vec<f64>>> {
        let mut out = Vec::with_capacity(count);
        let mut attempts = 0usize;
        while out.len() < count {
            attempts += 1;
            if attempts > 1000 * count.max(1) {
                return Err(PlgError::Invalid(
                    "sampling box has almost no admissible points".into(),
                ));
            }
            let p: Vec<f64> = bx
                .lo
                .iter()
                .zip(&bx.hi)
                .map(|(a, b)| self.rng.gen_range(*a..*b))
                .collect();
            if (bx.accept)(&p) && guard(&p) {
                out.push(p);
            }
        }
        Ok(out)
    }

    /// Random polynomial in `dim` variables with `terms` monomials of total
    /// degree `1..=degree` and coefficients in `[-1, 1]`.
    pub fn polynomial(&mut self, dim: usize, degree: u32, terms: usize) -> Polynomial {
        let mut monomials = Vec::with_capacity(terms);
        for _ in 0..terms {
            let total = self.rng.gen_range(1..=degree.max(1));
            let mut exps = vec![0u32; dim];
            for _ in 0..total {
                exps[self.rng.gen_range(0..dim)] += 1;
            }
            monomials.push((self.rng.gen_range(-1.0..1.0), exps));
        }
        Polynomial { terms: monomials }
    }
}

/// `Σ c x^e` with a closed-form gradient.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    pub terms: Vec<(f64, Vec<u32>)>,
}

impl Polynomial {
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(c, e)| c * e.iter().zip(x).map(|(k, v)| v.powi(*k as i32)).product::<f64>())
            .sum()
    }

    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; x.len()];
        for (c, e) in &self.terms {
            for (i, gi) in g.iter_mut().enumerate() {
                if e[i] == 0 {
                    continue;
                }
                let mut t = c * e[i] as f64;
                for (j, (k, v)) in e.iter().zip(x).enumerate() {
                    let p = if j == i { k - 1 } else { *k };
                    t *= v.powi(p as i32);
                }
                *gi += t;
            }
        }
        g
    }

    pub fn to_field(&self) -> ScalarField {
        let (a, b) = (self.clone(), self.clone());
        ScalarField::new(move |x| a.eval(x)).with_gradient(move |x| b.gradient(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fd;

    #[test]
    fn same_seed_same_points() {
        let bx = SampleBox::cube(3, 1.0);
        let g: Guard = Arc::new(|x: &[f64]| x[0] > -0.5);
        let a = Sampler::new(7).points(&bx, &g, 20).unwrap();
        let b = Sampler::new(7).points(&bx, &g, 20).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|p| p[0] > -0.5));
    }

    #[test]
    fn polynomial_gradient_matches_fd() {
        let mut s = Sampler::new(3);
        let p = s.polynomial(4, 3, 6).to_field();
        let pts = s.points(&SampleBox::cube(4, 1.0), &crate::field::unguarded(), 10).unwrap();
        assert!(p.gradient_mismatch(&pts) < 1e-8);
        let x = [0.5, -0.25, 1.0, 2.0];
        let q = Polynomial { terms: vec![(2.0, vec![2, 1, 0, 0])] };
        assert!(fd::max_abs_diff(&q.gradient(&x), &[2.0 * 2.0 * 0.5 * -0.25, 2.0 * 0.25, 0.0, 0.0]) < 1e-15);
    }

    #[test]
    fn impossible_box_errors() {
        let never: Guard = Arc::new(|_: &[f64]| false);
        assert!(Sampler::new(1).points(&SampleBox::cube(2, 1.0), &never, 3).is_err());
    }
}
