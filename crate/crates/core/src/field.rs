//! Scalar and vector fields on coordinate charts.

use std::fmt;
use std::sync::Arc;

use crate::error::{PlgError, Result};
use crate::fd;

pub type ScalarFn = dyn Fn(&[f64]) -> f64 + Send + Sync;
pub type VectorFn = dyn Fn(&[f64]) -> Vec<f64> + Send + Sync;
pub type Guard = Arc<dyn Fn(&[f64]) -> bool + Send + Sync>;

pub fn unguarded() -> Guard {
    Arc::new(|_: &[f64]| true)
}

/// A real function on a chart, optionally with a closed-form gradient.
#[derive(Clone)]
pub struct ScalarField {
    value: Arc<ScalarFn>,
    grad: Option<Arc<VectorFn>>,
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarField")
            .field("analytic_gradient", &self.grad.is_some())
            .finish()
    }
}

impl ScalarField {
    pub fn new<F>(f: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        ScalarField {
            value: Arc::new(f),
            grad: None,
        }
    }

    pub fn with_gradient<G>(mut self, g: G) -> Self
    where
        G: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        self.grad = Some(Arc::new(g));
        self
    }

    pub fn constant(c: f64) -> Self {
        ScalarField::new(move |_| c).with_gradient(|x| vec![0.0; x.len()])
    }

    /// The coordinate function `x -> x[i]`.
    pub fn coordinate(i: usize) -> Self {
        ScalarField::new(move |x| x[i]).with_gradient(move |x| {
            let mut g = vec![0.0; x.len()];
            g[i] = 1.0;
            g
        })
    }

    /// `1/2 x^T Q x` for a symmetric matrix `q` given row-major.
    pub fn quadratic(q: Vec<Vec<f64>>) -> Self {
        let q = Arc::new(q);
        let qg = Arc::clone(&q);
        ScalarField::new(move |x| {
            let mut acc = 0.0;
            for (i, row) in q.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    acc += 0.5 * v * x[i] * x[j];
                }
            }
            acc
        })
        .with_gradient(move |x| {
            qg.iter()
                .map(|row| row.iter().zip(x).map(|(v, xj)| v * xj).sum())
                .collect()
        })
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        (self.value)(x)
    }

    pub fn has_analytic_gradient(&self) -> bool {
        self.grad.is_some()
    }

    /// Closed-form gradient when available, central differences otherwise.
    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        match &self.grad {
            Some(g) => g(x),
            None => self.fd_gradient(x),
        }
    }

    pub fn fd_gradient(&self, x: &[f64]) -> Vec<f64> {
        fd::gradient(|p| (self.value)(p), x)
    }

    /// Same function with the closed-form gradient dropped.
    pub fn without_gradient(&self) -> Self {
        ScalarField {
            value: Arc::clone(&self.value),
            grad: None,
        }
    }

    /// Max discrepancy between the closed-form and finite-difference gradient
    /// over `points` (0 when no closed form is attached).
    pub fn gradient_mismatch(&self, points: &[Vec<f64>]) -> f64 {
        let Some(g) = &self.grad else { return 0.0 };
        points
            .iter()
            .map(|p| fd::max_abs_diff(&g(p), &self.fd_gradient(p)))
            .fold(0.0, f64::max)
    }

    pub fn scaled(&self, c: f64) -> Self {
        let f = self.clone();
        let g = self.clone();
        let out = ScalarField::new(move |x| c * f.eval(x));
        if self.grad.is_some() {
            out.with_gradient(move |x| g.gradient(x).into_iter().map(|v| c * v).collect())
        } else {
            out
        }
    }

    pub fn sum(&self, other: &ScalarField) -> Self {
        let (a, b) = (self.clone(), other.clone());
        let (ga, gb) = (self.clone(), other.clone());
        let out = ScalarField::new(move |x| a.eval(x) + b.eval(x));
        if self.grad.is_some() && other.grad.is_some() {
            out.with_gradient(move |x| {
                ga.gradient(x)
                    .into_iter()
                    .zip(gb.gradient(x))
                    .map(|(u, v)| u + v)
                    .collect()
            })
        } else {
            out
        }
    }

    pub fn product(&self, other: &ScalarField) -> Self {
        let (a, b) = (self.clone(), other.clone());
        let (ga, gb) = (self.clone(), other.clone());
        let out = ScalarField::new(move |x| a.eval(x) * b.eval(x));
        if self.grad.is_some() && other.grad.is_some() {
            out.with_gradient(move |x| {
                let (fa, fb) = (ga.eval(x), gb.eval(x));
                ga.gradient(x)
                    .into_iter()
                    .zip(gb.gradient(x))
                    .map(|(u, v)| u * fb + fa * v)
                    .collect()
            })
        } else {
            out
        }
    }
}

/// A vector field evaluator carrying the domain guard of the chart it lives on.
#[derive(Clone)]
pub struct VectorField {
    dim: usize,
    domain: String,
    field: Arc<VectorFn>,
    guard: Guard,
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VectorField")
            .field("dim", &self.dim)
            .field("domain", &self.domain)
            .finish()
    }
}

impl VectorField {
    pub fn new<F>(dim: usize, field: F) -> Self
    where
        F: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        VectorField {
            dim,
            domain: format!("R^{dim}"),
            field: Arc::new(field),
            guard: unguarded(),
        }
    }

    pub fn with_guard(mut self, domain: impl Into<String>, guard: Guard) -> Self {
        self.domain = domain.into();
        self.guard = guard;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn in_domain(&self, x: &[f64]) -> bool {
        (self.guard)(x)
    }

    pub fn eval(&self, x: &[f64]) -> Result<Vec<f64>> {
        crate::error::check_len(self.dim, x.len())?;
        if !(self.guard)(x) {
            return Err(PlgError::OutsideDomain {
                chart: self.domain.clone(),
                point: x.to_vec(),
            });
        }
        Ok((self.field)(x))
    }

    /// Evaluation without the domain check, for finite-difference stencils
    /// that may straddle the guard boundary.
    pub fn eval_raw(&self, x: &[f64]) -> Vec<f64> {
        (self.field)(x)
    }

    /// Directional derivative `X(F)(x) = <dF(x), X(x)>`.
    pub fn apply(&self, f: &ScalarField, x: &[f64]) -> Result<f64> {
        let v = self.eval(x)?;
        Ok(v.iter().zip(f.gradient(x)).map(|(a, b)| a * b).sum())
    }

    /// Linear combination `a X + b Y` on the intersection of domains.
    pub fn combine(&self, a: f64, other: &VectorField, b: f64) -> Result<VectorField> {
        crate::error::check_len(self.dim, other.dim)?;
        let (x, y) = (Arc::clone(&self.field), Arc::clone(&other.field));
        let (gx, gy) = (Arc::clone(&self.guard), Arc::clone(&other.guard));
        Ok(VectorField {
            dim: self.dim,
            domain: self.domain.clone(),
            field: Arc::new(move |p| {
                x(p).into_iter()
                    .zip(y(p))
                    .map(|(u, v)| a * u + b * v)
                    .collect()
            }),
            guard: Arc::new(move |p| gx(p) && gy(p)),
        })
    }
}
