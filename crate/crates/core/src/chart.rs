//! Poisson bivectors on coordinate charts.
//!
//! Sign conventions: the bracket is `{F, G} = Π(dF, dG) = ∂_iF Π^{ij} ∂_jG`
//! and the sharp map is fixed by `<Π♯α, β> = Π(α, β)`, so
//! `(Π♯α)^i = α_j Π^{ji}` and `X_H(F) = {H, F}`. Equations of motion written
//! as `ẋ = {x, H}` are therefore the flow of `-X_H`.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;

use crate::error::{check_len, PlgError, Result};
use crate::fd;
use crate::field::{unguarded, Guard, ScalarField, VectorField};
use crate::lie::LieAlgebra;

pub type BivectorFn = dyn Fn(&[f64]) -> DMatrix<f64> + Send + Sync;

#[derive(Clone)]
pub struct PoissonChart {
    name: String,
    dim: usize,
    components: Arc<BivectorFn>,
    guard: Guard,
}

impl fmt::Debug for PoissonChart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PoissonChart")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .finish()
    }
}

impl PoissonChart {
    /// Chart from a closure producing the full antisymmetric matrix `Π^{ij}(x)`.
    pub fn new<F>(name: impl Into<String>, dim: usize, components: F) -> Self
    where
        F: Fn(&[f64]) -> DMatrix<f64> + Send + Sync + 'static,
    {
        PoissonChart {
            name: name.into(),
            dim,
            components: Arc::new(components),
            guard: unguarded(),
        }
    }

    /// Chart from the strictly upper triangle of `Π^{ij}(x)` listed row by row
    /// (`Π^{01}, Π^{02}, ..., Π^{12}, ...`); the lower triangle follows by
    /// antisymmetry.
    pub fn from_upper<F>(name: impl Into<String>, dim: usize, upper: F) -> Self
    where
        F: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        Self::new(name, dim, move |x| {
            let u = upper(x);
            debug_assert_eq!(u.len(), dim * (dim - 1) / 2);
            let mut m = DMatrix::zeros(dim, dim);
            let mut k = 0;
            for i in 0..dim {
                for j in i + 1..dim {
                    m[(i, j)] = u[k];
                    m[(j, i)] = -u[k];
                    k += 1;
                }
            }
            m
        })
    }

    pub fn constant(name: impl Into<String>, pi: DMatrix<f64>) -> Self {
        let dim = pi.nrows();
        Self::new(name, dim, move |_| pi.clone())
    }

    /// `Π_LP = 1/2 c^g_{ab} x_g ∂_a ^ ∂_b` on the dual of `alg`.
    pub fn lie_poisson(alg: &LieAlgebra) -> Self {
        let n = alg.dim();
        let alg = alg.clone();
        Self::new(format!("lie-poisson({})", alg.labels().join(",")), n, move |x| {
            DMatrix::from_fn(n, n, |a, b| (0..n).map(|g| alg.c(g, a, b) * x[g]).sum())
        })
    }

    pub fn with_guard(mut self, guard: Guard) -> Self {
        self.guard = guard;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn guard(&self) -> Guard {
        Arc::clone(&self.guard)
    }

    pub fn in_domain(&self, x: &[f64]) -> bool {
        x.len() == self.dim && (self.guard)(x)
    }

    fn check(&self, x: &[f64]) -> Result<()> {
        check_len(self.dim, x.len())?;
        if (self.guard)(x) {
            Ok(())
        } else {
            Err(PlgError::OutsideDomain {
                chart: self.name.clone(),
                point: x.to_vec(),
            })
        }
    }

    pub fn pi(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        self.check(x)?;
        Ok((self.components)(x))
    }

    /// Components without the domain check (finite-difference stencils).
    pub fn pi_raw(&self, x: &[f64]) -> DMatrix<f64> {
        (self.components)(x)
    }

    pub fn antisymmetry_residual(&self, x: &[f64]) -> Result<f64> {
        let p = self.pi(x)?;
        Ok((&p + p.transpose()).amax())
    }

    /// `(Π♯α)^i = α_j Π^{ji}`.
    pub fn sharp(&self, x: &[f64], alpha: &[f64]) -> Result<Vec<f64>> {
        check_len(self.dim, alpha.len())?;
        let p = self.pi(x)?;
        Ok(sharp_with(&p, alpha))
    }

    /// `{F, G}(x) = Π(dF, dG)`.
    pub fn bracket(&self, f: &ScalarField, g: &ScalarField, x: &[f64]) -> Result<f64> {
        let p = self.pi(x)?;
        let (df, dg) = (f.gradient(x), g.gradient(x));
        let mut acc = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                acc += df[i] * p[(i, j)] * dg[j];
            }
        }
        Ok(acc)
    }

    /// `X_H = Π♯(dH)`, using the closed-form gradient of `h` when present.
    pub fn hamiltonian_field(&self, h: &ScalarField) -> VectorField {
        let comps = Arc::clone(&self.components);
        let h = h.clone();
        VectorField::new(self.dim, move |x| sharp_with(&comps(x), &h.gradient(x)))
            .with_guard(self.name.clone(), self.guard())
    }

    /// `∂_k Π^{ij}(x)` for every `k`, by five-point differences.
    pub fn differential(&self, x: &[f64]) -> Result<Vec<DMatrix<f64>>> {
        self.check(x)?;
        Ok(self.differential_raw(x))
    }

    pub(crate) fn differential_raw(&self, x: &[f64]) -> Vec<DMatrix<f64>> {
        let n = self.dim;
        let mut p = x.to_vec();
        (0..n)
            .map(|k| {
                let h = fd::five_point_step(x[k]);
                let mut at = |s: f64| {
                    p[k] = x[k] + s * h;
                    let m = (self.components)(&p);
                    p[k] = x[k];
                    m
                };
                let (a, b, c, d) = (at(2.0), at(1.0), at(-1.0), at(-2.0));
                (-a + b * 8.0 - c * 8.0 + d) / (12.0 * h)
            })
            .collect()
    }

    /// Max over coordinate triples of `|{x_i,{x_j,x_k}} + cyclic|`.
    pub fn jacobi_residual(&self, x: &[f64]) -> Result<f64> {
        let p = self.pi(x)?;
        let dp = self.differential(x)?;
        let n = self.dim;
        // {x_i, F} = Π^{il} ∂_l F with F = Π^{jk}.
        let inner = |i: usize, j: usize, k: usize| -> f64 {
            (0..n).map(|l| p[(i, l)] * dp[l][(j, k)]).sum()
        };
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let s = inner(i, j, k) + inner(j, k, i) + inner(k, i, j);
                    worst = worst.max(s.abs());
                }
            }
        }
        Ok(worst)
    }

    /// Max over `points` of `|Π♯ dC|`.
    pub fn casimir_residual(&self, c: &ScalarField, points: &[Vec<f64>]) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for x in points {
            let v = self.sharp(x, &c.gradient(x))?;
            worst = worst.max(fd::max_abs(&v));
        }
        Ok(worst)
    }

    /// `λ Π0 + (1 - λ) Π1` on the intersection of the two domains.
    pub fn pencil(c0: &PoissonChart, c1: &PoissonChart, lambda: f64) -> Result<PoissonChart> {
        check_len(c0.dim, c1.dim)?;
        let (a, b) = (Arc::clone(&c0.components), Arc::clone(&c1.components));
        let (ga, gb) = (c0.guard(), c1.guard());
        Ok(PoissonChart {
            name: format!("{}*{lambda}+{}*{}", c0.name, c1.name, 1.0 - lambda),
            dim: c0.dim,
            components: Arc::new(move |x| a(x) * lambda + b(x) * (1.0 - lambda)),
            guard: Arc::new(move |x| ga(x) && gb(x)),
        })
    }
}

pub(crate) fn sharp_with(pi: &DMatrix<f64>, alpha: &[f64]) -> Vec<f64> {
    let n = alpha.len();
    (0..n)
        .map(|i| (0..n).map(|j| alpha[j] * pi[(j, i)]).sum())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::standard_algebra;

    #[test]
    fn sharp_of_zero_covector() {
        let c = PoissonChart::lie_poisson(&standard_algebra("so3", &[]).unwrap());
        assert_eq!(c.sharp(&[0.3, 0.1, 2.0], &[0.0; 3]).unwrap(), vec![0.0; 3]);
    }

    #[test]
    fn so3_sharp_matches_direct_contraction() {
        let so3 = standard_algebra("so3", &[]).unwrap();
        let c = PoissonChart::lie_poisson(&so3);
        let x = [1.0, 0.0, 0.0];
        let v = c.sharp(&x, &[0.0, 1.0, 0.0]).unwrap();
        // (Π♯ e^2)^i = Π^{2i} = c^g_{2i} x_g: only i = 3 gives c^1_{23} x_1 = 1.
        let direct: Vec<f64> = (0..3)
            .map(|i| (0..3).map(|g| so3.c(g, 1, i) * x[g]).sum())
            .collect();
        assert_eq!(v, direct);
        assert_eq!(v, vec![0.0, 0.0, 1.0]);
    }

    #[test]
    fn constant_bivector_has_zero_jacobiator() {
        let m = DMatrix::from_row_slice(3, 3, &[0.0, 1.0, -2.0, -1.0, 0.0, 0.5, 2.0, -0.5, 0.0]);
        let c = PoissonChart::constant("const", m);
        assert_eq!(c.jacobi_residual(&[0.1, 0.2, 0.3]).unwrap(), 0.0);
    }

    #[test]
    fn lie_poisson_jacobi_small() {
        for name in ["so3", "sl2", "affine2d"] {
            let c = PoissonChart::lie_poisson(&standard_algebra(name, &[]).unwrap());
            let x: Vec<f64> = (0..c.dim()).map(|i| 0.3 + i as f64).collect();
            assert!(c.jacobi_residual(&x).unwrap() < 1e-9, "{name}");
        }
        let ab = PoissonChart::lie_poisson(&LieAlgebra::abelian(3));
        assert_eq!(ab.pi(&[1.0, 2.0, 3.0]).unwrap(), DMatrix::zeros(3, 3));
    }

    #[test]
    fn non_poisson_bivector_detected() {
        // y ∂x^∂y + x ∂y^∂z: the Jacobiator is -x.
        let c = PoissonChart::from_upper("bad", 3, |x| vec![x[1], 0.0, x[0]]);
        assert!(c.jacobi_residual(&[1.0, 1.0, 1.0]).unwrap() > 0.1);
    }

    #[test]
    fn constant_hamiltonian_has_zero_field() {
        let c = PoissonChart::lie_poisson(&standard_algebra("so3", &[]).unwrap());
        let x = c.hamiltonian_field(&ScalarField::constant(4.0));
        assert_eq!(x.eval(&[1.0, 2.0, 3.0]).unwrap(), vec![0.0; 3]);
    }

    #[test]
    fn pencil_endpoints_and_identical_inputs() {
        let a = PoissonChart::lie_poisson(&standard_algebra("so3", &[]).unwrap());
        let b = PoissonChart::lie_poisson(&standard_algebra("sl2", &[]).unwrap());
        let x = [0.2, -0.4, 0.9];
        assert_eq!(PoissonChart::pencil(&a, &b, 1.0).unwrap().pi(&x).unwrap(), a.pi(&x).unwrap());
        let same = PoissonChart::pencil(&a, &a, 0.3).unwrap().pi(&x).unwrap();
        assert!((same - a.pi(&x).unwrap()).amax() < 1e-15);
        let c2 = PoissonChart::lie_poisson(&standard_algebra("affine2d", &[]).unwrap());
        assert!(PoissonChart::pencil(&a, &c2, 0.5).is_err());
    }

    #[test]
    fn guard_is_enforced() {
        let c = PoissonChart::lie_poisson(&standard_algebra("so3", &[]).unwrap())
            .with_guard(Arc::new(|x: &[f64]| x[0] > 0.0));
        assert!(matches!(
            c.sharp(&[-1.0, 0.0, 0.0], &[1.0, 0.0, 0.0]),
            Err(PlgError::OutsideDomain { .. })
        ));
    }
}
