//! Lie groups given in a coordinate chart by an explicit group law.
//!
//! The chart coordinates of the tangent space at the identity are related to
//! the algebra basis by the matrix `basis`, whose columns are the basis
//! vectors `e_a` written in chart coordinates.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;

use crate::chart::PoissonChart;
use crate::error::{check_len, PlgError, Result};
use crate::fd;
use crate::field::{unguarded, Guard, ScalarField, VectorField};
use crate::lie::{LieAlgebra, Multivector};
use crate::modular::VolumeForm;

pub type GroupLaw = dyn Fn(&[f64], &[f64]) -> Vec<f64> + Send + Sync;
pub type PointMap = dyn Fn(&[f64]) -> Vec<f64> + Send + Sync;
pub type MatrixFn = dyn Fn(&[f64]) -> DMatrix<f64> + Send + Sync;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone)]
pub struct GroupModel {
    name: String,
    dim: usize,
    identity: Vec<f64>,
    multiply: Arc<GroupLaw>,
    inverse: Arc<PointMap>,
    basis: DMatrix<f64>,
    guard: Guard,
    left_jacobian: Option<Arc<MatrixFn>>,
    right_jacobian: Option<Arc<MatrixFn>>,
}

impl fmt::Debug for GroupModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroupModel")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("identity", &self.identity)
            .finish()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupAxiomResiduals {
    pub identity: f64,
    pub inverse: f64,
    pub associativity: f64,
}

impl GroupModel {
    pub fn new<M, I>(name: impl Into<String>, identity: Vec<f64>, multiply: M, inverse: I) -> Self
    where
        M: Fn(&[f64], &[f64]) -> Vec<f64> + Send + Sync + 'static,
        I: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        let dim = identity.len();
        GroupModel {
            name: name.into(),
            dim,
            identity,
            multiply: Arc::new(multiply),
            inverse: Arc::new(inverse),
            basis: DMatrix::identity(dim, dim),
            guard: unguarded(),
            left_jacobian: None,
            right_jacobian: None,
        }
    }

    /// `(R^n, +)`.
    pub fn abelian(dim: usize) -> Self {
        GroupModel::new(
            format!("R^{dim}"),
            vec![0.0; dim],
            |g, h| g.iter().zip(h).map(|(a, b)| a + b).collect(),
            |g| g.iter().map(|a| -a).collect(),
        )
        .with_left_jacobian(move |_| DMatrix::identity(dim, dim))
        .with_right_jacobian(move |_| DMatrix::identity(dim, dim))
    }

    pub fn with_basis(mut self, basis: DMatrix<f64>) -> Result<Self> {
        check_len(self.dim, basis.nrows())?;
        check_len(self.dim, basis.ncols())?;
        if basis.determinant().abs() < fd::EXACT_TOL {
            return Err(PlgError::Invalid("basis matrix is singular".into()));
        }
        self.basis = basis;
        Ok(self)
    }

    pub fn with_guard(mut self, guard: Guard) -> Self {
        self.guard = guard;
        self
    }

    /// Closed-form `d(L_g)_e` in chart coordinates, replacing finite differences.
    pub fn with_left_jacobian<F>(mut self, f: F) -> Self
    where
        F: Fn(&[f64]) -> DMatrix<f64> + Send + Sync + 'static,
    {
        self.left_jacobian = Some(Arc::new(f));
        self
    }

    /// Closed-form `d(R_g)_e` in chart coordinates.
    pub fn with_right_jacobian<F>(mut self, f: F) -> Self
    where
        F: Fn(&[f64]) -> DMatrix<f64> + Send + Sync + 'static,
    {
        self.right_jacobian = Some(Arc::new(f));
        self
    }

    /// Drop the closed-form Jacobians so every derivative goes through
    /// finite differences.
    pub fn without_analytic_jacobians(mut self) -> Self {
        self.left_jacobian = None;
        self.right_jacobian = None;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn identity(&self) -> &[f64] {
        &self.identity
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn guard(&self) -> Guard {
        Arc::clone(&self.guard)
    }

    pub fn in_domain(&self, g: &[f64]) -> bool {
        g.len() == self.dim && (self.guard)(g)
    }

    fn check(&self, g: &[f64]) -> Result<()> {
        check_len(self.dim, g.len())?;
        if (self.guard)(g) {
            Ok(())
        } else {
            Err(PlgError::OutsideDomain {
                chart: self.name.clone(),
                point: g.to_vec(),
            })
        }
    }

    pub fn multiply(&self, g: &[f64], h: &[f64]) -> Vec<f64> {
        (self.multiply)(g, h)
    }

    pub fn inverse(&self, g: &[f64]) -> Vec<f64> {
        (self.inverse)(g)
    }

    /// Identity, inverse and associativity defects, maximised over the sample.
    pub fn axiom_residuals(&self, points: &[Vec<f64>]) -> GroupAxiomResiduals {
        let mut r = GroupAxiomResiduals {
            identity: 0.0,
            inverse: 0.0,
            associativity: 0.0,
        };
        let e = &self.identity;
        for (i, g) in points.iter().enumerate() {
            let h = &points[(i + 1) % points.len()];
            let k = &points[(i + 2) % points.len()];
            r.identity = r
                .identity
                .max(fd::max_abs_diff(&self.multiply(g, e), g))
                .max(fd::max_abs_diff(&self.multiply(e, g), g));
            r.inverse = r
                .inverse
                .max(fd::max_abs_diff(&self.multiply(g, &self.inverse(g)), e));
            let lhs = self.multiply(&self.multiply(g, h), k);
            let rhs = self.multiply(g, &self.multiply(h, k));
            r.associativity = r.associativity.max(fd::max_abs_diff(&lhs, &rhs));
        }
        r
    }

    /// `d(L_g)_e` (left) or `d(R_g)_e` (right) in chart coordinates.
    pub fn translation_jacobian(&self, g: &[f64], side: Side) -> Result<DMatrix<f64>> {
        self.check(g)?;
        let j = self.translation_jacobian_raw(g, side);
        let det = j.determinant();
        if !det.is_finite() || det.abs() < f64::MIN_POSITIVE {
            return Err(PlgError::SingularJacobian {
                point: g.to_vec(),
                det,
            });
        }
        Ok(j)
    }

    fn translation_jacobian_raw(&self, g: &[f64], side: Side) -> DMatrix<f64> {
        let hook = match side {
            Side::Left => &self.left_jacobian,
            Side::Right => &self.right_jacobian,
        };
        if let Some(f) = hook {
            return f(g);
        }
        match side {
            Side::Left => fd::jacobian5(|h| self.multiply(g, h), &self.identity),
            Side::Right => fd::jacobian5(|h| self.multiply(h, g), &self.identity),
        }
    }

    /// `ξ^l(g) = d(L_g)_e ξ` or `ξ^r(g) = d(R_g)_e ξ`, with `ξ` in the algebra
    /// basis.
    pub fn invariant_field(&self, xi: &[f64], side: Side) -> Result<VectorField> {
        check_len(self.dim, xi.len())?;
        let v = &self.basis * nalgebra::DVector::from_column_slice(xi);
        let gm = self.clone();
        Ok(VectorField::new(self.dim, move |g| {
            (gm.translation_jacobian_raw(g, side) * &v).as_slice().to_vec()
        })
        .with_guard(self.name.clone(), self.guard()))
    }

    /// Value at `g` of the invariant 1-form extending `mu` (a covector on the
    /// algebra): it pairs with every invariant field `ξ` of the same side to
    /// give `mu(ξ)`.
    pub fn invariant_form(&self, mu: &[f64], side: Side, g: &[f64]) -> Result<Vec<f64>> {
        check_len(self.dim, mu.len())?;
        let jt = self.translation_jacobian(g, side)? * &self.basis;
        let inv = jt
            .try_inverse()
            .ok_or_else(|| PlgError::SingularJacobian {
                point: g.to_vec(),
                det: 0.0,
            })?;
        let a = inv.transpose() * nalgebra::DVector::from_column_slice(mu);
        Ok(a.as_slice().to_vec())
    }

    /// `Ad_g` in the algebra basis.
    ///
    /// With closed-form translation Jacobians this is `(R_g)_*^{-1} (L_g)_*`;
    /// otherwise the conjugation `h -> g h g^{-1}` is differentiated at `e`.
    pub fn adjoint_matrix(&self, g: &[f64]) -> Result<DMatrix<f64>> {
        self.check(g)?;
        let t_inv = self
            .basis
            .clone()
            .try_inverse()
            .expect("basis validated at construction");
        let coord = if self.left_jacobian.is_some() && self.right_jacobian.is_some() {
            let jr = self.translation_jacobian(g, Side::Right)?;
            let jl = self.translation_jacobian(g, Side::Left)?;
            jr.try_inverse().ok_or_else(|| PlgError::SingularJacobian {
                point: g.to_vec(),
                det: 0.0,
            })? * jl
        } else {
            let gi = self.inverse(g);
            fd::jacobian5(|h| self.multiply(&self.multiply(g, h), &gi), &self.identity)
        };
        Ok(&t_inv * coord * &self.basis)
    }

    /// `f0(g) = det Ad_g`.
    pub fn f0(&self, g: &[f64]) -> Result<f64> {
        let value = self.adjoint_matrix(g)?.determinant();
        if value > 0.0 {
            Ok(value)
        } else {
            Err(PlgError::NonPositiveF0 {
                point: g.to_vec(),
                value,
            })
        }
    }

    /// `log f0` as a scalar field (finite-difference gradient).
    pub fn log_f0_field(&self) -> ScalarField {
        let gm = self.clone();
        ScalarField::new(move |g| gm.f0(g).map(f64::ln).unwrap_or(f64::NAN))
    }

    /// Density of the left-invariant volume `ν^l` normalised to `scale` at
    /// the identity: `ρ_l(g) = scale / |det d(L_g)_e|`.
    pub fn left_volume_density(&self, scale: f64) -> Result<VolumeForm> {
        if !(scale > 0.0) {
            return Err(PlgError::Invalid(format!("volume scale must be positive, got {scale}")));
        }
        let j0 = self.translation_jacobian(&self.identity, Side::Left)?.determinant().abs();
        let gm = self.clone();
        let log_rho = ScalarField::new(move |g| {
            let d = gm.translation_jacobian_raw(g, Side::Left).determinant().abs();
            (scale * j0 / d).ln()
        });
        Ok(VolumeForm::from_log_density(
            format!("left-invariant({})", self.name),
            log_rho,
        ))
    }

    /// Structure constants read off the group law: the bracket of the
    /// left-invariant fields of `e_a, e_b` at the identity, expressed in the
    /// algebra basis. Matches the algebra's own bracket when the group law
    /// and the declared basis agree.
    pub fn bracket_at_identity(&self) -> Result<Vec<Vec<Vec<f64>>>> {
        let n = self.dim;
        let e = self.identity.clone();
        let fields: Vec<VectorField> = (0..n)
            .map(|a| self.invariant_field(&crate::lie::unit(n, a), Side::Left))
            .collect::<Result<_>>()?;
        let jacs: Vec<DMatrix<f64>> = fields
            .iter()
            .map(|f| fd::jacobian5(|p| f.eval_raw(p), &e))
            .collect();
        let vals: Vec<Vec<f64>> = fields.iter().map(|f| f.eval_raw(&e)).collect();
        let t_inv = self.basis.clone().try_inverse().expect("validated basis");
        let mut c = vec![vec![vec![0.0; n]; n]; n];
        for a in 0..n {
            for b in 0..n {
                let ya = nalgebra::DVector::from_column_slice(&vals[a]);
                let yb = nalgebra::DVector::from_column_slice(&vals[b]);
                let lie = &jacs[b] * &ya - &jacs[a] * &yb;
                let in_basis = &t_inv * lie;
                for g in 0..n {
                    c[g][a][b] = in_basis[g];
                }
            }
        }
        Ok(c)
    }

    /// Max deviation between the group's own bracket and `alg`.
    pub fn algebra_mismatch(&self, alg: &LieAlgebra) -> Result<f64> {
        check_len(self.dim, alg.dim())?;
        let c = self.bracket_at_identity()?;
        let mut worst: f64 = 0.0;
        for (g, plane) in c.iter().enumerate() {
            for (a, row) in plane.iter().enumerate() {
                for (b, v) in row.iter().enumerate() {
                    worst = worst.max((v - alg.c(g, a, b)).abs());
                }
            }
        }
        Ok(worst)
    }

    /// `d_e Π` of a multiplicative bivector, as the cobracket components
    /// `δ(e_c)` in the algebra basis.
    pub fn linearization(&self, chart: &PoissonChart) -> Result<Vec<Multivector>> {
        check_len(self.dim, chart.dim())?;
        let n = self.dim;
        let dp = chart.differential(&self.identity)?;
        let t_inv = self.basis.clone().try_inverse().expect("validated basis");
        Ok((0..n)
            .map(|c| {
                let mut d = DMatrix::zeros(n, n);
                for (k, dk) in dp.iter().enumerate() {
                    d += dk * self.basis[(k, c)];
                }
                Multivector::from_matrix(&(&t_inv * d * t_inv.transpose()))
            })
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn book(eta: f64) -> GroupModel {
        GroupModel::new(
            "book",
            vec![0.0; 3],
            move |g, h| {
                let s = (-eta * g[0]).exp();
                vec![g[0] + h[0], g[1] + h[1] * s, g[2] + h[2] * s]
            },
            move |g| {
                let s = (eta * g[0]).exp();
                vec![-g[0], -g[1] * s, -g[2] * s]
            },
        )
    }

    #[test]
    fn identity_translations_are_trivial() {
        let gm = book(0.3);
        for side in [Side::Left, Side::Right] {
            let j = gm.translation_jacobian(&[0.0; 3], side).unwrap();
            assert!((j - DMatrix::<f64>::identity(3, 3)).amax() < 1e-12);
        }
        assert!((gm.f0(&[0.0; 3]).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn book_left_jacobian_and_right_field() {
        let eta = 0.3;
        let gm = book(eta);
        let g = [0.7, -0.2, 0.4];
        let j = gm.translation_jacobian(&g, Side::Left).unwrap();
        let s = (-eta * g[0]).exp();
        let expect = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, s, s]));
        assert!((j - expect).amax() < 1e-10);
        let zr = gm.invariant_field(&[0.0, 0.0, 1.0], Side::Right).unwrap();
        let v = zr.eval(&g).unwrap();
        assert!(fd::max_abs_diff(&v, &[0.0, 0.0, 1.0]) < 1e-10);
        let xr = gm.invariant_field(&[1.0, 0.0, 0.0], Side::Right).unwrap();
        let v = xr.eval(&g).unwrap();
        assert!(fd::max_abs_diff(&v, &[1.0, -eta * g[1], -eta * g[2]]) < 1e-10);
    }

    #[test]
    fn book_f0_and_homomorphism() {
        let eta = 0.3;
        let gm = book(eta);
        let (g, h) = ([0.5, 0.1, -0.3], [-1.2, 0.4, 0.9]);
        let f = gm.f0(&g).unwrap();
        assert!((f / (-2.0 * eta * g[0]).exp() - 1.0).abs() < 1e-8);
        let gh = gm.multiply(&g, &h);
        let ad = gm.adjoint_matrix(&gh).unwrap();
        let prod = gm.adjoint_matrix(&g).unwrap() * gm.adjoint_matrix(&h).unwrap();
        assert!((ad - prod).amax() < 1e-8);
    }

    #[test]
    fn book_bracket_from_group_law() {
        let eta = 0.3;
        let gm = book(eta);
        let alg = crate::lie::standard_algebra("book", &[eta]).unwrap();
        assert!(gm.algebra_mismatch(&alg).unwrap() < 1e-8);
    }

    #[test]
    fn invariant_forms_pair_to_constants() {
        let gm = book(0.3);
        let g = [0.4, 1.0, -0.5];
        let mu = [1.0, -2.0, 0.5];
        for side in [Side::Left, Side::Right] {
            let a = gm.invariant_form(&mu, side, &g).unwrap();
            for k in 0..3 {
                let xi = gm.invariant_field(&crate::lie::unit(3, k), side).unwrap();
                let v = xi.eval(&g).unwrap();
                let pairing: f64 = a.iter().zip(&v).map(|(p, q)| p * q).sum();
                assert!((pairing - mu[k]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn abelian_group_is_flat() {
        let gm = GroupModel::abelian(3);
        let g = [1.0, -2.0, 3.0];
        assert_eq!(gm.adjoint_matrix(&g).unwrap(), DMatrix::identity(3, 3));
        assert_eq!(gm.f0(&g).unwrap(), 1.0);
        let r = gm.axiom_residuals(&[g.to_vec(), vec![0.5, 0.5, 0.5], vec![0.0, 1.0, 0.0]]);
        assert_eq!(r.associativity, 0.0);
        let rho = gm.left_volume_density(2.0).unwrap();
        assert!((rho.density(&g) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn left_density_of_book() {
        let eta = 0.3;
        let rho = book(eta).left_volume_density(1.0).unwrap();
        let g = [0.8, 0.0, 0.0];
        assert!((rho.density(&g) / (2.0 * eta * g[0]).exp() - 1.0).abs() < 1e-9);
    }
}
