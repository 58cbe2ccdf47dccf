//! Cobrackets, r-matrices and the dual Lie algebra of a Lie bialgebra.

use serde::Serialize;

use crate::error::{check_len, PlgError, Result};
use crate::fd::EXACT_TOL;
use crate::lie::{unit, LieAlgebra, Multivector};

/// `delta: g -> wedge^2 g`, stored as one bivector per basis element.
#[derive(Debug, Clone, PartialEq)]
pub struct Cobracket {
    base: LieAlgebra,
    delta: Vec<Multivector>,
}

impl Cobracket {
    pub fn from_components(base: LieAlgebra, delta: Vec<Multivector>) -> Result<Self> {
        check_len(base.dim(), delta.len())?;
        for d in &delta {
            check_len(base.dim(), d.dim())?;
            if d.degree() != 2 {
                return Err(PlgError::Degree {
                    degree: d.degree(),
                    reason: "cobracket values must be bivectors".into(),
                });
            }
            let residual = d.antisymmetry_residual();
            if residual > EXACT_TOL {
                return Err(PlgError::Antisymmetry {
                    residual,
                    tol: EXACT_TOL,
                });
            }
        }
        Ok(Cobracket { base, delta })
    }

    /// `delta(xi) = ad_xi r`.
    pub fn from_r(base: &LieAlgebra, r: &Multivector) -> Result<Self> {
        if r.degree() != 2 {
            return Err(PlgError::Degree {
                degree: r.degree(),
                reason: "an r-matrix is a bivector".into(),
            });
        }
        check_len(base.dim(), r.dim())?;
        let delta = (0..base.dim())
            .map(|a| base.schouten(&Multivector::basis_vector(base.dim(), a), r))
            .collect::<Result<Vec<_>>>()?;
        Ok(Cobracket {
            base: base.clone(),
            delta,
        })
    }

    /// The cobracket whose transpose-read is the bracket of `dual`:
    /// `delta(e_g)^{ab} = c*^g_{ab}`.
    pub fn from_dual(base: &LieAlgebra, dual: &LieAlgebra) -> Result<Self> {
        let n = base.dim();
        check_len(n, dual.dim())?;
        let delta = (0..n)
            .map(|g| {
                let m = nalgebra::DMatrix::from_fn(n, n, |a, b| dual.c(g, a, b));
                Multivector::from_matrix(&m)
            })
            .collect();
        Ok(Cobracket {
            base: base.clone(),
            delta,
        })
    }

    pub fn zero(base: &LieAlgebra) -> Self {
        let n = base.dim();
        Cobracket {
            base: base.clone(),
            delta: vec![Multivector::zero(n, 2); n],
        }
    }

    pub fn base(&self) -> &LieAlgebra {
        &self.base
    }

    pub fn components(&self) -> &[Multivector] {
        &self.delta
    }

    /// `delta(xi)` for an arbitrary coefficient vector.
    pub fn apply(&self, xi: &[f64]) -> Result<Multivector> {
        check_len(self.base.dim(), xi.len())?;
        let mut out = Multivector::zero(self.base.dim(), 2);
        for (d, &c) in self.delta.iter().zip(xi) {
            if c != 0.0 {
                out.add_scaled(d, c);
            }
        }
        Ok(out)
    }

    /// Max-abs residual of `delta[a,b] - ad_a delta(b) + ad_b delta(a)` over
    /// basis pairs.
    pub fn cocycle_residual(&self) -> Result<f64> {
        let n = self.base.dim();
        let mut worst: f64 = 0.0;
        for a in 0..n {
            for b in a + 1..n {
                let (ea, eb) = (unit(n, a), unit(n, b));
                let mut lhs = self.apply(&self.base.bracket(&ea, &eb)?)?;
                let ad_a = self
                    .base
                    .schouten(&Multivector::vector(&ea), &self.delta[b])?;
                let ad_b = self
                    .base
                    .schouten(&Multivector::vector(&eb), &self.delta[a])?;
                lhs.add_scaled(&ad_a, -1.0);
                lhs.add_scaled(&ad_b, 1.0);
                worst = worst.max(lhs.max_abs());
            }
        }
        Ok(worst)
    }

    /// Structure constants of `g*`: `[e^a, e^b] = delta(e_g)^{ab} e^g`.
    pub fn dual_algebra(&self) -> Result<LieAlgebra> {
        self.dual_algebra_with_tolerance(EXACT_TOL)
    }

    pub fn dual_algebra_with_tolerance(&self, tol: f64) -> Result<LieAlgebra> {
        let n = self.base.dim();
        let mut c = Vec::with_capacity(n * n * n);
        for g in 0..n {
            for a in 0..n {
                for b in 0..n {
                    c.push(self.delta[g].get(&[a, b]));
                }
            }
        }
        let labels = self
            .base
            .labels()
            .iter()
            .map(|l| format!("{l}*"))
            .collect();
        LieAlgebra::from_flat(n, c, labels, tol)
    }
}

/// Max-abs residual of the generalized Yang-Baxter equation: how far
/// `[r, r]` is from being ad-invariant.
pub fn gybe_residual(alg: &LieAlgebra, r: &Multivector) -> Result<f64> {
    if r.degree() != 2 {
        return Err(PlgError::Degree {
            degree: r.degree(),
            reason: "an r-matrix is a bivector".into(),
        });
    }
    let n = alg.dim();
    if n < 3 {
        // wedge^3 g = 0
        return Ok(0.0);
    }
    let rr = alg.schouten(r, r)?;
    let mut worst: f64 = 0.0;
    for a in 0..n {
        let v = alg.schouten(&Multivector::basis_vector(n, a), &rr)?;
        worst = worst.max(v.max_abs());
    }
    Ok(worst)
}

/// A Lie bialgebra `(g, g*)` with its cobracket and, for coboundary
/// structures, the generating r-matrix.
#[derive(Debug, Clone)]
pub struct LieBialgebra {
    primal: LieAlgebra,
    dual: LieAlgebra,
    cobracket: Cobracket,
    r: Option<Multivector>,
}

/// Unimodularity verdict of a Poisson-Lie structure, read off the dual algebra.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnimodularityVerdict {
    pub dual_modular_character: Vec<f64>,
    pub is_unimodular: bool,
}

impl LieBialgebra {
    pub fn new(cobracket: Cobracket) -> Result<Self> {
        Self::with_tolerance(cobracket, EXACT_TOL)
    }

    pub fn with_tolerance(cobracket: Cobracket, tol: f64) -> Result<Self> {
        let residual = cobracket.cocycle_residual()?;
        if residual > tol {
            return Err(PlgError::Cocycle { residual, tol });
        }
        let dual = cobracket.dual_algebra_with_tolerance(tol)?;
        Ok(LieBialgebra {
            primal: cobracket.base().clone(),
            dual,
            cobracket,
            r: None,
        })
    }

    pub fn from_r(base: &LieAlgebra, r: Multivector) -> Result<Self> {
        let cob = Cobracket::from_r(base, &r)?;
        let mut b = Self::new(cob)?;
        b.r = Some(r);
        Ok(b)
    }

    /// The bialgebra of a Lie-Poisson space: abelian `g` whose dual is `alg`.
    pub fn lie_poisson(alg: &LieAlgebra) -> Result<Self> {
        let base = LieAlgebra::abelian(alg.dim());
        Self::new(Cobracket::from_dual(&base, alg)?)
    }

    pub fn primal(&self) -> &LieAlgebra {
        &self.primal
    }

    pub fn dual(&self) -> &LieAlgebra {
        &self.dual
    }

    pub fn cobracket(&self) -> &Cobracket {
        &self.cobracket
    }

    pub fn r(&self) -> Option<&Multivector> {
        self.r.as_ref()
    }

    /// `M_{g*}` as an element of `g`.
    pub fn dual_modular_character(&self) -> Vec<f64> {
        self.dual.modular_character()
    }

    pub fn unimodularity(&self) -> UnimodularityVerdict {
        self.unimodularity_with_tolerance(1e-10)
    }

    pub fn unimodularity_with_tolerance(&self, tol: f64) -> UnimodularityVerdict {
        let m = self.dual_modular_character();
        let is_unimodular = m.iter().all(|v| v.abs() <= tol);
        UnimodularityVerdict {
            dual_modular_character: m,
            is_unimodular,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::standard_algebra;

    fn sl2_dj() -> LieBialgebra {
        let sl2 = standard_algebra("sl2", &[]).unwrap();
        let r = Multivector::bivector(3, &[(2, 1, 1.0)]).unwrap();
        LieBialgebra::from_r(&sl2, r).unwrap()
    }

    #[test]
    fn drinfeld_jimbo_cobracket() {
        let b = sl2_dj();
        let d = b.cobracket().components();
        assert_eq!(d[0].max_abs(), 0.0);
        assert_eq!(d[1], Multivector::bivector(3, &[(0, 1, 1.0)]).unwrap());
        assert_eq!(d[2], Multivector::bivector(3, &[(0, 2, 1.0)]).unwrap());
    }

    #[test]
    fn drinfeld_jimbo_dual_and_verdict() {
        let b = sl2_dj();
        let dual = b.dual();
        assert_eq!(dual.bracket(&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]).unwrap(), vec![0.0, 1.0, 0.0]);
        assert_eq!(dual.bracket(&[1.0, 0.0, 0.0], &[0.0, 0.0, 1.0]).unwrap(), vec![0.0, 0.0, 1.0]);
        assert_eq!(dual.bracket(&[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]).unwrap(), vec![0.0; 3]);
        let v = b.unimodularity();
        assert_eq!(v.dual_modular_character, vec![2.0, 0.0, 0.0]);
        assert!(!v.is_unimodular);
    }

    #[test]
    fn gybe_for_standard_and_zero_r() {
        let sl2 = standard_algebra("sl2", &[]).unwrap();
        let r = Multivector::bivector(3, &[(2, 1, 1.0)]).unwrap();
        assert_eq!(gybe_residual(&sl2, &r).unwrap(), 0.0);
        assert_eq!(gybe_residual(&sl2, &Multivector::zero(3, 2)).unwrap(), 0.0);
        assert!(gybe_residual(&sl2, &Multivector::basis_vector(3, 0)).is_err());
    }

    #[test]
    fn zero_r_gives_zero_cobracket_and_abelian_dual() {
        let sl2 = standard_algebra("sl2", &[]).unwrap();
        let c = Cobracket::from_r(&sl2, &Multivector::zero(3, 2)).unwrap();
        assert!(c.components().iter().all(|d| d.max_abs() == 0.0));
        assert_eq!(c.cocycle_residual().unwrap(), 0.0);
        let dual = c.dual_algebra().unwrap();
        let n = dual.dim();
        for g in 0..n {
            for a in 0..n {
                for b in 0..n {
                    assert_eq!(dual.c(g, a, b), 0.0);
                }
            }
        }
    }

    #[test]
    fn su2_declared_cobracket_is_a_cocycle() {
        let su2 = standard_algebra("su2_quaternion", &[]).unwrap();
        let delta = vec![
            Multivector::zero(3, 2),
            Multivector::bivector(3, &[(0, 1, -1.0)]).unwrap(),
            Multivector::bivector(3, &[(0, 2, -1.0)]).unwrap(),
        ];
        let c = Cobracket::from_components(su2, delta).unwrap();
        assert!(c.cocycle_residual().unwrap() < 1e-12);
        let b = LieBialgebra::new(c).unwrap();
        assert_eq!(b.dual_modular_character(), vec![-2.0, 0.0, 0.0]);
    }

    #[test]
    fn lorenz_cobracket_is_a_cocycle() {
        let eta = 0.3;
        let g = standard_algebra("b2xb2", &[eta]).unwrap();
        let delta = vec![
            Multivector::bivector(4, &[(1, 2, 1.0)]).unwrap(),
            Multivector::bivector(4, &[(0, 2, 0.5)]).unwrap(),
            Multivector::bivector(4, &[(0, 1, -0.5)]).unwrap(),
            Multivector::bivector(4, &[(0, 1, -0.5)]).unwrap(),
        ];
        let c = Cobracket::from_components(g, delta).unwrap();
        assert!(c.cocycle_residual().unwrap() <= 1e-12);
        let b = LieBialgebra::new(c).unwrap();
        assert!(b.unimodularity().is_unimodular);
    }

    #[test]
    fn non_cocycle_is_rejected() {
        let g = standard_algebra("book", &[1.0]).unwrap();
        // delta(Y) = X^Y alone breaks the cocycle condition on [X, Y] = -Y.
        let delta = vec![
            Multivector::zero(3, 2),
            Multivector::bivector(3, &[(0, 1, 1.0)]).unwrap(),
            Multivector::zero(3, 2),
        ];
        let c = Cobracket::from_components(g, delta).unwrap();
        assert!(c.cocycle_residual().unwrap() > 0.1);
        assert!(matches!(LieBialgebra::new(c), Err(PlgError::Cocycle { .. })));
    }

    #[test]
    fn euler_top_dual_is_so3_type() {
        let g = standard_algebra("book", &[0.4]).unwrap();
        let delta = vec![
            Multivector::bivector(3, &[(1, 2, -1.0)]).unwrap(),
            Multivector::bivector(3, &[(0, 2, 1.0)]).unwrap(),
            Multivector::bivector(3, &[(0, 1, -1.0)]).unwrap(),
        ];
        let b = LieBialgebra::new(Cobracket::from_components(g, delta).unwrap()).unwrap();
        let d = b.dual();
        assert_eq!(d.bracket(&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]).unwrap(), vec![0.0, 0.0, -1.0]);
        assert_eq!(d.bracket(&[1.0, 0.0, 0.0], &[0.0, 0.0, 1.0]).unwrap(), vec![0.0, 1.0, 0.0]);
        assert_eq!(d.bracket(&[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]).unwrap(), vec![-1.0, 0.0, 0.0]);
        assert!(b.unimodularity().is_unimodular);
    }
}
