//! Volume forms, divergences and modular vector fields.
//!
//! With the sharp convention of [`crate::chart`], the modular field of a
//! volume `Φ = ρ dx` has components
//! `M^i = ∂_j Π^{ij} + Π^{ij} ∂_j log ρ`, so that `<dH, M> = div_Φ(X_H)`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use crate::bialgebra::LieBialgebra;
use crate::chart::{sharp_with, PoissonChart};
use crate::error::{check_len, PlgError, Result};
use crate::fd;
use crate::field::{ScalarField, VectorField};
use crate::group::{GroupModel, Side};

/// A positive density against coordinate volume, stored through `log ρ`.
#[derive(Debug, Clone)]
pub struct VolumeForm {
    name: String,
    log_density: ScalarField,
}

impl VolumeForm {
    pub fn lebesgue(dim: usize) -> Self {
        VolumeForm {
            name: format!("lebesgue(R^{dim})"),
            log_density: ScalarField::constant(0.0),
        }
    }

    pub fn from_log_density(name: impl Into<String>, log_density: ScalarField) -> Self {
        VolumeForm {
            name: name.into(),
            log_density,
        }
    }

    /// Volume with density `rho`; the log-gradient is `∇ρ / ρ` when `rho`
    /// carries a closed-form gradient.
    pub fn from_density(name: impl Into<String>, rho: ScalarField) -> Self {
        let r = rho.clone();
        let mut log = ScalarField::new(move |x| r.eval(x).ln());
        if rho.has_analytic_gradient() {
            let r = rho.clone();
            log = log.with_gradient(move |x| {
                let v = r.eval(x);
                r.gradient(x).into_iter().map(|g| g / v).collect()
            });
        }
        VolumeForm::from_log_density(name, log)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn density(&self, x: &[f64]) -> f64 {
        self.log_density.eval(x).exp()
    }

    pub fn log_density(&self, x: &[f64]) -> f64 {
        self.log_density.eval(x)
    }

    pub fn grad_log_density(&self, x: &[f64]) -> Vec<f64> {
        self.log_density.gradient(x)
    }

    pub fn log_density_field(&self) -> &ScalarField {
        &self.log_density
    }

    /// `e^F Φ`.
    pub fn conformal(&self, f: &ScalarField) -> Self {
        VolumeForm {
            name: format!("exp(F)*{}", self.name),
            log_density: self.log_density.sum(f),
        }
    }
}

/// `div_Φ X = ∂_i X^i + X(log ρ)` at `x`.
pub fn divergence(x_field: &VectorField, phi: &VolumeForm, x: &[f64]) -> Result<f64> {
    let v = x_field.eval(x)?;
    let tr = fd::trace5(|p| x_field.eval_raw(p), x);
    let gl = phi.grad_log_density(x);
    Ok(tr + v.iter().zip(&gl).map(|(a, b)| a * b).sum::<f64>())
}

/// The modular vector field `M_Φ` of `chart`.
pub fn modular_field(chart: &PoissonChart, phi: &VolumeForm) -> VectorField {
    let (chart_c, phi) = (chart.clone(), phi.clone());
    let n = chart.dim();
    VectorField::new(n, move |x| {
        let p = chart_c.pi_raw(x);
        let dp = chart_c.differential_raw(x);
        let gl = phi.grad_log_density(x);
        (0..n)
            .map(|i| (0..n).map(|j| dp[j][(i, j)] + p[(i, j)] * gl[j]).sum())
            .collect()
    })
    .with_guard(chart.name(), chart.guard())
}

/// Max over `points` of `|M_{e^F Φ} - M_Φ + X_F|`.
pub fn conformal_shift_residual(
    chart: &PoissonChart,
    phi: &VolumeForm,
    f: &ScalarField,
    points: &[Vec<f64>],
) -> Result<f64> {
    let shifted = modular_field(chart, &phi.conformal(f));
    let base = modular_field(chart, phi);
    let xf = chart.hamiltonian_field(f);
    let mut worst: f64 = 0.0;
    for x in points {
        let (a, b, c) = (shifted.eval(x)?, base.eval(x)?, xf.eval(x)?);
        for i in 0..a.len() {
            worst = worst.max((a[i] - b[i] + c[i]).abs());
        }
    }
    Ok(worst)
}

fn check_group(gm: &GroupModel, b: &LieBialgebra) -> Result<()> {
    check_len(gm.dim(), b.primal().dim())
}

/// `1/2 (M_{g*}^l + M_{g*}^r)`.
pub fn symmetric_modular_field(gm: &GroupModel, b: &LieBialgebra) -> Result<VectorField> {
    check_group(gm, b)?;
    let m = b.dual_modular_character();
    let l = gm.invariant_field(&m, Side::Left)?;
    let r = gm.invariant_field(&m, Side::Right)?;
    l.combine(0.5, &r, 0.5)
}

/// Modular field of the left-invariant volume assembled from bialgebra data:
/// `1/2 (M_{g*}^l + M_{g*}^r + Π♯(M_g^r))`.
pub fn elw_modular_field(
    gm: &GroupModel,
    chart: &PoissonChart,
    b: &LieBialgebra,
) -> Result<VectorField> {
    check_len(gm.dim(), chart.dim())?;
    let sym = symmetric_modular_field(gm, b)?;
    let m_g = b.primal().modular_character();
    let (gm_c, chart_c) = (gm.clone(), chart.clone());
    Ok(VectorField::new(gm.dim(), move |x| {
        let s = sym.eval_raw(x);
        let alpha = gm_c
            .invariant_form(&m_g, Side::Right, x)
            .unwrap_or_else(|_| vec![f64::NAN; x.len()]);
        let t = sharp_with(&chart_c.pi_raw(x), &alpha);
        s.iter().zip(t).map(|(a, b)| a + 0.5 * b).collect()
    })
    .with_guard(chart.name(), chart.guard()))
}

/// Max over `points` of `|M_g^r - d log f0|`.
pub fn log_f0_residual(gm: &GroupModel, b: &LieBialgebra, points: &[Vec<f64>]) -> Result<f64> {
    check_group(gm, b)?;
    let m_g = b.primal().modular_character();
    let log_f0 = gm.log_f0_field();
    let mut worst: f64 = 0.0;
    for x in points {
        let a = gm.invariant_form(&m_g, Side::Right, x)?;
        worst = worst.max(fd::max_abs_diff(&a, &log_f0.gradient(x)));
    }
    Ok(worst)
}

#[derive(Debug, Clone, Serialize)]
pub struct TheoremResidual {
    pub max: f64,
    pub point: Vec<f64>,
}

/// Pointwise value of `X_H(σ - log √f0) + 1/2 (M_{g*}^l + M_{g*}^r)(H)`.
pub fn theorem_integrand(
    gm: &GroupModel,
    chart: &PoissonChart,
    b: &LieBialgebra,
    h: &ScalarField,
    sigma: &ScalarField,
    x: &[f64],
) -> Result<f64> {
    let xh = chart.hamiltonian_field(h).eval(x)?;
    let sym = symmetric_modular_field(gm, b)?.eval(x)?;
    let dsig = sigma.gradient(x);
    let dlog_f0 = gm.log_f0_field().gradient(x);
    let dh = h.gradient(x);
    let mut acc = 0.0;
    for i in 0..x.len() {
        acc += xh[i] * (dsig[i] - 0.5 * dlog_f0[i]) + sym[i] * dh[i];
    }
    Ok(acc)
}

/// The residual whose vanishing at every point is equivalent to `X_H`
/// preserving `e^σ ν^l`; reports the worst point of the sample.
pub fn theorem_residual(
    gm: &GroupModel,
    chart: &PoissonChart,
    b: &LieBialgebra,
    h: &ScalarField,
    sigma: &ScalarField,
    points: &[Vec<f64>],
) -> Result<TheoremResidual> {
    let mut out = TheoremResidual {
        max: 0.0,
        point: points.first().cloned().unwrap_or_default(),
    };
    for x in points {
        let v = theorem_integrand(gm, chart, b, h, sigma, x)?.abs();
        if v > out.max {
            out = TheoremResidual {
                max: v,
                point: x.clone(),
            };
        }
    }
    Ok(out)
}

/// `(M_{g*}^l + M_{g*}^r)(g)(H)`; must vanish at equilibria of `X_H` when a
/// volume is preserved.
pub fn singular_condition(
    gm: &GroupModel,
    b: &LieBialgebra,
    h: &ScalarField,
    g: &[f64],
) -> Result<f64> {
    let sym = symmetric_modular_field(gm, b)?.eval(g)?;
    Ok(2.0 * sym.iter().zip(h.gradient(g)).map(|(a, b)| a * b).sum::<f64>())
}

/// `√f0 ν^l` with `ν^l` normalised to `scale` at the identity.
pub fn invariant_volume(gm: &GroupModel, scale: f64) -> Result<VolumeForm> {
    let left = gm.left_volume_density(scale)?;
    let log_f0 = gm.log_f0_field();
    let log_left = left.log_density_field().clone();
    let log = ScalarField::new(move |g| 0.5 * log_f0.eval(g) + log_left.eval(g));
    Ok(VolumeForm::from_log_density(
        format!("sqrt(f0)*left-invariant({})", gm.name()),
        log,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MorseVerdict {
    #[serde(rename = "theorem not applicable")]
    NotApplicable,
    #[serde(rename = "no invariant volume exists for this Hamiltonian flow")]
    NoInvariantVolume,
    #[serde(rename = "invariant volume exists")]
    InvariantVolumeExists,
}

impl std::fmt::Display for MorseVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            MorseVerdict::NotApplicable => "theorem not applicable",
            MorseVerdict::NoInvariantVolume => {
                "no invariant volume exists for this Hamiltonian flow"
            }
            MorseVerdict::InvariantVolumeExists => "invariant volume exists",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MorseReport {
    pub gradient_at_e: Vec<f64>,
    pub hessian: Vec<Vec<f64>>,
    pub eigenvalues: Vec<f64>,
    pub is_critical: bool,
    pub is_morse: bool,
    pub kernel_condition: Vec<f64>,
    pub kernel_condition_norm: f64,
    pub dual_unimodular: bool,
    pub verdict: MorseVerdict,
}

pub fn morse_report(gm: &GroupModel, h: &ScalarField, b: &LieBialgebra) -> Result<MorseReport> {
    morse_report_with_tolerance(gm, h, b, fd::FD_TOL)
}

/// Gradient, Hessian and nondegeneracy of `H` at the identity, combined with
/// the unimodularity of the dual algebra. `tol` bounds the gradient norm
/// accepted as critical.
pub fn morse_report_with_tolerance(
    gm: &GroupModel,
    h: &ScalarField,
    b: &LieBialgebra,
    tol: f64,
) -> Result<MorseReport> {
    check_group(gm, b)?;
    if !(tol > 0.0) {
        return Err(PlgError::Invalid(format!("tolerance must be positive, got {tol}")));
    }
    let e = gm.identity().to_vec();
    let grad = h.gradient(&e);
    let hess = if h.has_analytic_gradient() {
        let j = fd::jacobian5(|p| h.gradient(p), &e);
        (&j + j.transpose()) * 0.5
    } else {
        fd::hessian(|p| h.eval(p), &e)
    };
    let mut eig: Vec<f64> = SymmetricEigen::new(hess.clone()).eigenvalues.iter().copied().collect();
    eig.sort_by(|a, b| a.total_cmp(b));
    let max_abs = eig.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let min_abs = eig.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
    let is_critical = grad.iter().map(|v| v * v).sum::<f64>().sqrt() <= tol;
    let is_morse = is_critical && max_abs > 0.0 && min_abs > 1e-6 * max_abs;
    let m = b.dual_modular_character();
    let v = gm.basis() * DVector::from_column_slice(&m);
    let kernel = &hess * v;
    let verdict_u = b.unimodularity();
    let verdict = match (is_morse, verdict_u.is_unimodular) {
        (false, _) => MorseVerdict::NotApplicable,
        (true, false) => MorseVerdict::NoInvariantVolume,
        (true, true) => MorseVerdict::InvariantVolumeExists,
    };
    Ok(MorseReport {
        gradient_at_e: grad,
        hessian: matrix_rows(&hess),
        eigenvalues: eig,
        is_critical,
        is_morse,
        kernel_condition_norm: kernel.norm(),
        kernel_condition: kernel.as_slice().to_vec(),
        dual_unimodular: verdict_u.is_unimodular,
        verdict,
    })
}

pub(crate) fn matrix_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::standard_algebra;

    #[test]
    fn planar_symplectic_is_unimodular() {
        let chart = PoissonChart::from_upper("R2", 2, |_| vec![1.0]);
        let m = modular_field(&chart, &VolumeForm::lebesgue(2));
        assert!(fd::max_abs(&m.eval(&[0.3, -2.0]).unwrap()) < 1e-12);
    }

    #[test]
    fn constant_field_has_zero_divergence() {
        let x = VectorField::new(3, |_| vec![1.0, 2.0, -1.0]);
        assert_eq!(divergence(&x, &VolumeForm::lebesgue(3), &[0.1, 0.2, 0.3]).unwrap(), 0.0);
    }

    #[test]
    fn modular_pairing_matches_divergence() {
        let chart = PoissonChart::lie_poisson(&standard_algebra("affine2d", &[]).unwrap());
        let phi = VolumeForm::from_log_density("gauss", ScalarField::quadratic(vec![
            vec![-1.0, 0.2],
            vec![0.2, -0.5],
        ]));
        let h = ScalarField::new(|x| x[0] * x[0] * x[1] + x[1].sin());
        let xh = chart.hamiltonian_field(&h);
        let m = modular_field(&chart, &phi);
        for x in [[0.3, 0.7], [-1.0, 2.0]] {
            let lhs: f64 = m.eval(&x).unwrap().iter().zip(h.gradient(&x)).map(|(a, b)| a * b).sum();
            let rhs = divergence(&xh, &phi, &x).unwrap();
            assert!((lhs - rhs).abs() < 1e-7, "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn conformal_change_by_constant_is_exact() {
        let chart = PoissonChart::lie_poisson(&standard_algebra("so3", &[]).unwrap());
        let r = conformal_shift_residual(
            &chart,
            &VolumeForm::lebesgue(3),
            &ScalarField::constant(2.5),
            &[vec![0.1, 0.2, 0.3]],
        )
        .unwrap();
        assert!(r < 1e-12);
    }

    #[test]
    fn kozlov_morse_verdicts() {
        let so3 = standard_algebra("so3", &[]).unwrap();
        let b = LieBialgebra::lie_poisson(&so3).unwrap();
        let gm = GroupModel::abelian(3);
        let h = ScalarField::quadratic(vec![
            vec![1.0, 0.0, 0.0],
            vec![0.0, 2.0, 0.0],
            vec![0.0, 0.0, 3.0],
        ]);
        let rep = morse_report(&gm, &h, &b).unwrap();
        assert!(rep.is_morse);
        assert_eq!(rep.verdict, MorseVerdict::InvariantVolumeExists);
        let degenerate = ScalarField::quadratic(vec![
            vec![1.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0],
            vec![0.0, 0.0, 3.0],
        ]);
        let rep = morse_report(&gm, &degenerate, &b).unwrap();
        assert!(rep.is_critical && !rep.is_morse);
        assert_eq!(rep.verdict, MorseVerdict::NotApplicable);
    }

    #[test]
    fn verdict_strings() {
        let s = serde_json::to_string(&MorseVerdict::NoInvariantVolume).unwrap();
        assert_eq!(s, "\"no invariant volume exists for this Hamiltonian flow\"");
        assert_eq!(MorseVerdict::NotApplicable.to_string(), "theorem not applicable");
    }
}
