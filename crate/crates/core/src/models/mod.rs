//! Built-in Poisson-Lie models and the bundle type shared with user configs.

pub mod eulertop;
pub mod liepoisson;
pub mod lorenz;
pub mod s3;
pub mod sl2r;

use std::sync::Arc;

use serde::Serialize;

pub use eulertop::euler_top_deformed;
pub use liepoisson::{lie_poisson_model, quadratic_from_diagonal};
pub use lorenz::lorenz_deformed;
pub use s3::{s3_standard, s3_with_polynomial};
pub use sl2r::sl2r_sklyanin;

use crate::bialgebra::LieBialgebra;
use crate::chart::PoissonChart;
use crate::error::{PlgError, Result};
use crate::fd;
use crate::field::{Guard, ScalarField, VectorField};
use crate::group::GroupModel;
use crate::modular;
use crate::sampling::{SampleBox, Sampler};

/// One Poisson structure on the model's manifold, with its tangent
/// bialgebra when the structure is multiplicative.
#[derive(Debug, Clone)]
pub struct Structure {
    pub name: String,
    pub chart: PoissonChart,
    pub bialgebra: Option<LieBialgebra>,
}

/// A Hamiltonian together with the index of the structure it is meant for.
#[derive(Debug, Clone)]
pub struct Hamiltonian {
    pub name: String,
    pub field: ScalarField,
    pub structure: usize,
}

#[derive(Debug, Clone)]
pub struct NamedFunction {
    pub name: String,
    pub field: ScalarField,
}

/// Equations of motion exactly as printed for one Hamiltonian. They describe
/// `sign * X_H` in the sharp convention of [`crate::chart`].
#[derive(Debug, Clone)]
pub struct PrintedField {
    pub hamiltonian: String,
    pub sign: f64,
    pub field: VectorField,
}

/// Closed form of `(M^l + M^r)(H)` along a curve of equilibria `g(a)`.
#[derive(Clone)]
pub struct SingularCurve {
    pub hamiltonian: String,
    pub point: Arc<dyn Fn(f64) -> Vec<f64> + Send + Sync>,
    pub value: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl std::fmt::Debug for SingularCurve {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SingularCurve")
            .field("hamiltonian", &self.hamiltonian)
            .finish()
    }
}

/// The `η -> 0` limit data of a deformed model: one linear chart per
/// structure, the limit Hamiltonians and the limit equations of motion
/// (same sign convention as [`PrintedField`]).
#[derive(Debug, Clone)]
pub struct LimitData {
    pub charts: Vec<PoissonChart>,
    pub hamiltonians: Vec<NamedFunction>,
    pub equations: PrintedField,
}

/// Closed-form facts a model is expected to reproduce.
#[derive(Debug, Clone, Default)]
pub struct GroundTruth {
    /// Per structure: expected unimodularity and dual modular character.
    pub unimodular: Vec<bool>,
    pub dual_modular_character: Vec<Vec<f64>>,
    pub f0: Option<ScalarField>,
    pub invariant_density: Option<ScalarField>,
    /// `1/2 (M^l + M^r)` of structure 0.
    pub symmetric_modular_field: Option<VectorField>,
    pub singular_curve: Option<SingularCurve>,
    pub printed_fields: Vec<PrintedField>,
    pub limit: Option<LimitData>,
}

#[derive(Debug, Clone)]
pub struct ModelBundle {
    pub id: String,
    pub group: Option<GroupModel>,
    pub structures: Vec<Structure>,
    pub hamiltonians: Vec<Hamiltonian>,
    pub casimirs: Vec<NamedFunction>,
    pub ground_truth: GroundTruth,
    pub sample_box: SampleBox,
    pub default_x0: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            residual,
            tolerance,
            passed: residual <= tolerance,
        }
    }
}

pub const JACOBI_TOL: f64 = 1e-6;
pub const CASIMIR_TOL: f64 = 1e-9;
pub const COBRACKET_TOL: f64 = 1e-5;
pub const GROUND_TRUTH_TOL: f64 = 1e-6;

impl ModelBundle {
    pub fn dim(&self) -> usize {
        self.structures[0].chart.dim()
    }

    pub fn chart(&self) -> &PoissonChart {
        &self.structures[0].chart
    }

    pub fn bialgebra(&self) -> Option<&LieBialgebra> {
        self.structures[0].bialgebra.as_ref()
    }

    pub fn hamiltonian(&self, name: &str) -> Result<&Hamiltonian> {
        self.hamiltonians
            .iter()
            .find(|h| h.name == name)
            .ok_or_else(|| PlgError::Unknown {
                kind: "Hamiltonian",
                name: name.to_string(),
            })
    }

    pub fn structure_chart(&self, h: &Hamiltonian) -> &PoissonChart {
        &self.structures[h.structure].chart
    }

    /// Conjunction of every chart guard and the group guard.
    pub fn domain_guard(&self) -> Guard {
        let mut guards: Vec<Guard> = self.structures.iter().map(|s| s.chart.guard()).collect();
        if let Some(g) = &self.group {
            guards.push(g.guard());
        }
        Arc::new(move |x: &[f64]| guards.iter().all(|g| g(x)))
    }

    pub fn sample(&self, seed: u64, count: usize) -> Result<Vec<Vec<f64>>> {
        Sampler::new(seed).points(&self.sample_box, &self.domain_guard(), count)
    }

    /// Runs the bundle invariants on `samples` seeded points: Jacobi
    /// residuals, Casimirs, group axioms, algebra and cobracket agreement.
    pub fn validate(&self, seed: u64, samples: usize) -> Result<Vec<Check>> {
        let points = self.sample(seed, samples)?;
        let mut checks = Vec::new();
        for s in &self.structures {
            let mut worst: f64 = 0.0;
            let mut anti: f64 = 0.0;
            for x in &points {
                worst = worst.max(s.chart.jacobi_residual(x)?);
                anti = anti.max(s.chart.antisymmetry_residual(x)?);
            }
            checks.push(Check::new(format!("jacobi[{}]", s.name), worst, JACOBI_TOL));
            checks.push(Check::new(format!("antisymmetry[{}]", s.name), anti, fd::EXACT_TOL));
        }
        for c in &self.casimirs {
            let r = self.chart().casimir_residual(&c.field, &points)?;
            checks.push(Check::new(format!("casimir[{}]", c.name), r, CASIMIR_TOL));
        }
        if let Some(gm) = &self.group {
            let ax = gm.axiom_residuals(&points);
            checks.push(Check::new("group identity", ax.identity, 1e-10));
            checks.push(Check::new("group inverse", ax.inverse, 1e-8));
            checks.push(Check::new("group associativity", ax.associativity, 1e-8));
            for s in &self.structures {
                let Some(b) = &s.bialgebra else { continue };
                checks.push(Check::new(
                    format!("group bracket vs algebra[{}]", s.name),
                    gm.algebra_mismatch(b.primal())?,
                    COBRACKET_TOL,
                ));
                let lin = gm.linearization(&s.chart)?;
                let worst = lin
                    .iter()
                    .zip(b.cobracket().components())
                    .map(|(a, d)| {
                        let mut diff = a.clone();
                        diff.add_scaled(d, -1.0);
                        diff.max_abs()
                    })
                    .fold(0.0, f64::max);
                checks.push(Check::new(
                    format!("d_e Pi vs cobracket[{}]", s.name),
                    worst,
                    COBRACKET_TOL,
                ));
                checks.push(Check::new(
                    format!("cocycle[{}]", s.name),
                    b.cobracket().cocycle_residual()?,
                    fd::EXACT_TOL,
                ));
            }
        }
        Ok(checks)
    }

    /// `validate`, turned into an error on the first failing check.
    pub fn ensure_valid(&self, seed: u64, samples: usize) -> Result<Vec<Check>> {
        let checks = self.validate(seed, samples)?;
        if let Some(c) = checks.iter().find(|c| !c.passed) {
            return Err(PlgError::Validation {
                check: c.name.clone(),
                residual: c.residual,
                tol: c.tolerance,
            });
        }
        Ok(checks)
    }

    /// Compares each closed-form ground-truth entry with its numerical
    /// counterpart on `points`.
    pub fn ground_truth_checks(&self, points: &[Vec<f64>]) -> Result<Vec<Check>> {
        let gt = &self.ground_truth;
        let mut checks = Vec::new();
        for (i, s) in self.structures.iter().enumerate() {
            let Some(b) = &s.bialgebra else { continue };
            let v = b.unimodularity();
            if let Some(expected) = gt.dual_modular_character.get(i) {
                checks.push(Check::new(
                    format!("dual modular character[{}]", s.name),
                    fd::max_abs_diff(&v.dual_modular_character, expected),
                    1e-10,
                ));
            }
            if let Some(expected) = gt.unimodular.get(i) {
                let r = if v.is_unimodular == *expected { 0.0 } else { 1.0 };
                checks.push(Check::new(format!("unimodular verdict[{}]", s.name), r, 0.0));
            }
        }
        let Some(gm) = &self.group else {
            return Ok(checks);
        };
        if let Some(f0) = &gt.f0 {
            let mut worst: f64 = 0.0;
            for x in points {
                worst = worst.max((gm.f0(x)? / f0.eval(x) - 1.0).abs());
            }
            checks.push(Check::new("f0 (relative)", worst, GROUND_TRUTH_TOL));
        }
        if let Some(rho) = &gt.invariant_density {
            let vol = modular::invariant_volume(gm, 1.0)?;
            let mut worst: f64 = 0.0;
            for x in points {
                worst = worst.max((vol.density(x) / rho.eval(x) - 1.0).abs());
            }
            checks.push(Check::new("invariant density (relative)", worst, GROUND_TRUTH_TOL));
        }
        if let (Some(sym), Some(b)) = (&gt.symmetric_modular_field, self.bialgebra()) {
            let num = modular::symmetric_modular_field(gm, b)?;
            let mut worst: f64 = 0.0;
            for x in points {
                worst = worst.max(fd::max_abs_diff(&num.eval(x)?, &sym.eval(x)?));
            }
            checks.push(Check::new("symmetric modular field", worst, GROUND_TRUTH_TOL));
        }
        if let (Some(curve), Some(b)) = (&gt.singular_curve, self.bialgebra()) {
            let h = self.hamiltonian(&curve.hamiltonian)?;
            let mut worst: f64 = 0.0;
            for a in [0.5, 1.0, 1.5, 2.0, 3.0] {
                let g = (curve.point)(a);
                let v = modular::singular_condition(gm, b, &h.field, &g)?;
                worst = worst.max((v - (curve.value)(a)).abs());
            }
            checks.push(Check::new("singular condition", worst, 1e-5));
        }
        Ok(checks)
    }

    /// Per-component max of `|sign * X_H - printed|` over `points`.
    pub fn printed_field_mismatch(&self, p: &PrintedField, points: &[Vec<f64>]) -> Result<Vec<f64>> {
        let h = self.hamiltonian(&p.hamiltonian)?;
        let xh = self.structure_chart(h).hamiltonian_field(&h.field);
        let mut worst = vec![0.0f64; self.dim()];
        for x in points {
            let (a, b) = (xh.eval(x)?, p.field.eval(x)?);
            for i in 0..worst.len() {
                worst[i] = worst[i].max((p.sign * a[i] - b[i]).abs());
            }
        }
        Ok(worst)
    }
}

/// `(e^{a t} - 1) / t`, continuous at `t = 0`.
pub(crate) fn expm1_over(a: f64, t: f64) -> f64 {
    if t == 0.0 {
        a
    } else {
        (a * t).exp_m1() / t
    }
}

/// `(cosh(u t) - 1) / t^2`, continuous at `t = 0`.
pub(crate) fn cosh_m1_over_sq(u: f64, t: f64) -> f64 {
    if t == 0.0 {
        0.5 * u * u
    } else {
        let s = (0.5 * u * t).sinh();
        2.0 * s * s / (t * t)
    }
}

/// `sinh(u t) / t`, continuous at `t = 0`.
pub(crate) fn sinh_over(u: f64, t: f64) -> f64 {
    if t == 0.0 {
        u
    } else {
        (u * t).sinh() / t
    }
}

/// Looks a built-in model up by its CLI id.
pub fn builtin(id: &str, eta: Option<f64>, algebra: Option<&str>) -> Result<ModelBundle> {
    match id {
        "sl2r" => sl2r_sklyanin(),
        "s3" => s3_standard(),
        "lorenz" => lorenz_deformed(eta.unwrap_or(0.3)),
        "eulertop" => euler_top_deformed(eta.unwrap_or(0.3)),
        "liepoisson" => {
            let name = algebra.unwrap_or("so3");
            let alg = crate::lie::standard_algebra(name, eta.as_slice())?;
            let n = alg.dim();
            let diag: Vec<f64> = (1..=n).map(|i| i as f64).collect();
            lie_poisson_model(&alg, &quadratic_from_diagonal(&diag))
        }
        other => Err(PlgError::Unknown {
            kind: "model",
            name: other.to_string(),
        }),
    }
}

pub const BUILTIN_IDS: [&str; 5] = ["sl2r", "s3", "lorenz", "eulertop", "liepoisson"];
