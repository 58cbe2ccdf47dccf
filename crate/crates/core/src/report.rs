//! The three CLI commands as library functions returning serializable
//! reports: `check`, `simulate` and `morse`.

use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;

use crate::bialgebra::gybe_residual;
use crate::dynamics::{self, DriftReport, Trajectory};
use crate::error::{PlgError, Result};
use crate::field::ScalarField;
use crate::modular::{self, MorseReport, TheoremResidual, VolumeForm};
use crate::models::{Check, Hamiltonian, ModelBundle};

/// Points shown in the `f0_samples` and `density_samples` lists.
pub const SHOWN_SAMPLES: usize = 5;
pub const DEFAULT_SAMPLES: usize = 100;
pub const DEFAULT_DRIFT_TOL: f64 = 1e-6;

/// Resolves `--H`: a Hamiltonian of the bundle by name, or
/// `quadratic:d1,...,dn` for `1/2 Σ d_i x_i^2` on the first structure.
pub fn resolve_hamiltonian(bundle: &ModelBundle, spec: Option<&str>) -> Result<Hamiltonian> {
    let Some(spec) = spec else {
        return bundle.hamiltonians.first().cloned().ok_or_else(|| {
            PlgError::Invalid(format!("model `{}` declares no Hamiltonian", bundle.id))
        });
    };
    if let Some(rest) = spec.strip_prefix("quadratic:") {
        let diag = rest
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| PlgError::Invalid(format!("bad quadratic Hamiltonian `{spec}`: {e}")))?;
        if diag.len() != bundle.dim() {
            return Err(PlgError::DimensionMismatch {
                expected: bundle.dim(),
                got: diag.len(),
            });
        }
        return Ok(Hamiltonian {
            name: spec.to_string(),
            field: ScalarField::quadratic(crate::models::quadratic_from_diagonal(&diag)),
            structure: 0,
        });
    }
    bundle.hamiltonian(spec).cloned()
}

#[derive(Debug, Clone, Serialize)]
pub struct Sample {
    pub point: Vec<f64>,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct StructureReport {
    pub name: String,
    pub unimodular: Option<bool>,
    pub dual_modular_character: Option<Vec<f64>>,
    pub jacobi_residual: f64,
    pub cocycle_residual: Option<f64>,
    pub gybe_residual: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PrintedMismatch {
    pub hamiltonian: String,
    pub components: Vec<f64>,
    pub matches: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub model: String,
    pub seed: u64,
    pub samples: usize,
    pub unimodular: Option<bool>,
    pub dual_modular_character: Option<Vec<f64>>,
    pub structures: Vec<StructureReport>,
    pub checks: Vec<Check>,
    pub f0_samples: Vec<Sample>,
    pub density_samples: Vec<Sample>,
    /// Per Hamiltonian: divergence of `X_H` against `√f0 ν^l` written
    /// through the modular fields, maximised over the sample.
    pub theorem_residual: BTreeMap<String, TheoremResidual>,
    pub printed_field_mismatch: Vec<PrintedMismatch>,
    pub morse: BTreeMap<String, MorseReport>,
    pub passed: bool,
}

/// Runs every bundle invariant and closed-form comparison; `tol` is the
/// componentwise tolerance of the unimodularity verdict.
pub fn cmd_check(bundle: &ModelBundle, seed: u64, samples: usize, tol: f64) -> Result<CheckReport> {
    if samples == 0 {
        return Err(PlgError::Invalid("--samples must be positive".into()));
    }
    let points = bundle.sample(seed, samples)?;
    let mut checks = bundle.validate(seed, samples)?;
    checks.extend(bundle.ground_truth_checks(&points)?);

    let mut structures = Vec::new();
    for s in &bundle.structures {
        let mut jac: f64 = 0.0;
        for x in &points {
            jac = jac.max(s.chart.jacobi_residual(x)?);
        }
        let b = s.bialgebra.as_ref();
        let verdict = b.map(|b| b.unimodularity_with_tolerance(tol));
        structures.push(StructureReport {
            name: s.name.clone(),
            unimodular: verdict.as_ref().map(|v| v.is_unimodular),
            dual_modular_character: verdict.map(|v| v.dual_modular_character),
            jacobi_residual: jac,
            cocycle_residual: b.map(|b| b.cobracket().cocycle_residual()).transpose()?,
            gybe_residual: match b.and_then(|b| b.r().map(|r| (b, r))) {
                Some((b, r)) => Some(gybe_residual(b.primal(), r)?),
                None => None,
            },
        });
    }

    let shown = &points[..points.len().min(SHOWN_SAMPLES)];
    let mut f0_samples = Vec::new();
    let mut density_samples = Vec::new();
    let mut theorem = BTreeMap::new();
    let mut morse = BTreeMap::new();
    if let Some(gm) = &bundle.group {
        let gt = &bundle.ground_truth;
        for x in shown {
            f0_samples.push(Sample {
                point: x.clone(),
                value: gm.f0(x)?,
                expected: gt.f0.as_ref().map(|f| f.eval(x)),
            });
        }
        let vol = modular::invariant_volume(gm, 1.0)?;
        for x in shown {
            density_samples.push(Sample {
                point: x.clone(),
                value: vol.density(x),
                expected: gt.invariant_density.as_ref().map(|f| f.eval(x)),
            });
        }
        let half_log_f0 = gm.log_f0_field().scaled(0.5);
        for h in &bundle.hamiltonians {
            let s = &bundle.structures[h.structure];
            let Some(b) = &s.bialgebra else { continue };
            theorem.insert(
                h.name.clone(),
                modular::theorem_residual(gm, &s.chart, b, &h.field, &half_log_f0, &points)?,
            );
            morse.insert(h.name.clone(), modular::morse_report(gm, &h.field, b)?);
        }
    }

    let mut printed = Vec::new();
    for p in &bundle.ground_truth.printed_fields {
        let components = bundle.printed_field_mismatch(p, &points)?;
        let matches = components.iter().all(|v| *v <= 1e-9);
        printed.push(PrintedMismatch {
            hamiltonian: p.hamiltonian.clone(),
            components,
            matches,
        });
    }

    let passed = checks.iter().all(|c| c.passed);
    Ok(CheckReport {
        model: bundle.id.clone(),
        seed,
        samples,
        unimodular: structures.first().and_then(|s| s.unimodular),
        dual_modular_character: structures.first().and_then(|s| s.dual_modular_character.clone()),
        structures,
        checks,
        f0_samples,
        density_samples,
        theorem_residual: theorem,
        printed_field_mismatch: printed,
        morse,
        passed,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VolumeChoice {
    Lebesgue,
    Left,
    Invariant,
}

impl std::str::FromStr for VolumeChoice {
    type Err = PlgError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lebesgue" => Ok(VolumeChoice::Lebesgue),
            "left" => Ok(VolumeChoice::Left),
            "invariant" => Ok(VolumeChoice::Invariant),
            other => Err(PlgError::Unknown {
                kind: "volume",
                name: other.to_string(),
            }),
        }
    }
}

pub fn volume_form(bundle: &ModelBundle, choice: VolumeChoice) -> Result<VolumeForm> {
    if choice == VolumeChoice::Lebesgue {
        return Ok(VolumeForm::lebesgue(bundle.dim()));
    }
    let gm = bundle
        .group
        .as_ref()
        .ok_or_else(|| PlgError::Invalid(format!("model `{}` has no group; only the Lebesgue volume is available", bundle.id)))?;
    match choice {
        VolumeChoice::Left => gm.left_volume_density(1.0),
        _ => modular::invariant_volume(gm, 1.0),
    }
}

#[derive(Debug, Clone)]
pub struct SimulateOptions {
    pub hamiltonian: Option<String>,
    pub x0: Option<Vec<f64>>,
    pub h: f64,
    pub steps: usize,
    pub volume: VolumeChoice,
    pub tol: f64,
}

impl Default for SimulateOptions {
    fn default() -> Self {
        SimulateOptions {
            hamiltonian: None,
            x0: None,
            h: 1e-3,
            steps: 1000,
            volume: VolumeChoice::Invariant,
            tol: DEFAULT_DRIFT_TOL,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SimulationReport {
    pub model: String,
    pub hamiltonian: String,
    pub h: f64,
    pub steps: usize,
    pub x0: Vec<f64>,
    pub final_state: Vec<f64>,
    pub drift: DriftReport,
    pub tolerance: f64,
    pub volume_preserved: bool,
}

pub struct Simulation {
    pub report: SimulationReport,
    pub trajectory: Trajectory,
    pub casimirs: Vec<(String, ScalarField)>,
}

impl Simulation {
    pub fn write_csv<W: Write>(&self, out: W, stride: usize) -> Result<()> {
        dynamics::write_csv(out, &self.trajectory, &self.casimirs, stride)
    }
}

pub fn cmd_simulate(bundle: &ModelBundle, opts: &SimulateOptions) -> Result<Simulation> {
    let h = resolve_hamiltonian(bundle, opts.hamiltonian.as_deref())?;
    let x0 = opts.x0.clone().unwrap_or_else(|| bundle.default_x0.clone());
    let chart = bundle.structure_chart(&h);
    if !chart.in_domain(&x0) {
        return Err(PlgError::OutsideDomain {
            chart: chart.name().to_string(),
            point: x0,
        });
    }
    let phi = volume_form(bundle, opts.volume)?;
    let traj = dynamics::integrate(chart, &h.field, &x0, opts.h, opts.steps)?;
    let casimirs: Vec<(String, ScalarField)> = bundle
        .casimirs
        .iter()
        .map(|c| (c.name.clone(), c.field.clone()))
        .collect();
    let drift = dynamics::drift_report(&phi, &traj, &casimirs)?;
    let report = SimulationReport {
        model: bundle.id.clone(),
        hamiltonian: h.name.clone(),
        h: opts.h,
        steps: opts.steps,
        final_state: traj.last_state().map(<[f64]>::to_vec).unwrap_or_default(),
        x0,
        volume_preserved: drift.volume_drift <= opts.tol,
        tolerance: opts.tol,
        drift,
    };
    Ok(Simulation {
        report,
        trajectory: traj,
        casimirs,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct MorseCommandReport {
    pub model: String,
    pub hamiltonian: String,
    pub structure: String,
    pub morse: MorseReport,
}

/// `tol` bounds the gradient norm at the identity accepted as critical.
pub fn cmd_morse(bundle: &ModelBundle, hamiltonian: Option<&str>, tol: f64) -> Result<MorseCommandReport> {
    let h = resolve_hamiltonian(bundle, hamiltonian)?;
    let s = &bundle.structures[h.structure];
    let gm = bundle
        .group
        .as_ref()
        .ok_or_else(|| PlgError::Invalid(format!("model `{}` has no group", bundle.id)))?;
    let b = s
        .bialgebra
        .as_ref()
        .ok_or_else(|| PlgError::Invalid(format!("structure `{}` has no bialgebra data", s.name)))?;
    Ok(MorseCommandReport {
        model: bundle.id.clone(),
        hamiltonian: h.name.clone(),
        structure: s.name.clone(),
        morse: modular::morse_report_with_tolerance(gm, &h.field, b, tol)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::builtin;
    use crate::modular::MorseVerdict;

    #[test]
    fn quadratic_spec() {
        let m = builtin("liepoisson", None, None).unwrap();
        let h = resolve_hamiltonian(&m, Some("quadratic:1,2,3")).unwrap();
        assert!((h.field.eval(&[1.0, 1.0, 1.0]) - 3.0).abs() < 1e-15);
        assert!(resolve_hamiltonian(&m, Some("quadratic:1,2")).is_err());
        assert!(resolve_hamiltonian(&m, Some("quadratic:1,x,2")).is_err());
        assert!(resolve_hamiltonian(&m, Some("nope")).is_err());
        assert_eq!(resolve_hamiltonian(&m, None).unwrap().name, "H_I");
    }

    #[test]
    fn check_sl2r() {
        let m = builtin("sl2r", None, None).unwrap();
        let r = cmd_check(&m, 3, 20, 1e-10).unwrap();
        assert_eq!(r.unimodular, Some(false));
        assert_eq!(r.dual_modular_character.as_deref(), Some(&[2.0, 0.0, 0.0, 0.0][..]));
        assert!(r.passed, "{:?}", r.checks.iter().filter(|c| !c.passed).collect::<Vec<_>>());
        assert_eq!(r.morse["contrast"].verdict, MorseVerdict::NoInvariantVolume);
        assert!(!r.printed_field_mismatch[0].matches);
        assert!(r.structures[0].gybe_residual.unwrap() < 1e-12);
    }

    #[test]
    fn zero_step_simulation_is_trivial() {
        let m = builtin("eulertop", None, None).unwrap();
        let opts = SimulateOptions {
            steps: 0,
            ..SimulateOptions::default()
        };
        let s = cmd_simulate(&m, &opts).unwrap();
        assert_eq!(s.report.drift.volume_drift, 0.0);
        assert_eq!(s.report.drift.energy_drift, 0.0);
        assert_eq!(s.trajectory.len(), 1);
    }

    #[test]
    fn morse_needs_bialgebra() {
        let cfg = crate::config::parse_config(r#"{"coordinates": ["x", "y"], "hamiltonians": {"H": "x^2"}}"#, "x").unwrap();
        assert!(cmd_morse(&cfg, None, 1e-6).is_err());
        assert!("sideways".parse::<VolumeChoice>().is_err());
    }
}
