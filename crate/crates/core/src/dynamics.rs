//! Fixed-step RK4 integration of Hamiltonian fields together with the
//! log-Jacobian `ℓ(t) = ∫ tr(DX) dt` of the flow map.

use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;

use crate::chart::PoissonChart;
use crate::error::{check_len, PlgError, Result};
use crate::fd;
use crate::field::{ScalarField, VectorField};
use crate::modular::VolumeForm;

#[derive(Debug, Clone, Default, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub log_jacobian: Vec<f64>,
    pub generator_values: Vec<f64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last_state(&self) -> Option<&[f64]> {
        self.states.last().map(Vec::as_slice)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DriftReport {
    pub volume: String,
    pub volume_drift: f64,
    pub energy_drift: f64,
    pub casimir_drifts: BTreeMap<String, f64>,
}

/// RK4 on `ẋ = X_H(x)` for `n` steps of size `h`.
pub fn integrate(
    chart: &PoissonChart,
    hamiltonian: &ScalarField,
    x0: &[f64],
    h: f64,
    n: usize,
) -> Result<Trajectory> {
    let field = chart.hamiltonian_field(hamiltonian);
    integrate_field(&field, Some(hamiltonian), x0, h, n)
}

/// RK4 for an arbitrary field; `generator` is sampled along the way when given.
pub fn integrate_field(
    field: &VectorField,
    generator: Option<&ScalarField>,
    x0: &[f64],
    h: f64,
    n: usize,
) -> Result<Trajectory> {
    check_len(field.dim(), x0.len())?;
    if !(h > 0.0 && h.is_finite()) {
        return Err(PlgError::Invalid(format!("step size must be positive, got {h}")));
    }
    if !field.in_domain(x0) {
        return Err(PlgError::DomainExit { step: 0 });
    }
    let dim = x0.len();
    let gen_value = |x: &[f64]| generator.map_or(0.0, |g| g.eval(x));
    let mut traj = Trajectory {
        times: Vec::with_capacity(n + 1),
        states: Vec::with_capacity(n + 1),
        log_jacobian: Vec::with_capacity(n + 1),
        generator_values: Vec::with_capacity(n + 1),
    };
    let mut x = x0.to_vec();
    let mut ell = 0.0;
    traj.times.push(0.0);
    traj.states.push(x.clone());
    traj.log_jacobian.push(ell);
    traj.generator_values.push(gen_value(&x));

    let stage = |p: &[f64], step: usize| -> Result<(Vec<f64>, f64)> {
        if !field.in_domain(p) {
            return Err(PlgError::DomainExit { step });
        }
        let v = field.eval_raw(p);
        let tr = fd::trace5(|q| field.eval_raw(q), p);
        if !tr.is_finite() || v.iter().any(|c| !c.is_finite()) {
            return Err(PlgError::DomainExit { step });
        }
        Ok((v, tr))
    };
    let shifted = |x: &[f64], k: &[f64], s: f64| -> Vec<f64> {
        x.iter().zip(k).map(|(a, b)| a + s * b).collect()
    };

    for step in 1..=n {
        let (k1, t1) = stage(&x, step)?;
        let (k2, t2) = stage(&shifted(&x, &k1, 0.5 * h), step)?;
        let (k3, t3) = stage(&shifted(&x, &k2, 0.5 * h), step)?;
        let (k4, t4) = stage(&shifted(&x, &k3, h), step)?;
        for i in 0..dim {
            x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        ell += h / 6.0 * (t1 + 2.0 * t2 + 2.0 * t3 + t4);
        if !field.in_domain(&x) {
            return Err(PlgError::DomainExit { step });
        }
        traj.times.push(step as f64 * h);
        traj.states.push(x.clone());
        traj.log_jacobian.push(ell);
        traj.generator_values.push(gen_value(&x));
    }
    Ok(traj)
}

/// `max_t |log ρ(x(t)) + ℓ(t) - log ρ(x0)|`; zero exactly when the flow
/// transports `Φ` to itself along the sampled path.
pub fn volume_drift(phi: &VolumeForm, traj: &Trajectory) -> Result<f64> {
    let Some(x0) = traj.states.first() else {
        return Ok(0.0);
    };
    let base = phi.log_density(x0);
    let mut worst: f64 = 0.0;
    for (x, ell) in traj.states.iter().zip(&traj.log_jacobian) {
        let v = phi.log_density(x);
        if !v.is_finite() {
            return Err(PlgError::Invalid(format!(
                "volume `{}` is not positive along the trajectory",
                phi.name()
            )));
        }
        worst = worst.max((v + ell - base).abs());
    }
    Ok(worst)
}

/// `max_t |F(x(t)) - F(x0)|`.
pub fn integral_drift(traj: &Trajectory, f: &ScalarField) -> f64 {
    let Some(x0) = traj.states.first() else {
        return 0.0;
    };
    let f0 = f.eval(x0);
    traj.states
        .iter()
        .fold(0.0, |m, x| m.max((f.eval(x) - f0).abs()))
}

pub fn drift_report(
    phi: &VolumeForm,
    traj: &Trajectory,
    casimirs: &[(String, ScalarField)],
) -> Result<DriftReport> {
    let energy_drift = match traj.generator_values.first() {
        Some(h0) => traj
            .generator_values
            .iter()
            .fold(0.0, |m: f64, v| m.max((v - h0).abs())),
        None => 0.0,
    };
    Ok(DriftReport {
        volume: phi.name().to_string(),
        volume_drift: volume_drift(phi, traj)?,
        energy_drift,
        casimir_drifts: casimirs
            .iter()
            .map(|(name, c)| (name.clone(), integral_drift(traj, c)))
            .collect(),
    })
}

/// Writes `t,x1..xn,logjac,H,<casimirs>` rows, keeping every `stride`-th
/// state plus the final one.
pub fn write_csv<W: Write>(
    out: W,
    traj: &Trajectory,
    casimirs: &[(String, ScalarField)],
    stride: usize,
) -> Result<()> {
    let stride = stride.max(1);
    let dim = traj.states.first().map_or(0, Vec::len);
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["t".to_string()];
    header.extend((1..=dim).map(|i| format!("x{i}")));
    header.push("logjac".into());
    header.push("H".into());
    header.extend(casimirs.iter().map(|(n, _)| n.clone()));
    w.write_record(&header)?;
    let last = traj.len().saturating_sub(1);
    for k in (0..traj.len()).filter(|k| k % stride == 0 || *k == last) {
        let x = &traj.states[k];
        let mut row = vec![fmt_num(traj.times[k])];
        row.extend(x.iter().map(|v| fmt_num(*v)));
        row.push(fmt_num(traj.log_jacobian[k]));
        row.push(fmt_num(traj.generator_values[k]));
        row.extend(casimirs.iter().map(|(_, c)| fmt_num(c.eval(x))));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

fn fmt_num(v: f64) -> String {
    format!("{v:.12e}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::standard_algebra;

    fn so3_chart() -> PoissonChart {
        PoissonChart::lie_poisson(&standard_algebra("so3", &[]).unwrap())
    }

    #[test]
    fn constant_hamiltonian_is_stationary() {
        let t = integrate(&so3_chart(), &ScalarField::constant(1.0), &[0.1, 0.2, 0.3], 0.01, 50)
            .unwrap();
        assert_eq!(t.len(), 51);
        assert!(t.log_jacobian.iter().all(|v| *v == 0.0));
        assert!(t.states.iter().all(|s| s == &t.states[0]));
        assert_eq!(volume_drift(&VolumeForm::lebesgue(3), &t).unwrap(), 0.0);
    }

    #[test]
    fn rigid_body_conserves_energy_and_casimir() {
        let h = ScalarField::quadratic(vec![
            vec![1.0, 0.0, 0.0],
            vec![0.0, 0.5, 0.0],
            vec![0.0, 0.0, 1.0 / 3.0],
        ]);
        let t = integrate(&so3_chart(), &h, &[0.3, 0.2, 0.1], 1e-2, 1000).unwrap();
        let c = ScalarField::quadratic(vec![
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ]);
        assert!(integral_drift(&t, &h) < 1e-9);
        assert!(integral_drift(&t, &c) < 1e-9);
        assert!(volume_drift(&VolumeForm::lebesgue(3), &t).unwrap() < 1e-9);
    }

    #[test]
    fn domain_exit_reports_step() {
        let f = VectorField::new(1, |_| vec![1.0])
            .with_guard("x<1", std::sync::Arc::new(|x: &[f64]| x[0] < 1.0));
        let err = integrate_field(&f, None, &[0.0], 0.3, 10).unwrap_err();
        assert!(matches!(err, PlgError::DomainExit { step: 4 }), "{err}");
    }

    #[test]
    fn csv_header_and_stride() {
        let t = integrate(&so3_chart(), &ScalarField::coordinate(0), &[0.1, 0.2, 0.3], 0.1, 5)
            .unwrap();
        let mut buf = Vec::new();
        write_csv(&mut buf, &t, &[("C".into(), ScalarField::constant(1.0))], 2).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "t,x1,x2,x3,logjac,H,C");
        assert_eq!(lines.len(), 1 + 4);
    }
}
