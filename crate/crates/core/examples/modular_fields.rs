//! Modular vector fields: divergence pairing, the conformal shift, the
//! formula through bialgebra data and the invariant-volume residual.

use plg::modular::{self, divergence, elw_modular_field, modular_field, VolumeForm};
use plg::models::builtin;
use plg::{Result, ScalarField};

pub fn run_example() -> Result<()> {
    let m = builtin("sl2r", None, None)?;
    let gm = m.group.as_ref().unwrap();
    let b = m.bialgebra().unwrap();
    let chart = m.chart();
    let a = [1.2, 0.3, -0.1, 0.9];

    let nu = gm.left_volume_density(1.0)?;
    let direct = modular_field(chart, &nu).eval(&a)?;
    let formula = elw_modular_field(gm, chart, b)?.eval(&a)?;
    println!("M_nu from the chart      {direct:?}");
    println!("M_nu from bialgebra data {formula:?}");

    let h = &m.hamiltonian("toda_svd")?.field;
    let xh = chart.hamiltonian_field(h);
    let pairing: f64 = direct.iter().zip(h.gradient(&a)).map(|(u, v)| u * v).sum();
    println!("<dH, M> = {pairing:.9}, div X_H = {:.9}", divergence(&xh, &nu, &a)?);

    let f = ScalarField::new(|a| a[0] * a[1] - a[3] * a[3]);
    let pts = m.sample(1, 10)?;
    println!("conformal shift residual: {:.1e}", modular::conformal_shift_residual(chart, &VolumeForm::lebesgue(4), &f, &pts)?);

    let sym = modular::symmetric_modular_field(gm, b)?;
    println!("1/2 (M^l + M^r)(A) = {:?}", sym.eval(&a)?);
    let half_log_f0 = gm.log_f0_field().scaled(0.5);
    let res = modular::theorem_residual(gm, chart, b, h, &half_log_f0, &pts)?;
    println!("toda_svd against sqrt(f0) nu: residual {:.3} at {:?}", res.max, res.point);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
