//! The deformed Euler top as a bi-Hamiltonian system on the book group and
//! its undeformed limit.

use plg::models::euler_top_deformed;
use plg::{fd, PoissonChart, Result};

pub fn run_example() -> Result<()> {
    let m = euler_top_deformed(0.3)?;
    let (p0, p1) = (&m.structures[0].chart, &m.structures[1].chart);
    let x0 = p0.hamiltonian_field(&m.hamiltonian("H0")?.field);
    let x1 = p1.hamiltonian_field(&m.hamiltonian("H1")?.field);
    let x = [0.4, -0.3, 0.6];
    println!("Pi0#dH0 = {:?}", x0.eval(&x)?);
    println!("Pi1#dH1 = {:?}", x1.eval(&x)?);

    for lambda in [0.25, 0.5, 0.75] {
        let pencil = PoissonChart::pencil(p0, p1, lambda)?;
        println!("pencil {lambda}: Jacobi residual {:.1e}", pencil.jacobi_residual(&x)?);
    }
    for s in &m.structures {
        let b = s.bialgebra.as_ref().unwrap();
        println!("{}: dual modular character {:?}", s.name, b.dual_modular_character());
    }

    let tiny = euler_top_deformed(1e-6)?;
    let lim = tiny.ground_truth.limit.as_ref().unwrap();
    let v = tiny.chart().hamiltonian_field(&tiny.hamiltonians[0].field).eval(&x)?;
    let e = lim.equations.field.eval(&x)?;
    let v: Vec<f64> = v.iter().map(|c| lim.equations.sign * c).collect();
    println!("eta = 1e-6 vs limit top: {:.1e}", fd::max_abs_diff(&v, &e));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
