//! Poisson brackets, Hamiltonian fields, Jacobi and Casimir checks on the
//! Sklyanin chart, and a bivector that fails the Jacobi identity.

use plg::models::sl2r;
use plg::{PoissonChart, Result, ScalarField};

pub fn run_example() -> Result<()> {
    let chart = sl2r::sklyanin_chart();
    let a = [1.3, 0.2, -0.4, 0.9];
    let a11 = ScalarField::coordinate(0);
    let a22 = ScalarField::coordinate(3);
    println!("{{a11, a22}} = {:.6} (2 a12 a21 = {:.6})", chart.bracket(&a11, &a22, &a)?, 2.0 * a[1] * a[2]);
    println!("Jacobi residual at A: {:.2e}", chart.jacobi_residual(&a)?);

    let det = ScalarField::new(|a| a[0] * a[3] - a[1] * a[2]);
    println!("det is a Casimir: residual {:.2e}", chart.casimir_residual(&det, &[a.to_vec()])?);

    let h = ScalarField::new(|a| 0.5 * a.iter().map(|v| v * v).sum::<f64>());
    println!("X_H(A) = {:?}", chart.hamiltonian_field(&h).eval(&a)?);

    // Outside the domain det A > 0 every evaluation is refused.
    println!("singular matrix: {}", chart.pi(&[1.0, 1.0, 1.0, 1.0]).unwrap_err());

    let bad = PoissonChart::from_upper("not Poisson", 3, |x| vec![x[1], 0.0, x[0]]);
    println!("non-Poisson Jacobi residual: {:.3}", bad.jacobi_residual(&[0.3, -0.2, 0.5])?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
