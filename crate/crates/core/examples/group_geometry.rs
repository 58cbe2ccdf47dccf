//! Left and right invariant fields, the adjoint action, f0 = det Ad and the
//! left-invariant volume on the book group.

use plg::models::eulertop::book_group;
use plg::{Result, Side};

pub fn run_example() -> Result<()> {
    let eta = 0.3;
    let gm = book_group(eta);
    let g = [0.7, -0.2, 0.4];
    let h = [-0.1, 0.5, 0.3];

    println!("g h = {:?}, g^-1 = {:?}", gm.multiply(&g, &h), gm.inverse(&g));
    let y_left = gm.invariant_field(&[0.0, 1.0, 0.0], Side::Left)?;
    let y_right = gm.invariant_field(&[0.0, 1.0, 0.0], Side::Right)?;
    println!("Y^l(g) = {:?}, Y^r(g) = {:?}", y_left.eval(&g)?, y_right.eval(&g)?);

    println!("Ad_g =\n{}", gm.adjoint_matrix(&g)?);
    println!("f0(g) = {:.12} vs exp(-2 eta x) = {:.12}", gm.f0(&g)?, (-2.0 * eta * g[0]).exp());
    let gh = gm.multiply(&g, &h);
    println!("f0(gh) - f0(g) f0(h) = {:.1e}", gm.f0(&gh)? - gm.f0(&g)? * gm.f0(&h)?);

    let nu = gm.left_volume_density(1.0)?;
    println!("left-invariant density at g: {:.12}", nu.density(&g));
    println!("bracket at e vs algebra: {:.1e}", gm.algebra_mismatch(&plg::standard_algebra("book", &[eta])?)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
