//! A coboundary Lie bialgebra from an r-matrix: cobracket, cocycle check,
//! generalized Yang-Baxter residual, dual algebra and its unimodularity.

use plg::bialgebra::gybe_residual;
use plg::{standard_algebra, LieBialgebra, Multivector, Result};

pub fn run_example() -> Result<()> {
    let gl2 = standard_algebra("gl2", &[])?;
    // r = J- ^ J+ in the basis (J3, J+, J-, Id/2)
    let r = Multivector::bivector(4, &[(2, 1, 1.0)])?;
    println!("gYBE residual: {:.1e}", gybe_residual(&gl2, &r)?);

    let b = LieBialgebra::from_r(&gl2, r)?;
    for (label, d) in gl2.labels().iter().zip(b.cobracket().components()) {
        println!("delta({label}) = {:?}", d.basis_expansion());
    }
    println!("cocycle residual: {:.1e}", b.cobracket().cocycle_residual()?);

    let dual = b.dual();
    println!("dual labels {:?}", dual.labels());
    let v = b.unimodularity();
    println!(
        "dual modular character {:?}: unimodular = {}",
        v.dual_modular_character, v.is_unimodular
    );

    // Rescaling r rescales the character but not the verdict.
    let scaled = LieBialgebra::from_r(&gl2, Multivector::bivector(4, &[(2, 1, -3.0)])?)?;
    println!("r -> -3 r: {:?}", scaled.dual_modular_character());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
