//! Structure constants, brackets, the adjoint representation and the
//! modular character of a few small algebras.

use plg::lie::AlgebraSpec;
use plg::{standard_algebra, Result};

pub fn run_example() -> Result<()> {
    for name in ["sl2", "so3", "affine2d", "quaternion"] {
        let alg = standard_algebra(name, &[])?;
        let r = alg.residuals();
        println!(
            "{name:<10} dim {} labels {:?} modular character {:?} (antisymmetry {:.0e}, Jacobi {:.0e})",
            alg.dim(),
            alg.labels(),
            alg.modular_character(),
            r.antisymmetry,
            r.jacobi
        );
    }

    let book = standard_algebra("book", &[0.5])?;
    println!("book(0.5): [X, Y] = {:?}", book.bracket(&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0])?);
    println!("ad_X =\n{}", book.ad_matrix(&[1.0, 0.0, 0.0])?);

    // The same algebra from the JSON table form.
    let spec: AlgebraSpec = serde_json::from_str(
        r#"{"dim": 3, "labels": ["X", "Y", "Z"],
            "brackets": [{"a": 0, "b": 1, "out": [0, -0.5, 0]}, {"a": 0, "b": 2, "out": [0, 0, -0.5]}]}"#,
    )?;
    let table = spec.build()?;
    println!("from JSON: unimodular = {}", table.is_unimodular(1e-10));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
