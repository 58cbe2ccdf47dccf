//! Morse analysis at the identity: when H has a nondegenerate critical
//! point at e, an invariant volume forces the dual algebra to be unimodular.

use plg::models::builtin;
use plg::report::cmd_morse;
use plg::Result;

pub fn run_example() -> Result<()> {
    let sl2 = builtin("sl2r", None, None)?;
    for h in ["contrast", "toda_svd"] {
        let r = cmd_morse(&sl2, Some(h), 1e-6)?;
        println!(
            "sl2r {h:<9} critical {} morse {} eigenvalues {:?} -> {}",
            r.morse.is_critical, r.morse.is_morse, r.morse.eigenvalues, r.morse.verdict
        );
    }
    let rigid = builtin("liepoisson", None, Some("so3"))?;
    let r = cmd_morse(&rigid, Some("quadratic:1,2,3"), 1e-6)?;
    println!("so(3) rigid body -> {}", r.morse.verdict);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
