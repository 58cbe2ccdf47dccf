//! Loading a model from a JSON config and comparing it with the built-in
//! Sklyanin model.

use std::path::Path;

use plg::config::from_config;
use plg::models::builtin;
use plg::report::cmd_check;
use plg::Result;

pub fn run_example() -> Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/configs/sl2r.json");
    let user = from_config(&path)?;
    let native = builtin("sl2r", None, None)?;
    for m in [&user, &native] {
        let r = cmd_check(m, 7, 20, 1e-10)?;
        println!(
            "{:<12} unimodular {:?} character {:?} contrast: {}",
            r.model,
            r.unimodular,
            r.dual_modular_character,
            r.morse["contrast"].verdict
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
