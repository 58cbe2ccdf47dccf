//! RK4 trajectories with the flow log-Jacobian, volume drift against three
//! volumes, and the trajectory CSV.

use plg::models::builtin;
use plg::report::{cmd_simulate, SimulateOptions, VolumeChoice};
use plg::Result;

pub fn run_example() -> Result<()> {
    let top = builtin("eulertop", Some(0.3), None)?;
    for volume in [VolumeChoice::Invariant, VolumeChoice::Left, VolumeChoice::Lebesgue] {
        let opts = SimulateOptions {
            hamiltonian: Some("H0".into()),
            steps: 2000,
            volume,
            ..SimulateOptions::default()
        };
        let sim = cmd_simulate(&top, &opts)?;
        let d = &sim.report.drift;
        println!(
            "{:<40} volume drift {:.2e} energy drift {:.2e} preserved {}",
            d.volume, d.volume_drift, d.energy_drift, sim.report.volume_preserved
        );
    }

    let sl2 = builtin("sl2r", None, None)?;
    let opts = SimulateOptions {
        steps: 5,
        ..SimulateOptions::default()
    };
    let sim = cmd_simulate(&sl2, &opts)?;
    let mut csv = Vec::new();
    sim.write_csv(&mut csv, 1)?;
    print!("{}", String::from_utf8_lossy(&csv));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
