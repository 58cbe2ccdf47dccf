//! The integrable deformation of the conservative Lorenz system: the flow
//! keeps `e^{eta (z + w)} dx dy dz dw` and shrinks Lebesgue volume.

use plg::models::lorenz::{lorenz_deformed, lorenz_limit_chart};
use plg::report::{cmd_simulate, SimulateOptions, VolumeChoice};
use plg::Result;

pub fn run_example() -> Result<()> {
    let m = lorenz_deformed(0.3)?;
    let gm = m.group.as_ref().unwrap();
    let g = [0.2, -0.1, 0.5, 0.4];
    println!("f0(g) = {:.12}, exp(-2 eta (z + w)) = {:.12}", gm.f0(&g)?, (-0.3f64 * 2.0 * 0.9).exp());

    for volume in [VolumeChoice::Invariant, VolumeChoice::Lebesgue] {
        let opts = SimulateOptions {
            steps: 10_000,
            volume,
            ..SimulateOptions::default()
        };
        let sim = cmd_simulate(&m, &opts)?;
        println!("{:<32} drift {:.2e}", sim.report.drift.volume, sim.report.drift.volume_drift);
    }

    let small = lorenz_deformed(1e-7)?;
    let d = (small.chart().pi(&g)? - lorenz_limit_chart().pi(&g)?).amax();
    println!("eta = 1e-7 vs undeformed bivector: {d:.1e}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
