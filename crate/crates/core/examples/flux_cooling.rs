//! Constant-speed compression with heat loss to the rollers, for three
//! compression times.

use bondsim::integrators::StepControl;
use bondsim::lumped::run_lumped;
use bondsim::materials::default_params;
use bondsim::{LumpedMode, LumpedScenario, StiffnessModel};

fn main() -> bondsim::Result<()> {
    let m = default_params();
    let stiffness = StiffnessModel::quadratic(&m);
    let bare = LumpedScenario::new(m, stiffness, LumpedMode::AdiabaticInStrain { strain_end: 0.4 });
    let points = bare.uniform_points(256)?;
    let control = StepControl::default();
    let no_flux = run_lumped(&bare, &points, &control)?;
    println!("without loss: final {:.3} C", no_flux.final_temperature());

    for dt in [10e-3, 1e-3, 0.1e-3] {
        let mode = LumpedMode::ConstantSpeedInStrain { compression_time: dt, compression_ratio: 0.6 };
        let scenario = LumpedScenario::new(m, stiffness, mode);
        let trace = run_lumped(&scenario, &points, &control)?;
        println!(
            "dt = {:>5.1} ms: v = {:.3e} m/s, peak {:.3} C, final {:.3} C",
            dt * 1e3,
            scenario.compression_speed().unwrap_or(f64::NAN),
            trace.peak_temperature(),
            trace.final_temperature()
        );
    }
    Ok(())
}
