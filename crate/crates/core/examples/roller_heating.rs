//! Lumped heating in the nip, in scaled and physical time.

use bondsim::integrators::StepControl;
use bondsim::lumped::run_lumped;
use bondsim::materials::default_params;
use bondsim::{LumpedMode, LumpedScenario, RollerSetup, StiffnessModel};

fn main() -> bondsim::Result<()> {
    let m = default_params();
    let setup = RollerSetup { radius: 0.2, line_speed: 6.0, compression_ratio: 0.6, h_min: m.h_min };
    let scaled = LumpedScenario::new(m, StiffnessModel::quadratic(&m), LumpedMode::RollerScaledTime { setup });
    let physical = LumpedScenario { mode: LumpedMode::RollerPhysicalTime { setup }, ..scaled };

    let control = StepControl { rel_tol: 1e-11, abs_tol: 1e-11, ..StepControl::default() };
    let taus = scaled.uniform_points(11)?;
    let dt = physical.abscissa_end()?;
    let times: Vec<f64> = taus.iter().map(|t| t * dt).collect();
    let a = run_lumped(&scaled, &taus, &control)?;
    let b = run_lumped(&physical, &times, &control)?;

    println!("contact time {:.4} ms", dt * 1e3);
    println!("{:>5} {:>8} {:>12} {:>12} {:>14} {:>14}", "tau", "strain", "T(tau)", "T(t)", "heating", "loss");
    for (x, y) in a.samples.iter().zip(&b.samples) {
        println!(
            "{:>5.2} {:>8.4} {:>12.6} {:>12.6} {:>14.4e} {:>14.4e}",
            x.abscissa, x.strain, x.temperature, y.temperature, x.heating_term, x.flux_term
        );
    }
    Ok(())
}
