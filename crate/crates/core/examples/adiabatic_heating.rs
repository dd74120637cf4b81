//! Heating by compression work alone, for both softening laws.

use bondsim::integrators::StepControl;
use bondsim::lumped::run_lumped;
use bondsim::materials::default_params;
use bondsim::{LumpedMode, LumpedScenario, StiffnessModel};

fn main() -> bondsim::Result<()> {
    let m = default_params();
    let mode = LumpedMode::AdiabaticInStrain { strain_end: 0.4 };
    let linear = LumpedScenario::new(m, StiffnessModel::linear(&m), mode);
    let quadratic = LumpedScenario::new(m, StiffnessModel::quadratic(&m), mode);
    let points = linear.uniform_points(9)?;
    let control = StepControl::default();
    let a = run_lumped(&linear, &points, &control)?;
    let b = run_lumped(&quadratic, &points, &control)?;

    println!("{:>6} {:>12} {:>12}", "strain", "linear [C]", "quadr. [C]");
    for (x, y) in a.samples.iter().zip(&b.samples) {
        println!("{:>6.2} {:>12.4} {:>12.4}", x.abscissa, x.temperature, y.temperature);
    }
    println!("quadratic solver: {:?}", b.stats);
    Ok(())
}
