//! Linear and quadratic softening of the fabric modulus.

use bondsim::materials::default_params;
use bondsim::StiffnessModel;

fn main() -> bondsim::Result<()> {
    let m = default_params();
    let linear = StiffnessModel::linear(&m);
    let quadratic = StiffnessModel::quadratic(&m);

    println!("{:>8} {:>10} {:>10}", "T [C]", "linear", "quadratic");
    for t in (20..=170).step_by(15) {
        let t = t as f64;
        println!("{t:>8.0} {:>10.4} {:>10.4}", linear.softening(t), quadratic.softening(t));
    }

    println!("\n{:>6} {:>14}", "strain", "kappa [MPa]");
    for s in [0.0, 0.1, 0.2, 0.3, 0.4, 0.45] {
        println!("{s:>6.2} {:>14.3}", quadratic.kappa_fabric(s)? / 1e6);
    }
    match quadratic.kappa_fabric(0.5) {
        Err(e) => println!("s = 0.5: {e}"),
        Ok(k) => println!("s = 0.5: {k}"),
    }
    Ok(())
}
