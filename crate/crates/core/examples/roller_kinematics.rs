//! Contact angle, bonding time and the compression schedule in the nip.

use bondsim::kinematics::{bonding_time, contact_angle, contact_angle_exact};
use bondsim::{CompressionSchedule, RollerSetup};

fn main() -> bondsim::Result<()> {
    let setup = RollerSetup { radius: 0.2, line_speed: 6.0, compression_ratio: 0.7, h_min: 14e-6 };
    let schedule = CompressionSchedule::new(setup)?;
    println!("omega        {:.3} rad/s", schedule.omega);
    println!("theta0       {:.6} rad (exact chord {:.6})", contact_angle(&setup), contact_angle_exact(&setup));
    println!("bonding time {:.5} ms", bonding_time(&setup) * 1e3);

    println!("\n{:>5} {:>8} {:>14} {:>12}", "tau", "strain", "rate [1/s]", "h [um]");
    for i in 0..=12 {
        let tau = i as f64 * 0.125;
        let k = schedule.scaled(tau);
        println!("{tau:>5.3} {:>8.4} {:>14.1} {:>12.4}", k.strain, k.strain_rate, k.thickness * 1e6);
    }

    let weak = RollerSetup { compression_ratio: 0.4, ..setup };
    if let Err(e) = CompressionSchedule::new(weak) {
        println!("\nr = 0.4 rejected: {e}");
    }
    Ok(())
}
