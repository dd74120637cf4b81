//! Derived fabric constants from the sample measurements.

use bondsim::materials::{areal_density, default_params, min_thickness};
use bondsim::thickness_fit::{thickness_from_threshold, P_BASE_10_FABRIC};

fn main() -> bondsim::Result<()> {
    // a 0.2835 g square of 15 cm side
    let w = areal_density(0.2835e-3, 0.15, 0.15)?;
    let h_min = min_thickness(w, 900.0)?;
    let h_max = thickness_from_threshold(&P_BASE_10_FABRIC, 10)?;
    println!("areal density        {w:.6} kg/m^2");
    println!("compacted thickness  {:.3} um", h_min * 1e6);
    println!("free thickness       {:.2} um", h_max * 1e6);

    let m = default_params();
    println!("areal heat capacity  {:.3} J/(m^2 K)", m.areal_heat_capacity());
    println!("{}", toml::to_string(&m).expect("params serialize"));
    Ok(())
}
