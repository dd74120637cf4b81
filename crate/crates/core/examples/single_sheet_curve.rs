//! Dynamometer fits and the pressure/displacement curve of one sheet.

use bondsim::thickness_fit::{linspace, single_sheet_curve, P_BASE, P_BASE_10_FABRIC};

fn main() {
    let peak = P_BASE_10_FABRIC.peak_displacement().expect("stacked fit has a peak");
    println!("stacked fit peaks at x = {peak:.4} mm, {:.2} MPa", P_BASE_10_FABRIC.eval(peak));
    println!("bare press at 1 mm: {:.2} MPa", P_BASE.eval(1.0));

    let curve = single_sheet_curve(&linspace(-0.97, peak, 25));
    println!("{:>10} {:>14} {:>14}", "x [mm]", "w/10 [um]", "P [MPa]");
    for p in &curve.points {
        println!("{:>10.4} {:>14.3} {:>14.6}", p.x, p.w_single * 1e3, p.pressure);
    }
    for f in &curve.failures {
        println!("x = {}: {}", f.x, f.message);
    }
}
