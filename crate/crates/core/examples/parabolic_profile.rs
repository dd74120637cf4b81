//! Through-thickness temperature profile in and after the nip.

use bondsim::materials::default_params;
use bondsim::{Grid, ParabolicModel, ParabolicOptions, RollerSetup};

fn main() -> bondsim::Result<()> {
    let m = default_params();
    let setup = RollerSetup { radius: 0.2, line_speed: 6.0, compression_ratio: 0.8, h_min: m.h_min };
    let model = ParabolicModel::new(setup, m, Grid::new(100)?)?;
    let options = ParabolicOptions { snapshot_taus: vec![0.5, 1.0, 2.0, 10.0, 40.0], ..ParabolicOptions::default() };
    let run = model.run(None, &options)?;

    let nodes = model.grid.nodes();
    let picks = [0, 10, 25, 40, 50];
    print!("{:>6}", "tau");
    for &k in &picks {
        print!(" {:>9}", format!("z={:+.1}", nodes[k]));
    }
    println!();
    for snap in &run.snapshots {
        print!("{:>6.1}", snap.tau);
        for &k in &picks {
            print!(" {:>9.3}", snap.values[k]);
        }
        println!("  {}", snap.phase.label());
    }
    println!("peak centreline   {:.3} C", run.peak_centerline);
    if let Some(h) = run.homogenized {
        println!("homogenized       {h:.3} C (spread {:.2e}, converged {})", run.spread, run.converged);
    }
    println!("steps: {:?}", run.stats);
    Ok(())
}
