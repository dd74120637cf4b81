//! Bonding map over compression ratio and line speed.

use bondsim::config::{ModelKind, ScenarioConfig, SweepModel, SweepSection};
use bondsim::report::run_sweep;

fn main() -> bondsim::Result<()> {
    let mut config = ScenarioConfig::default();
    config.scenario.name = "bonding_map".into();
    config.scenario.model = ModelKind::Parabolic;
    config.parabolic.grid_n = 40;
    config.parabolic.tau_end = 20.0;
    config.parabolic.snapshot_taus.clear();
    config.sweep = Some(SweepSection {
        base: None,
        r_values: vec![0.6, 0.7, 0.8, 0.9, 0.95],
        v_values: vec![0.6, 2.0, 6.0],
        model: SweepModel::Parabolic,
        bond_threshold_c: 150.0,
    });

    let out = std::env::temp_dir().join("bondsim_bonding_map");
    let (rows, manifest) = run_sweep(&config, &out, None)?;
    println!("{:>5} {:>6} {:>10} {:>12} {:>7}", "r", "v", "peak [C]", "homog. [C]", "bonded");
    for row in &rows {
        println!(
            "{:>5.2} {:>6.1} {:>10.2} {:>12.2} {:>7}",
            row.r,
            row.v_fabric,
            row.peak_centerline.unwrap_or(f64::NAN),
            row.homogenized.unwrap_or(f64::NAN),
            row.bonded.map_or("-".to_string(), |b| b.to_string())
        );
    }
    println!("wrote {}", manifest.outputs[0].display());
    Ok(())
}
