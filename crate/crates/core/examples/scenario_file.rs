//! Runs a scenario file and prints its manifest.
//!
//! ```text
//! cargo run -p bondsim --example scenario_file -- crates/core/examples/configs/fig11_quadratic.toml
//! ```

use std::path::PathBuf;

use bondsim::report::run_scenario;

fn main() -> bondsim::Result<()> {
    let path = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/configs/fig11_quadratic.toml")));
    let out = std::env::temp_dir().join("bondsim_scenario_file");
    let manifest = run_scenario(&path, &out)?;
    println!("{}", serde_json::to_string_pretty(&manifest)?);
    Ok(())
}
