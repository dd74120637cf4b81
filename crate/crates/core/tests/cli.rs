use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use bondsim::config::ScenarioConfig;
use bondsim::lumped::run_lumped;
use bondsim::report::{self, run_scenario, run_sweep, FigureId, FigureOptions, SWEEP_HEADER, TRACE_HEADER};

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/configs")
}

fn bondsim(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bondsim"))
        .args(args)
        .arg("--out-dir")
        .arg(out)
        .output()
        .expect("spawn bondsim")
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut reader = csv::Reader::from_path(path).expect("open csv");
    let header = reader.headers().expect("header").iter().map(String::from).collect();
    let rows = reader
        .records()
        .map(|r| r.expect("record").iter().map(String::from).collect())
        .collect();
    (header, rows)
}

#[test]
fn adiabatic_run_heats_past_150() {
    let out = tempfile::tempdir().unwrap();
    let manifest = run_scenario(&configs().join("fig11_quadratic.toml"), out.path()).unwrap();
    let trace = &manifest.outputs[0];
    let (header, rows) = read_csv(trace);
    assert_eq!(header, TRACE_HEADER);
    assert_eq!(rows.len(), 512);
    let last: f64 = rows.last().unwrap()[2].parse().unwrap();
    assert!(last >= 150.0, "{last}");
}

#[test]
fn manifest_outputs_exist_and_are_non_empty() {
    let out = tempfile::tempdir().unwrap();
    for file in ["fig11_quadratic.toml", "fig13_dt1ms.toml", "fig15_roller.toml"] {
        let manifest = run_scenario(&configs().join(file), out.path()).unwrap();
        assert!(manifest.scenario.is_some());
        for path in &manifest.outputs {
            assert!(std::fs::metadata(path).unwrap().len() > 0, "{}", path.display());
        }
    }
}

#[test]
fn trace_csv_round_trips_bit_for_bit() {
    let out = tempfile::tempdir().unwrap();
    let config = ScenarioConfig::load(&configs().join("fig15_roller.toml")).unwrap();
    let manifest = report::run_config(&config, out.path()).unwrap();
    let scenario = config.lumped_scenario().unwrap();
    let points = scenario.uniform_points(config.lumped.output_points).unwrap();
    let trace = run_lumped(&scenario, &points, &config.integrator).unwrap();
    let (_, rows) = read_csv(&manifest.outputs[0]);
    for (row, sample) in rows.iter().zip(&trace.samples) {
        let parsed: Vec<f64> = row.iter().map(|v| v.parse().unwrap()).collect();
        let expected = [sample.abscissa, sample.strain, sample.temperature, sample.heating_term, sample.flux_term];
        for (a, b) in parsed.iter().zip(expected) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }
}

#[test]
fn same_config_gives_identical_bytes() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let config = configs().join("fig13_dt1ms.toml");
    let ma = run_scenario(&config, a.path()).unwrap();
    let mb = run_scenario(&config, b.path()).unwrap();
    let read = |p: &PathBuf| std::fs::read(p).unwrap();
    assert_eq!(read(&ma.outputs[0]), read(&mb.outputs[0]));
}

#[test]
fn weak_compression_exits_with_validation_code() {
    let out = tempfile::tempdir().unwrap();
    let config = configs().join("weak_compression.toml");
    for cmd in ["run", "validate"] {
        let output = bondsim(&[cmd, config.to_str().unwrap()], out.path());
        assert_eq!(output.status.code(), Some(2), "{cmd}");
        let stderr = String::from_utf8_lossy(&output.stderr);
        assert!(stderr.contains("r > 0.5"), "{stderr}");
    }
}

#[test]
fn malformed_config_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(&path, "[scenario]\nmodel = \"roller\"\n[lumped]\nstrain = 0.2\n").unwrap();
    let output = bondsim(&["validate", path.to_str().unwrap()], dir.path());
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("line 4") && stderr.contains("strain"), "{stderr}");
}

#[test]
fn unknown_figure_lists_valid_ids() {
    let out = tempfile::tempdir().unwrap();
    let output = bondsim(&["figure", "fig99"], out.path());
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("fig16") && stderr.contains("fig6"), "{stderr}");
}

#[test]
fn fig13_writes_six_traces() {
    let out = tempfile::tempdir().unwrap();
    let output = bondsim(&["figure", "fig13"], out.path());
    assert!(output.status.success());
    let traces: Vec<_> = std::fs::read_dir(out.path())
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.file_name().to_string_lossy().ends_with("_trace.csv"))
        .collect();
    assert_eq!(traces.len(), 6);
}

#[test]
fn pressure_figures_have_documented_headers() {
    let out = tempfile::tempdir().unwrap();
    let opts = FigureOptions { samples: Some(50), ..FigureOptions::default() };
    for (id, header) in [
        (FigureId::Fig6, ["x_mm", "pressure_MPa"]),
        (FigureId::Fig7, ["x_mm", "pressure_MPa"]),
        (FigureId::Fig8, ["w_single_mm", "pressure_MPa"]),
    ] {
        let manifest = report::emit_figure_data(id, out.path(), &opts).unwrap();
        let (h, rows) = read_csv(&manifest.outputs[0]);
        assert_eq!(h, header);
        assert_eq!(rows.len(), 50);
        assert!(rows.iter().all(|r| r.iter().all(|v| v.parse::<f64>().is_ok())));
    }
}

#[test]
fn fig16_manifest_documents_reference_range() {
    let out = tempfile::tempdir().unwrap();
    let opts = FigureOptions { grid_n: Some(40), tau_end: Some(30.0), ..FigureOptions::default() };
    let manifest = report::emit_figure_data(FigureId::Fig16, out.path(), &opts).unwrap();
    let h = manifest.result("fig16.homogenized_C").unwrap();
    let inside = (25.0..=55.0).contains(&h);
    let noted = manifest.notes.iter().any(|n| n.contains("reference range"));
    assert_eq!(inside, !noted);
    let summary = manifest.outputs.iter().find(|p| p.to_string_lossy().ends_with("_summary.csv")).unwrap();
    let (header, rows) = read_csv(summary);
    assert_eq!(header, ["r", "v_fabric", "peak_centerline_C", "homogenized_C", "bonded_flag"]);
    assert_eq!(rows.len(), 1);
}

fn sweep_config(r: Vec<f64>, v: Vec<f64>) -> ScenarioConfig {
    let mut config = ScenarioConfig::load(&configs().join("bonding_sweep.toml")).unwrap();
    config.parabolic.grid_n = 20;
    config.parabolic.tau_end = 10.0;
    let sweep = config.sweep.as_mut().unwrap();
    sweep.r_values = r;
    sweep.v_values = v;
    config
}

#[test]
fn sweep_rows_follow_the_grid() {
    let out = tempfile::tempdir().unwrap();
    let config = sweep_config(vec![0.6, 0.8, 0.95], vec![0.6, 6.0]);
    let (rows, manifest) = run_sweep(&config, out.path(), Some(2)).unwrap();
    assert_eq!(rows.len(), 6);
    for (i, r) in [0.6, 0.8, 0.95].iter().enumerate() {
        for (j, v) in [0.6, 6.0].iter().enumerate() {
            assert_eq!((rows[2 * i + j].r, rows[2 * i + j].v_fabric), (*r, *v));
        }
    }
    for row in &rows {
        assert_eq!(row.bonded, Some(row.peak_centerline.unwrap() >= 150.0));
    }
    for j in 0..2 {
        let peaks: Vec<f64> = (0..3).map(|i| rows[2 * i + j].peak_centerline.unwrap()).collect();
        assert!(peaks.windows(2).all(|w| w[1] <= w[0]), "{peaks:?}");
    }
    let (header, csv_rows) = read_csv(&manifest.outputs[0]);
    assert_eq!(header, SWEEP_HEADER);
    assert_eq!(csv_rows.len(), 6);
}

#[test]
fn sweep_is_independent_of_worker_count() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let config = sweep_config(vec![0.7, 0.9], vec![2.0, 6.0]);
    let (_, ma) = run_sweep(&config, a.path(), Some(1)).unwrap();
    let (_, mb) = run_sweep(&config, b.path(), Some(4)).unwrap();
    assert_eq!(std::fs::read(&ma.outputs[0]).unwrap(), std::fs::read(&mb.outputs[0]).unwrap());
}

#[test]
fn failed_cells_keep_their_rows() {
    let out = tempfile::tempdir().unwrap();
    let mut config = sweep_config(vec![0.7, 0.9], vec![2.0, 6.0]);
    config.parabolic.grid_n = 5;
    let (rows, manifest) = run_sweep(&config, out.path(), None).unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r.error.as_deref().is_some_and(|e| e.contains("grid_n"))));
    assert!(!manifest.notes.is_empty());
    let (_, csv_rows) = read_csv(&manifest.outputs[0]);
    assert_eq!(csv_rows.len(), 4);
}

#[test]
fn single_cell_sweep_matches_a_run() {
    let out = tempfile::tempdir().unwrap();
    let mut config = sweep_config(vec![0.8], vec![6.0]);
    let (rows, _) = run_sweep(&config, out.path(), Some(1)).unwrap();
    config.sweep = None;
    let manifest = report::run_config(&config, out.path()).unwrap();
    assert_eq!(rows[0].peak_centerline, manifest.result("peak_centerline_C"));
    assert_eq!(rows[0].homogenized, manifest.result("homogenized_C"));
}

#[test]
fn lumped_roller_sweep_has_no_homogenized_column() {
    let out = tempfile::tempdir().unwrap();
    let mut config = sweep_config(vec![0.6, 0.9], vec![6.0]);
    config.sweep.as_mut().unwrap().model = bondsim::config::SweepModel::LumpedRoller;
    let (rows, _) = run_sweep(&config, out.path(), None).unwrap();
    assert!(rows.iter().all(|r| r.homogenized.is_none() && r.error.is_none()));
    assert!(rows[1].peak_centerline < rows[0].peak_centerline);
}

#[test]
fn cli_sweep_and_validate_succeed() {
    let out = tempfile::tempdir().unwrap();
    let sweep = configs().join("bonding_sweep.toml");
    let output = bondsim(&["validate", sweep.to_str().unwrap()], out.path());
    assert!(output.status.success(), "{}", String::from_utf8_lossy(&output.stderr));
    let output = bondsim(&["sweep", sweep.to_str().unwrap(), "--workers", "2", "--grid-n", "10", "--tau-end", "5"], out.path());
    assert!(output.status.success(), "{}", String::from_utf8_lossy(&output.stderr));
    let (_, rows) = read_csv(&out.path().join("bonding_sweep_sweep.csv"));
    assert_eq!(rows.len(), 15);
}
