use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bondsim::config::ScenarioConfig;
use bondsim::report::{self, FigureId, FigureOptions, RunManifest};
use bondsim::Error;
use clap::{Parser, Subcommand, ValueEnum};

/// Calender bonding heat models: single runs, sweeps and figure data.
#[derive(Parser)]
#[command(name = "bondsim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Directory for CSV files and manifests.
    #[arg(long, global = true, default_value = "out")]
    out_dir: PathBuf,
    /// Worker threads for sweeps; all processors by default.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Overrides the parabolic grid interval count.
    #[arg(long, global = true)]
    grid_n: Option<usize>,
    /// Overrides the parabolic end time in scaled units.
    #[arg(long, global = true)]
    tau_end: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario file.
    Run { config: PathBuf },
    /// Run a sweep file over its (r, v) grid.
    Sweep { config: PathBuf },
    /// Emit the data behind one figure.
    Figure {
        id: Figure,
        /// Lower end of the displacement range for fig6/7/8, mm.
        #[arg(long, allow_hyphen_values = true)]
        x_min: Option<f64>,
        /// Upper end of the displacement range for fig6/7/8, mm.
        #[arg(long, allow_hyphen_values = true)]
        x_max: Option<f64>,
        /// Sample count for fig6/7/8.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Parse and check a scenario or sweep file without running it.
    Validate { config: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Figure {
    Fig6,
    Fig7,
    Fig8,
    Fig11,
    Fig13,
    Fig15,
    Fig16,
    Fig17,
    Fig18,
}

impl From<Figure> for FigureId {
    fn from(f: Figure) -> Self {
        match f {
            Figure::Fig6 => FigureId::Fig6,
            Figure::Fig7 => FigureId::Fig7,
            Figure::Fig8 => FigureId::Fig8,
            Figure::Fig11 => FigureId::Fig11,
            Figure::Fig13 => FigureId::Fig13,
            Figure::Fig15 => FigureId::Fig15,
            Figure::Fig16 => FigureId::Fig16,
            Figure::Fig17 => FigureId::Fig17,
            Figure::Fig18 => FigureId::Fig18,
        }
    }
}

fn load(cli: &Cli, path: &Path) -> bondsim::Result<ScenarioConfig> {
    let mut config = ScenarioConfig::load(path)?;
    if let Some(n) = cli.grid_n {
        config.parabolic.grid_n = n;
    }
    if let Some(t) = cli.tau_end {
        config.parabolic.tau_end = t;
    }
    Ok(config)
}

fn print_manifest(manifest: &RunManifest) {
    for (key, value) in &manifest.results {
        println!("{key} = {value:.6}");
    }
    for note in &manifest.notes {
        println!("note: {note}");
    }
    for path in &manifest.outputs {
        println!("wrote {}", path.display());
    }
}

fn execute(cli: &Cli) -> bondsim::Result<()> {
    match &cli.command {
        Command::Run { config } => {
            let config = load(cli, config)?;
            print_manifest(&report::run_config(&config, &cli.out_dir)?);
        }
        Command::Sweep { config } => {
            let config = load(cli, config)?;
            let (rows, manifest) = report::run_sweep(&config, &cli.out_dir, cli.workers)?;
            let bonded = rows.iter().filter(|r| r.bonded == Some(true)).count();
            println!("{} cells, {bonded} bonded", rows.len());
            print_manifest(&manifest);
        }
        Command::Figure { id, x_min, x_max, samples } => {
            let x_range = match (x_min, x_max) {
                (None, None) => None,
                (Some(lo), Some(hi)) => Some((*lo, *hi)),
                _ => return Err(Error::Validation {
                    field: "x_min/x_max".into(),
                    rule: "give both ends of the range or neither".into(),
                }),
            };
            let options = FigureOptions { grid_n: cli.grid_n, tau_end: cli.tau_end, x_range, samples: *samples };
            print_manifest(&report::emit_figure_data((*id).into(), &cli.out_dir, &options)?);
        }
        Command::Validate { config } => {
            let config = load(cli, config)?;
            config.validate()?;
            println!("{}: ok ({:?} model)", config.scenario.name, config.scenario.model);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_validation() { 2 } else { 3 })
        }
    }
}
