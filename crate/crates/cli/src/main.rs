use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use mmtrace_core::channel::{delay_spread_table, profile_at, sweep_receiver};
use mmtrace_core::export::{ghz_label, inspect_csv, pdp_csv, plot_script, sweep_csv, table_csv, table_text};
use mmtrace_core::scenario::{parse_scenario, EnvironmentKind, ScenarioConfig, SystemConfig};
use mmtrace_core::tracer::Polarization;

/// Image-method ray tracer for indoor millimeter-wave channels.
#[derive(Debug, Parser)]
#[command(name = "mmtrace", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Scenario file (TOML); defaults apply when omitted.
    #[arg(long, global = true)]
    scenario: Option<PathBuf>,
    /// Carrier frequencies in Hz, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    freq: Vec<f64>,
    /// Antenna system presets, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    system: Vec<String>,
    /// Environments, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    env: Vec<EnvironmentKind>,
    /// Output directory (overrides the scenario).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    polarization: Option<Polarization>,
    /// Worker threads for the sweep.
    #[arg(long, global = true)]
    workers: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Received power along the duct, one CSV per environment and frequency.
    Sweep,
    /// Power delay profiles at the given receiver distances.
    Pdp {
        /// Receiver distance along the centerline (m), comma separated.
        #[arg(long, value_delimiter = ',')]
        rx: Vec<f64>,
    },
    /// RMS delay spread tables.
    Table,
    /// Write a gnuplot script for existing CSV files.
    Plot { files: Vec<PathBuf> },
    /// Check the scenario and the geometry of its environments.
    Validate,
}

struct Run {
    configs: Vec<ScenarioConfig>,
    out: PathBuf,
    workers: Option<usize>,
}

impl Run {
    fn new(common: &Common) -> Result<Self> {
        let mut base = match &common.scenario {
            Some(path) => {
                let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                parse_scenario(&text).with_context(|| format!("in scenario {}", path.display()))?
            }
            None => ScenarioConfig::default(),
        };
        if !common.freq.is_empty() {
            base.frequencies_hz = common.freq.clone();
        }
        if !common.system.is_empty() {
            base.systems = common
                .system
                .iter()
                .map(|name| {
                    base.systems.iter().find(|s| &s.preset == name).cloned().unwrap_or(SystemConfig {
                        preset: name.clone(),
                        tx_power_dbm: None,
                        peak_gain_dbi: None,
                    })
                })
                .collect();
        }
        if let Some(p) = common.polarization {
            base.physics.polarization = p;
        }
        if let Some(dir) = &common.out {
            base.output.dir = dir.to_string_lossy().into_owned();
        }
        base.validate().context("invalid command-line override")?;
        if common.workers == Some(0) {
            bail!("--workers must be at least 1");
        }
        let configs = if common.env.is_empty() {
            vec![base.clone()]
        } else {
            common
                .env
                .iter()
                .map(|&kind| {
                    let mut c = base.clone();
                    c.environment.kind = kind;
                    c
                })
                .collect()
        };
        Ok(Run {
            out: PathBuf::from(&base.output.dir),
            configs,
            workers: common.workers,
        })
    }

    fn write(&self, name: &str, contents: &str) -> Result<PathBuf> {
        fs::create_dir_all(&self.out).with_context(|| format!("creating {}", self.out.display()))?;
        let path = self.out.join(name);
        fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
        println!("{}", path.display());
        Ok(path)
    }

    fn plot(&self, written: &[PathBuf], name: &str) -> Result<()> {
        if self.configs.iter().any(|c| c.output.plot) {
            let script = script_for(written)?;
            self.write(name, &script)?;
        }
        Ok(())
    }

    fn sweep(&self) -> Result<()> {
        let mut written = Vec::new();
        for config in &self.configs {
            let env = config.build_environment()?;
            let systems = config.antenna_systems()?;
            let mut settings = config.sweep_settings();
            settings.workers = self.workers;
            for &f in &config.frequencies_hz {
                let result = sweep_receiver(&env, &systems, &config.carrier(f), &settings)?;
                let name = format!("sweep_{}_{}GHz.csv", config.environment.kind, ghz_label(f));
                written.push(self.write(&name, &sweep_csv(&result))?);
            }
        }
        self.plot(&written, "plot_sweep.gp")
    }

    fn pdp(&self, rx: &[f64]) -> Result<()> {
        let mut written = Vec::new();
        for config in &self.configs {
            let env = config.build_environment()?;
            let systems = config.antenna_systems()?;
            let mut settings = config.sweep_settings();
            settings.workers = self.workers;
            let end = env.axis_length();
            let positions = if rx.is_empty() { &config.output.pdp_positions[..] } else { rx };
            for &d in positions {
                if !(d > settings.rx_start && d <= end) {
                    bail!("receiver distance {d} m is outside ({}, {end}] m", settings.rx_start);
                }
                for &f in &config.frequencies_hz {
                    for sys in &systems {
                        let pdp = profile_at(&env, sys, &config.carrier(f), &settings, d, config.pdp_bin_width())
                            .with_context(|| format!("no coverage for {} at {d} m", sys.name))?;
                        let name = format!(
                            "pdp_{}_{}GHz_{}_{d}m.csv",
                            config.environment.kind,
                            ghz_label(f),
                            sys.name
                        );
                        written.push(self.write(&name, &pdp_csv(&pdp))?);
                    }
                }
            }
        }
        self.plot(&written, "plot_pdp.gp")
    }

    fn table(&self) -> Result<()> {
        let mut written = Vec::new();
        for config in &self.configs {
            let env = config.build_environment()?;
            let systems = config.antenna_systems()?;
            let mut settings = config.sweep_settings();
            settings.workers = self.workers;
            let tables = delay_spread_table(
                &[env],
                &systems,
                &config.frequencies_hz,
                &settings,
                config.physics.delay_aggregation,
                config.pdp_bin_width(),
            )?;
            for t in &tables {
                let kind = config.environment.kind;
                let text = table_text(t);
                print!("{text}");
                self.write(&format!("table_{kind}.txt"), &text)?;
                written.push(self.write(&format!("table_{kind}.csv"), &table_csv(t))?);
            }
        }
        self.plot(&written, "plot_table.gp")
    }

    fn validate(&self) -> Result<()> {
        for config in &self.configs {
            let kind = config.environment.kind;
            config.build_environment().with_context(|| format!("environment {kind}"))?;
            config.antenna_systems()?;
            println!("{kind}: ok");
        }
        Ok(())
    }
}

fn script_for(files: &[PathBuf]) -> Result<String> {
    let inputs = files
        .iter()
        .map(|p| {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            let csv = inspect_csv(&text).with_context(|| format!("in {}", p.display()))?;
            Ok((p.to_string_lossy().into_owned(), csv))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(plot_script(&inputs)?)
}

fn plot(run: &Run, files: &[PathBuf]) -> Result<()> {
    if files.is_empty() {
        bail!("plot needs at least one CSV file");
    }
    for f in files {
        if !Path::new(f).is_file() {
            bail!("input file {} does not exist", f.display());
        }
    }
    run.write("plot.gp", &script_for(files)?)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = Run::new(&cli.common).and_then(|run| match &cli.command {
        Command::Sweep => run.sweep(),
        Command::Pdp { rx } => run.pdp(rx),
        Command::Table => run.table(),
        Command::Plot { files } => plot(&run, files),
        Command::Validate => run.validate(),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
