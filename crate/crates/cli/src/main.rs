use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use isacsim_cli::experiment::resolve_scenario;
use isacsim_cli::scenario_file::{self, Scenario};
use isacsim_cli::{
    exit, parse_seeds, run, selftest, CliError, ExperimentSpec, RunKind, ScenarioSource,
};
use isacsim_core::evolver::EvolverPreset;

#[derive(Parser)]
#[command(
    name = "isacsim",
    version,
    about = "HAPS integrated sensing and communication simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write CSVs plus a manifest.
    Run {
        /// pareto_front, mu_sweep, altitude_sweep, threshold_sweep, user_count_sweep,
        /// single_solve or selftest.
        kind: String,
        /// Scenario file (flat TOML).
        #[arg(long, conflicts_with = "preset")]
        scenario: Option<PathBuf>,
        /// Built-in scenario: system_a.default or system_b.default.
        #[arg(long)]
        preset: Option<String>,
        /// Seeds, e.g. `1..5` or `1,4,9`.
        #[arg(long, default_value = "1..5")]
        seeds: String,
        /// Evolver budget: desk or paper.
        #[arg(long, default_value = "desk")]
        evolver: String,
        #[arg(long, default_value = "isacsim-out")]
        out: PathBuf,
        /// Worker threads (results do not depend on this).
        #[arg(long)]
        workers: Option<usize>,
        /// Override the preset population size.
        #[arg(long)]
        population: Option<usize>,
        /// Override the preset generation count.
        #[arg(long)]
        generations: Option<usize>,
    },
    /// Run the built-in invariant checks.
    Selftest,
    /// Parse and check a scenario file without solving anything.
    Validate { scenario: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run {
            kind,
            scenario,
            preset,
            seeds,
            evolver,
            out,
            workers,
            population,
            generations,
        } => build_spec(
            &kind,
            scenario,
            preset,
            &seeds,
            &evolver,
            out,
            workers,
            population,
            generations,
        )
        .and_then(|spec| {
            let summary = run(&spec)?;
            if let Some(report) = &summary.report {
                print!("{report}");
            }
            for f in &summary.files {
                println!("wrote {}", f.display());
            }
            println!("wrote {}", summary.manifest.display());
            Ok(())
        }),
        Command::Selftest => {
            let checks = selftest::run_all();
            print!("{}", selftest::render(&checks));
            match checks.iter().filter(|c| !c.passed).count() {
                0 => Ok(()),
                failed => Err(CliError::SelftestFailed {
                    failed,
                    report: String::new(),
                }),
            }
        }
        Command::Validate { scenario } => validate(&scenario),
    };
    match result {
        Ok(()) => ExitCode::from(exit::OK as u8),
        Err(e) => {
            if let CliError::SelftestFailed { report, .. } = &e {
                print!("{report}");
            }
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn build_spec(
    kind: &str,
    scenario: Option<PathBuf>,
    preset: Option<String>,
    seeds: &str,
    evolver: &str,
    out: PathBuf,
    workers: Option<usize>,
    population: Option<usize>,
    generations: Option<usize>,
) -> Result<ExperimentSpec, CliError> {
    let kind = RunKind::parse(kind).ok_or_else(|| {
        let names: Vec<&str> = RunKind::ALL.iter().map(RunKind::name).collect();
        CliError::Usage(format!(
            "unknown run kind `{kind}`; expected one of {}",
            names.join(", ")
        ))
    })?;
    let evolver = EvolverPreset::parse(evolver).ok_or_else(|| {
        CliError::Usage(format!(
            "unknown evolver preset `{evolver}`; expected desk or paper"
        ))
    })?;
    let mut spec = ExperimentSpec::new(kind, parse_seeds(seeds)?, out);
    spec.scenario = match (scenario, preset) {
        (Some(p), _) => ScenarioSource::File(p),
        (None, Some(n)) => ScenarioSource::Preset(n),
        (None, None) => ScenarioSource::Default,
    };
    spec.evolver = evolver;
    spec.workers = workers;
    spec.population = population;
    spec.generations = generations;
    Ok(spec)
}

fn validate(path: &Path) -> Result<(), CliError> {
    let cfg = scenario_file::load(path)?;
    let spec = ExperimentSpec {
        scenario: ScenarioSource::File(path.to_path_buf()),
        ..ExperimentSpec::new(RunKind::SingleSolve, vec![1], ".")
    };
    resolve_scenario(&spec)?;
    match &cfg.scenario {
        Scenario::A(s) => {
            s.instance(1)?;
            println!(
                "{}: system A, {} users x {} antennas, {} targets, UAV {}x{} at {} m, HAPS at {} m",
                path.display(),
                s.num_users,
                s.user_antennas,
                s.num_targets,
                s.uav_array.rows(),
                s.uav_array.cols(),
                s.uav_altitude,
                s.haps_altitude
            );
        }
        Scenario::B(s) => {
            s.instance(1)?;
            println!(
                "{}: system B, {} users, {} targets, {}x{} array at {} m, p_max {} W",
                path.display(),
                s.num_users,
                s.num_targets,
                s.array.rows(),
                s.array.cols(),
                s.haps_altitude,
                s.p_max
            );
        }
    }
    Ok(())
}
