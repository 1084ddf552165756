use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use isacsim_core::evolver::{EvolverConfig, EvolverPreset, Problem};
use isacsim_core::scenarios::{
    altitude_sweep, median, mu_sweep, pareto_front, system_a_problem, system_b_problem,
    threshold_sweep, user_count_sweep, AltitudeRow, GainThresholds, MuRow, ParetoRow, ThresholdRow,
    UserCountRow,
};
use isacsim_core::{achievable_rate, total_power};
use serde_json::json;

use crate::error::CliError;
use crate::output::{db, genome_to_hex, num, write_atomic, write_table, Table};
use crate::scenario_file::{self, Scenario, ScenarioConfig, PRESET_A, PRESET_B};
use crate::selftest;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunKind {
    ParetoFront,
    MuSweep,
    AltitudeSweep,
    ThresholdSweep,
    UserCountSweep,
    SingleSolve,
    Selftest,
}

impl RunKind {
    pub const ALL: [RunKind; 7] = [
        Self::ParetoFront,
        Self::MuSweep,
        Self::AltitudeSweep,
        Self::ThresholdSweep,
        Self::UserCountSweep,
        Self::SingleSolve,
        Self::Selftest,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Self::ParetoFront => "pareto_front",
            Self::MuSweep => "mu_sweep",
            Self::AltitudeSweep => "altitude_sweep",
            Self::ThresholdSweep => "threshold_sweep",
            Self::UserCountSweep => "user_count_sweep",
            Self::SingleSolve => "single_solve",
            Self::Selftest => "selftest",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }

    /// Preset used when the command line names no scenario.
    fn default_preset(&self) -> &'static str {
        match self {
            Self::AltitudeSweep | Self::ThresholdSweep => PRESET_B,
            _ => PRESET_A,
        }
    }
}

impl fmt::Display for RunKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ScenarioSource {
    File(PathBuf),
    Preset(String),
    /// The kind's default preset.
    Default,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub kind: RunKind,
    pub scenario: ScenarioSource,
    pub seeds: Vec<u64>,
    pub evolver: EvolverPreset,
    pub out_dir: PathBuf,
    /// Overrides of the preset budget.
    pub population: Option<usize>,
    pub generations: Option<usize>,
    /// Worker threads; `None` lets the pool pick.
    pub workers: Option<usize>,
}

impl ExperimentSpec {
    pub fn new(kind: RunKind, seeds: Vec<u64>, out_dir: impl Into<PathBuf>) -> Self {
        Self {
            kind,
            scenario: ScenarioSource::Default,
            seeds,
            evolver: EvolverPreset::Desk,
            out_dir: out_dir.into(),
            population: None,
            generations: None,
            workers: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub files: Vec<PathBuf>,
    pub manifest: PathBuf,
    pub any_feasible: bool,
    /// Rendered check table for the selftest kind.
    pub report: Option<String>,
}

pub fn resolve_scenario(spec: &ExperimentSpec) -> Result<ScenarioConfig, CliError> {
    let cfg = match &spec.scenario {
        ScenarioSource::File(p) => scenario_file::load(p)?,
        ScenarioSource::Preset(name) => scenario_file::preset(name)?,
        ScenarioSource::Default => scenario_file::preset(spec.kind.default_preset())?,
    };
    let needs = match spec.kind {
        RunKind::ParetoFront | RunKind::MuSweep | RunKind::UserCountSweep => Some("a"),
        RunKind::AltitudeSweep | RunKind::ThresholdSweep => Some("b"),
        RunKind::SingleSolve | RunKind::Selftest => None,
    };
    if let Some(sys) = needs {
        if cfg.scenario.system() != sys {
            return Err(CliError::Usage(format!(
                "{} needs a system {} scenario, got preset `{}`",
                spec.kind,
                sys.to_uppercase(),
                cfg.preset
            )));
        }
    }
    Ok(cfg)
}

pub fn evolver_config(
    spec: &ExperimentSpec,
    scenario: &Scenario,
) -> Result<EvolverConfig, CliError> {
    let mut cfg = match (spec.evolver, scenario) {
        (EvolverPreset::Desk, _) => EvolverConfig::desk(0),
        (EvolverPreset::Paper, Scenario::A(_)) => EvolverConfig::paper_system_a(0),
        (EvolverPreset::Paper, Scenario::B(_)) => EvolverConfig::paper_system_b(0),
    };
    if spec.population.is_some() || spec.generations.is_some() {
        let pop = spec.population.unwrap_or(cfg.population_size);
        let gens = spec.generations.unwrap_or(cfg.generations);
        cfg = EvolverConfig::with_size(pop, gens, 0);
    }
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(cfg)
}

/// Runs one experiment and writes its CSVs and manifest into `spec.out_dir`.
pub fn run(spec: &ExperimentSpec) -> Result<RunSummary, CliError> {
    if spec.seeds.is_empty() {
        return Err(CliError::Usage("seed list is empty".into()));
    }
    let started = Instant::now();
    let started_unix = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    std::fs::create_dir_all(&spec.out_dir).map_err(|e| CliError::io(&spec.out_dir, e))?;
    let scenario = resolve_scenario(spec)?;
    let cfg = evolver_config(spec, &scenario.scenario)?;
    if spec.evolver == EvolverPreset::Paper {
        warn_paper_runtime(spec, &scenario, &cfg);
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = spec.workers {
        builder = builder.num_threads(n.max(1));
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Internal(format!("worker pool: {e}")))?;
    let outputs = pool.install(|| execute(spec, &scenario, &cfg))?;

    let mut files = Vec::new();
    for (name, table) in &outputs.tables {
        files.push(write_table(&spec.out_dir, name, table)?);
    }
    let manifest_path = spec.out_dir.join("manifest.json");
    let manifest = json!({
        "tool": "isacsim",
        "version": env!("CARGO_PKG_VERSION"),
        "kind": spec.kind.name(),
        "command": std::env::args().collect::<Vec<_>>(),
        "scenario": {
            "preset": scenario.preset,
            "source": scenario.source.as_ref().map(|p| p.display().to_string()),
            "file_text": scenario.text,
            "resolved": format!("{:?}", scenario.scenario),
            "grid": format!("{:?}", scenario.grid),
        },
        "evolver": {
            "preset": spec.evolver.name(),
            "population_size": cfg.population_size,
            "generations": cfg.generations,
            "crossover_fraction": cfg.crossover_fraction,
            "mutation_sigma0": cfg.mutation_sigma0,
            "sigma_decay": cfg.sigma_decay,
            "tournament_size": cfg.tournament_size,
            "elite_count": cfg.elite_count,
        },
        "seeds": spec.seeds,
        "workers": spec.workers,
        "started_unix": started_unix,
        "wall_clock_seconds": started.elapsed().as_secs_f64(),
        "files": files.iter().map(|p| file_name(p)).collect::<Vec<_>>(),
        "feasible_by_seed": outputs.feasible_by_seed,
        "any_feasible": outputs.any_feasible,
    });
    let text = serde_json::to_string_pretty(&manifest)
        .map_err(|e| CliError::Internal(format!("manifest: {e}")))?;
    write_atomic(&manifest_path, text.as_bytes())?;

    if spec.kind == RunKind::Selftest && outputs.selftest_failures > 0 {
        return Err(CliError::SelftestFailed {
            failed: outputs.selftest_failures,
            report: outputs.report.unwrap_or_default(),
        });
    }
    if !outputs.any_feasible {
        return Err(CliError::InfeasibleEverywhere(spec.out_dir.clone()));
    }
    Ok(RunSummary {
        files,
        manifest: manifest_path,
        any_feasible: outputs.any_feasible,
        report: outputs.report,
    })
}

fn file_name(p: &Path) -> String {
    p.file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

struct Outputs {
    tables: Vec<(String, Table)>,
    feasible_by_seed: BTreeMap<u64, bool>,
    any_feasible: bool,
    selftest_failures: usize,
    report: Option<String>,
}

impl Outputs {
    fn new(seeds: &[u64]) -> Self {
        Self {
            tables: Vec::new(),
            feasible_by_seed: seeds.iter().map(|&s| (s, false)).collect(),
            any_feasible: false,
            selftest_failures: 0,
            report: None,
        }
    }

    fn mark(&mut self, seed: u64, feasible: bool) {
        if feasible {
            self.feasible_by_seed.insert(seed, true);
            self.any_feasible = true;
        }
    }

    /// Splits `table` into one file per seed (column 0 holds the seed).
    fn per_seed(&mut self, kind: RunKind, seeds: &[u64], table: &Table) {
        for &s in seeds {
            let mut t = Table::new(table.header.clone());
            let key = s.to_string();
            t.rows = table.rows.iter().filter(|r| r[0] == key).cloned().collect();
            self.tables
                .push((format!("{}_seed{}.csv", kind.name(), s), t));
        }
    }
}

fn execute(
    spec: &ExperimentSpec,
    scenario: &ScenarioConfig,
    cfg: &EvolverConfig,
) -> Result<Outputs, CliError> {
    let seeds = &spec.seeds;
    let mut out = Outputs::new(seeds);
    let grid = &scenario.grid;
    match (spec.kind, &scenario.scenario) {
        (RunKind::Selftest, _) => {
            let checks = selftest::run_all();
            out.selftest_failures = checks.iter().filter(|c| !c.passed).count();
            out.any_feasible = true;
            out.report = Some(selftest::render(&checks));
            out.tables
                .push(("selftest.csv".into(), selftest::table(&checks)));
        }
        (RunKind::ParetoFront, Scenario::A(scn)) => {
            let mut rows: Vec<ParetoRow> = Vec::new();
            let mut summary = Table::new(vec![
                "seed",
                "front_size",
                "max_eta_linear",
                "max_eta_db",
                "max_omega_watts",
                "hypervolume",
            ]);
            let mut stats: Vec<[f64; 4]> = Vec::new();
            for &seed in seeds {
                let (r, o) = pareto_front(scn, seed, cfg)?;
                let max_eta = r.iter().map(|x| x.eta).fold(f64::NAN, f64::max);
                let max_omega = r.iter().map(|x| x.omega).fold(f64::NAN, f64::max);
                let hv = o
                    .trace
                    .last()
                    .and_then(|t| t.hypervolume)
                    .unwrap_or(f64::NAN);
                summary.push(vec![
                    seed.to_string(),
                    r.len().to_string(),
                    num(max_eta),
                    db(max_eta),
                    num(max_omega),
                    num(hv),
                ]);
                stats.push([r.len() as f64, max_eta, max_omega, hv]);
                out.mark(seed, o.feasible);
                rows.extend(r);
            }
            let col = |i: usize| median(&stats.iter().map(|s| s[i]).collect::<Vec<_>>());
            summary.push(vec![
                "median".into(),
                num(col(0)),
                num(col(1)),
                db(col(1)),
                num(col(2)),
                num(col(3)),
            ]);
            out.per_seed(spec.kind, seeds, &pareto_table(&rows));
            out.tables.push(("pareto_front_median.csv".into(), summary));
        }
        (RunKind::MuSweep, Scenario::A(scn)) => {
            let rows = mu_sweep(scn, &grid.mus, seeds, cfg)?;
            for r in &rows {
                out.mark(r.seed, r.feasible);
            }
            out.per_seed(spec.kind, seeds, &mu_table(&rows));
            out.tables
                .push(("mu_sweep_median.csv".into(), mu_median(&rows, &grid.mus)));
        }
        (RunKind::AltitudeSweep, Scenario::B(scn)) => {
            let rows = altitude_sweep(scn, &grid.altitudes, seeds, cfg)?;
            for r in &rows {
                out.mark(r.seed, r.feasible);
            }
            out.per_seed(spec.kind, seeds, &altitude_table(&rows));
            out.tables.push((
                "altitude_sweep_median.csv".into(),
                altitude_median(&rows, &grid.altitudes),
            ));
        }
        (RunKind::ThresholdSweep, Scenario::B(scn)) => {
            let thresholds = match &grid.gammas {
                Some(g) => GainThresholds::Absolute(g.clone()),
                None => GainThresholds::Fractions(grid.gamma_fractions.clone()),
            };
            let rows = threshold_sweep(scn, &thresholds, &grid.decoders, seeds, cfg)?;
            for r in &rows {
                out.mark(r.seed, r.feasible);
            }
            let per_decoder = rows.len() / (seeds.len() * grid.decoders.len()).max(1);
            out.per_seed(spec.kind, seeds, &threshold_table(&rows, per_decoder));
            out.tables.push((
                "threshold_sweep_median.csv".into(),
                threshold_median(&rows, per_decoder),
            ));
        }
        (RunKind::UserCountSweep, Scenario::A(scn)) => {
            let rows = user_count_sweep(scn, &grid.user_counts, seeds, cfg)?;
            for r in &rows {
                out.mark(r.seed, true);
            }
            out.per_seed(spec.kind, seeds, &user_table(&rows));
            out.tables.push((
                "user_count_sweep_median.csv".into(),
                user_median(&rows, &grid.user_counts),
            ));
        }
        (RunKind::SingleSolve, s) => {
            let table = single_solve(s, seeds, cfg, &mut out)?;
            out.per_seed(spec.kind, seeds, &table);
            out.tables
                .push(("single_solve_median.csv".into(), single_median(&table)));
        }
        (kind, s) => {
            return Err(CliError::Internal(format!(
                "{kind} cannot run on system {}",
                s.system()
            )))
        }
    }
    Ok(out)
}

fn flag(b: bool) -> String {
    b.to_string()
}

pub const PARETO_HEADER: [&str; 8] = [
    "seed",
    "solution_id",
    "eta_linear",
    "eta_db",
    "omega_watts",
    "omega_dbw",
    "feasible",
    "genome_hex",
];

fn pareto_table(rows: &[ParetoRow]) -> Table {
    let mut t = Table::new(PARETO_HEADER.to_vec());
    for r in rows {
        t.push(vec![
            r.seed.to_string(),
            r.solution_id.to_string(),
            num(r.eta),
            db(r.eta),
            num(r.omega),
            db(r.omega),
            flag(r.feasible),
            genome_to_hex(&r.genome),
        ]);
    }
    t
}

fn mu_table(rows: &[MuRow]) -> Table {
    let mut t = Table::new(vec![
        "seed",
        "mu",
        "eta_linear",
        "eta_db",
        "omega_watts",
        "omega_dbw",
        "objective",
        "feasible",
        "genome_hex",
        "source_mu",
    ]);
    for r in rows {
        t.push(vec![
            r.seed.to_string(),
            num(r.mu),
            num(r.eta),
            db(r.eta),
            num(r.omega),
            db(r.omega),
            num(r.objective),
            flag(r.feasible),
            genome_to_hex(&r.genome),
            num(r.source_mu),
        ]);
    }
    t
}

fn mu_median(rows: &[MuRow], mus: &[f64]) -> Table {
    let mut t = Table::new(vec![
        "mu",
        "median_eta_linear",
        "median_eta_db",
        "median_omega_watts",
        "median_omega_dbw",
        "feasible_seeds",
        "seeds",
    ]);
    for &mu in mus {
        let cell: Vec<&MuRow> = rows.iter().filter(|r| r.mu == mu).collect();
        let eta = median(&cell.iter().map(|r| r.eta).collect::<Vec<_>>());
        let omega = median(&cell.iter().map(|r| r.omega).collect::<Vec<_>>());
        t.push(vec![
            num(mu),
            num(eta),
            db(eta),
            num(omega),
            db(omega),
            cell.iter().filter(|r| r.feasible).count().to_string(),
            cell.len().to_string(),
        ]);
    }
    t
}

fn altitude_table(rows: &[AltitudeRow]) -> Table {
    let mut t = Table::new(vec![
        "seed",
        "altitude_m",
        "min_gain_watts",
        "min_gain_dbw",
        "min_sinr_linear",
        "min_sinr_db",
        "max_min_sinr_linear",
        "max_min_sinr_db",
        "angular_spread_deg",
        "fixed_precoder_power_watts",
        "feasible",
        "genome_hex",
    ]);
    for r in rows {
        let fixed: Vec<String> = r.fixed_precoder_power.iter().map(|&p| num(p)).collect();
        t.push(vec![
            r.seed.to_string(),
            num(r.altitude),
            num(r.min_gain),
            db(r.min_gain),
            num(r.min_sinr),
            db(r.min_sinr),
            num(r.max_min_sinr),
            db(r.max_min_sinr),
            num(r.angular_spread.to_degrees()),
            fixed.join(";"),
            flag(r.feasible),
            genome_to_hex(&r.genome),
        ]);
    }
    t
}

fn altitude_median(rows: &[AltitudeRow], altitudes: &[f64]) -> Table {
    let mut t = Table::new(vec![
        "altitude_m",
        "median_min_gain_watts",
        "median_min_gain_dbw",
        "median_min_sinr_db",
        "median_max_min_sinr_linear",
        "median_max_min_sinr_db",
        "median_angular_spread_deg",
        "feasible_seeds",
        "seeds",
    ]);
    for &a in altitudes {
        let cell: Vec<&AltitudeRow> = rows.iter().filter(|r| r.altitude == a).collect();
        let m = |f: fn(&AltitudeRow) -> f64| median(&cell.iter().map(|r| f(r)).collect::<Vec<_>>());
        let gain = m(|r| r.min_gain);
        let best_sinr = m(|r| r.max_min_sinr);
        t.push(vec![
            num(a),
            num(gain),
            db(gain),
            db(m(|r| r.min_sinr)),
            num(best_sinr),
            db(best_sinr),
            num(m(|r| r.angular_spread).to_degrees()),
            cell.iter().filter(|r| r.feasible).count().to_string(),
            cell.len().to_string(),
        ]);
    }
    t
}

fn threshold_table(rows: &[ThresholdRow], per_decoder: usize) -> Table {
    let mut t = Table::new(vec![
        "seed",
        "decoder",
        "threshold_index",
        "gamma_fraction",
        "gamma_watts",
        "gamma_dbw",
        "min_sinr_linear",
        "min_sinr_db",
        "min_rate_bps_hz",
        "feasible",
        "genome_hex",
        "source_decoder",
        "source_gamma_fraction",
    ]);
    for (i, r) in rows.iter().enumerate() {
        t.push(vec![
            r.seed.to_string(),
            r.decoder.name().to_string(),
            (i % per_decoder.max(1)).to_string(),
            num(r.gamma_fraction),
            num(r.gamma),
            db(r.gamma),
            num(r.min_sinr),
            db(r.min_sinr),
            num(r.min_rate),
            flag(r.feasible),
            genome_to_hex(&r.genome),
            r.source_decoder.name().to_string(),
            num(r.source_gamma_fraction),
        ]);
    }
    t
}

fn threshold_median(rows: &[ThresholdRow], per_decoder: usize) -> Table {
    let mut t = Table::new(vec![
        "decoder",
        "threshold_index",
        "median_gamma_fraction",
        "median_gamma_watts",
        "median_min_rate_bps_hz",
        "feasible_seeds",
        "seeds",
    ]);
    let mut decoders = Vec::new();
    for r in rows {
        if !decoders.contains(&r.decoder) {
            decoders.push(r.decoder);
        }
    }
    for d in decoders {
        for idx in 0..per_decoder {
            let cell: Vec<&ThresholdRow> = rows
                .iter()
                .enumerate()
                .filter(|(i, r)| r.decoder == d && i % per_decoder == idx)
                .map(|(_, r)| r)
                .collect();
            let m = |f: fn(&ThresholdRow) -> f64| {
                median(&cell.iter().map(|r| f(r)).collect::<Vec<_>>())
            };
            t.push(vec![
                d.name().to_string(),
                idx.to_string(),
                num(m(|r| r.gamma_fraction)),
                num(m(|r| r.gamma)),
                num(m(|r| if r.feasible { r.min_rate } else { f64::NAN })),
                cell.iter().filter(|r| r.feasible).count().to_string(),
                cell.len().to_string(),
            ]);
        }
    }
    t
}

fn user_table(rows: &[UserCountRow]) -> Table {
    let mut t = Table::new(vec![
        "seed",
        "num_users",
        "proposed_min_rate_bps_hz",
        "baseline_min_rate_bps_hz",
        "baseline_sum_rate_bps_hz",
        "baseline_weights",
        "proposed_genome_hex",
        "baseline_genome_hex",
    ]);
    let mut sorted: Vec<&UserCountRow> = rows.iter().collect();
    sorted.sort_by_key(|r| (r.seed, r.num_users));
    for r in sorted {
        t.push(vec![
            r.seed.to_string(),
            r.num_users.to_string(),
            num(r.proposed_min_rate),
            num(r.baseline_min_rate),
            num(r.baseline_sum_rate),
            "unit".into(),
            genome_to_hex(&r.proposed_genome),
            genome_to_hex(&r.baseline_genome),
        ]);
    }
    t
}

fn user_median(rows: &[UserCountRow], counts: &[usize]) -> Table {
    let mut t = Table::new(vec![
        "num_users",
        "median_proposed_min_rate_bps_hz",
        "median_baseline_min_rate_bps_hz",
        "median_baseline_sum_rate_bps_hz",
        "proposed_at_least_baseline",
        "seeds",
    ]);
    for &k in counts {
        let cell: Vec<&UserCountRow> = rows.iter().filter(|r| r.num_users == k).collect();
        let m =
            |f: fn(&UserCountRow) -> f64| median(&cell.iter().map(|r| f(r)).collect::<Vec<_>>());
        t.push(vec![
            k.to_string(),
            num(m(|r| r.proposed_min_rate)),
            num(m(|r| r.baseline_min_rate)),
            num(m(|r| r.baseline_sum_rate)),
            cell.iter()
                .filter(|r| r.proposed_min_rate >= r.baseline_min_rate)
                .count()
                .to_string(),
            cell.len().to_string(),
        ]);
    }
    t
}

const SINGLE_HEADER: [&str; 11] = [
    "seed",
    "system",
    "objective",
    "min_sinr_linear",
    "min_sinr_db",
    "min_rate_bps_hz",
    "min_gain_watts",
    "omega_watts",
    "total_power_watts",
    "feasible",
    "genome_hex",
];

fn single_solve(
    scenario: &Scenario,
    seeds: &[u64],
    cfg: &EvolverConfig,
    out: &mut Outputs,
) -> Result<Table, CliError> {
    let mut t = Table::new(SINGLE_HEADER.to_vec());
    match scenario {
        Scenario::A(scn) => {
            let rows = mu_sweep(scn, &[scn.mu], seeds, cfg)?;
            for r in rows.iter().filter(|r| r.mu == scn.mu) {
                let p = system_a_problem(scn, r.seed)?;
                let w = p.codec().decode(&r.genome)?;
                out.mark(r.seed, r.feasible);
                t.push(vec![
                    r.seed.to_string(),
                    "a".into(),
                    num(r.objective),
                    num(r.eta),
                    db(r.eta),
                    num(achievable_rate(r.eta)),
                    String::new(),
                    num(r.omega),
                    num(total_power(&w)),
                    flag(r.feasible),
                    genome_to_hex(&r.genome),
                ]);
            }
        }
        Scenario::B(scn) => {
            use rayon::prelude::*;
            let solved: Vec<Result<Vec<String>, CliError>> = seeds
                .par_iter()
                .map(|&seed| {
                    let p = system_b_problem(scn, seed)?;
                    let o = isacsim_core::evolver::run_ga(&p, &cfg.clone().with_seed(seed))?;
                    let m = p.metrics(&o.best.genome)?;
                    let w = p.precoders(&o.best.genome)?;
                    Ok(vec![
                        seed.to_string(),
                        "b".into(),
                        num(o.best.objectives[0]),
                        num(m.min_sinr),
                        db(m.min_sinr),
                        num(achievable_rate(m.min_sinr)),
                        num(m.min_beampattern_gain),
                        String::new(),
                        num(total_power(&w)),
                        flag(o.feasible),
                        genome_to_hex(&o.best.genome),
                    ])
                })
                .collect();
            for row in solved {
                let row = row?;
                let seed: u64 = row[0].parse().expect("seed column");
                out.mark(seed, row[9] == "true");
                t.push(row);
            }
        }
    }
    Ok(t)
}

fn single_median(table: &Table) -> Table {
    let mut t = Table::new(vec![
        "median_objective",
        "median_min_sinr_db",
        "median_min_rate_bps_hz",
        "feasible_seeds",
        "seeds",
    ]);
    let col = |i: usize| {
        median(
            &table
                .rows
                .iter()
                .map(|r| r[i].parse::<f64>().unwrap_or(f64::NAN))
                .collect::<Vec<_>>(),
        )
    };
    t.push(vec![
        num(col(2)),
        db(col(3)),
        num(col(5)),
        table
            .rows
            .iter()
            .filter(|r| r[9] == "true")
            .count()
            .to_string(),
        table.rows.len().to_string(),
    ]);
    t
}

/// Number of evolver runs one seed of `kind` needs.
fn solves_per_seed(kind: RunKind, cfg: &ScenarioConfig) -> usize {
    let g = &cfg.grid;
    match kind {
        RunKind::ParetoFront | RunKind::SingleSolve => 1,
        RunKind::MuSweep => g.mus.iter().filter(|m| **m != 0.0 && **m != 1.0).count() + 2,
        RunKind::AltitudeSweep => 2 * g.altitudes.len(),
        RunKind::ThresholdSweep => {
            1 + g.decoders.len() * g.gammas.as_ref().map_or(g.gamma_fractions.len(), Vec::len)
        }
        RunKind::UserCountSweep => 2 * g.user_counts.len(),
        RunKind::Selftest => 0,
    }
}

/// Times a few objective evaluations and extrapolates to the full paper-scale budget.
fn warn_paper_runtime(spec: &ExperimentSpec, scenario: &ScenarioConfig, cfg: &EvolverConfig) {
    let seed = spec.seeds[0];
    let per_eval = match &scenario.scenario {
        Scenario::A(s) => system_a_problem(s, seed).ok().map(|p| time_evals(&p)),
        Scenario::B(s) => system_b_problem(s, seed).ok().map(|p| time_evals(&p)),
    };
    let solves = solves_per_seed(spec.kind, scenario) * spec.seeds.len();
    let evals = (solves * cfg.population_size * (cfg.generations + 1)) as f64;
    let threads = spec
        .workers
        .unwrap_or_else(rayon::current_num_threads)
        .max(1) as f64;
    match per_eval {
        Some(t) => eprintln!(
            "warning: paper preset runs {solves} solve(s) of {} x {} generations; \
             expected runtime about {:.1} h on {threads} worker(s)",
            cfg.population_size,
            cfg.generations,
            evals * t / threads / 3600.0
        ),
        None => eprintln!(
            "warning: paper preset runs {solves} solve(s) of {} x {} generations; expect hours",
            cfg.population_size, cfg.generations
        ),
    }
}

fn time_evals<P: Problem>(p: &P) -> f64 {
    let x: Vec<f64> = p
        .bounds()
        .iter()
        .map(|&(lo, hi)| 0.5 * (lo + hi) + 0.1 * (hi - lo))
        .collect();
    let n = 20;
    let t = Instant::now();
    for _ in 0..n {
        std::hint::black_box(p.evaluate(&x));
    }
    t.elapsed().as_secs_f64() / n as f64
}
