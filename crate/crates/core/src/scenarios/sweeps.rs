//! Experiment drivers: each sweep cell owns its frozen channels (derived from its seed) and
//! its evolver stream, so cells run in parallel without affecting results.

use rayon::prelude::*;

use super::layout::angular_spread;
use super::system_a::{
    baseline_weighted_sum_rate, scalarized_system_a, system_a_problem, SystemAScenario,
};
use super::system_b::{system_b_dual_problem, system_b_problem, SystemBScenario};
use crate::error::{invalid, Result};
use crate::evolver::{run_ga, run_nsga2, EvolverConfig, Nsga2Outcome, Problem};
use crate::geometry::Position;
use crate::metrics::{achievable_rate, effective_channels, DecoderKind};

/// Median of the finite values; NaN when there are none.
pub fn median(values: &[f64]) -> f64 {
    let mut v: Vec<f64> = values.iter().copied().filter(|x| !x.is_nan()).collect();
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParetoRow {
    pub seed: u64,
    pub solution_id: usize,
    pub eta: f64,
    pub omega: f64,
    pub feasible: bool,
    pub genome: Vec<f64>,
}

/// NSGA-II front of the bi-objective System A problem for one seed.
pub fn pareto_front(
    scn: &SystemAScenario,
    seed: u64,
    cfg: &EvolverConfig,
) -> Result<(Vec<ParetoRow>, Nsga2Outcome)> {
    let problem = system_a_problem(scn, seed)?;
    let out = run_nsga2(&problem, &cfg.clone().with_seed(seed))?;
    let rows = out
        .front
        .members
        .iter()
        .enumerate()
        .map(|(i, m)| ParetoRow {
            seed,
            solution_id: i,
            eta: m.objectives[0],
            omega: m.objectives[1],
            feasible: m.is_feasible(),
            genome: m.genome.clone(),
        })
        .collect();
    Ok((rows, out))
}

#[derive(Debug, Clone, PartialEq)]
pub struct MuRow {
    pub mu: f64,
    pub seed: u64,
    pub eta: f64,
    pub omega: f64,
    pub objective: f64,
    pub feasible: bool,
    pub genome: Vec<f64>,
    /// Weight whose GA run produced `genome`.
    pub source_mu: f64,
}

/// Scalarized sweep. Per seed, the pure problems (`mu = 0`, `mu = 1`) are solved first and
/// their optima normalize the interior weights.
///
/// Each weight then reports the best of the seed's solutions under its own objective. The
/// objective is linear in the normalized `(eta, omega)`, so after this step `eta` is
/// non-increasing and `omega` non-decreasing in `mu` for every seed.
pub fn mu_sweep(
    scn: &SystemAScenario,
    mus: &[f64],
    seeds: &[u64],
    cfg: &EvolverConfig,
) -> Result<Vec<MuRow>> {
    if let Some(bad) = mus.iter().find(|m| !(0.0..=1.0).contains(*m)) {
        return Err(invalid("mu", format!("{bad} outside [0, 1]")));
    }
    let per_seed: Vec<Result<Vec<MuRow>>> = seeds
        .par_iter()
        .map(|&seed| {
            let cfg = cfg.clone().with_seed(seed);
            let solve = |mu: f64, eta_ref: f64, omega_ref: f64| -> Result<MuRow> {
                let p = scalarized_system_a(scn, seed, mu, eta_ref, omega_ref)?;
                let out = run_ga(&p, &cfg)?;
                let (eta, omega) = p.eta_omega(&out.best.genome)?;
                Ok(MuRow {
                    mu,
                    seed,
                    eta,
                    omega,
                    objective: out.best.objectives[0],
                    feasible: out.feasible,
                    genome: out.best.genome,
                    source_mu: mu,
                })
            };
            let pure_eta = solve(0.0, 1.0, 1.0)?;
            let pure_omega = solve(1.0, 1.0, 1.0)?;
            let eta_ref = if pure_eta.eta > 0.0 {
                pure_eta.eta
            } else {
                1.0
            };
            let omega_ref = if pure_omega.omega > 0.0 {
                pure_omega.omega
            } else {
                1.0
            };
            let solved: Vec<MuRow> = mus
                .iter()
                .map(|&mu| {
                    if mu == 0.0 {
                        Ok(pure_eta.clone())
                    } else if mu == 1.0 {
                        Ok(pure_omega.clone())
                    } else {
                        solve(mu, eta_ref, omega_ref)
                    }
                })
                .collect::<Result<_>>()?;
            Ok(best_per_weight(&solved, eta_ref, omega_ref))
        })
        .collect();
    let mut rows = Vec::new();
    for r in per_seed {
        rows.extend(r?);
    }
    Ok(rows)
}

/// Same value as the scalarized problem's objective for weight `mu`.
fn weighted(mu: f64, eta: f64, omega: f64, eta_ref: f64, omega_ref: f64) -> f64 {
    if mu == 0.0 {
        eta
    } else if mu == 1.0 {
        omega
    } else {
        (1.0 - mu) * eta / eta_ref + mu * omega / omega_ref
    }
}

/// For every weight, the candidate with the highest objective; ties keep the weight's own run.
fn best_per_weight(solved: &[MuRow], eta_ref: f64, omega_ref: f64) -> Vec<MuRow> {
    solved
        .iter()
        .map(|own| {
            let score = |r: &MuRow| weighted(own.mu, r.eta, r.omega, eta_ref, omega_ref);
            let mut best = own;
            for c in solved {
                if score(c) > score(best) {
                    best = c;
                }
            }
            MuRow {
                mu: own.mu,
                objective: score(best),
                ..best.clone()
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct AltitudeRow {
    pub altitude: f64,
    pub seed: u64,
    pub min_gain: f64,
    /// Worst-user SINR of the gain-optimal solution; pinned near the SINR floor whenever
    /// that constraint is active.
    pub min_sinr: f64,
    /// Best worst-user SINR found by a separate max-min SINR solve on the same instance.
    pub max_min_sinr: f64,
    /// Largest angle between any two users/targets seen from the HAPS, radians.
    pub angular_spread: f64,
    /// Per-user useful received power with the precoders optimized at the first altitude
    /// and that altitude's small-scale fading, rescaled by this altitude's path gain.
    pub fixed_precoder_power: Vec<f64>,
    pub feasible: bool,
    pub genome: Vec<f64>,
}

/// Re-optimizes System B at every altitude for every seed: once for the max-min beampattern
/// gain under the SINR floor, once for the max-min SINR with no sensing floor.
pub fn altitude_sweep(
    scn: &SystemBScenario,
    altitudes: &[f64],
    seeds: &[u64],
    cfg: &EvolverConfig,
) -> Result<Vec<AltitudeRow>> {
    if altitudes.is_empty() {
        return Err(invalid("altitudes", "empty altitude list"));
    }
    let per_seed: Vec<Result<Vec<AltitudeRow>>> = seeds
        .par_iter()
        .map(|&seed| {
            let cfg = cfg.clone().with_seed(seed);
            let mut rows: Vec<AltitudeRow> = Vec::with_capacity(altitudes.len());
            let mut reference: Option<(crate::metrics::PrecoderSet, super::SystemBInstance)> = None;
            for &alt in altitudes {
                let s = scn.with_altitude(alt);
                let p = system_b_problem(&s, seed)?;
                let out = run_ga(&p, &cfg)?;
                let m = p.metrics(&out.best.genome)?;
                let dual = system_b_dual_problem(&s, seed, 0.0)?;
                let dual_out = run_ga(&dual, &cfg)?;
                let inst = p.instance();
                let mut pts: Vec<Position> = inst.users.clone();
                pts.extend(inst.targets.iter().map(|t| t.position));
                let spread = angular_spread(&inst.haps, &pts)?;
                if reference.is_none() {
                    reference = Some((p.precoders(&out.best.genome)?, inst.clone()));
                }
                let (w0, ref_inst) = reference.as_ref().expect("set above");
                let fixed = fixed_power(w0, ref_inst, &inst.haps, s.link.carrier_freq)?;
                rows.push(AltitudeRow {
                    altitude: alt,
                    seed,
                    min_gain: m.min_beampattern_gain,
                    min_sinr: m.min_sinr,
                    max_min_sinr: dual_out.best.objectives[0],
                    angular_spread: spread,
                    fixed_precoder_power: fixed,
                    feasible: out.feasible,
                    genome: out.best.genome,
                });
            }
            Ok(rows)
        })
        .collect();
    let mut rows = Vec::new();
    for r in per_seed {
        rows.extend(r?);
    }
    Ok(rows)
}

fn fixed_power(
    w: &crate::metrics::PrecoderSet,
    reference: &super::SystemBInstance,
    haps: &Position,
    freq: f64,
) -> Result<Vec<f64>> {
    reference
        .small_scale
        .iter()
        .zip(&reference.users)
        .enumerate()
        .map(|(k, (h, u))| {
            let g = effective_channels(h, w)?;
            let beta = crate::geometry::fspl_gain(haps.distance(u), freq)?;
            Ok(beta * g.column(k).norm_squared())
        })
        .collect()
}

/// Beampattern floors for the dual sweep.
#[derive(Debug, Clone, PartialEq)]
pub enum GainThresholds {
    /// Absolute floors, W.
    Absolute(Vec<f64>),
    /// Fractions of the per-seed attainable max-min gain (found by a gain-only run).
    Fractions(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdRow {
    pub gamma: f64,
    /// `gamma` relative to the seed's attainable max-min gain.
    pub gamma_fraction: f64,
    pub decoder: DecoderKind,
    pub seed: u64,
    pub min_sinr: f64,
    pub min_rate: f64,
    pub feasible: bool,
    pub genome: Vec<f64>,
    /// Receiver and threshold fraction of the GA run that produced `genome`.
    pub source_decoder: DecoderKind,
    pub source_gamma_fraction: f64,
}

/// Dual problem (max-min SINR s.t. min gain >= gamma) for each threshold and receiver.
///
/// Every receiver sees the same multi-antenna channel draws; `SingleAntenna` uses only the
/// first antenna of each user.
///
/// The beampattern gain does not depend on the receiver, so after all runs of a seed every
/// precoder found is re-scored for every (receiver, threshold) cell, and each cell reports
/// the best one meeting its gain floor. A design for a stricter floor also meets every looser
/// one, so the reported min-SINR never increases with the threshold.
pub fn threshold_sweep(
    scn: &SystemBScenario,
    thresholds: &GainThresholds,
    decoders: &[DecoderKind],
    seeds: &[u64],
    cfg: &EvolverConfig,
) -> Result<Vec<ThresholdRow>> {
    let antennas = scn.user_antennas.max(2);
    let per_seed: Vec<Result<Vec<ThresholdRow>>> = seeds
        .par_iter()
        .map(|&seed| {
            let cfg = cfg.clone().with_seed(seed);
            let sensing_only = SystemBScenario {
                sinr_floor: 0.0,
                ..scn.clone()
            };
            let attainable = {
                let p = system_b_problem(&sensing_only, seed)?;
                run_ga(&p, &cfg)?.best.objectives[0]
            };
            let gammas: Vec<(f64, f64)> = match thresholds {
                GainThresholds::Absolute(g) => g.iter().map(|&g| (g, g / attainable)).collect(),
                GainThresholds::Fractions(f) => f.iter().map(|&f| (f * attainable, f)).collect(),
            };
            let mut problems = Vec::new();
            let mut candidates: Vec<(DecoderKind, f64, Vec<f64>)> = Vec::new();
            for &decoder in decoders {
                let s = SystemBScenario {
                    user_antennas: antennas,
                    decoder,
                    ..scn.clone()
                };
                for &(gamma, fraction) in &gammas {
                    let p = system_b_dual_problem(&s, seed, gamma)?;
                    let out = run_ga(&p, &cfg)?;
                    candidates.push((decoder, fraction, out.best.genome));
                    problems.push((decoder, gamma, fraction, p));
                }
            }
            let mut rows = Vec::with_capacity(problems.len());
            for (i, (decoder, gamma, fraction, p)) in problems.iter().enumerate() {
                // Start from the cell's own run so that ties and all-infeasible cells keep it.
                let mut best = (i, p.evaluate(&candidates[i].2));
                for (j, c) in candidates.iter().enumerate() {
                    let e = p.evaluate(&c.2);
                    if e.violation <= 0.0
                        && (best.1.violation > 0.0 || e.objectives[0] > best.1.objectives[0])
                    {
                        best = (j, e);
                    }
                }
                let (source_decoder, source_fraction, genome) = candidates[best.0].clone();
                let m = p.metrics(&genome)?;
                rows.push(ThresholdRow {
                    gamma: *gamma,
                    gamma_fraction: *fraction,
                    decoder: *decoder,
                    seed,
                    min_sinr: m.min_sinr,
                    min_rate: achievable_rate(m.min_sinr),
                    feasible: best.1.violation <= 0.0,
                    genome,
                    source_decoder,
                    source_gamma_fraction: source_fraction,
                });
            }
            Ok(rows)
        })
        .collect();
    let mut rows = Vec::new();
    for r in per_seed {
        rows.extend(r?);
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct UserCountRow {
    pub num_users: usize,
    pub seed: u64,
    pub proposed_min_rate: f64,
    pub baseline_min_rate: f64,
    pub baseline_sum_rate: f64,
    pub proposed_genome: Vec<f64>,
    pub baseline_genome: Vec<f64>,
}

/// Max-min SINR versus unit-weight sum rate on identical channels and GA budgets.
pub fn user_count_sweep(
    scn: &SystemAScenario,
    user_counts: &[usize],
    seeds: &[u64],
    cfg: &EvolverConfig,
) -> Result<Vec<UserCountRow>> {
    let cells: Vec<(usize, u64)> = user_counts
        .iter()
        .flat_map(|&k| seeds.iter().map(move |&s| (k, s)))
        .collect();
    cells
        .par_iter()
        .map(|&(k, seed)| {
            let cfg = cfg.clone().with_seed(seed);
            let s = SystemAScenario {
                num_users: k,
                ..scn.clone()
            };
            let proposed = scalarized_system_a(&s, seed, 0.0, 1.0, 1.0)?;
            let baseline = baseline_weighted_sum_rate(&s, seed)?;
            let po = run_ga(&proposed, &cfg)?;
            let bo = run_ga(&baseline, &cfg)?;
            let (p_eta, _) = proposed.eta_omega(&po.best.genome)?;
            let (b_eta, _) = baseline.eta_omega(&bo.best.genome)?;
            Ok(UserCountRow {
                num_users: k,
                seed,
                proposed_min_rate: achievable_rate(p_eta),
                baseline_min_rate: achievable_rate(b_eta),
                baseline_sum_rate: bo.best.objectives[0],
                proposed_genome: po.best.genome,
                baseline_genome: bo.best.genome,
            })
        })
        .collect()
}
