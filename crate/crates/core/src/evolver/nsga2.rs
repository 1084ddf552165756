use std::cmp::Ordering;

use rayon::prelude::*;

use super::config::EvolverConfig;
use super::ga::{initial_population, make_child, population_stats, GenerationStats};
use super::hypervolume::hypervolume_2d;
use super::problem::{Individual, Problem};
use super::sorting::{crowding_distance, non_dominated_sort};
use crate::error::Result;

/// Mutually non-dominated individuals, sorted by the first objective.
#[derive(Debug, Clone, Default)]
pub struct ParetoFront {
    pub members: Vec<Individual>,
}

impl ParetoFront {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn objectives(&self) -> Vec<Vec<f64>> {
        self.members.iter().map(|m| m.objectives.clone()).collect()
    }

    pub fn all_feasible(&self) -> bool {
        self.members.iter().all(|m| m.is_feasible())
    }
}

#[derive(Debug, Clone)]
pub struct Nsga2Outcome {
    pub front: ParetoFront,
    pub trace: Vec<GenerationStats>,
    /// False when the final population holds no feasible individual.
    pub feasible: bool,
    pub reference_point: Option<Vec<f64>>,
    pub evaluations: usize,
    pub population: Vec<Individual>,
}

fn crowded_better(a: &Individual, b: &Individual) -> bool {
    a.rank < b.rank || (a.rank == b.rank && a.crowding > b.crowding)
}

/// Assigns rank and crowding in place and returns the fronts.
fn rank_and_crowd(pop: &mut [Individual]) -> Result<Vec<Vec<usize>>> {
    let fronts = non_dominated_sort(pop)?;
    for (r, front) in fronts.iter().enumerate() {
        let d = crowding_distance(pop, front);
        for (&i, c) in front.iter().zip(d) {
            pop[i].rank = r;
            pop[i].crowding = c;
        }
    }
    Ok(fronts)
}

fn feasible_objectives(pop: &[Individual]) -> Vec<Vec<f64>> {
    pop.iter()
        .filter(|i| i.is_feasible() && i.rank == 0)
        .map(|i| i.objectives.clone())
        .collect()
}

/// NSGA-II with feasibility-first dominance and (mu + lambda) survival.
pub fn run_nsga2<P: Problem + ?Sized>(problem: &P, cfg: &EvolverConfig) -> Result<Nsga2Outcome> {
    cfg.validate()?;
    let n = cfg.population_size;
    let num_obj = problem.num_objectives();
    let mut pop = initial_population(problem, cfg);
    rank_and_crowd(&mut pop)?;
    let mut evaluations = n;

    let reference_point = if num_obj == 2 {
        problem.reference_point().or_else(|| {
            let feas: Vec<&Individual> = pop.iter().filter(|i| i.is_feasible()).collect();
            let src: Vec<&Individual> = if feas.is_empty() {
                pop.iter().collect()
            } else {
                feas
            };
            Some(
                (0..2)
                    .map(|m| {
                        src.iter()
                            .map(|i| i.objectives[m])
                            .fold(f64::INFINITY, f64::min)
                    })
                    .collect(),
            )
        })
    } else {
        None
    };
    let mut trace = Vec::with_capacity(cfg.generations + 1);
    let record = |gen: usize, pop: &[Individual], trace: &mut Vec<GenerationStats>| {
        let (best, mean, min_violation, feasible_count) = population_stats(pop, num_obj);
        let hypervolume = reference_point
            .as_ref()
            .map(|r| hypervolume_2d(&feasible_objectives(pop), r));
        trace.push(GenerationStats {
            generation: gen,
            best,
            mean,
            min_violation,
            feasible_count,
            hypervolume,
        });
    };
    record(0, &pop, &mut trace);

    let n_cross = (cfg.crossover_fraction * n as f64).round() as usize;
    for gen in 1..=cfg.generations {
        let sigma = cfg.sigma_at(gen);
        let parents = &pop;
        let better = |a: usize, b: usize| crowded_better(&parents[a], &parents[b]);
        let offspring: Vec<Individual> = (0..n)
            .into_par_iter()
            .map(|slot| make_child(problem, cfg, gen, slot, n_cross, sigma, parents, &better))
            .collect();
        evaluations += n;

        let mut combined = std::mem::take(&mut pop);
        combined.extend(offspring);
        let fronts = rank_and_crowd(&mut combined)?;
        let mut keep: Vec<usize> = Vec::with_capacity(n);
        for front in fronts {
            if keep.len() + front.len() <= n {
                keep.extend(front);
                if keep.len() == n {
                    break;
                }
            } else {
                let mut last = front;
                last.sort_by(|&a, &b| {
                    combined[b]
                        .crowding
                        .total_cmp(&combined[a].crowding)
                        .then(a.cmp(&b))
                });
                keep.extend(last.into_iter().take(n - keep.len()));
                break;
            }
        }
        keep.sort_unstable();
        let mut slots: Vec<Option<Individual>> = combined.into_iter().map(Some).collect();
        pop = keep.into_iter().filter_map(|i| slots[i].take()).collect();
        rank_and_crowd(&mut pop)?;
        record(gen, &pop, &mut trace);
    }

    let feasible = pop.iter().any(|i| i.is_feasible());
    let mut members: Vec<Individual> = pop
        .iter()
        .filter(|i| i.rank == 0 && (i.is_feasible() || !feasible))
        .cloned()
        .collect();
    members.sort_by(|a, b| {
        a.objectives
            .iter()
            .zip(&b.objectives)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| *o != Ordering::Equal)
            .unwrap_or(Ordering::Equal)
    });
    members.dedup_by(|a, b| a.objectives == b.objectives);
    Ok(Nsga2Outcome {
        front: ParetoFront { members },
        trace,
        feasible,
        reference_point,
        evaluations,
        population: pop,
    })
}
