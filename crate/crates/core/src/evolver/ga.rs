use std::cmp::Ordering;

use rayon::prelude::*;

use super::config::EvolverConfig;
use super::problem::{evaluate, Individual, Problem};
use super::rng::stream_rng;
use super::variation::{
    arithmetic_crossover, clamp_to, gaussian_mutation, random_genome, tournament,
};
use crate::error::{IsacError, Result};

/// One row of a convergence trace.
#[derive(Debug, Clone, PartialEq)]
pub struct GenerationStats {
    pub generation: usize,
    /// Best objective values among feasible individuals (best-ever for the GA); NaN while
    /// nothing is feasible.
    pub best: Vec<f64>,
    /// Mean objective values over the feasible part of the population; NaN if none.
    pub mean: Vec<f64>,
    pub min_violation: f64,
    pub feasible_count: usize,
    pub hypervolume: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct GaOutcome {
    pub best: Individual,
    /// Generation 0 is the initial population.
    pub trace: Vec<GenerationStats>,
    /// False when no feasible genome was ever found; `best` then has the smallest violation.
    pub feasible: bool,
    pub evaluations: usize,
    pub population: Vec<Individual>,
}

pub(crate) fn initial_population<P: Problem + ?Sized>(
    problem: &P,
    cfg: &EvolverConfig,
) -> Vec<Individual> {
    let bounds = problem.bounds();
    (0..cfg.population_size)
        .into_par_iter()
        .map(|slot| {
            let mut rng = stream_rng(cfg.seed, 0, slot as u64);
            let mut x = random_genome(bounds, &mut rng);
            problem.repair(&mut x);
            clamp_to(bounds, &mut x);
            let e = evaluate(problem, &x);
            Individual::new(x, e)
        })
        .collect()
}

/// Child for `slot` of generation `gen`: crossover for the first `n_cross` slots, Gaussian
/// mutation for the rest.
#[allow(clippy::too_many_arguments)]
pub(crate) fn make_child<P: Problem + ?Sized>(
    problem: &P,
    cfg: &EvolverConfig,
    gen: usize,
    slot: usize,
    n_cross: usize,
    sigma: f64,
    parents: &[Individual],
    better: &(dyn Fn(usize, usize) -> bool + Sync),
) -> Individual {
    let bounds = problem.bounds();
    let mut rng = stream_rng(cfg.seed, gen as u64, slot as u64);
    let n = parents.len();
    let mut x = if slot < n_cross {
        let a = tournament(n, cfg.tournament_size, &mut rng, better);
        let b = tournament(n, cfg.tournament_size, &mut rng, better);
        arithmetic_crossover(&parents[a].genome, &parents[b].genome, bounds, &mut rng)
    } else {
        let p = tournament(n, cfg.tournament_size, &mut rng, better);
        gaussian_mutation(&parents[p].genome, bounds, sigma, &mut rng)
    };
    problem.repair(&mut x);
    clamp_to(bounds, &mut x);
    let e = evaluate(problem, &x);
    Individual::new(x, e)
}

pub(crate) fn population_stats(
    pop: &[Individual],
    num_obj: usize,
) -> (Vec<f64>, Vec<f64>, f64, usize) {
    let feasible: Vec<&Individual> = pop.iter().filter(|i| i.is_feasible()).collect();
    let mut best = vec![f64::NAN; num_obj];
    let mut mean = vec![f64::NAN; num_obj];
    if !feasible.is_empty() {
        for m in 0..num_obj {
            best[m] = feasible
                .iter()
                .map(|i| i.objectives[m])
                .fold(f64::NEG_INFINITY, f64::max);
            mean[m] = feasible.iter().map(|i| i.objectives[m]).sum::<f64>() / feasible.len() as f64;
        }
    }
    let min_violation = pop
        .iter()
        .map(|i| i.violation)
        .fold(f64::INFINITY, f64::min);
    (best, mean, min_violation, feasible.len())
}

/// Elitist real-coded GA for single-objective problems.
pub fn run_ga<P: Problem + ?Sized>(problem: &P, cfg: &EvolverConfig) -> Result<GaOutcome> {
    cfg.validate()?;
    if problem.num_objectives() != 1 {
        return Err(IsacError::Config(format!(
            "run_ga needs a single objective, problem has {}",
            problem.num_objectives()
        )));
    }
    let n = cfg.population_size;
    let mut pop = initial_population(problem, cfg);
    let mut evaluations = n;
    let mut best = pop
        .iter()
        .max_by(|a, b| a.fitness_cmp(b))
        .cloned()
        .ok_or(IsacError::EmptyPopulation)?;
    let mut trace = Vec::with_capacity(cfg.generations + 1);
    let record =
        |gen: usize, pop: &[Individual], best: &Individual, trace: &mut Vec<GenerationStats>| {
            let (_, mean, min_violation, feasible_count) = population_stats(pop, 1);
            trace.push(GenerationStats {
                generation: gen,
                best: vec![if best.is_feasible() {
                    best.objectives[0]
                } else {
                    f64::NAN
                }],
                mean,
                min_violation,
                feasible_count,
                hypervolume: None,
            });
        };
    record(0, &pop, &best, &mut trace);

    let elites = cfg.elite_count;
    let n_children = n - elites;
    let n_cross = (cfg.crossover_fraction * n_children as f64).round() as usize;
    for gen in 1..=cfg.generations {
        let sigma = cfg.sigma_at(gen);
        // Best first; stable sort keeps ties in slot order.
        pop.sort_by(|a, b| b.fitness_cmp(a));
        let parents = &pop;
        let better = |a: usize, b: usize| parents[a].fitness_cmp(&parents[b]) == Ordering::Greater;
        let children: Vec<Individual> = (0..n_children)
            .into_par_iter()
            .map(|slot| make_child(problem, cfg, gen, slot, n_cross, sigma, parents, &better))
            .collect();
        evaluations += n_children;
        for c in &children {
            if c.fitness_cmp(&best) == Ordering::Greater {
                best = c.clone();
            }
        }
        pop.truncate(elites);
        pop.extend(children);
        record(gen, &pop, &best, &mut trace);
    }
    Ok(GaOutcome {
        feasible: best.is_feasible(),
        best,
        trace,
        evaluations,
        population: pop,
    })
}
