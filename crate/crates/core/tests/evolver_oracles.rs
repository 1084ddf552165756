use isacsim_core::evolver::{
    brute_force_fronts, crowding_distance, dominates, hypervolume_2d, igd, non_dominated_sort,
    run_ga, run_nsga2, zdt1_front, Evaluation, EvolverConfig, Individual, Problem, Zdt1,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_population(rng: &mut ChaCha8Rng, n: usize, infeasible_share: f64) -> Vec<Individual> {
    (0..n)
        .map(|_| {
            // Coarse grid values so ties and duplicates occur.
            let obj = vec![
                (rng.random_range(0..20) as f64) / 4.0,
                (rng.random_range(0..20) as f64) / 4.0,
            ];
            let violation = if rng.random::<f64>() < infeasible_share {
                rng.random_range(1..5) as f64
            } else {
                0.0
            };
            Individual::new(
                vec![],
                Evaluation {
                    objectives: obj,
                    violation,
                },
            )
        })
        .collect()
}

fn sorted(mut fronts: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    for f in &mut fronts {
        f.sort_unstable();
    }
    fronts
}

#[test]
fn fast_sort_matches_brute_force_on_1000_populations() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for trial in 0..1000 {
        let n = if trial == 0 {
            100
        } else {
            rng.random_range(1..60)
        };
        let pop = random_population(&mut rng, n, if trial % 3 == 0 { 0.3 } else { 0.0 });
        let fast = sorted(non_dominated_sort(&pop).unwrap());
        let brute = sorted(brute_force_fronts(&pop));
        assert_eq!(fast, brute, "trial {trial}");
    }
}

#[test]
fn fronts_partition_population() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let pop = random_population(&mut rng, 100, 0.2);
    let fronts = non_dominated_sort(&pop).unwrap();
    let mut all: Vec<usize> = fronts.concat();
    all.sort_unstable();
    assert_eq!(all, (0..100).collect::<Vec<_>>());
}

#[test]
fn zdt1_reaches_analytic_front() {
    let reference = zdt1_front(500);
    let mut scores = Vec::new();
    for seed in 1..=5 {
        let out = run_nsga2(&Zdt1::new(10), &EvolverConfig::desk(seed)).unwrap();
        let front: Vec<(f64, f64)> = out
            .front
            .members
            .iter()
            .map(|m| (-m.objectives[0], -m.objectives[1]))
            .collect();
        // Returned front is mutually non-dominated.
        for a in &out.front.members {
            for b in &out.front.members {
                assert!(!dominates(a, b));
            }
        }
        scores.push(igd(&front, &reference));
    }
    scores.sort_by(f64::total_cmp);
    eprintln!("ZDT1 IGD per seed (sorted): {scores:?}");
    assert!(scores[2] <= 0.05, "median IGD {}", scores[2]);
}

#[test]
fn nsga2_hypervolume_trace_recorded() {
    let out = run_nsga2(&Zdt1::new(6), &EvolverConfig::with_size(20, 30, 9)).unwrap();
    assert_eq!(out.trace.len(), 31);
    assert!(out.trace.iter().all(|s| s.hypervolume.is_some()));
    let last = out.trace.last().unwrap().hypervolume.unwrap();
    let first = out.trace[0].hypervolume.unwrap();
    assert!(last >= first);
}

struct TwoPoints;
impl Problem for TwoPoints {
    fn bounds(&self) -> &[(f64, f64)] {
        &[(0.0, 1.0)]
    }
    fn num_objectives(&self) -> usize {
        2
    }
    fn evaluate(&self, x: &[f64]) -> Evaluation {
        if x[0] < 0.5 {
            Evaluation::feasible(vec![0.0, 1.0])
        } else {
            Evaluation::feasible(vec![1.0, 0.0])
        }
    }
}

#[test]
fn discrete_two_point_front() {
    let out = run_nsga2(&TwoPoints, &EvolverConfig::with_size(10, 10, 1)).unwrap();
    assert_eq!(out.front.objectives(), vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
}

struct Parabola;
impl Problem for Parabola {
    fn bounds(&self) -> &[(f64, f64)] {
        &[(-1.0, 1.0), (-1.0, 1.0)]
    }
    fn num_objectives(&self) -> usize {
        1
    }
    fn evaluate(&self, x: &[f64]) -> Evaluation {
        Evaluation::feasible(vec![-(x[0] - 0.3).powi(2) - x[1].powi(2)])
    }
}

#[test]
fn single_objective_front_collapses() {
    let out = run_nsga2(&Parabola, &EvolverConfig::with_size(40, 80, 2)).unwrap();
    let objs: Vec<f64> = out.front.members.iter().map(|m| m.objectives[0]).collect();
    let spread = objs.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - objs.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!(spread <= 1e-9, "spread {spread}");
    assert!(objs[0] > -1e-3);
}

#[test]
fn run_is_deterministic_across_thread_counts() {
    let cfg = EvolverConfig::with_size(30, 25, 77);
    let serial = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let wide = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap();
    let a = serial.install(|| run_nsga2(&Zdt1::new(5), &cfg).unwrap());
    let b = wide.install(|| run_nsga2(&Zdt1::new(5), &cfg).unwrap());
    assert_eq!(a.front.objectives(), b.front.objectives());
    let p = isacsim_core::evolver::SphereProblem::new(5, -1.0, 1.0);
    let a = serial.install(|| run_ga(&p, &cfg).unwrap());
    let b = wide.install(|| run_ga(&p, &cfg).unwrap());
    assert_eq!(a.best.genome, b.best.genome);
}

#[test]
fn ga_reports_infeasible_runs() {
    // x_0 <= -2 is impossible on [-1, 1].
    let p = isacsim_core::evolver::BoxConstrained::new(3, -1.0, 1.0, -2.0);
    let out = run_ga(&p, &EvolverConfig::with_size(20, 20, 4)).unwrap();
    assert!(!out.feasible);
    assert!(out.best.violation >= 1.0 && out.best.violation < 1.05);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn front_one_matches_brute_force_maxima(seed in any::<u64>(), n in 1usize..40) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pop = random_population(&mut rng, n, 0.25);
        let fronts = non_dominated_sort(&pop).unwrap();
        let mut first = fronts[0].clone();
        first.sort_unstable();
        let maxima: Vec<usize> = (0..n)
            .filter(|&i| !(0..n).any(|j| dominates(&pop[j], &pop[i])))
            .collect();
        prop_assert_eq!(first, maxima);
    }

    #[test]
    fn crowding_boundaries_infinite(seed in any::<u64>(), n in 3usize..30) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pop = random_population(&mut rng, n, 0.0);
        let idx: Vec<usize> = (0..n).collect();
        let d = crowding_distance(&pop, &idx);
        prop_assert!(d.iter().all(|x| *x >= 0.0));
        prop_assert!(d.iter().filter(|x| x.is_infinite()).count() >= 2);
    }

    #[test]
    fn hypervolume_monotone_under_insertion(
        pts in proptest::collection::vec((0.0f64..10.0, 0.0f64..10.0), 0..20),
        extra in (0.0f64..10.0, 0.0f64..10.0),
    ) {
        let base: Vec<Vec<f64>> = pts.iter().map(|p| vec![p.0, p.1]).collect();
        let mut more = base.clone();
        more.push(vec![extra.0, extra.1]);
        prop_assert!(hypervolume_2d(&more, &[0.0, 0.0]) >= hypervolume_2d(&base, &[0.0, 0.0]) - 1e-12);
    }
}
