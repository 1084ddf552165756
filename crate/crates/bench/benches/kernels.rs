use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use isacsim_core::evolver::{non_dominated_sort, stream_rng, Evaluation, Individual, Problem};
use isacsim_core::scenarios::{
    system_a_problem, system_b_problem, SystemAScenario, SystemBScenario,
};
use isacsim_core::{steering_vector, ArrayGeometry, Direction};
use rand::Rng;

fn random_genome(p: &dyn Problem, seed: u64) -> Vec<f64> {
    let mut rng = stream_rng(seed, 0, 0);
    p.bounds()
        .iter()
        .map(|&(lo, hi)| rng.random_range(lo..hi))
        .collect()
}

fn steering(c: &mut Criterion) {
    let geom = ArrayGeometry::half_wavelength(8, 8).unwrap();
    let d = Direction::new(0.7, -0.9).unwrap();
    c.bench_function("steering_vector_8x8", |b| {
        b.iter(|| steering_vector(black_box(&geom), black_box(&d)))
    });
}

fn evaluate(c: &mut Criterion) {
    let pb = system_b_problem(&SystemBScenario::default(), 1).unwrap();
    let xb = random_genome(&pb, 1);
    c.bench_function("evaluate_system_b_default", |b| {
        b.iter(|| pb.evaluate(black_box(&xb)))
    });

    let pa = system_a_problem(&SystemAScenario::default(), 1).unwrap();
    let xa = random_genome(&pa, 2);
    c.bench_function("evaluate_system_a_default", |b| {
        b.iter(|| pa.evaluate(black_box(&xa)))
    });
}

fn sorting(c: &mut Criterion) {
    let mut rng = stream_rng(3, 0, 0);
    let pop: Vec<Individual> = (0..200)
        .map(|_| {
            let objectives = vec![rng.random::<f64>(), rng.random::<f64>()];
            Individual::new(vec![], Evaluation::feasible(objectives))
        })
        .collect();
    c.bench_function("non_dominated_sort_200", |b| {
        b.iter(|| non_dominated_sort(black_box(&pop)).unwrap())
    });
}

criterion_group!(kernels, steering, evaluate, sorting);
criterion_main!(kernels);
