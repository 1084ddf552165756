use isacsim_core::evolver::{run_ga, EvolverConfig, Problem};
use isacsim_core::metrics::user_sinr;
use isacsim_core::scenarios::{
    baseline_weighted_sum_rate, scalarized_system_a, system_b_problem, SystemAScenario,
    SystemBScenario,
};
use isacsim_core::{total_power, ArrayGeometry, DecoderKind, Position};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn small_b() -> SystemBScenario {
    SystemBScenario {
        array: ArrayGeometry::half_wavelength(4, 4).unwrap(),
        num_users: 2,
        num_targets: 2,
        ..Default::default()
    }
}

#[test]
fn reported_feasible_solutions_pass_an_independent_sinr_recheck() {
    let scn = small_b();
    for seed in 1..=3 {
        let p = system_b_problem(&scn, seed).unwrap();
        let out = run_ga(&p, &EvolverConfig::with_size(40, 300, seed)).unwrap();
        assert!(out.feasible, "seed {seed} found no feasible genome");
        let w = p.precoders(&out.best.genome).unwrap();
        assert!(total_power(&w) <= scn.p_max * (1.0 + 1e-9));
        for (k, h) in p.instance().channels.iter().enumerate() {
            let s = user_sinr(DecoderKind::SingleAntenna, h, &w, k, scn.link.noise_power).unwrap();
            assert!(
                s >= scn.sinr_floor * (1.0 - 1e-9),
                "seed {seed} user {k}: {s}"
            );
        }
    }
}

#[test]
fn permuting_users_permutes_sinrs() {
    let users = vec![
        Position::ground(1200.0, -300.0),
        Position::ground(-2500.0, 900.0),
        Position::ground(400.0, 3100.0),
    ];
    let base = SystemBScenario {
        array: ArrayGeometry::half_wavelength(4, 4).unwrap(),
        num_users: 3,
        users: Some(users.clone()),
        k_factor: f64::INFINITY,
        ..Default::default()
    };
    let perm = [2usize, 0, 1];
    let permuted = SystemBScenario {
        users: Some(perm.iter().map(|&i| users[i]).collect()),
        ..base.clone()
    };
    let p0 = system_b_problem(&base, 4).unwrap();
    let p1 = system_b_problem(&permuted, 4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let bounds = p0.bounds().to_vec();
    let x: Vec<f64> = bounds
        .iter()
        .map(|&(lo, hi)| rng.random_range(lo..hi))
        .collect();
    // Reorder stream blocks the same way as the users.
    let block = 2 * base.array.elements();
    let mut y = Vec::with_capacity(x.len());
    for &i in &perm {
        y.extend_from_slice(&x[i * block..(i + 1) * block]);
    }
    let m0 = p0.metrics(&x).unwrap();
    let m1 = p1.metrics(&y).unwrap();
    for (j, &i) in perm.iter().enumerate() {
        let (a, b) = (m0.sinr_per_user[i], m1.sinr_per_user[j]);
        assert!((a - b).abs() <= 1e-9 * a.max(1e-30));
    }
    assert!(
        (m0.min_beampattern_gain - m1.min_beampattern_gain).abs() <= 1e-9 * m0.min_beampattern_gain
    );
}

#[test]
fn proposed_and_baseline_share_the_sinr_path() {
    let scn = SystemAScenario::default();
    let prop = scalarized_system_a(&scn, 3, 0.0, 1.0, 1.0).unwrap();
    let base = baseline_weighted_sum_rate(&scn, 3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..20 {
        let x: Vec<f64> = prop
            .bounds()
            .iter()
            .map(|&(lo, hi)| rng.random_range(lo..hi))
            .collect();
        let w = prop.codec().decode(&x).unwrap();
        assert_eq!(prop.sinrs(&w).unwrap(), base.sinrs(&w).unwrap());
    }
}

#[test]
fn instances_are_seed_deterministic() {
    let scn = small_b();
    let a = scn.instance(9).unwrap();
    let b = scn.instance(9).unwrap();
    let c = scn.instance(10).unwrap();
    assert_eq!(a.users, b.users);
    assert_eq!(a.channels, b.channels);
    assert_ne!(a.users, c.users);
}
