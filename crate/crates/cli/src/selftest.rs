//! Fast invariant suite behind `isacsim selftest`.

use std::f64::consts::PI;

use isacsim_core::evolver::{
    brute_force_fronts, non_dominated_sort, run_ga, Evaluation, EvolverConfig, Individual,
};
use isacsim_core::geometry::{dbm_to_watts, linear_to_db};
use isacsim_core::metrics::{beampattern_gain_quadratic, user_sinr};
use isacsim_core::scenarios::{system_b_problem, GenomeCodec, PowerMode, SystemBScenario};
use isacsim_core::{
    beampattern_gain, fspl_gain, rician_channel, steering_vector, total_power, ArrayGeometry,
    ChannelRealization, DecoderKind, Direction, PrecoderSet, RicianParams,
};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::output::Table;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, passed: bool, detail: String) -> Check {
    Check {
        name,
        passed,
        detail,
    }
}

type CheckFn = fn() -> Check;

const CHECKS: [CheckFn; 13] = [
    db_conversion,
    fspl_example,
    steering_norm,
    rician_second_moment,
    rician_los_share,
    beampattern_routes,
    mmse_not_below_zf,
    codec_round_trip,
    codec_power_budget,
    sort_matches_brute_force,
    elitism_monotone,
    feasibility_recheck,
    worker_count_determinism,
];

pub fn run_all() -> Vec<Check> {
    CHECKS.iter().map(|f| f()).collect()
}

pub fn table(checks: &[Check]) -> Table {
    let mut t = Table::new(vec!["check", "result", "detail"]);
    for c in checks {
        t.push(vec![
            c.name.to_string(),
            if c.passed { "PASS" } else { "FAIL" }.to_string(),
            c.detail.clone(),
        ]);
    }
    t
}

pub fn render(checks: &[Check]) -> String {
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    let mut s = String::new();
    for c in checks {
        let verdict = if c.passed { "PASS" } else { "FAIL" };
        s.push_str(&format!("{verdict}  {:width$}  {}\n", c.name, c.detail));
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    s.push_str(&format!(
        "{} passed, {failed} failed\n",
        checks.len() - failed
    ));
    s
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_matrix(rng: &mut ChaCha8Rng, r: usize, c: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(r, c, |_, _| {
        Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
    })
}

fn db_conversion() -> Check {
    let w = dbm_to_watts(52.0);
    check(
        "dbm_to_watts",
        (w - 158.489).abs() < 1e-3,
        format!("52 dBm = {w:.4} W"),
    )
}

fn fspl_example() -> Check {
    let loss = match fspl_gain(20e3, 2.545e9) {
        Ok(g) => -linear_to_db(g),
        Err(e) => return check("fspl", false, e.to_string()),
    };
    check(
        "fspl",
        (loss - 126.6).abs() < 0.05,
        format!("20 km at 2.545 GHz: {loss:.3} dB"),
    )
}

fn steering_norm() -> Check {
    let mut r = rng(1);
    let geom = ArrayGeometry::half_wavelength(8, 8).expect("valid");
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let d = Direction::new(
            r.random_range(-PI..PI),
            r.random_range(-PI / 2.0..=PI / 2.0),
        )
        .expect("in range");
        let n: f64 = steering_vector(&geom, &d)
            .iter()
            .map(|z| z.norm_sqr())
            .sum();
        worst = worst.max((n - 64.0).abs() / 64.0);
    }
    check(
        "steering_norm",
        worst <= 1e-9,
        format!("max relative error {worst:.1e} over 1000 directions"),
    )
}

fn unit_tx() -> Vec<Complex64> {
    steering_vector(
        &ArrayGeometry::half_wavelength(1, 1).expect("valid"),
        &Direction::new(0.0, -1.0).expect("valid"),
    )
}

fn rician_second_moment() -> Check {
    let a = unit_tx();
    let p = RicianParams::new(0.0, 2.0).expect("valid");
    let mut r = rng(2);
    let n = 10_000;
    let m: f64 = (0..n)
        .map(|_| rician_channel(&mut r, &p, None, &a).frobenius_sq())
        .sum::<f64>()
        / n as f64;
    let err = (m / 2.0 - 1.0).abs();
    check(
        "rician_second_moment",
        err < 0.02,
        format!("K=0: E|h|^2 / beta = {:.4} over {n} draws", m / 2.0),
    )
}

fn rician_los_share() -> Check {
    let a = unit_tx();
    let p = RicianParams::new(10.0, 1.0).expect("valid");
    let mut r = rng(3);
    let n = 10_000;
    let mean = (0..n)
        .map(|_| rician_channel(&mut r, &p, None, &a).matrix()[(0, 0)])
        .sum::<Complex64>()
        / n as f64;
    let share = mean.norm_sqr();
    let err = (share / (10.0 / 11.0) - 1.0).abs();
    check(
        "rician_los_share",
        err < 0.02,
        format!("K=10: |E h|^2 = {share:.4}, expected {:.4}", 10.0 / 11.0),
    )
}

fn beampattern_routes() -> Check {
    let mut r = rng(4);
    let geom = ArrayGeometry::half_wavelength(4, 4).expect("valid");
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let w = PrecoderSet::from_matrix(random_matrix(&mut r, 16, 3)).expect("valid");
        let d = Direction::new(r.random_range(-PI..PI), r.random_range(-1.5..0.0)).expect("valid");
        let a = steering_vector(&geom, &d);
        let (Ok(x), Ok(y)) = (
            beampattern_gain(&w, &a),
            beampattern_gain_quadratic(&w.covariance(), &a),
        ) else {
            return check("beampattern_routes", false, "evaluation error".into());
        };
        worst = worst.max((x - y).abs() / x.max(1.0));
    }
    check(
        "beampattern_routes",
        worst <= 1e-10,
        format!("max relative gap {worst:.1e}"),
    )
}

fn mmse_not_below_zf() -> Check {
    let mut r = rng(5);
    let mut violations = 0;
    let trials = 200;
    for _ in 0..trials {
        let h = ChannelRealization::from_matrix(random_matrix(&mut r, 2, 4)).expect("valid");
        let w = PrecoderSet::from_matrix(random_matrix(&mut r, 4, 3)).expect("valid");
        let noise = 10f64.powf(r.random_range(-3.0..0.0));
        let s = |k| user_sinr(k, &h, &w, 0, noise).unwrap_or(f64::NAN);
        let (mmse, zf) = (s(DecoderKind::Mmse), s(DecoderKind::Zf));
        if mmse.is_nan() || mmse < zf * (1.0 - 1e-9) {
            violations += 1;
        }
    }
    check(
        "mmse_not_below_zf",
        violations == 0,
        format!("{violations} violations in {trials} instances"),
    )
}

fn codec_round_trip() -> Check {
    let codec = GenomeCodec::new(6, 3, 1e6, PowerMode::Unconstrained).expect("valid");
    let mut r = rng(6);
    let mut worst: f64 = 0.0;
    for _ in 0..500 {
        let x: Vec<f64> = (0..codec.dimension())
            .map(|_| r.random_range(-5.0..5.0))
            .collect();
        let back = codec.decode(&x).and_then(|w| codec.encode(&w));
        match back {
            Ok(y) => {
                for (a, b) in x.iter().zip(&y) {
                    worst = worst.max((a - b).abs());
                }
            }
            Err(e) => return check("codec_round_trip", false, e.to_string()),
        }
    }
    check(
        "codec_round_trip",
        worst <= 1e-12,
        format!("max coordinate error {worst:.1e}"),
    )
}

fn codec_power_budget() -> Check {
    let mut r = rng(7);
    let mut worst: f64 = 0.0;
    for mode in [PowerMode::Cap, PowerMode::Full] {
        let codec = GenomeCodec::new(8, 2, 3.0, mode).expect("valid");
        for _ in 0..500 {
            let x: Vec<f64> = codec
                .bounds()
                .iter()
                .map(|&(lo, hi)| r.random_range(lo..hi))
                .collect();
            match codec.decode(&x) {
                Ok(w) => worst = worst.max(total_power(&w) / 3.0),
                Err(e) => return check("codec_power_budget", false, e.to_string()),
            }
        }
    }
    check(
        "codec_power_budget",
        worst <= 1.0 + 1e-9,
        format!("max power / p_max = {worst:.12}"),
    )
}

fn sort_matches_brute_force() -> Check {
    let mut r = rng(8);
    let trials = 200;
    for t in 0..trials {
        let n = r.random_range(1..40);
        let pop: Vec<Individual> = (0..n)
            .map(|_| {
                let objectives = vec![r.random_range(0..8) as f64, r.random_range(0..8) as f64];
                let violation = if r.random::<f64>() < 0.2 {
                    r.random_range(1..4) as f64
                } else {
                    0.0
                };
                Individual::new(
                    vec![],
                    Evaluation {
                        objectives,
                        violation,
                    },
                )
            })
            .collect();
        let norm = |mut f: Vec<Vec<usize>>| {
            f.iter_mut().for_each(|x| x.sort_unstable());
            f
        };
        let fast = non_dominated_sort(&pop).map(norm);
        if fast.as_ref().ok() != Some(&norm(brute_force_fronts(&pop))) {
            return check(
                "sort_matches_brute_force",
                false,
                format!("population {t} differs"),
            );
        }
    }
    check(
        "sort_matches_brute_force",
        true,
        format!("{trials} random populations"),
    )
}

fn small_b() -> SystemBScenario {
    SystemBScenario {
        array: ArrayGeometry::half_wavelength(4, 4).expect("valid"),
        num_users: 2,
        num_targets: 2,
        ..Default::default()
    }
}

fn elitism_monotone() -> Check {
    let out = system_b_problem(&small_b(), 1)
        .and_then(|p| run_ga(&p, &EvolverConfig::with_size(20, 60, 1)));
    match out {
        Ok(o) => {
            let best: Vec<f64> = o
                .trace
                .iter()
                .map(|s| s.best[0])
                .filter(|v| !v.is_nan())
                .collect();
            let ok = !best.is_empty() && best.windows(2).all(|w| w[1] >= w[0]);
            check(
                "elitism_monotone",
                ok,
                format!("{} generations traced", o.trace.len()),
            )
        }
        Err(e) => check("elitism_monotone", false, e.to_string()),
    }
}

fn feasibility_recheck() -> Check {
    let scn = small_b();
    let run = || -> isacsim_core::Result<(bool, f64)> {
        let p = system_b_problem(&scn, 2)?;
        let o = run_ga(&p, &EvolverConfig::with_size(30, 150, 2))?;
        let w = p.precoders(&o.best.genome)?;
        let mut worst = f64::INFINITY;
        for (k, h) in p.instance().channels.iter().enumerate() {
            worst = worst.min(user_sinr(scn.decoder, h, &w, k, scn.link.noise_power)?);
        }
        Ok((o.feasible, worst))
    };
    match run() {
        Ok((feasible, worst)) => check(
            "feasibility_recheck",
            feasible && worst >= scn.sinr_floor * (1.0 - 1e-9),
            format!(
                "recomputed min SINR {worst:.4} vs floor {:.4}",
                scn.sinr_floor
            ),
        ),
        Err(e) => check("feasibility_recheck", false, e.to_string()),
    }
}

fn worker_count_determinism() -> Check {
    let solve = |threads: usize| -> Option<Vec<u64>> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .ok()?;
        pool.install(|| {
            let p = system_b_problem(&small_b(), 3).ok()?;
            let o = run_ga(&p, &EvolverConfig::with_size(20, 30, 3)).ok()?;
            Some(o.best.genome.iter().map(|v| v.to_bits()).collect())
        })
    };
    let (a, b) = (solve(1), solve(4));
    check(
        "worker_count_determinism",
        a.is_some() && a == b,
        "best genome bit-identical with 1 and 4 workers".into(),
    )
}
