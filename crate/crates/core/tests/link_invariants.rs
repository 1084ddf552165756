use std::f64::consts::PI;

use isacsim_core::metrics::{beampattern_gain_quadratic, user_sinr};
use isacsim_core::{
    achievable_rate, beampattern_gain, compute_decoder, rician_channel, sensing_echo_power,
    sinr_mimo, sinr_miso, steering_vector, ArrayGeometry, ChannelRealization, DecoderKind,
    Direction, Position, PrecoderSet, RicianParams, SensingTarget,
};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn cgauss(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
}

fn random_matrix(rng: &mut ChaCha8Rng, r: usize, c: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(r, c, |_, _| cgauss(rng))
}

fn random_direction(rng: &mut ChaCha8Rng) -> Direction {
    Direction::new(
        rng.random_range(-PI..PI),
        rng.random_range(-PI / 2.0..=PI / 2.0),
    )
    .unwrap()
}

#[test]
fn steering_norm_equals_element_count() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let geoms = [
        ArrayGeometry::half_wavelength(8, 8).unwrap(),
        ArrayGeometry::half_wavelength(4, 4).unwrap(),
        ArrayGeometry::new(3, 5, 0.7).unwrap(),
    ];
    for _ in 0..1000 {
        let d = random_direction(&mut rng);
        for g in &geoms {
            let a = steering_vector(g, &d);
            let n: f64 = a.iter().map(|z| z.norm_sqr()).sum();
            assert!((n - g.elements() as f64).abs() <= 1e-9 * g.elements() as f64);
        }
    }
}

#[test]
fn rayleigh_second_moment_matches_large_scale_gain() {
    let a = steering_vector(
        &ArrayGeometry::half_wavelength(1, 2).unwrap(),
        &Direction::new(0.3, -0.5).unwrap(),
    );
    let beta = 3.7e-9;
    let p = RicianParams::new(0.0, beta).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let draws = 10_000;
    let mut acc = 0.0;
    for _ in 0..draws {
        let h = rician_channel(&mut rng, &p, None, &a);
        acc += h.frobenius_sq() / 2.0;
    }
    let m = acc / draws as f64;
    assert!(
        (m / beta - 1.0).abs() < 0.02,
        "second moment ratio {}",
        m / beta
    );
}

#[test]
fn rician_mean_carries_los_share() {
    let a = steering_vector(
        &ArrayGeometry::half_wavelength(1, 1).unwrap(),
        &Direction::new(0.0, -1.0).unwrap(),
    );
    let p = RicianParams::new(10.0, 1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let draws = 10_000;
    let mut mean = Complex64::new(0.0, 0.0);
    let mut power = 0.0;
    for _ in 0..draws {
        let h = rician_channel(&mut rng, &p, None, &a);
        mean += h.matrix()[(0, 0)];
        power += h.frobenius_sq();
    }
    mean /= draws as f64;
    let los_share = mean.norm_sqr();
    assert!(
        (los_share / (10.0 / 11.0) - 1.0).abs() < 0.02,
        "LoS share {los_share}"
    );
    assert!((power / draws as f64 - 1.0).abs() < 0.02);
}

#[test]
fn mmse_dominates_zf_mrc_and_random_combiners() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for trial in 0..1000 {
        let (m, n, k) = match trial % 3 {
            0 => (2, 4, 2),
            1 => (2, 6, 4),
            _ => (4, 6, 3),
        };
        let h = ChannelRealization::from_matrix(random_matrix(&mut rng, m, n)).unwrap();
        let w = PrecoderSet::from_matrix(random_matrix(&mut rng, n, k)).unwrap();
        let noise = 10f64.powf(rng.random_range(-3.0..0.0));
        for u in 0..k {
            let mmse = user_sinr(DecoderKind::Mmse, &h, &w, u, noise).unwrap();
            let zf = user_sinr(DecoderKind::Zf, &h, &w, u, noise).unwrap();
            let mrc = user_sinr(DecoderKind::Mrc, &h, &w, u, noise).unwrap();
            assert!(zf >= 0.0);
            assert!(mmse >= zf * (1.0 - 1e-9), "mmse {mmse} < zf {zf}");
            assert!(mmse >= mrc * (1.0 - 1e-9));
            let v = DVector::from_fn(m, |_, _| cgauss(&mut rng));
            let rnd = sinr_mimo(&h, &w, &v, u, noise).unwrap();
            assert!(mmse >= rnd * (1.0 - 1e-9));
        }
    }
}

#[test]
fn mmse_approaches_zf_at_low_noise() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for (m, k) in [(4, 2), (2, 4)] {
        let h = ChannelRealization::from_matrix(random_matrix(&mut rng, m, 6)).unwrap();
        let w = PrecoderSet::from_matrix(random_matrix(&mut rng, 6, k)).unwrap();
        let noise = 1e-12;
        let zf = compute_decoder(DecoderKind::Zf, &h, &w, 0, noise).unwrap();
        let mmse = compute_decoder(DecoderKind::Mmse, &h, &w, 0, noise).unwrap();
        // Compare directions; MMSE differs from ZF by a scale.
        let c = (zf.adjoint() * &mmse)[(0, 0)];
        let cos = c.norm() / (zf.norm() * mmse.norm());
        assert!(cos > 1.0 - 1e-8, "m={m} k={k} cos={cos}");
    }
}

#[test]
fn zf_nulls_interference_when_streams_fit() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let h = ChannelRealization::from_matrix(random_matrix(&mut rng, 4, 6)).unwrap();
    let w = PrecoderSet::from_matrix(random_matrix(&mut rng, 6, 3)).unwrap();
    let g = h.matrix() * w.matrix();
    for k in 0..3 {
        let v = compute_decoder(DecoderKind::Zf, &h, &w, k, 1e-3).unwrap();
        for i in 0..3 {
            let z = (v.adjoint() * g.column(i))[(0, 0)];
            let expect = if i == k { 1.0 } else { 0.0 };
            assert!((z - Complex64::new(expect, 0.0)).norm() < 1e-9);
        }
    }
}

#[test]
fn beampattern_two_routes_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let geom = ArrayGeometry::half_wavelength(4, 4).unwrap();
    for _ in 0..200 {
        let w = PrecoderSet::from_matrix(random_matrix(&mut rng, 16, 3)).unwrap();
        let a = steering_vector(&geom, &random_direction(&mut rng));
        let direct = beampattern_gain(&w, &a).unwrap();
        let quad = beampattern_gain_quadratic(&w.covariance(), &a).unwrap();
        assert!((direct - quad).abs() <= 1e-10 * direct.max(1.0));
    }
}

#[test]
fn scaling_invariants() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let h = ChannelRealization::from_matrix(random_matrix(&mut rng, 1, 8)).unwrap();
    let w = PrecoderSet::from_matrix(random_matrix(&mut rng, 8, 3)).unwrap();
    let a = steering_vector(
        &ArrayGeometry::half_wavelength(2, 4).unwrap(),
        &Direction::new(0.2, -0.7).unwrap(),
    );
    let c = 3.5;
    let g1 = beampattern_gain(&w, &a).unwrap();
    let g2 = beampattern_gain(&w.scaled(c), &a).unwrap();
    assert!((g2 / g1 - c * c).abs() < 1e-9);
    let s1 = sinr_miso(&h, &w, 1, 0.01).unwrap();
    let s2 = sinr_miso(&h, &w.scaled(c), 1, 0.01 * c * c).unwrap();
    assert!((s1 - s2).abs() <= 1e-12 * s1.max(1.0));
    // More power at fixed noise never hurts.
    assert!(sinr_miso(&h, &w.scaled(c), 1, 0.01).unwrap() >= s1);
}

#[test]
fn rate_is_monotone_and_concave() {
    let xs: Vec<f64> = (0..200).map(|i| i as f64 * 0.37).collect();
    for t in xs.windows(3) {
        let (a, b, c) = (
            achievable_rate(t[0]),
            achievable_rate(t[1]),
            achievable_rate(t[2]),
        );
        assert!(b > a && c > b);
        assert!(b - a >= c - b - 1e-12);
    }
    assert_eq!(achievable_rate(0.0), 0.0);
    assert!((achievable_rate(1.0) - 1.0).abs() < 1e-15);
}

#[test]
fn echo_is_additive_and_order_free() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let uav = Position::new(0.0, 0.0, 40.0).unwrap();
    let haps = Position::new(0.0, 0.0, 20_000.0).unwrap();
    let arr = ArrayGeometry::half_wavelength(4, 4).unwrap();
    let targets: Vec<SensingTarget> = (0..4)
        .map(|_| {
            let p = Position::ground(
                rng.random_range(-800.0..800.0),
                rng.random_range(-800.0..800.0),
            );
            SensingTarget::new(p, rng.random_range(0.5..2.0)).unwrap()
        })
        .collect();
    let w = PrecoderSet::from_matrix(random_matrix(&mut rng, 16, 2)).unwrap();
    let echo = |t: &[SensingTarget]| {
        sensing_echo_power(&w, t, &uav, &arr, &haps, 400, 3.5e9, 120e9).unwrap()
    };
    let total = echo(&targets);
    let parts: f64 = targets.iter().map(|t| echo(std::slice::from_ref(t))).sum();
    assert!((total - parts).abs() <= 1e-12 * total);
    let mut rev = targets.clone();
    rev.reverse();
    assert!((echo(&rev) - total).abs() <= 1e-12 * total);
}
