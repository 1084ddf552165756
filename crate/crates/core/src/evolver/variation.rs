use rand::Rng;
use rand_distr::StandardNormal;

pub(crate) fn random_genome<R: Rng>(bounds: &[(f64, f64)], rng: &mut R) -> Vec<f64> {
    bounds
        .iter()
        .map(|&(lo, hi)| {
            if hi > lo {
                rng.random_range(lo..=hi)
            } else {
                lo
            }
        })
        .collect()
}

/// `u a + (1 - u) b` with a single `u ~ U[0, 1]`, clamped against rounding at the box edge.
pub(crate) fn arithmetic_crossover<R: Rng>(
    a: &[f64],
    b: &[f64],
    bounds: &[(f64, f64)],
    rng: &mut R,
) -> Vec<f64> {
    let u: f64 = rng.random();
    let mut child: Vec<f64> = a
        .iter()
        .zip(b)
        .map(|(x, y)| u * x + (1.0 - u) * y)
        .collect();
    clamp_to(bounds, &mut child);
    child
}

/// Adds `N(0, (sigma_frac * range_d)^2 / D)` to every coordinate, then clamps to the box.
/// Dividing by the dimension keeps the expected step length at `sigma_frac` of the box
/// diagonal scale whatever the genome size.
pub(crate) fn gaussian_mutation<R: Rng>(
    parent: &[f64],
    bounds: &[(f64, f64)],
    sigma_frac: f64,
    rng: &mut R,
) -> Vec<f64> {
    let dn = (bounds.len().max(1) as f64).sqrt();
    parent
        .iter()
        .zip(bounds)
        .map(|(&x, &(lo, hi))| {
            let z: f64 = rng.sample(StandardNormal);
            (x + z * sigma_frac * (hi - lo) / dn).clamp(lo, hi)
        })
        .collect()
}

pub(crate) fn clamp_to(bounds: &[(f64, f64)], x: &mut [f64]) {
    for (v, &(lo, hi)) in x.iter_mut().zip(bounds) {
        *v = v.clamp(lo, hi);
    }
}

/// Tournament selection: draws `size` contestants uniformly (with replacement) and keeps
/// the one for which `better(challenger, incumbent)` holds.
pub(crate) fn tournament<R: Rng>(
    n: usize,
    size: usize,
    rng: &mut R,
    better: impl Fn(usize, usize) -> bool,
) -> usize {
    let mut best = rng.random_range(0..n);
    for _ in 1..size {
        let c = rng.random_range(0..n);
        if better(c, best) {
            best = c;
        }
    }
    best
}
