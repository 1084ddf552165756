use std::f64::consts::PI;

use rand::Rng;

use crate::error::Result;
use crate::geometry::{direction_between, Position};

/// `count` ground points i.i.d. uniform over a disk of `radius` meters around `(cx, cy)`.
pub fn uniform_disk<R: Rng>(
    rng: &mut R,
    count: usize,
    cx: f64,
    cy: f64,
    radius: f64,
) -> Vec<Position> {
    (0..count)
        .map(|_| {
            let r = radius * rng.random::<f64>().sqrt();
            let phi = 2.0 * PI * rng.random::<f64>();
            Position::ground(cx + r * phi.cos(), cy + r * phi.sin())
        })
        .collect()
}

/// Ground point at `range` meters and azimuth `azimuth_deg` from `(cx, cy)`.
pub fn polar_ground(cx: f64, cy: f64, range: f64, azimuth_deg: f64) -> Position {
    let a = azimuth_deg.to_radians();
    Position::ground(cx + range * a.cos(), cy + range * a.sin())
}

/// Largest angle (radians) between any two of `points` as seen from `apex`.
pub fn angular_spread(apex: &Position, points: &[Position]) -> Result<f64> {
    let dirs = points
        .iter()
        .map(|p| direction_between(apex, p))
        .collect::<Result<Vec<_>>>()?;
    let mut spread: f64 = 0.0;
    for (i, a) in dirs.iter().enumerate() {
        for b in &dirs[i + 1..] {
            spread = spread.max(a.angle_to(b));
        }
    }
    Ok(spread)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolver::stream_rng;

    #[test]
    fn disk_points_inside_radius() {
        let mut rng = stream_rng(1, 2, 3);
        for p in uniform_disk(&mut rng, 200, 10.0, -5.0, 300.0) {
            assert!(((p.x - 10.0).hypot(p.y + 5.0)) <= 300.0);
            assert_eq!(p.z, 0.0);
        }
    }

    #[test]
    fn spread_shrinks_with_height() {
        let pts = vec![
            Position::ground(-4000.0, 0.0),
            Position::ground(3000.0, 2000.0),
        ];
        let low = angular_spread(&Position::new(0.0, 0.0, 20_000.0).unwrap(), &pts).unwrap();
        let high = angular_spread(&Position::new(0.0, 0.0, 40_000.0).unwrap(), &pts).unwrap();
        assert!(high < low);
    }
}
