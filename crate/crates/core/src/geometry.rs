//! Platform geometry, planar-array steering, and large-scale propagation.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, IsacError, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// A point in the ground-fixed Cartesian frame. `z` is altitude above ground, meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Position {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Position {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        if !(x.is_finite() && y.is_finite() && z.is_finite()) {
            return Err(invalid("position", "coordinates must be finite"));
        }
        if z < 0.0 {
            return Err(invalid(
                "position",
                format!("altitude {z} m is below ground"),
            ));
        }
        Ok(Self { x, y, z })
    }

    /// Ground point (z = 0).
    pub fn ground(x: f64, y: f64) -> Self {
        Self { x, y, z: 0.0 }
    }

    pub fn distance(&self, other: &Position) -> f64 {
        let (dx, dy, dz) = (other.x - self.x, other.y - self.y, other.z - self.z);
        (dx * dx + dy * dy + dz * dz).sqrt()
    }

    pub fn with_altitude(self, z: f64) -> Self {
        Self { z, ..self }
    }
}

/// Azimuth in [-pi, pi), elevation in [-pi/2, pi/2]. Radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction {
    pub azimuth: f64,
    pub elevation: f64,
}

impl Direction {
    pub fn new(azimuth: f64, elevation: f64) -> Result<Self> {
        if !(-PI..PI).contains(&azimuth) {
            return Err(invalid("azimuth", format!("{azimuth} outside [-pi, pi)")));
        }
        if !(-PI / 2.0..=PI / 2.0).contains(&elevation) {
            return Err(invalid(
                "elevation",
                format!("{elevation} outside [-pi/2, pi/2]"),
            ));
        }
        Ok(Self { azimuth, elevation })
    }

    /// Unit vector pointing along this direction.
    pub fn unit_vector(&self) -> [f64; 3] {
        let c = self.elevation.cos();
        [
            c * self.azimuth.cos(),
            c * self.azimuth.sin(),
            self.elevation.sin(),
        ]
    }

    /// Great-circle angle between two directions, radians.
    pub fn angle_to(&self, other: &Direction) -> f64 {
        let (a, b) = (self.unit_vector(), other.unit_vector());
        let dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
        dot.clamp(-1.0, 1.0).acos()
    }
}

/// Direction of `to` as seen from `from`.
///
/// Straight up/down has no horizontal component; azimuth is then 0 by convention.
pub fn direction_between(from: &Position, to: &Position) -> Result<Direction> {
    let (dx, dy, dz) = (to.x - from.x, to.y - from.y, to.z - from.z);
    let horizontal = dx.hypot(dy);
    if horizontal == 0.0 && dz == 0.0 {
        return Err(IsacError::DegenerateGeometry(
            "coincident positions have no direction".into(),
        ));
    }
    let mut azimuth = if horizontal == 0.0 { 0.0 } else { dy.atan2(dx) };
    // atan2 returns pi for the negative x axis; fold into [-pi, pi).
    if azimuth >= PI {
        azimuth -= 2.0 * PI;
    }
    Ok(Direction {
        azimuth,
        elevation: dz.atan2(horizontal),
    })
}

/// Uniform planar array of `rows x cols` isotropic elements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArrayGeometry {
    rows: usize,
    cols: usize,
    spacing: f64,
}

impl ArrayGeometry {
    /// `spacing` is the element pitch in wavelengths.
    pub fn new(rows: usize, cols: usize, spacing: f64) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(invalid("array", "rows and cols must be at least 1"));
        }
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(invalid("element_spacing", format!("{spacing} must be > 0")));
        }
        Ok(Self {
            rows,
            cols,
            spacing,
        })
    }

    /// Half-wavelength UPA.
    pub fn half_wavelength(rows: usize, cols: usize) -> Result<Self> {
        Self::new(rows, cols, 0.5)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn elements(&self) -> usize {
        self.rows * self.cols
    }
}

/// UPA response toward `dir`: entry `(m, n)` is
/// `exp(j 2 pi d (m cos(el) cos(az) + n cos(el) sin(az)))`, flattened row-major.
///
/// Entries are unit modulus and the vector is not normalized, so `|a|^2 = N`.
pub fn steering_vector(geom: &ArrayGeometry, dir: &Direction) -> Vec<Complex64> {
    let d = geom.spacing();
    let ce = dir.elevation.cos();
    let ux = 2.0 * PI * d * ce * dir.azimuth.cos();
    let uy = 2.0 * PI * d * ce * dir.azimuth.sin();
    let mut out = Vec::with_capacity(geom.elements());
    for m in 0..geom.rows() {
        for n in 0..geom.cols() {
            out.push(Complex64::from_polar(1.0, m as f64 * ux + n as f64 * uy));
        }
    }
    out
}

/// Carrier, noise, and bandwidth of one link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    pub carrier_freq: f64,
    pub noise_power: f64,
    pub bandwidth: f64,
}

impl LinkBudget {
    pub fn new(carrier_freq: f64, noise_power: f64, bandwidth: f64) -> Result<Self> {
        for (name, v) in [
            ("carrier_freq", carrier_freq),
            ("noise_power", noise_power),
            ("bandwidth", bandwidth),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(invalid(name, format!("{v} must be > 0")));
            }
        }
        Ok(Self {
            carrier_freq,
            noise_power,
            bandwidth,
        })
    }

    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier_freq
    }
}

/// Friis free-space power gain `(c / (4 pi d f))^2`.
pub fn fspl_gain(distance: f64, freq: f64) -> Result<f64> {
    if !(distance.is_finite() && distance > 0.0) {
        return Err(invalid("distance", format!("{distance} must be > 0")));
    }
    if !(freq.is_finite() && freq > 0.0) {
        return Err(invalid("freq", format!("{freq} must be > 0")));
    }
    let r = SPEED_OF_LIGHT / (4.0 * PI * distance * freq);
    Ok(r * r)
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

pub fn watts_to_dbm(watts: f64) -> f64 {
    10.0 * watts.log10() + 30.0
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(lin: f64) -> f64 {
    10.0 * lin.log10()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn nadir_direction() {
        let d = direction_between(
            &Position::new(0.0, 0.0, 20_000.0).unwrap(),
            &Position::ground(0.0, 0.0),
        )
        .unwrap();
        assert_eq!(d.azimuth, 0.0);
        assert_relative_eq!(d.elevation, -PI / 2.0);
    }

    #[test]
    fn horizontal_broadside() {
        let d =
            direction_between(&Position::ground(0.0, 0.0), &Position::ground(1000.0, 0.0)).unwrap();
        assert_eq!((d.azimuth, d.elevation), (0.0, 0.0));
    }

    #[test]
    fn slant_forty_five_degrees() {
        let d = direction_between(
            &Position::new(0.0, 0.0, 20_000.0).unwrap(),
            &Position::ground(20_000.0, 0.0),
        )
        .unwrap();
        assert_relative_eq!(d.elevation, (-20_000f64).atan2(20_000.0), epsilon = 1e-15);
        assert_relative_eq!(d.elevation, -PI / 4.0, epsilon = 1e-15);
    }

    #[test]
    fn negative_x_axis_azimuth_in_range() {
        let d =
            direction_between(&Position::ground(0.0, 0.0), &Position::ground(-5.0, 0.0)).unwrap();
        assert!((-PI..PI).contains(&d.azimuth));
    }

    #[test]
    fn coincident_positions_rejected() {
        let p = Position::ground(1.0, 2.0);
        assert!(matches!(
            direction_between(&p, &p),
            Err(IsacError::DegenerateGeometry(_))
        ));
    }

    #[test]
    fn position_rejects_negative_altitude_and_nan() {
        assert!(Position::new(0.0, 0.0, -5.0).is_err());
        assert!(Position::new(f64::NAN, 0.0, 1.0).is_err());
    }

    #[test]
    fn boresight_is_all_ones() {
        let g = ArrayGeometry::half_wavelength(3, 5).unwrap();
        let a = steering_vector(&g, &Direction::new(0.7, PI / 2.0).unwrap());
        for z in a {
            assert_relative_eq!(z.re, 1.0, epsilon = 1e-12);
            assert!(z.im.abs() < 1e-12);
        }
    }

    #[test]
    fn two_element_endfire() {
        let g = ArrayGeometry::half_wavelength(2, 1).unwrap();
        let a = steering_vector(&g, &Direction::new(0.0, 0.0).unwrap());
        assert_relative_eq!(a[0].re, 1.0);
        assert_relative_eq!(a[1].re, -1.0, epsilon = 1e-12);
        assert!(a[1].im.abs() < 1e-12);
    }

    #[test]
    fn eight_by_eight_norm() {
        let g = ArrayGeometry::half_wavelength(8, 8).unwrap();
        let a = steering_vector(&g, &Direction::new(-2.0, 0.3).unwrap());
        let n2: f64 = a.iter().map(|z| z.norm_sqr()).sum();
        assert_relative_eq!(n2, 64.0, epsilon = 1e-10);
    }

    #[test]
    fn fspl_inverse_square_and_identity() {
        let g1 = fspl_gain(1000.0, 2e9).unwrap();
        let g2 = fspl_gain(2000.0, 2e9).unwrap();
        assert_relative_eq!(g2 / g1, 0.25, epsilon = 1e-14);
        assert_relative_eq!(
            fspl_gain(1.0, SPEED_OF_LIGHT / (4.0 * PI)).unwrap(),
            1.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn fspl_haps_s_band() {
        // 32.45 + 20 log10(d_km) + 20 log10(f_MHz)
        let db = 32.45 + 20.0 * 20f64.log10() + 20.0 * 2545f64.log10();
        let g = fspl_gain(20_000.0, 2.545e9).unwrap();
        assert_relative_eq!(-linear_to_db(g), db, epsilon = 0.01);
        assert_relative_eq!(-linear_to_db(g), 126.6, epsilon = 0.05);
    }

    #[test]
    fn fspl_rejects_non_positive() {
        assert!(fspl_gain(0.0, 1e9).is_err());
        assert!(fspl_gain(1.0, -1.0).is_err());
    }

    #[test]
    fn dbm_conversions() {
        assert_relative_eq!(dbm_to_watts(30.0), 1.0);
        assert_relative_eq!(dbm_to_watts(0.0), 1e-3);
        assert_relative_eq!(dbm_to_watts(52.0), 10f64.powf(2.2), max_relative = 1e-14);
        assert_relative_eq!(dbm_to_watts(52.0), 158.489, epsilon = 1e-3);
    }

    #[test]
    fn array_rejects_bad_shapes() {
        assert!(ArrayGeometry::new(0, 4, 0.5).is_err());
        assert!(ArrayGeometry::new(4, 4, 0.0).is_err());
        assert!(LinkBudget::new(1e9, 0.0, 1e6).is_err());
    }
}
