use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{invalid, IsacError, Result};
use crate::metrics::PrecoderSet;

/// How the codec enforces the transmit power budget on a genome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PowerMode {
    /// Genomes decode as-is.
    Unconstrained,
    /// Scale down onto the power sphere only when the budget is exceeded.
    Cap,
    /// Always scale onto the power sphere. Every objective in this crate is non-decreasing
    /// under a positive common scaling of the precoders, so nothing is lost by spending the
    /// whole budget, and the search runs on the sphere instead of the ball.
    Full,
}

/// Maps a real genome of length `2 * tx * streams` to precoders. Coordinates are interleaved
/// `(re, im)` pairs, stream-major: index `2 (k tx + n)` holds `Re w_k[n]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GenomeCodec {
    tx: usize,
    streams: usize,
    p_max: f64,
    power: PowerMode,
}

impl GenomeCodec {
    pub fn new(tx: usize, streams: usize, p_max: f64, power: PowerMode) -> Result<Self> {
        if tx == 0 || streams == 0 {
            return Err(invalid("codec", "tx and streams must be at least 1"));
        }
        if !(p_max.is_finite() && p_max > 0.0) {
            return Err(invalid("p_max", format!("{p_max} must be > 0")));
        }
        Ok(Self {
            tx,
            streams,
            p_max,
            power,
        })
    }

    pub fn dimension(&self) -> usize {
        2 * self.tx * self.streams
    }

    pub fn tx(&self) -> usize {
        self.tx
    }

    pub fn streams(&self) -> usize {
        self.streams
    }

    pub fn p_max(&self) -> f64 {
        self.p_max
    }

    pub fn power_mode(&self) -> PowerMode {
        self.power
    }

    /// Every coordinate lies in `[-sqrt(p_max), sqrt(p_max)]`, which contains the power ball.
    pub fn bounds(&self) -> Vec<(f64, f64)> {
        let a = self.p_max.sqrt();
        vec![(-a, a); self.dimension()]
    }

    /// Applies the power mode in place. An all-zero genome is left alone.
    pub fn repair_genome(&self, x: &mut [f64]) {
        let power: f64 = x.iter().map(|v| v * v).sum();
        let rescale = match self.power {
            PowerMode::Unconstrained => false,
            PowerMode::Cap => power > self.p_max,
            PowerMode::Full => power > 0.0,
        };
        if rescale {
            let s = (self.p_max / power).sqrt();
            for v in x.iter_mut() {
                *v *= s;
            }
        }
    }

    pub fn decode(&self, x: &[f64]) -> Result<PrecoderSet> {
        if x.len() != self.dimension() {
            return Err(IsacError::DimensionMismatch {
                expected: self.dimension(),
                actual: x.len(),
            });
        }
        let mut buf;
        let x = if self.power != PowerMode::Unconstrained {
            buf = x.to_vec();
            self.repair_genome(&mut buf);
            &buf[..]
        } else {
            x
        };
        let w = DMatrix::from_fn(self.tx, self.streams, |n, k| {
            let i = 2 * (k * self.tx + n);
            Complex64::new(x[i], x[i + 1])
        });
        PrecoderSet::from_matrix(w)
    }

    pub fn encode(&self, w: &PrecoderSet) -> Result<Vec<f64>> {
        if w.tx() != self.tx || w.streams() != self.streams {
            return Err(IsacError::DimensionMismatch {
                expected: self.dimension(),
                actual: 2 * w.tx() * w.streams(),
            });
        }
        let mut x = vec![0.0; self.dimension()];
        for k in 0..self.streams {
            for n in 0..self.tx {
                let z = w.matrix()[(n, k)];
                x[2 * (k * self.tx + n)] = z.re;
                x[2 * (k * self.tx + n) + 1] = z.im;
            }
        }
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::total_power;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn round_trip(x in proptest::collection::vec(-2.0f64..2.0, 12)) {
            let c = GenomeCodec::new(3, 2, 1e6, PowerMode::Unconstrained).unwrap();
            let back = c.encode(&c.decode(&x).unwrap()).unwrap();
            for (a, b) in x.iter().zip(&back) {
                prop_assert!((a - b).abs() <= 1e-12);
            }
        }

        #[test]
        fn repaired_power_within_budget(x in proptest::collection::vec(-3.0f64..3.0, 16)) {
            for mode in [PowerMode::Cap, PowerMode::Full] {
                let c = GenomeCodec::new(4, 2, 2.0, mode).unwrap();
                let w = c.decode(&x).unwrap();
                prop_assert!(total_power(&w) <= 2.0 * (1.0 + 1e-9));
            }
        }
    }

    #[test]
    fn layout_is_interleaved_stream_major() {
        let c = GenomeCodec::new(2, 2, 10.0, PowerMode::Unconstrained).unwrap();
        let w = c.decode(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0]).unwrap();
        assert_eq!(w.matrix()[(0, 0)], Complex64::new(1.0, 2.0));
        assert_eq!(w.matrix()[(1, 0)], Complex64::new(3.0, 4.0));
        assert_eq!(w.matrix()[(0, 1)], Complex64::new(5.0, 6.0));
    }

    #[test]
    fn repair_leaves_small_genomes_alone() {
        let c = GenomeCodec::new(1, 1, 10.0, PowerMode::Cap).unwrap();
        let mut x = vec![1.0, 1.0];
        c.repair_genome(&mut x);
        assert_eq!(x, vec![1.0, 1.0]);
        let mut y = vec![3.0, 4.0];
        c.repair_genome(&mut y);
        assert!((y[0] * y[0] + y[1] * y[1] - 10.0).abs() < 1e-12);
        assert!(c.decode(&[0.0; 3]).is_err());
    }

    #[test]
    fn full_mode_spends_the_budget() {
        let c = GenomeCodec::new(2, 1, 8.0, PowerMode::Full).unwrap();
        let mut x = vec![0.5, 0.0, 0.0, 0.5];
        c.repair_genome(&mut x);
        assert!((x.iter().map(|v| v * v).sum::<f64>() - 8.0).abs() < 1e-12);
        let mut z = vec![0.0; 4];
        c.repair_genome(&mut z);
        assert_eq!(z, vec![0.0; 4]);
    }
}
