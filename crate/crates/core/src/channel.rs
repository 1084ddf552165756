//! Rician small-scale fading on top of a deterministic line-of-sight component.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RicianParams {
    k_factor: f64,
    large_scale_gain: f64,
}

impl RicianParams {
    /// `k_factor` is the linear LoS-to-scatter power ratio (may be `f64::INFINITY`);
    /// `large_scale_gain` is the linear path gain applied to both components.
    pub fn new(k_factor: f64, large_scale_gain: f64) -> Result<Self> {
        if k_factor.is_nan() || k_factor < 0.0 {
            return Err(invalid("k_factor", format!("{k_factor} must be >= 0")));
        }
        if !(large_scale_gain.is_finite() && large_scale_gain > 0.0) {
            return Err(invalid(
                "large_scale_gain",
                format!("{large_scale_gain} must be > 0"),
            ));
        }
        Ok(Self {
            k_factor,
            large_scale_gain,
        })
    }

    pub fn k_factor(&self) -> f64 {
        self.k_factor
    }

    pub fn large_scale_gain(&self) -> f64 {
        self.large_scale_gain
    }

    /// Amplitude weights of the LoS and scattered parts.
    fn weights(&self) -> (f64, f64) {
        if self.k_factor.is_infinite() {
            (1.0, 0.0)
        } else {
            let k = self.k_factor;
            ((k / (k + 1.0)).sqrt(), (1.0 / (k + 1.0)).sqrt())
        }
    }
}

/// Complex channel matrix, `rx x tx`, linear amplitude.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    matrix: DMatrix<Complex64>,
}

impl ChannelRealization {
    pub fn from_matrix(matrix: DMatrix<Complex64>) -> Result<Self> {
        if matrix
            .iter()
            .any(|z| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(invalid("channel", "non-finite entry"));
        }
        Ok(Self { matrix })
    }

    /// Single-antenna receiver channel from a row vector.
    pub fn from_row(row: &[Complex64]) -> Result<Self> {
        Self::from_matrix(DMatrix::from_row_slice(1, row.len(), row))
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn rx(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn tx(&self) -> usize {
        self.matrix.ncols()
    }

    /// Channel seen by receive antenna `r` alone.
    pub fn row(&self, r: usize) -> ChannelRealization {
        Self {
            matrix: self.matrix.rows(r, 1).into_owned(),
        }
    }

    pub fn frobenius_sq(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Same channel with every entry scaled by `s` (amplitude).
    pub fn scaled(&self, s: f64) -> ChannelRealization {
        Self {
            matrix: self.matrix.map(|z| z * s),
        }
    }
}

/// Zero-mean circularly-symmetric complex Gaussian with unit variance.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Draws `H = sqrt(b) (sqrt(K/(K+1)) a_rx a_tx^H + sqrt(1/(K+1)) G)`.
///
/// `a_rx = None` stands for a single-antenna receiver (scalar 1).
pub fn rician_channel<R: Rng + ?Sized>(
    rng: &mut R,
    params: &RicianParams,
    a_rx: Option<&[Complex64]>,
    a_tx: &[Complex64],
) -> ChannelRealization {
    let one = [Complex64::new(1.0, 0.0)];
    let a_rx = a_rx.unwrap_or(&one);
    let (los, nlos) = params.weights();
    let amp = params.large_scale_gain.sqrt();
    let (m, n) = (a_rx.len(), a_tx.len());
    let mut h = DMatrix::<Complex64>::zeros(m, n);
    // Column-major fill keeps the draw order fixed for a given seed.
    for c in 0..n {
        for r in 0..m {
            let scatter = if nlos > 0.0 {
                complex_gaussian(rng) * nlos
            } else {
                Complex64::new(0.0, 0.0)
            };
            h[(r, c)] = (a_rx[r] * a_tx[c].conj() * los + scatter) * amp;
        }
    }
    ChannelRealization { matrix: h }
}
