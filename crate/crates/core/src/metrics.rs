//! Communication and sensing metrics for a set of linear precoders.
//!
//! Users receive `y_k = H_k sum_i w_i s_i + n_k`; a combiner `v_k` (or the single antenna)
//! produces the post-combining SINR. Sensing quality is the transmit beampattern gain toward
//! each target and, for the UAV relay case, the bistatic echo power collected at the HAPS.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::channel::ChannelRealization;
use crate::error::{invalid, IsacError, Result};
use crate::geometry::{direction_between, fspl_gain, steering_vector, ArrayGeometry, Position};

/// Relative eigenvalue floor below which a Gram matrix is treated as singular.
const SINGULAR_RATIO: f64 = 1e-12;

/// Transmit precoders `w_k` stored as the columns of an `N_tx x K` matrix (amplitude, W^1/2).
#[derive(Debug, Clone, PartialEq)]
pub struct PrecoderSet {
    w: DMatrix<Complex64>,
}

impl PrecoderSet {
    pub fn from_matrix(w: DMatrix<Complex64>) -> Result<Self> {
        if w.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(invalid("precoders", "non-finite entry"));
        }
        Ok(Self { w })
    }

    pub fn from_columns(tx: usize, cols: &[Vec<Complex64>]) -> Result<Self> {
        let mut w = DMatrix::zeros(tx, cols.len());
        for (k, c) in cols.iter().enumerate() {
            if c.len() != tx {
                return Err(IsacError::DimensionMismatch {
                    expected: tx,
                    actual: c.len(),
                });
            }
            for (n, z) in c.iter().enumerate() {
                w[(n, k)] = *z;
            }
        }
        Self::from_matrix(w)
    }

    pub fn zeros(tx: usize, streams: usize) -> Self {
        Self {
            w: DMatrix::zeros(tx, streams),
        }
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.w
    }

    pub fn tx(&self) -> usize {
        self.w.nrows()
    }

    pub fn streams(&self) -> usize {
        self.w.ncols()
    }

    pub fn column(&self, k: usize) -> DVector<Complex64> {
        self.w.column(k).into_owned()
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            w: self.w.map(|z| z * c),
        }
    }

    /// Transmit covariance `R = sum_k w_k w_k^H`.
    pub fn covariance(&self) -> DMatrix<Complex64> {
        &self.w * self.w.adjoint()
    }
}

/// Total radiated power `sum_k |w_k|^2`.
pub fn total_power(w: &PrecoderSet) -> f64 {
    w.w.iter().map(|z| z.norm_sqr()).sum()
}

/// A ground target with its radar cross-section (m^2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensingTarget {
    pub position: Position,
    pub rcs: f64,
}

impl SensingTarget {
    pub fn new(position: Position, rcs: f64) -> Result<Self> {
        if !(rcs.is_finite() && rcs > 0.0) {
            return Err(invalid("target_rcs", format!("{rcs} must be > 0")));
        }
        Ok(Self { position, rcs })
    }
}

/// Receive processing at a communication user.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DecoderKind {
    Zf,
    Mmse,
    Mrc,
    /// No combining: only the first receive antenna is used.
    SingleAntenna,
}

impl DecoderKind {
    pub const ALL: [DecoderKind; 4] = [
        DecoderKind::Zf,
        DecoderKind::Mmse,
        DecoderKind::Mrc,
        DecoderKind::SingleAntenna,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            DecoderKind::Zf => "zf",
            DecoderKind::Mmse => "mmse",
            DecoderKind::Mrc => "mrc",
            DecoderKind::SingleAntenna => "single",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "zf" => Some(DecoderKind::Zf),
            "mmse" => Some(DecoderKind::Mmse),
            "mrc" => Some(DecoderKind::Mrc),
            "single" | "single_antenna" | "singleantenna" => Some(DecoderKind::SingleAntenna),
            _ => None,
        }
    }
}

impl std::fmt::Display for DecoderKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Per-user and per-target summary of one precoder set.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkMetrics {
    pub sinr_per_user: Vec<f64>,
    pub rate_per_user: Vec<f64>,
    pub min_sinr: f64,
    pub beampattern_gain_per_target: Vec<f64>,
    pub min_beampattern_gain: f64,
    pub sensing_power: f64,
}

impl LinkMetrics {
    pub fn new(sinr_per_user: Vec<f64>, gains: Vec<f64>, sensing_power: f64) -> Self {
        let rate_per_user = sinr_per_user.iter().map(|&s| achievable_rate(s)).collect();
        Self {
            min_sinr: min_of(&sinr_per_user),
            min_beampattern_gain: min_of(&gains),
            rate_per_user,
            sinr_per_user,
            beampattern_gain_per_target: gains,
            sensing_power,
        }
    }

    pub fn min_rate(&self) -> f64 {
        achievable_rate(self.min_sinr)
    }
}

/// Minimum of a slice; `+inf` for an empty slice.
pub fn min_of(values: &[f64]) -> f64 {
    values.iter().copied().fold(f64::INFINITY, f64::min)
}

fn check_len(expected: usize, actual: usize) -> Result<()> {
    if expected != actual {
        return Err(IsacError::DimensionMismatch { expected, actual });
    }
    Ok(())
}

fn check_noise(noise: f64) -> Result<()> {
    if !(noise.is_finite() && noise > 0.0) {
        return Err(invalid("noise_power", format!("{noise} must be > 0")));
    }
    Ok(())
}

/// Beampattern gain `sum_k |a^H w_k|^2` toward steering vector `a`.
pub fn beampattern_gain(w: &PrecoderSet, a: &[Complex64]) -> Result<f64> {
    check_len(w.tx(), a.len())?;
    let mut total = 0.0;
    for col in w.w.column_iter() {
        let inner: Complex64 = a.iter().zip(col.iter()).map(|(x, y)| x.conj() * y).sum();
        total += inner.norm_sqr();
    }
    Ok(total)
}

/// Same gain through the covariance route `a^H R a`.
pub fn beampattern_gain_quadratic(r: &DMatrix<Complex64>, a: &[Complex64]) -> Result<f64> {
    check_len(r.nrows(), a.len())?;
    let av = DVector::from_column_slice(a);
    let q = (av.adjoint() * r * &av)[(0, 0)];
    Ok(q.re.max(0.0))
}

/// Downlink SINR of user `k` with a single receive antenna.
pub fn sinr_miso(h: &ChannelRealization, w: &PrecoderSet, k: usize, noise: f64) -> Result<f64> {
    check_noise(noise)?;
    check_len(w.tx(), h.tx())?;
    if h.rx() != 1 {
        return Err(IsacError::DimensionMismatch {
            expected: 1,
            actual: h.rx(),
        });
    }
    if k >= w.streams() {
        return Err(IsacError::UserIndex {
            index: k,
            len: w.streams(),
        });
    }
    let g = h.matrix() * w.matrix();
    Ok(miso_from_effective(g.row(0).iter().copied(), k, noise))
}

fn miso_from_effective(g: impl Iterator<Item = Complex64>, k: usize, noise: f64) -> f64 {
    let mut signal = 0.0;
    let mut interference = 0.0;
    for (i, z) in g.enumerate() {
        if i == k {
            signal = z.norm_sqr();
        } else {
            interference += z.norm_sqr();
        }
    }
    signal / (interference + noise)
}

/// Effective channels `g_i = H w_i` as the columns of an `M x K` matrix.
pub fn effective_channels(h: &ChannelRealization, w: &PrecoderSet) -> Result<DMatrix<Complex64>> {
    check_len(w.tx(), h.tx())?;
    Ok(h.matrix() * w.matrix())
}

/// Receive combiner `v_k` for user `k`.
///
/// ZF uses the Moore-Penrose pseudo-inverse of the effective channel matrix `G`: for
/// `K <= M` this is `G (G^H G)^-1 e_k`; when streams outnumber antennas it becomes
/// `(G G^H)^-1 g_k`. ZF vectors are scaled so that `v^H g_k = 1`.
pub fn compute_decoder(
    kind: DecoderKind,
    h: &ChannelRealization,
    w: &PrecoderSet,
    k: usize,
    noise: f64,
) -> Result<DVector<Complex64>> {
    check_noise(noise)?;
    let g = effective_channels(h, w)?;
    decoder_from_effective(kind, &g, k, noise)
}

pub(crate) fn decoder_from_effective(
    kind: DecoderKind,
    g: &DMatrix<Complex64>,
    k: usize,
    noise: f64,
) -> Result<DVector<Complex64>> {
    let (m, streams) = g.shape();
    if k >= streams {
        return Err(IsacError::UserIndex {
            index: k,
            len: streams,
        });
    }
    let gk = g.column(k).into_owned();
    match kind {
        DecoderKind::Mrc => Ok(gk),
        DecoderKind::SingleAntenna => {
            let mut v = DVector::zeros(m);
            v[0] = Complex64::new(1.0, 0.0);
            Ok(v)
        }
        DecoderKind::Mmse => {
            let mut a = g * g.adjoint();
            for i in 0..m {
                a[(i, i)] += noise;
            }
            let chol = a.cholesky().ok_or(IsacError::Singular { user: k })?;
            Ok(chol.solve(&gk))
        }
        DecoderKind::Zf => {
            let v = if streams <= m {
                let gram = g.adjoint() * g;
                let chol = checked_cholesky(gram, k)?;
                let mut e = DVector::zeros(streams);
                e[k] = Complex64::new(1.0, 0.0);
                g * chol.solve(&e)
            } else {
                let gram = g * g.adjoint();
                let chol = checked_cholesky(gram, k)?;
                chol.solve(&gk)
            };
            let gain = (v.adjoint() * &gk)[(0, 0)];
            if gain.norm() == 0.0 || !gain.re.is_finite() {
                return Err(IsacError::Singular { user: k });
            }
            Ok(v / gain.conj())
        }
    }
}

fn checked_cholesky(
    gram: DMatrix<Complex64>,
    user: usize,
) -> Result<nalgebra::Cholesky<Complex64, nalgebra::Dyn>> {
    let chol = gram.cholesky().ok_or(IsacError::Singular { user })?;
    let diag: Vec<f64> = chol
        .l_dirty()
        .diagonal()
        .iter()
        .map(|z| z.norm_sqr())
        .collect();
    let max = diag.iter().copied().fold(0.0, f64::max);
    let min = diag.iter().copied().fold(f64::INFINITY, f64::min);
    if max <= 0.0 || min < SINGULAR_RATIO * max {
        return Err(IsacError::Singular { user });
    }
    Ok(chol)
}

/// Post-combining SINR `|v^H g_k|^2 / (sum_{i != k} |v^H g_i|^2 + noise |v|^2)`.
pub fn sinr_mimo(
    h: &ChannelRealization,
    w: &PrecoderSet,
    v: &DVector<Complex64>,
    k: usize,
    noise: f64,
) -> Result<f64> {
    check_noise(noise)?;
    let g = effective_channels(h, w)?;
    check_len(g.nrows(), v.len())?;
    if k >= g.ncols() {
        return Err(IsacError::UserIndex {
            index: k,
            len: g.ncols(),
        });
    }
    sinr_from_effective(&g, v, k, noise)
}

pub(crate) fn sinr_from_effective(
    g: &DMatrix<Complex64>,
    v: &DVector<Complex64>,
    k: usize,
    noise: f64,
) -> Result<f64> {
    let vnorm = v.norm_squared();
    if vnorm == 0.0 {
        return Err(IsacError::ZeroDecoder);
    }
    let proj = v.adjoint() * g;
    let mut signal = 0.0;
    let mut interference = 0.0;
    for (i, z) in proj.iter().enumerate() {
        if i == k {
            signal = z.norm_sqr();
        } else {
            interference += z.norm_sqr();
        }
    }
    Ok(signal / (interference + noise * vnorm))
}

/// SINR of user `k` under receive processing `kind`.
pub fn user_sinr(
    kind: DecoderKind,
    h: &ChannelRealization,
    w: &PrecoderSet,
    k: usize,
    noise: f64,
) -> Result<f64> {
    check_noise(noise)?;
    let g = effective_channels(h, w)?;
    sinr_with_decoder(kind, &g, k, noise)
}

pub(crate) fn sinr_with_decoder(
    kind: DecoderKind,
    g: &DMatrix<Complex64>,
    k: usize,
    noise: f64,
) -> Result<f64> {
    if kind == DecoderKind::SingleAntenna {
        if k >= g.ncols() {
            return Err(IsacError::UserIndex {
                index: k,
                len: g.ncols(),
            });
        }
        return Ok(miso_from_effective(g.row(0).iter().copied(), k, noise));
    }
    let v = decoder_from_effective(kind, g, k, noise)?;
    sinr_from_effective(g, &v, k, noise)
}

/// Shannon rate `log2(1 + sinr)` in bit/s/Hz.
pub fn achievable_rate(sinr: f64) -> f64 {
    (1.0 + sinr).log2()
}

/// Precomputed two-hop geometry for the echo collected at the HAPS from UAV-illuminated targets.
#[derive(Debug, Clone)]
pub struct SensingGeometry {
    steering: Vec<Vec<Complex64>>,
    hop_gain: Vec<f64>,
}

impl SensingGeometry {
    /// Per target: `beta(uav -> j, access) * rcs_j * beta(j -> haps, backhaul) * N_haps`.
    pub fn new(
        uav: &Position,
        uav_array: &ArrayGeometry,
        haps: &Position,
        haps_elements: usize,
        targets: &[SensingTarget],
        access_freq: f64,
        backhaul_freq: f64,
    ) -> Result<Self> {
        if targets.is_empty() {
            return Err(invalid(
                "targets",
                "at least one sensing target is required",
            ));
        }
        let mut steering = Vec::with_capacity(targets.len());
        let mut hop_gain = Vec::with_capacity(targets.len());
        for t in targets {
            let dir = direction_between(uav, &t.position)?;
            // Fails on colocation.
            direction_between(&t.position, haps)?;
            steering.push(steering_vector(uav_array, &dir));
            let down = fspl_gain(uav.distance(&t.position), access_freq)?;
            let up = fspl_gain(t.position.distance(haps), backhaul_freq)?;
            hop_gain.push(down * t.rcs * up * haps_elements as f64);
        }
        Ok(Self { steering, hop_gain })
    }

    pub fn steering(&self) -> &[Vec<Complex64>] {
        &self.steering
    }

    /// Echo power `Omega` for precoders transmitted from the UAV.
    pub fn echo_power(&self, w: &PrecoderSet) -> Result<f64> {
        let mut total = 0.0;
        for (a, g) in self.steering.iter().zip(&self.hop_gain) {
            total += g * beampattern_gain(w, a)?;
        }
        Ok(total)
    }
}

/// Echo power received at the HAPS, summed over targets.
#[allow(clippy::too_many_arguments)]
pub fn sensing_echo_power(
    w: &PrecoderSet,
    targets: &[SensingTarget],
    uav: &Position,
    uav_array: &ArrayGeometry,
    haps: &Position,
    haps_elements: usize,
    access_freq: f64,
    backhaul_freq: f64,
) -> Result<f64> {
    SensingGeometry::new(
        uav,
        uav_array,
        haps,
        haps_elements,
        targets,
        access_freq,
        backhaul_freq,
    )?
    .echo_power(w)
}
