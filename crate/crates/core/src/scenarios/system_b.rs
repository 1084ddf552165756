use num_complex::Complex64;

use super::codec::{GenomeCodec, PowerMode};
use super::layout::uniform_disk;
use super::{channel_rng, layout_rng};
use crate::channel::{rician_channel, ChannelRealization, RicianParams};
use crate::error::{invalid, Result};
use crate::evolver::{Evaluation, Problem};
use crate::geometry::{
    db_to_linear, dbm_to_watts, direction_between, fspl_gain, steering_vector, ArrayGeometry,
    LinkBudget, Position,
};
use crate::metrics::{
    beampattern_gain, effective_channels, min_of, sinr_with_decoder, DecoderKind, LinkMetrics,
    PrecoderSet, SensingTarget,
};

/// HAPS acting as a macro base station with one UPA for users and targets.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemBScenario {
    pub haps_altitude: f64,
    pub array: ArrayGeometry,
    pub num_users: usize,
    /// Receive antennas per user (a half-wavelength line array).
    pub user_antennas: usize,
    /// Receive processing; only meaningful with more than one user antenna.
    pub decoder: DecoderKind,
    pub num_targets: usize,
    pub user_disk_radius: f64,
    pub target_disk_radius: f64,
    /// Explicit ground positions; when absent the layout is drawn from the run seed.
    pub users: Option<Vec<Position>>,
    pub targets: Option<Vec<Position>>,
    pub target_rcs: f64,
    /// Total transmit power budget, W.
    pub p_max: f64,
    /// Per-user SINR floor (linear); 0 disables the constraint.
    pub sinr_floor: f64,
    pub k_factor: f64,
    pub link: LinkBudget,
    pub power_mode: PowerMode,
}

impl Default for SystemBScenario {
    fn default() -> Self {
        Self {
            haps_altitude: 20_000.0,
            array: ArrayGeometry::half_wavelength(8, 8).expect("valid"),
            num_users: 4,
            user_antennas: 1,
            decoder: DecoderKind::SingleAntenna,
            num_targets: 4,
            user_disk_radius: 5_000.0,
            target_disk_radius: 10_000.0,
            users: None,
            targets: None,
            target_rcs: 1.0,
            p_max: dbm_to_watts(52.0),
            sinr_floor: db_to_linear(-5.0),
            k_factor: 10.0,
            link: LinkBudget::new(2.545e9, dbm_to_watts(-100.0), 20e6).expect("valid"),
            power_mode: PowerMode::Full,
        }
    }
}

impl SystemBScenario {
    pub fn validate(&self) -> Result<()> {
        if !(self.haps_altitude.is_finite() && self.haps_altitude > 0.0) {
            return Err(invalid(
                "haps_altitude",
                format!("{} must be > 0", self.haps_altitude),
            ));
        }
        if self.num_targets == 0 {
            return Err(invalid("num_targets", "at least one target is required"));
        }
        if self.user_antennas == 0 {
            return Err(invalid("user_antennas", "must be at least 1"));
        }
        if self.user_antennas == 1 && self.decoder != DecoderKind::SingleAntenna {
            return Err(invalid(
                "decoder",
                "single-antenna users take decoder = \"single\"",
            ));
        }
        if !(self.sinr_floor.is_finite() && self.sinr_floor >= 0.0) {
            return Err(invalid(
                "sinr_floor",
                format!("{} must be >= 0", self.sinr_floor),
            ));
        }
        if !(self.p_max.is_finite() && self.p_max > 0.0) {
            return Err(invalid("p_max", format!("{} must be > 0", self.p_max)));
        }
        if !(self.target_rcs.is_finite() && self.target_rcs > 0.0) {
            return Err(invalid(
                "target_rcs",
                format!("{} must be > 0", self.target_rcs),
            ));
        }
        for (name, r) in [
            ("user_disk_radius", self.user_disk_radius),
            ("target_disk_radius", self.target_disk_radius),
        ] {
            if !(r.is_finite() && r >= 0.0) {
                return Err(invalid(name, format!("{r} must be >= 0")));
            }
        }
        if let Some(u) = &self.users {
            if u.len() != self.num_users {
                return Err(invalid(
                    "users",
                    format!("{} positions for num_users = {}", u.len(), self.num_users),
                ));
            }
        }
        if let Some(t) = &self.targets {
            if t.len() != self.num_targets {
                return Err(invalid(
                    "targets",
                    format!(
                        "{} positions for num_targets = {}",
                        t.len(),
                        self.num_targets
                    ),
                ));
            }
        }
        RicianParams::new(self.k_factor, 1.0)?;
        Ok(())
    }

    pub fn haps(&self) -> Position {
        Position {
            x: 0.0,
            y: 0.0,
            z: self.haps_altitude,
        }
    }

    pub fn with_altitude(&self, altitude: f64) -> Self {
        Self {
            haps_altitude: altitude,
            ..self.clone()
        }
    }

    /// Number of precoded streams: one per user, or a single sensing beam without users.
    pub fn streams(&self) -> usize {
        self.num_users.max(1)
    }

    /// Ground layout for `seed`; explicit positions take precedence.
    pub fn layout(&self, seed: u64) -> (Vec<Position>, Vec<Position>) {
        let mut rng = layout_rng(seed);
        let users = uniform_disk(&mut rng, self.num_users, 0.0, 0.0, self.user_disk_radius);
        let targets = uniform_disk(
            &mut rng,
            self.num_targets,
            0.0,
            0.0,
            self.target_disk_radius,
        );
        (
            self.users.clone().unwrap_or(users),
            self.targets.clone().unwrap_or(targets),
        )
    }

    /// Freezes layout and one fading draw per user.
    pub fn instance(&self, seed: u64) -> Result<SystemBInstance> {
        self.validate()?;
        let haps = self.haps();
        let (users, target_pos) = self.layout(seed);
        let targets = target_pos
            .iter()
            .map(|p| SensingTarget::new(*p, self.target_rcs))
            .collect::<Result<Vec<_>>>()?;
        let target_steering = targets
            .iter()
            .map(|t| {
                Ok(steering_vector(
                    &self.array,
                    &direction_between(&haps, &t.position)?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        let rx_array = ArrayGeometry::half_wavelength(self.user_antennas, 1)?;
        let mut channels = Vec::with_capacity(users.len());
        let mut small_scale = Vec::with_capacity(users.len());
        for (k, u) in users.iter().enumerate() {
            let a_tx = steering_vector(&self.array, &direction_between(&haps, u)?);
            let a_rx = steering_vector(&rx_array, &direction_between(u, &haps)?);
            let beta = fspl_gain(haps.distance(u), self.link.carrier_freq)?;
            let unit = RicianParams::new(self.k_factor, 1.0)?;
            let h = rician_channel(&mut channel_rng(seed, k), &unit, Some(&a_rx), &a_tx);
            channels.push(h.scaled(beta.sqrt()));
            small_scale.push(h);
        }
        Ok(SystemBInstance {
            haps,
            users,
            targets,
            target_steering,
            channels,
            small_scale,
        })
    }
}

/// One frozen realization of a System B scenario.
#[derive(Debug, Clone)]
pub struct SystemBInstance {
    pub haps: Position,
    pub users: Vec<Position>,
    pub targets: Vec<SensingTarget>,
    pub target_steering: Vec<Vec<Complex64>>,
    /// Full channels `H_k` including path loss.
    pub channels: Vec<ChannelRealization>,
    /// The same draws with unit large-scale gain.
    pub small_scale: Vec<ChannelRealization>,
}

/// What a System B run maximizes and what it constrains.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SystemBMode {
    /// Maximize the minimum target gain subject to `SINR_k >= sinr_floor`.
    MaxMinGain { sinr_floor: f64 },
    /// Maximize the minimum user SINR subject to every target gain `>= gain_floor` (W).
    MaxMinSinr { gain_floor: f64 },
}

#[derive(Debug, Clone)]
pub struct SystemBProblem {
    codec: GenomeCodec,
    bounds: Vec<(f64, f64)>,
    instance: SystemBInstance,
    noise: f64,
    decoder: DecoderKind,
    mode: SystemBMode,
}

/// Primal problem: max-min beampattern gain under the SINR floor and the power cap (repair).
pub fn system_b_problem(scn: &SystemBScenario, seed: u64) -> Result<SystemBProblem> {
    SystemBProblem::new(
        scn,
        seed,
        SystemBMode::MaxMinGain {
            sinr_floor: scn.sinr_floor,
        },
    )
}

/// Dual problem: max-min SINR under a beampattern gain floor `gamma` (W).
pub fn system_b_dual_problem(
    scn: &SystemBScenario,
    seed: u64,
    gamma: f64,
) -> Result<SystemBProblem> {
    if !(gamma.is_finite() && gamma >= 0.0) {
        return Err(invalid("gamma", format!("{gamma} must be >= 0")));
    }
    SystemBProblem::new(scn, seed, SystemBMode::MaxMinSinr { gain_floor: gamma })
}

impl SystemBProblem {
    pub fn new(scn: &SystemBScenario, seed: u64, mode: SystemBMode) -> Result<Self> {
        let instance = scn.instance(seed)?;
        let codec = GenomeCodec::new(
            scn.array.elements(),
            scn.streams(),
            scn.p_max,
            scn.power_mode,
        )?;
        Ok(Self {
            bounds: codec.bounds(),
            codec,
            instance,
            noise: scn.link.noise_power,
            decoder: scn.decoder,
            mode,
        })
    }

    pub fn codec(&self) -> &GenomeCodec {
        &self.codec
    }

    pub fn instance(&self) -> &SystemBInstance {
        &self.instance
    }

    pub fn mode(&self) -> SystemBMode {
        self.mode
    }

    pub fn noise(&self) -> f64 {
        self.noise
    }

    pub fn decoder(&self) -> DecoderKind {
        self.decoder
    }

    /// Per-user SINRs for precoders `w`.
    pub fn sinrs(&self, w: &PrecoderSet) -> Result<Vec<f64>> {
        self.instance
            .channels
            .iter()
            .enumerate()
            .map(|(k, h)| {
                let g = effective_channels(h, w)?;
                sinr_with_decoder(self.decoder, &g, k, self.noise)
            })
            .collect()
    }

    pub fn gains(&self, w: &PrecoderSet) -> Result<Vec<f64>> {
        self.instance
            .target_steering
            .iter()
            .map(|a| beampattern_gain(w, a))
            .collect()
    }

    pub fn precoders(&self, x: &[f64]) -> Result<PrecoderSet> {
        self.codec.decode(x)
    }

    /// Full metric set for a genome. Monostatic echo power is not modeled here, so
    /// `sensing_power` is 0.
    pub fn metrics(&self, x: &[f64]) -> Result<LinkMetrics> {
        let w = self.codec.decode(x)?;
        Ok(LinkMetrics::new(self.sinrs(&w)?, self.gains(&w)?, 0.0))
    }

    fn score(&self, x: &[f64]) -> Result<Evaluation> {
        let w = self.codec.decode(x)?;
        let gains = self.gains(&w)?;
        let sinrs = self.sinrs(&w)?;
        Ok(match self.mode {
            SystemBMode::MaxMinGain { sinr_floor } => Evaluation {
                objectives: vec![min_of(&gains)],
                violation: shortfall(&sinrs, sinr_floor),
            },
            SystemBMode::MaxMinSinr { gain_floor } => Evaluation {
                objectives: vec![min_of(&sinrs)],
                violation: shortfall(&gains, gain_floor),
            },
        })
    }
}

/// `sum_i max(0, floor - v_i) / floor`; zero when the floor is zero.
pub(crate) fn shortfall(values: &[f64], floor: f64) -> f64 {
    if floor <= 0.0 {
        return 0.0;
    }
    values.iter().map(|v| (floor - v).max(0.0) / floor).sum()
}

impl Problem for SystemBProblem {
    fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    fn num_objectives(&self) -> usize {
        1
    }

    fn evaluate(&self, x: &[f64]) -> Evaluation {
        // Singular combiners (degenerate ZF) make the genome unusable.
        self.score(x).unwrap_or_else(|_| Evaluation::worst(1))
    }

    fn repair(&self, x: &mut [f64]) {
        self.codec.repair_genome(x);
    }
}
