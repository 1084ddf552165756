use super::codec::{GenomeCodec, PowerMode};
use super::layout::uniform_disk;
use super::{channel_rng, layout_rng};
use crate::channel::{rician_channel, ChannelRealization, RicianParams};
use crate::error::{invalid, Result};
use crate::evolver::{Evaluation, Problem};
use crate::geometry::{
    dbm_to_watts, direction_between, fspl_gain, steering_vector, ArrayGeometry, Position,
};
use crate::metrics::{
    achievable_rate, effective_channels, min_of, sinr_with_decoder, DecoderKind, LinkMetrics,
    PrecoderSet, SensingGeometry, SensingTarget,
};

/// HAPS as central processor over one UAV cluster.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemAScenario {
    pub haps_altitude: f64,
    pub uav_altitude: f64,
    pub haps_array: ArrayGeometry,
    pub uav_array: ArrayGeometry,
    pub num_users: usize,
    pub user_antennas: usize,
    pub num_targets: usize,
    pub decoder: DecoderKind,
    /// UAV-to-ground carrier, Hz.
    pub access_freq: f64,
    /// Target-to-HAPS carrier, Hz.
    pub backhaul_freq: f64,
    /// UAV transmit power budget, W.
    pub uav_power: f64,
    /// Scalarization weight between worst-user SINR (0) and echo power (1).
    pub mu: f64,
    pub k_factor: f64,
    pub noise_power: f64,
    pub bandwidth: f64,
    pub user_disk_radius: f64,
    pub target_disk_radius: f64,
    pub users: Option<Vec<Position>>,
    pub targets: Option<Vec<Position>>,
    pub target_rcs: f64,
    pub power_mode: PowerMode,
}

impl Default for SystemAScenario {
    fn default() -> Self {
        Self {
            haps_altitude: 20_000.0,
            uav_altitude: 40.0,
            haps_array: ArrayGeometry::half_wavelength(20, 20).expect("valid"),
            uav_array: ArrayGeometry::half_wavelength(4, 4).expect("valid"),
            num_users: 4,
            user_antennas: 2,
            num_targets: 4,
            decoder: DecoderKind::Mmse,
            access_freq: 3.5e9,
            backhaul_freq: 120e9,
            uav_power: dbm_to_watts(40.0),
            mu: 0.5,
            k_factor: 10.0,
            noise_power: dbm_to_watts(-100.0),
            bandwidth: 20e6,
            user_disk_radius: 500.0,
            target_disk_radius: 1_000.0,
            users: None,
            targets: None,
            target_rcs: 1.0,
            power_mode: PowerMode::Full,
        }
    }
}

impl SystemAScenario {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("haps_altitude", self.haps_altitude),
            ("uav_altitude", self.uav_altitude),
            ("access_freq", self.access_freq),
            ("backhaul_freq", self.backhaul_freq),
            ("uav_power", self.uav_power),
            ("noise_power", self.noise_power),
            ("bandwidth", self.bandwidth),
            ("target_rcs", self.target_rcs),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(invalid(name, format!("{v} must be > 0")));
            }
        }
        if self.uav_altitude >= self.haps_altitude {
            return Err(invalid("uav_altitude", "must be below the HAPS"));
        }
        if self.num_users == 0 || self.num_targets == 0 {
            return Err(invalid(
                "num_users",
                "System A needs at least one user and one target",
            ));
        }
        if self.user_antennas == 0 {
            return Err(invalid("user_antennas", "must be at least 1"));
        }
        if !(0.0..=1.0).contains(&self.mu) {
            return Err(invalid("mu", format!("{} outside [0, 1]", self.mu)));
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

    pub fn uav(&self) -> Position {
        Position {
            x: 0.0,
            y: 0.0,
            z: self.uav_altitude,
        }
    }

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

    pub fn instance(&self, seed: u64) -> Result<SystemAInstance> {
        self.validate()?;
        let (uav, haps) = (self.uav(), self.haps());
        let (users, target_pos) = self.layout(seed);
        let targets = target_pos
            .iter()
            .map(|p| SensingTarget::new(*p, self.target_rcs))
            .collect::<Result<Vec<_>>>()?;
        let sensing = SensingGeometry::new(
            &uav,
            &self.uav_array,
            &haps,
            self.haps_array.elements(),
            &targets,
            self.access_freq,
            self.backhaul_freq,
        )?;
        let rx_array = ArrayGeometry::half_wavelength(self.user_antennas, 1)?;
        let mut channels = Vec::with_capacity(users.len());
        for (k, u) in users.iter().enumerate() {
            let a_tx = steering_vector(&self.uav_array, &direction_between(&uav, u)?);
            let a_rx = steering_vector(&rx_array, &direction_between(u, &uav)?);
            let beta = fspl_gain(uav.distance(u), self.access_freq)?;
            let params = RicianParams::new(self.k_factor, beta)?;
            channels.push(rician_channel(
                &mut channel_rng(seed, k),
                &params,
                Some(&a_rx),
                &a_tx,
            ));
        }
        Ok(SystemAInstance {
            users,
            targets,
            channels,
            sensing,
        })
    }
}

#[derive(Debug, Clone)]
pub struct SystemAInstance {
    pub users: Vec<Position>,
    pub targets: Vec<SensingTarget>,
    /// UAV-to-user channels, `M x N_uav`.
    pub channels: Vec<ChannelRealization>,
    pub sensing: SensingGeometry,
}

/// Objective family of a System A run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SystemAObjective {
    /// Two objectives: worst-user SINR and echo power.
    Pareto,
    /// `(1 - mu) eta / eta_ref + mu omega / omega_ref`. `mu = 0` and `mu = 1` are the pure
    /// problems regardless of the references.
    Weighted {
        mu: f64,
        eta_ref: f64,
        omega_ref: f64,
    },
    /// Unit-weight sum of user rates (comparison baseline).
    SumRate,
}

#[derive(Debug, Clone)]
pub struct SystemAProblem {
    codec: GenomeCodec,
    bounds: Vec<(f64, f64)>,
    instance: SystemAInstance,
    noise: f64,
    decoder: DecoderKind,
    objective: SystemAObjective,
}

/// Bi-objective problem `(eta, omega)` with the UAV power budget enforced by repair.
pub fn system_a_problem(scn: &SystemAScenario, seed: u64) -> Result<SystemAProblem> {
    SystemAProblem::new(scn, seed, SystemAObjective::Pareto)
}

/// Weighted single-objective form; `eta_ref` and `omega_ref` normalize each term.
pub fn scalarized_system_a(
    scn: &SystemAScenario,
    seed: u64,
    mu: f64,
    eta_ref: f64,
    omega_ref: f64,
) -> Result<SystemAProblem> {
    if !(0.0..=1.0).contains(&mu) {
        return Err(invalid("mu", format!("{mu} outside [0, 1]")));
    }
    for (name, r) in [("eta_ref", eta_ref), ("omega_ref", omega_ref)] {
        if !(r.is_finite() && r > 0.0) {
            return Err(invalid(name, format!("{r} must be > 0")));
        }
    }
    SystemAProblem::new(
        scn,
        seed,
        SystemAObjective::Weighted {
            mu,
            eta_ref,
            omega_ref,
        },
    )
}

/// Sum-rate baseline sharing codec, channels, and constraints with [`system_a_problem`].
pub fn baseline_weighted_sum_rate(scn: &SystemAScenario, seed: u64) -> Result<SystemAProblem> {
    SystemAProblem::new(scn, seed, SystemAObjective::SumRate)
}

impl SystemAProblem {
    pub fn new(scn: &SystemAScenario, seed: u64, objective: SystemAObjective) -> Result<Self> {
        let instance = scn.instance(seed)?;
        let codec = GenomeCodec::new(
            scn.uav_array.elements(),
            scn.num_users,
            scn.uav_power,
            scn.power_mode,
        )?;
        Ok(Self {
            bounds: codec.bounds(),
            codec,
            instance,
            noise: scn.noise_power,
            decoder: scn.decoder,
            objective,
        })
    }

    pub fn codec(&self) -> &GenomeCodec {
        &self.codec
    }

    pub fn instance(&self) -> &SystemAInstance {
        &self.instance
    }

    pub fn objective(&self) -> SystemAObjective {
        self.objective
    }

    pub fn noise(&self) -> f64 {
        self.noise
    }

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

    pub fn echo_power(&self, w: &PrecoderSet) -> Result<f64> {
        self.instance.sensing.echo_power(w)
    }

    /// `(eta, omega)` for a genome.
    pub fn eta_omega(&self, x: &[f64]) -> Result<(f64, f64)> {
        let w = self.codec.decode(x)?;
        Ok((min_of(&self.sinrs(&w)?), self.echo_power(&w)?))
    }

    pub fn metrics(&self, x: &[f64]) -> Result<LinkMetrics> {
        let w = self.codec.decode(x)?;
        let gains = self
            .instance
            .sensing
            .steering()
            .iter()
            .map(|a| crate::metrics::beampattern_gain(&w, a))
            .collect::<Result<Vec<_>>>()?;
        Ok(LinkMetrics::new(
            self.sinrs(&w)?,
            gains,
            self.echo_power(&w)?,
        ))
    }

    fn score(&self, x: &[f64]) -> Result<Vec<f64>> {
        let w = self.codec.decode(x)?;
        Ok(match self.objective {
            SystemAObjective::Pareto => {
                vec![min_of(&self.sinrs(&w)?), self.echo_power(&w)?]
            }
            SystemAObjective::Weighted { mu: 0.0, .. } => vec![min_of(&self.sinrs(&w)?)],
            SystemAObjective::Weighted { mu: 1.0, .. } => vec![self.echo_power(&w)?],
            SystemAObjective::Weighted {
                mu,
                eta_ref,
                omega_ref,
            } => {
                let eta = min_of(&self.sinrs(&w)?);
                let omega = self.echo_power(&w)?;
                vec![(1.0 - mu) * eta / eta_ref + mu * omega / omega_ref]
            }
            SystemAObjective::SumRate => {
                vec![self.sinrs(&w)?.iter().map(|&s| achievable_rate(s)).sum()]
            }
        })
    }
}

impl Problem for SystemAProblem {
    fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    fn num_objectives(&self) -> usize {
        match self.objective {
            SystemAObjective::Pareto => 2,
            _ => 1,
        }
    }

    fn evaluate(&self, x: &[f64]) -> Evaluation {
        match self.score(x) {
            Ok(obj) => Evaluation::feasible(obj),
            Err(_) => Evaluation::worst(self.num_objectives()),
        }
    }

    fn repair(&self, x: &mut [f64]) {
        self.codec.repair_genome(x);
    }

    fn reference_point(&self) -> Option<Vec<f64>> {
        match self.objective {
            SystemAObjective::Pareto => Some(vec![0.0, 0.0]),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_follow_table() {
        let s = SystemAScenario::default();
        assert_eq!(s.haps_altitude, 20_000.0);
        assert_eq!(s.uav_altitude, 40.0);
        assert_eq!(s.haps_array.elements(), 400);
        assert_eq!(s.uav_array.elements(), 16);
        assert_eq!((s.num_users, s.num_targets, s.user_antennas), (4, 4, 2));
        assert_eq!(s.backhaul_freq, 120e9);
    }

    #[test]
    fn mu_out_of_range() {
        let s = SystemAScenario::default();
        assert!(scalarized_system_a(&s, 0, 1.5, 1.0, 1.0).is_err());
        let bad = SystemAScenario { mu: -0.1, ..s };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn pure_ends_ignore_references() {
        let s = SystemAScenario::default();
        let p0 = scalarized_system_a(&s, 1, 0.0, 123.0, 456.0).unwrap();
        let pe = system_a_problem(&s, 1).unwrap();
        let x: Vec<f64> = (0..p0.dimension())
            .map(|i| ((i * 7 % 13) as f64 - 6.0) * 0.05)
            .collect();
        let (eta, omega) = pe.eta_omega(&x).unwrap();
        assert_eq!(p0.evaluate(&x).objectives, vec![eta]);
        let p1 = scalarized_system_a(&s, 1, 1.0, 123.0, 456.0).unwrap();
        assert_eq!(p1.evaluate(&x).objectives, vec![omega]);
    }
}
