//! Simulation and optimization toolkit for HAPS-based integrated sensing and communication.
//!
//! Layers, bottom up:
//! - [`geometry`] and [`channel`]: platform placement, UPA steering, free-space loss, Rician fading.
//! - [`metrics`]: beampattern gain, MISO/MIMO SINR with ZF/MMSE/MRC combining, rates, echo power.
//! - [`evolver`]: constrained GA and NSGA-II over a generic [`evolver::Problem`].
//! - [`scenarios`]: the macro-base-station (System B) and UAV-relay (System A) beamforming
//!   problems, their baselines, and parameter sweeps.

pub mod channel;
pub mod error;
pub mod evolver;
pub mod geometry;
pub mod metrics;
pub mod scenarios;

pub use channel::{rician_channel, ChannelRealization, RicianParams};
pub use error::{IsacError, Result};
pub use geometry::{
    dbm_to_watts, direction_between, fspl_gain, steering_vector, watts_to_dbm, ArrayGeometry,
    Direction, LinkBudget, Position,
};
pub use metrics::{
    achievable_rate, beampattern_gain, compute_decoder, sensing_echo_power, sinr_mimo, sinr_miso,
    total_power, DecoderKind, LinkMetrics, PrecoderSet, SensingTarget,
};
