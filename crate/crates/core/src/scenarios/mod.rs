//! Beamforming problems that bind the physics layer to the evolvers.
//!
//! - System B: the HAPS is a macro base station serving single- or multi-antenna users and
//!   sensing ground targets with one planar array.
//! - System A: the HAPS coordinates a UAV that serves users at sub-6 GHz and illuminates
//!   targets whose echoes reach the HAPS over a sub-THz hop.

mod codec;
mod layout;
mod sweeps;
mod system_a;
mod system_b;

pub use codec::{GenomeCodec, PowerMode};
pub use layout::{angular_spread, polar_ground, uniform_disk};
pub use sweeps::{
    altitude_sweep, median, mu_sweep, pareto_front, threshold_sweep, user_count_sweep, AltitudeRow,
    GainThresholds, MuRow, ParetoRow, ThresholdRow, UserCountRow,
};
pub use system_a::{
    baseline_weighted_sum_rate, scalarized_system_a, system_a_problem, SystemAInstance,
    SystemAObjective, SystemAProblem, SystemAScenario,
};
pub use system_b::{
    system_b_dual_problem, system_b_problem, SystemBInstance, SystemBMode, SystemBProblem,
    SystemBScenario,
};

use crate::evolver::stream_rng;
use rand_chacha::ChaCha8Rng;

/// Stream for ground placement, independent of every evolver stream.
pub(crate) fn layout_rng(seed: u64) -> ChaCha8Rng {
    stream_rng(seed, u64::MAX - 1, 0)
}

/// Stream for the small-scale fading of user `k`.
pub(crate) fn channel_rng(seed: u64, k: usize) -> ChaCha8Rng {
    stream_rng(seed, u64::MAX - 2, k as u64)
}
