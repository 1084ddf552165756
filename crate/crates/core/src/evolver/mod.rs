//! Real-coded evolutionary optimizers: a constrained single-objective GA and NSGA-II.
//!
//! Both maximize. Constraints are handled by feasibility-first comparison: a feasible
//! individual beats any infeasible one, and between infeasible individuals the smaller
//! aggregate violation wins.

mod benchmarks;
mod config;
mod ga;
mod hypervolume;
mod nsga2;
mod problem;
mod rng;
mod sorting;
mod variation;

pub use benchmarks::{igd, zdt1_front, BoxConstrained, ConstantProblem, SphereProblem, Zdt1};
pub use config::{EvolverConfig, EvolverPreset};
pub use ga::{run_ga, GaOutcome, GenerationStats};
pub use hypervolume::hypervolume_2d;
pub use nsga2::{run_nsga2, Nsga2Outcome, ParetoFront};
pub use problem::{evaluate, Evaluation, Individual, Problem};
pub use rng::stream_rng;
pub use sorting::{
    brute_force_fronts, crowding_distance, dominates, feasibility_cmp, non_dominated_sort,
};
