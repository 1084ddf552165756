use crate::error::{IsacError, Result};

/// Named evolver budgets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvolverPreset {
    /// Population 100, 2000 generations.
    Desk,
    /// Population and generation counts of the full-scale study.
    Paper,
}

impl EvolverPreset {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "desk" => Some(Self::Desk),
            "paper" => Some(Self::Paper),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Desk => "desk",
            Self::Paper => "paper",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolverConfig {
    pub population_size: usize,
    pub generations: usize,
    /// Share of non-elite offspring produced by arithmetic crossover; the rest are mutated.
    pub crossover_fraction: f64,
    /// Initial mutation standard deviation as a fraction of each dimension's range.
    pub mutation_sigma0: f64,
    /// Per-generation geometric decay of the mutation standard deviation. The size-based
    /// constructors pick it so that the last generation mutates at 5% of `mutation_sigma0`.
    pub sigma_decay: f64,
    pub tournament_size: usize,
    /// Individuals copied unchanged into the next GA generation.
    pub elite_count: usize,
    pub seed: u64,
}

impl Default for EvolverConfig {
    fn default() -> Self {
        Self::desk(0)
    }
}

/// Mutation scale at the final generation relative to the first.
const FINAL_SIGMA_RATIO: f64 = 0.05;

impl EvolverConfig {
    pub fn with_size(population_size: usize, generations: usize, seed: u64) -> Self {
        let span = generations.saturating_sub(1).max(1) as f64;
        Self {
            population_size,
            generations,
            crossover_fraction: 0.2,
            mutation_sigma0: 0.2,
            sigma_decay: FINAL_SIGMA_RATIO.powf(1.0 / span),
            tournament_size: 2,
            elite_count: (population_size / 20).max(1),
            seed,
        }
    }

    pub fn desk(seed: u64) -> Self {
        Self::with_size(100, 2000, seed)
    }

    /// Mutation standard deviation (fraction of range) used in generation `gen >= 1`.
    pub fn sigma_at(&self, gen: usize) -> f64 {
        self.mutation_sigma0 * self.sigma_decay.powi(gen.saturating_sub(1) as i32)
    }

    /// Full-scale budget used with NSGA-II for the UAV relay system.
    pub fn paper_system_a(seed: u64) -> Self {
        Self::with_size(1700, 5000, seed)
    }

    /// Full-scale budget used with the GA for the macro base station system.
    pub fn paper_system_b(seed: u64) -> Self {
        Self::with_size(2500, 1500, seed)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(IsacError::Config(m));
        if self.population_size < 4 || !self.population_size.is_multiple_of(2) {
            return fail(format!(
                "population_size {} must be even and >= 4",
                self.population_size
            ));
        }
        if self.generations < 1 {
            return fail("generations must be >= 1".into());
        }
        if !(0.0..=1.0).contains(&self.crossover_fraction) {
            return fail(format!(
                "crossover_fraction {} outside [0, 1]",
                self.crossover_fraction
            ));
        }
        if !(self.mutation_sigma0.is_finite() && self.mutation_sigma0 >= 0.0) {
            return fail(format!(
                "mutation_sigma0 {} must be >= 0",
                self.mutation_sigma0
            ));
        }
        if !(0.0..=1.0).contains(&self.sigma_decay) {
            return fail(format!("sigma_decay {} outside [0, 1]", self.sigma_decay));
        }
        if self.tournament_size < 1 || self.tournament_size > self.population_size {
            return fail(format!(
                "tournament_size {} outside [1, population_size]",
                self.tournament_size
            ));
        }
        if self.elite_count >= self.population_size {
            return fail(format!(
                "elite_count {} must be below population_size",
                self.elite_count
            ));
        }
        Ok(())
    }
}
