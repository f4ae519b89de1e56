//! Seed batches. Runs are independent, so with the `parallel` feature they
//! are spread over the rayon pool; results always come back in seed order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::engine::run;
use crate::error::Result;
use crate::objectives::Objective;
use crate::types::{FdoConfig, RunResult, SearchSpace};

fn seeded(config: &FdoConfig, seed: u64) -> FdoConfig {
    FdoConfig {
        random_mode: config.random_mode.with_seed(seed),
        ..config.clone()
    }
}

/// One run per seed, on the calling thread.
pub fn run_seeds_sequential<O: Objective + ?Sized>(
    space: &SearchSpace,
    objective: &O,
    config: &FdoConfig,
    seeds: &[u64],
) -> Result<Vec<RunResult>> {
    seeds
        .iter()
        .map(|seed| run(space, objective, &seeded(config, *seed)))
        .collect()
}

/// One run per seed, in parallel when the `parallel` feature is on.
#[cfg(feature = "parallel")]
pub fn run_seeds<O: Objective + ?Sized>(
    space: &SearchSpace,
    objective: &O,
    config: &FdoConfig,
    seeds: &[u64],
) -> Result<Vec<RunResult>> {
    seeds
        .par_iter()
        .map(|seed| run(space, objective, &seeded(config, *seed)))
        .collect()
}

#[cfg(not(feature = "parallel"))]
pub fn run_seeds<O: Objective + ?Sized>(
    space: &SearchSpace,
    objective: &O,
    config: &FdoConfig,
    seeds: &[u64],
) -> Result<Vec<RunResult>> {
    run_seeds_sequential(space, objective, config, seeds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::Benchmark;
    use crate::types::RandomMode;

    #[test]
    fn parallel_and_sequential_agree() {
        let space = SearchSpace::uniform(4, -100.0, 100.0).unwrap();
        let config = FdoConfig {
            population: 8,
            iterations: 40,
            random_mode: RandomMode::SeededUniform { seed: 0 },
            ..FdoConfig::default()
        };
        let seeds: Vec<u64> = (0..12).collect();
        let a = run_seeds(&space, &Benchmark::Sphere, &config, &seeds).unwrap();
        let b = run_seeds_sequential(&space, &Benchmark::Sphere, &config, &seeds).unwrap();
        assert_eq!(a, b);
        let used: Vec<_> = a.iter().map(|r| r.trace.metadata.config.random_mode.seed()).collect();
        assert_eq!(used, seeds.iter().copied().map(Some).collect::<Vec<_>>());
    }
}
