//! Shared value types: the search box, scout bees, run configuration and results.

use serde::{Deserialize, Serialize};

use crate::error::{FdoError, Result};
use crate::trace::RunTrace;

/// Per-dimension box constraints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchSpace {
    pub dimension: usize,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl SearchSpace {
    /// Builds and validates a space from explicit bound vectors.
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        let space = SearchSpace {
            dimension: lower.len(),
            lower,
            upper,
        };
        validate_space(&space)?;
        Ok(space)
    }

    /// Broadcasts a scalar `[lower, upper]` pair to every dimension.
    pub fn uniform(dimension: usize, lower: f64, upper: f64) -> Result<Self> {
        let space = SearchSpace {
            dimension,
            lower: vec![lower; dimension],
            upper: vec![upper; dimension],
        };
        validate_space(&space)?;
        Ok(space)
    }

    pub fn contains(&self, position: &[f64]) -> bool {
        position.len() == self.dimension
            && position
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(x, (lo, hi))| *lo <= *x && *x <= *hi)
    }
}

/// Checks every [`SearchSpace`] invariant.
pub fn validate_space(space: &SearchSpace) -> Result<()> {
    if space.dimension == 0 {
        return Err(FdoError::EmptySpace);
    }
    for bounds in [&space.lower, &space.upper] {
        if bounds.len() != space.dimension {
            return Err(FdoError::DimensionMismatch {
                expected: space.dimension,
                actual: bounds.len(),
            });
        }
    }
    for (d, (lo, hi)) in space.lower.iter().zip(&space.upper).enumerate() {
        // `!(lo < hi)` also rejects NaN bounds
        if !(lo < hi) {
            return Err(FdoError::InvertedBounds {
                dimension: d,
                lower: *lo,
                upper: *hi,
            });
        }
    }
    Ok(())
}

/// What happens to a coordinate that a pace pushes out of the box.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryPolicy {
    /// Project back onto the box.
    #[default]
    Clamp,
    /// Leave positions unconstrained.
    None,
}

/// Projects `position` onto the box under `Clamp`; identity under `None`.
pub fn clamp_position(position: &[f64], space: &SearchSpace, policy: BoundaryPolicy) -> Vec<f64> {
    match policy {
        BoundaryPolicy::None => position.to_vec(),
        BoundaryPolicy::Clamp => position
            .iter()
            .zip(space.lower.iter().zip(&space.upper))
            .map(|(x, (lo, hi))| x.clamp(*lo, *hi))
            .collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    #[default]
    Minimize,
    Maximize,
}

impl Direction {
    /// Strict improvement test: ties are never better.
    pub fn is_better(self, candidate: f64, incumbent: f64) -> bool {
        match self {
            Direction::Minimize => candidate < incumbent,
            Direction::Maximize => candidate > incumbent,
        }
    }

    /// True when `later` does not regress relative to `earlier`.
    pub fn is_no_worse(self, later: f64, earlier: f64) -> bool {
        match self {
            Direction::Minimize => later <= earlier,
            Direction::Maximize => later >= earlier,
        }
    }
}

/// Which generator supplies `r` and the initialization draws.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum RandomMode {
    /// The fixed 50-row table from the worked example.
    TableReplay,
    SeededUniform { seed: u64 },
    Levy { seed: u64, beta: f64 },
}

impl Default for RandomMode {
    fn default() -> Self {
        RandomMode::SeededUniform { seed: 0 }
    }
}

impl RandomMode {
    pub fn levy(seed: u64) -> Self {
        RandomMode::Levy {
            seed,
            beta: crate::random::DEFAULT_LEVY_BETA,
        }
    }

    /// Same mode with a different seed; table replay has no seed and is returned as is.
    pub fn with_seed(self, seed: u64) -> Self {
        match self {
            RandomMode::TableReplay => RandomMode::TableReplay,
            RandomMode::SeededUniform { .. } => RandomMode::SeededUniform { seed },
            RandomMode::Levy { beta, .. } => RandomMode::Levy { seed, beta },
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            RandomMode::TableReplay => None,
            RandomMode::SeededUniform { seed } | RandomMode::Levy { seed, .. } => Some(*seed),
        }
    }
}

/// How the initial swarm is placed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitRule {
    /// `lower + u * (upper - lower)` per coordinate, `u = (r + 1) / 2`.
    #[default]
    UniformBox,
    /// Two-dimensional rule of the worked example: `x1 = r * upper`, `x2 = r * lower`.
    PaperAlternating,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FdoConfig {
    pub population: usize,
    pub iterations: usize,
    /// Weight factor subtracted from the fitness ratio; 0 or 1.
    pub wf: f64,
    pub direction: Direction,
    pub random_mode: RandomMode,
    pub boundary_policy: BoundaryPolicy,
    pub init_rule: InitRule,
}

impl Default for FdoConfig {
    fn default() -> Self {
        FdoConfig {
            population: 30,
            iterations: 500,
            wf: 0.0,
            direction: Direction::Minimize,
            random_mode: RandomMode::default(),
            boundary_policy: BoundaryPolicy::Clamp,
            init_rule: InitRule::UniformBox,
        }
    }
}

impl FdoConfig {
    pub fn validate(&self) -> Result<()> {
        if self.population == 0 {
            return Err(FdoError::InvalidConfig("population must be at least 1".into()));
        }
        if self.iterations == 0 {
            return Err(FdoError::InvalidConfig("iterations must be at least 1".into()));
        }
        if self.wf != 0.0 && self.wf != 1.0 {
            return Err(FdoError::InvalidConfig(format!(
                "wf must be 0 or 1, got {}",
                self.wf
            )));
        }
        if let RandomMode::Levy { beta, .. } = self.random_mode {
            if !(beta > 0.0 && beta <= 2.0) {
                return Err(FdoError::InvalidConfig(format!(
                    "levy beta must lie in (0, 2], got {beta}"
                )));
            }
        }
        Ok(())
    }
}

/// A candidate solution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoutBee {
    pub position: Vec<f64>,
    /// Pace saved from the last accepted move; zero before any move.
    pub pace: Vec<f64>,
    pub fitness: f64,
}

impl ScoutBee {
    pub fn new(position: Vec<f64>, fitness: f64) -> Self {
        let pace = vec![0.0; position.len()];
        ScoutBee {
            position,
            pace,
            fitness,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub best_position: Vec<f64>,
    pub best_fitness: f64,
    pub trace: RunTrace,
    pub evaluations: usize,
}

impl RunResult {
    /// Global best recorded right after initialization.
    pub fn initial_best_fitness(&self) -> f64 {
        self.trace
            .best_history
            .first()
            .map(|entry| entry.fitness)
            .unwrap_or(self.best_fitness)
    }
}
