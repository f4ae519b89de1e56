//! The Fitness Dependent Optimizer.
//!
//! Each scout bee moves by a pace added to its position. The pace depends on
//! a fitness weight, the ratio between the global best fitness and the bee's
//! own fitness, and on the sign of a random draw `r`:
//!
//! * weight `<= 0`, weight `>= 1`, or a zero fitness: `pace = x * r`
//! * otherwise, `r < 0`: `pace = -(x - x*) * fw`
//! * otherwise, `r >= 0`: `pace = (x - x*) * fw`
//!
//! A fresh pace that improves the bee is accepted and saved. Otherwise the
//! saved pace from the bee's last accepted move is tried, and if that does
//! not improve either the bee stays put.

use serde::{Deserialize, Serialize};

use crate::error::{FdoError, Result};
use crate::objectives::Objective;
use crate::random::RandomSource;
use crate::trace::{BestEntry, RunTrace, TraceMetadata};
use crate::types::{
    clamp_position, validate_space, BoundaryPolicy, Direction, FdoConfig, InitRule, RunResult,
    ScoutBee, SearchSpace,
};

/// Which pace rule produced a coordinate's pace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    /// `x * r`, for degenerate weights and zero fitness.
    SpecialEq43,
    /// `-(x - x*) * fw`, taken when `r < 0`.
    NegativeEq44,
    /// `(x - x*) * fw`, taken when `r >= 0`.
    NonnegativeEq45,
}

impl Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::SpecialEq43 => "SpecialEq43",
            Branch::NegativeEq44 => "NegativeEq44",
            Branch::NonnegativeEq45 => "NonnegativeEq45",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [Branch::SpecialEq43, Branch::NegativeEq44, Branch::NonnegativeEq45]
            .into_iter()
            .find(|b| b.as_str() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Decision {
    AcceptedFresh,
    AcceptedWithSavedPace,
    Stayed,
}

/// Evaluation of the fallback candidate built from the bee's saved pace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SavedAttempt {
    pub pace: Vec<f64>,
    pub position: Vec<f64>,
    pub fitness: f64,
}

/// Everything that happened during one bee's step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepOutcome {
    pub bee_index: usize,
    pub prior_fitness: f64,
    pub fw_used: f64,
    pub r_used: Vec<f64>,
    pub pace: Vec<f64>,
    pub branch: Vec<Branch>,
    pub candidate_position: Vec<f64>,
    pub candidate_fitness: f64,
    pub saved_attempt: Option<SavedAttempt>,
    pub decision: Decision,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Swarm {
    pub bees: Vec<ScoutBee>,
    pub global_best_position: Vec<f64>,
    pub global_best_fitness: f64,
    pub iteration: usize,
    pub direction: Direction,
}

impl Swarm {
    /// Builds a swarm from evaluated bees; the best one becomes the global best.
    pub fn from_bees(bees: Vec<ScoutBee>, direction: Direction) -> Self {
        let mut best = 0;
        for (i, bee) in bees.iter().enumerate().skip(1) {
            if direction.is_better(bee.fitness, bees[best].fitness) {
                best = i;
            }
        }
        Swarm {
            global_best_position: bees[best].position.clone(),
            global_best_fitness: bees[best].fitness,
            bees,
            iteration: 1,
            direction,
        }
    }

    /// Promotes bee `index` to global best if it beats the incumbent.
    pub fn refresh_best(&mut self, index: usize) -> bool {
        let bee = &self.bees[index];
        if self.direction.is_better(bee.fitness, self.global_best_fitness) {
            self.global_best_fitness = bee.fitness;
            self.global_best_position = bee.position.clone();
            true
        } else {
            false
        }
    }
}

pub(crate) fn evaluate<O: Objective + ?Sized>(objective: &O, position: &[f64]) -> Result<f64> {
    let value = objective.evaluate(position);
    if value.is_finite() {
        Ok(value)
    } else {
        Err(FdoError::NonFiniteFitness {
            value,
            position: position.to_vec(),
        })
    }
}

/// Initial placement of the swarm, together with the draws used for each bee.
#[derive(Debug, Clone)]
pub struct InitializedSwarm {
    pub swarm: Swarm,
    pub draws: Vec<Vec<f64>>,
}

pub fn init_swarm<O: Objective + ?Sized>(
    space: &SearchSpace,
    config: &FdoConfig,
    source: &mut RandomSource,
    objective: &O,
) -> Result<InitializedSwarm> {
    validate_space(space)?;
    config.validate()?;
    if config.init_rule == InitRule::PaperAlternating && space.dimension != 2 {
        return Err(FdoError::PaperAlternatingRequiresTwoDims(space.dimension));
    }
    let mut bees = Vec::with_capacity(config.population);
    let mut draws = Vec::with_capacity(config.population);
    for _ in 0..config.population {
        let r = (0..space.dimension)
            .map(|_| source.next_init_draw())
            .collect::<Result<Vec<f64>>>()?;
        let position: Vec<f64> = match config.init_rule {
            InitRule::PaperAlternating => vec![r[0] * space.upper[0], r[1] * space.lower[1]],
            InitRule::UniformBox => r
                .iter()
                .enumerate()
                .map(|(d, r)| {
                    let u = ((r + 1.0) / 2.0).clamp(0.0, 1.0);
                    space.lower[d] + u * (space.upper[d] - space.lower[d])
                })
                .collect(),
        };
        let fitness = evaluate(objective, &position)?;
        bees.push(ScoutBee::new(position, fitness));
        draws.push(r);
    }
    Ok(InitializedSwarm {
        swarm: Swarm::from_bees(bees, config.direction),
        draws,
    })
}

/// Fitness weight of a bee relative to the global best, shifted by `wf`.
///
/// Minimization uses `|best / current|`, maximization `|current / best|`.
/// The caller intercepts a zero denominator.
pub fn fitness_weight(current_fitness: f64, best_fitness: f64, wf: f64, direction: Direction) -> f64 {
    let ratio = match direction {
        Direction::Minimize => best_fitness / current_fitness,
        Direction::Maximize => current_fitness / best_fitness,
    };
    ratio.abs() - wf
}

/// Weight actually used in a step: zero when the ratio's denominator is zero.
pub fn guarded_fitness_weight(
    current_fitness: f64,
    best_fitness: f64,
    wf: f64,
    direction: Direction,
) -> f64 {
    let denominator = match direction {
        Direction::Minimize => current_fitness,
        Direction::Maximize => best_fitness,
    };
    if denominator == 0.0 {
        0.0
    } else {
        fitness_weight(current_fitness, best_fitness, wf, direction)
    }
}

/// Pace for one coordinate and the rule that produced it.
#[allow(clippy::neg_multiply)]
pub fn pace_for_dimension(x: f64, best_x: f64, fw: f64, r: f64, current_fitness: f64) -> (f64, Branch) {
    if fw <= 0.0 || fw >= 1.0 || current_fitness == 0.0 {
        (x * r, Branch::SpecialEq43)
    } else if r < 0.0 {
        ((x - best_x) * fw * -1.0, Branch::NegativeEq44)
    } else {
        ((x - best_x) * fw, Branch::NonnegativeEq45)
    }
}

/// `position + pace`, then the boundary policy.
pub fn candidate_position(
    bee: &ScoutBee,
    pace: &[f64],
    space: &SearchSpace,
    policy: BoundaryPolicy,
) -> Vec<f64> {
    let moved: Vec<f64> = bee.position.iter().zip(pace).map(|(x, p)| x + p).collect();
    clamp_position(&moved, space, policy)
}

/// Alternate step rules used to reproduce the worked example's arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub(crate) enum StepVariant {
    #[default]
    Standard,
    /// When `fw == 1` exactly, use `-(x - x*) * fw` in place of `x * r`,
    /// and evaluate the pace vector itself as the candidate.
    PaperLiteralUnitWeight,
}

/// Advances bee `index` by one step and refreshes the global best.
pub fn step_bee<O: Objective + ?Sized>(
    swarm: &mut Swarm,
    index: usize,
    objective: &O,
    space: &SearchSpace,
    config: &FdoConfig,
    source: &mut RandomSource,
) -> Result<StepOutcome> {
    step_bee_with(swarm, index, objective, space, config, source, StepVariant::Standard)
}

#[allow(clippy::neg_multiply)]
pub(crate) fn step_bee_with<O: Objective + ?Sized>(
    swarm: &mut Swarm,
    index: usize,
    objective: &O,
    space: &SearchSpace,
    config: &FdoConfig,
    source: &mut RandomSource,
    variant: StepVariant,
) -> Result<StepOutcome> {
    let direction = config.direction;
    let r_used = (0..space.dimension)
        .map(|_| source.next_r())
        .collect::<Result<Vec<f64>>>()?;

    let bee = &swarm.bees[index];
    let prior_fitness = bee.fitness;
    let fw = guarded_fitness_weight(bee.fitness, swarm.global_best_fitness, config.wf, direction);
    let literal = variant == StepVariant::PaperLiteralUnitWeight && fw == 1.0;

    let (pace, branch): (Vec<f64>, Vec<Branch>) = bee
        .position
        .iter()
        .zip(&swarm.global_best_position)
        .zip(&r_used)
        .map(|((x, best_x), r)| {
            if literal {
                ((x - best_x) * fw * -1.0, Branch::NegativeEq44)
            } else {
                pace_for_dimension(*x, *best_x, fw, *r, bee.fitness)
            }
        })
        .unzip();

    let candidate = if literal {
        clamp_position(&pace, space, config.boundary_policy)
    } else {
        candidate_position(bee, &pace, space, config.boundary_policy)
    };
    let candidate_fitness = evaluate(objective, &candidate)?;

    let mut saved_attempt = None;
    let decision = if direction.is_better(candidate_fitness, prior_fitness) {
        let bee = &mut swarm.bees[index];
        bee.position = candidate.clone();
        bee.pace = pace.clone();
        bee.fitness = candidate_fitness;
        Decision::AcceptedFresh
    } else {
        let saved_pace = bee.pace.clone();
        let fallback = candidate_position(bee, &saved_pace, space, config.boundary_policy);
        let fallback_fitness = evaluate(objective, &fallback)?;
        saved_attempt = Some(SavedAttempt {
            pace: saved_pace,
            position: fallback.clone(),
            fitness: fallback_fitness,
        });
        if direction.is_better(fallback_fitness, prior_fitness) {
            let bee = &mut swarm.bees[index];
            bee.position = fallback;
            bee.fitness = fallback_fitness;
            Decision::AcceptedWithSavedPace
        } else {
            Decision::Stayed
        }
    };
    if decision != Decision::Stayed {
        swarm.refresh_best(index);
    }

    Ok(StepOutcome {
        bee_index: index,
        prior_fitness,
        fw_used: fw,
        r_used,
        pace,
        branch,
        candidate_position: candidate,
        candidate_fitness,
        saved_attempt,
        decision,
    })
}

/// How the first iteration's swarm is obtained.
#[derive(Debug, Clone)]
pub(crate) enum Start {
    Draw,
    Positions(Vec<Vec<f64>>),
}

/// Runs the optimizer: initialization counts as iteration 1, followed by
/// `iterations - 1` sweeps over the bees in index order.
pub fn run<O: Objective + ?Sized>(
    space: &SearchSpace,
    objective: &O,
    config: &FdoConfig,
) -> Result<RunResult> {
    run_internal(space, objective, config, Start::Draw, StepVariant::Standard)
}

/// Like [`run`], but the swarm starts at the given positions; no draws are
/// spent on initialization.
pub fn run_from_positions<O: Objective + ?Sized>(
    space: &SearchSpace,
    objective: &O,
    config: &FdoConfig,
    positions: Vec<Vec<f64>>,
) -> Result<RunResult> {
    run_internal(space, objective, config, Start::Positions(positions), StepVariant::Standard)
}

pub(crate) fn run_internal<O: Objective + ?Sized>(
    space: &SearchSpace,
    objective: &O,
    config: &FdoConfig,
    start: Start,
    variant: StepVariant,
) -> Result<RunResult> {
    validate_space(space)?;
    config.validate()?;
    let mut source = RandomSource::new(config.random_mode);
    let metadata = TraceMetadata {
        objective: objective.name().to_string(),
        dimension: space.dimension,
        config: config.clone(),
        source: source.describe(),
    };
    let mut trace = RunTrace::new(metadata);

    let (mut swarm, draws) = match start {
        Start::Draw => {
            let init = init_swarm(space, config, &mut source, objective)?;
            (init.swarm, init.draws)
        }
        Start::Positions(positions) => {
            if positions.len() != config.population {
                return Err(FdoError::InvalidConfig(format!(
                    "expected {} start positions, got {}",
                    config.population,
                    positions.len()
                )));
            }
            let mut bees = Vec::with_capacity(positions.len());
            for p in positions {
                if p.len() != space.dimension {
                    return Err(FdoError::DimensionMismatch {
                        expected: space.dimension,
                        actual: p.len(),
                    });
                }
                let fitness = evaluate(objective, &p)?;
                bees.push(ScoutBee::new(p, fitness));
            }
            let draws = vec![Vec::new(); bees.len()];
            (Swarm::from_bees(bees, config.direction), draws)
        }
    };
    let mut evaluations = swarm.bees.len();

    let mut running_best = f64::NAN;
    for (i, (bee, r)) in swarm.bees.iter().zip(&draws).enumerate() {
        if i == 0 || config.direction.is_better(bee.fitness, running_best) {
            running_best = bee.fitness;
        }
        trace.push_init(i, bee, r, running_best);
    }
    trace.push_best(BestEntry {
        iteration: 1,
        fitness: swarm.global_best_fitness,
        position: swarm.global_best_position.clone(),
    });

    for iteration in 2..=config.iterations {
        swarm.iteration = iteration;
        for index in 0..swarm.bees.len() {
            let best_before = swarm.global_best_fitness;
            let outcome =
                step_bee_with(&mut swarm, index, objective, space, config, &mut source, variant)?;
            evaluations += 1 + usize::from(outcome.saved_attempt.is_some());
            trace.push_step(iteration, outcome, best_before, swarm.global_best_fitness);
        }
        trace.push_best(BestEntry {
            iteration,
            fitness: swarm.global_best_fitness,
            position: swarm.global_best_position.clone(),
        });
    }

    Ok(RunResult {
        best_position: swarm.global_best_position,
        best_fitness: swarm.global_best_fitness,
        trace,
        evaluations,
    })
}
