//! Fitness Dependent Optimizer (FDO): a bee-swarm metaheuristic in which each
//! scout bee's pace is scaled by how its fitness compares to the global best.
//!
//! The crate provides the optimizer itself ([`engine`]), interchangeable
//! random sources including a fixed replay table and Levy flights
//! ([`random`]), a catalog of objectives ([`objectives`]), a deterministic
//! replay of the sphere worked example ([`replay`]), and CSV/JSON traces
//! ([`trace`]). Seed batches run on rayon when the `parallel` feature is on
//! ([`batch`]).

// negated float comparisons are used on purpose so that NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod batch;
pub mod engine;
pub mod error;
pub mod objectives;
pub mod random;
pub mod replay;
pub mod trace;
pub mod types;

pub use batch::{run_seeds, run_seeds_sequential};
pub use engine::{
    candidate_position, fitness_weight, guarded_fitness_weight, init_swarm, pace_for_dimension,
    run, run_from_positions, step_bee, Branch, Decision, StepOutcome, Swarm,
};
pub use error::{FdoError, Result};
pub use objectives::{Benchmark, ClusterHeadObjective, ClusterScenario, Objective};
pub use random::{RandomSource, RandomTable};
pub use trace::{summarize_batch, BatchSummary, RunTrace, TraceRecord};
pub use types::{
    clamp_position, validate_space, BoundaryPolicy, Direction, FdoConfig, InitRule, RandomMode,
    RunResult, ScoutBee, SearchSpace,
};
