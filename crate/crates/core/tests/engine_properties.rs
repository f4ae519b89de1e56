use fdo_core::engine::guarded_fitness_weight;
use fdo_core::trace::RowDecision;
use fdo_core::{
    fitness_weight, run, Benchmark, Branch, Decision, Direction, FdoConfig, Objective, RandomMode,
    RunResult,
};
use proptest::prelude::*;

fn run_case(objective: Benchmark, dim: usize, mode: RandomMode, wf: f64) -> RunResult {
    let space = objective.suggested_bounds(dim).unwrap();
    let config = FdoConfig {
        population: 6,
        iterations: 40,
        wf,
        direction: objective.direction(),
        random_mode: mode,
        ..FdoConfig::default()
    };
    run(&space, &objective, &config).unwrap()
}

fn objectives() -> impl Strategy<Value = (Benchmark, usize)> {
    prop_oneof![
        Just((Benchmark::Sphere, 3)),
        Just((Benchmark::Rosenbrock, 4)),
        Just((Benchmark::Rastrigin, 5)),
        Just((Benchmark::Ackley, 2)),
        Just((Benchmark::NegatedSphere, 3)),
    ]
}

fn modes() -> impl Strategy<Value = RandomMode> {
    (any::<u64>(), prop::bool::ANY).prop_map(|(seed, levy)| {
        if levy {
            RandomMode::levy(seed)
        } else {
            RandomMode::SeededUniform { seed }
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn step_invariants_hold((objective, dim) in objectives(), mode in modes(), wf in prop_oneof![Just(0.0), Just(1.0)]) {
        let result = run_case(objective, dim, mode, wf);
        let direction = objective.direction();
        let space = objective.suggested_bounds(dim).unwrap();

        // evaluation accounting
        let candidates = result.trace.records.iter().filter(|r| r.decision != RowDecision::Init).count();
        prop_assert_eq!(result.evaluations, 6 + candidates);

        for step in &result.trace.steps {
            let o = &step.outcome;
            // branch partition and guards
            for (d, branch) in o.branch.iter().enumerate() {
                let special = o.fw_used <= 0.0 || o.fw_used >= 1.0 || o.prior_fitness == 0.0;
                let expected = if special {
                    Branch::SpecialEq43
                } else if o.r_used[d] < 0.0 {
                    Branch::NegativeEq44
                } else {
                    Branch::NonnegativeEq45
                };
                prop_assert_eq!(*branch, expected);
            }
            prop_assert!(space.contains(&o.candidate_position));
            match o.decision {
                Decision::AcceptedFresh => {
                    prop_assert!(direction.is_better(o.candidate_fitness, o.prior_fitness));
                    prop_assert!(o.saved_attempt.is_none());
                }
                Decision::AcceptedWithSavedPace => {
                    let saved = o.saved_attempt.as_ref().unwrap();
                    prop_assert!(direction.is_better(saved.fitness, o.prior_fitness));
                    prop_assert!(!direction.is_better(o.candidate_fitness, o.prior_fitness));
                }
                Decision::Stayed => {
                    let saved = o.saved_attempt.as_ref().unwrap();
                    prop_assert!(!direction.is_better(saved.fitness, o.prior_fitness));
                }
            }
        }

        // result consistency
        prop_assert_eq!(result.best_fitness, objective.evaluate(&result.best_position));
        for entry in &result.trace.best_history {
            prop_assert!(direction.is_no_worse(result.best_fitness, entry.fitness));
        }
    }

    #[test]
    fn determinism((objective, dim) in objectives(), mode in modes()) {
        prop_assert_eq!(run_case(objective, dim, mode, 0.0), run_case(objective, dim, mode, 0.0));
    }

    #[test]
    fn fitness_weight_scale_invariance(cur in 1e-3f64..1e6, best in 1e-3f64..1e6, k in 1e-3f64..1e3) {
        for direction in [Direction::Minimize, Direction::Maximize] {
            let a = fitness_weight(cur, best, 0.0, direction);
            let b = fitness_weight(cur * k, best * k, 0.0, direction);
            prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
        }
        prop_assert_eq!(fitness_weight(cur, cur, 0.0, Direction::Minimize), 1.0);
    }
}

/// Replays a run step by step against the trace: after every step the bee's
/// recorded position, pace and fitness follow from the decision alone.
#[test]
fn pace_persistence_and_stay_identity() {
    let objective = Benchmark::Rastrigin;
    let space = objective.suggested_bounds(4).unwrap();
    let config = FdoConfig {
        population: 5,
        iterations: 60,
        random_mode: RandomMode::SeededUniform { seed: 77 },
        ..FdoConfig::default()
    };
    let result = run(&space, &objective, &config).unwrap();
    let mut bees: Vec<(Vec<f64>, Vec<f64>, f64)> = result
        .trace
        .records
        .iter()
        .filter(|r| r.decision == RowDecision::Init)
        .map(|r| (r.position.clone(), vec![0.0; 4], r.candidate_fitness))
        .collect();
    for step in &result.trace.steps {
        let o = &step.outcome;
        let bee = &mut bees[o.bee_index];
        assert_eq!(bee.2, o.prior_fitness);
        match o.decision {
            Decision::AcceptedFresh => {
                *bee = (o.candidate_position.clone(), o.pace.clone(), o.candidate_fitness);
            }
            Decision::AcceptedWithSavedPace => {
                let saved = o.saved_attempt.as_ref().unwrap();
                assert_eq!(saved.pace, bee.1);
                bee.0 = saved.position.clone();
                bee.2 = saved.fitness;
            }
            Decision::Stayed => {
                assert_eq!(o.saved_attempt.as_ref().unwrap().pace, bee.1);
            }
        }
    }
}

#[test]
fn zero_denominator_routes_to_special_branch() {
    assert_eq!(guarded_fitness_weight(0.0, 3.0, 0.0, Direction::Minimize), 0.0);
    let (_, branch) = fdo_core::pace_for_dimension(4.0, 1.0, 0.0, 0.5, 0.0);
    assert_eq!(branch, Branch::SpecialEq43);
}

#[test]
fn wf_one_damps_weights_below_zero() {
    // with wf = 1 every non-degenerate minimization weight is <= 0
    let result = run_case(Benchmark::Sphere, 3, RandomMode::SeededUniform { seed: 5 }, 1.0);
    assert!(result
        .trace
        .steps
        .iter()
        .all(|s| s.outcome.fw_used <= 0.0 && s.outcome.branch.iter().all(|b| *b == Branch::SpecialEq43)));
}
