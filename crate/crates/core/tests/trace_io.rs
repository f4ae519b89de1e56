use fdo_core::replay::{run_replay, ReplayFlags};
use fdo_core::trace::{
    read_trace_csv, trace_csv_string, write_runs_csv, write_summary_json, RowDecision,
};
use fdo_core::{run_seeds, summarize_batch, Benchmark, FdoConfig, Objective};

#[test]
fn replay_trace_first_row() {
    let trace = run_replay(ReplayFlags::default()).unwrap().trace;
    let text = trace_csv_string(&trace).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "iteration,bee,x0,x1,pace0,pace1,r0,r1,fw,branch0,branch1,candidate_fitness,decision,global_best_fitness"
    );
    assert_eq!(lines.next().unwrap(), "1,1,-49,47,0,0,-0.49,-0.47,,,,4610,Init,4610");
    let rows = read_trace_csv(text.as_bytes()).unwrap();
    assert_eq!(rows[0].iteration, 1);
    assert_eq!(rows[0].bee, 1);
    assert_eq!(rows[0].candidate_fitness, 4610.0);
    // 3 init rows, then per bee a fresh row and, when rejected, a saved-pace row
    assert_eq!(rows.len(), 3 + 2 + 2 + 1);
    assert_eq!(rows[7].decision, RowDecision::AcceptedFresh);
}

/// Recomputes the batch statistics from the per-run CSV with a separate,
/// naive implementation.
#[test]
fn summary_matches_recomputation_from_runs_csv() {
    let space = Benchmark::Sphere.suggested_bounds(5).unwrap();
    let config = FdoConfig {
        population: 10,
        iterations: 60,
        ..FdoConfig::default()
    };
    let seeds: Vec<u64> = (100..130).collect();
    let results = run_seeds(&space, &Benchmark::Sphere, &config, &seeds).unwrap();
    let summary = summarize_batch(&results).unwrap();

    let mut csv_bytes = Vec::new();
    write_runs_csv(&results, &mut csv_bytes).unwrap();
    let text = String::from_utf8(csv_bytes).unwrap();
    let mut finals: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
        .collect();
    assert_eq!(finals.len(), 30);

    let n = finals.len() as f64;
    let mut total = 0.0;
    for f in &finals {
        total += f;
    }
    let mean = total / n;
    let mut ss = 0.0;
    for f in &finals {
        ss += (f - mean) * (f - mean);
    }
    let std = (ss / (n - 1.0)).sqrt();
    finals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = 0.5 * (finals[14] + finals[15]);

    let rel = |a: f64, b: f64| (a - b).abs() <= 1e-8 * a.abs().max(b.abs()).max(f64::MIN_POSITIVE);
    assert!(rel(summary.mean, mean), "{} vs {}", summary.mean, mean);
    assert!(rel(summary.std, std), "{} vs {}", summary.std, std);
    assert!(rel(summary.median, median));
    assert!(rel(summary.best, finals[0]));
    assert!(rel(summary.worst, finals[29]));
    assert!(summary.best <= summary.median && summary.median <= summary.worst);
}

#[test]
fn summary_json_has_contract_keys() {
    let space = Benchmark::NegatedSphere.suggested_bounds(3).unwrap();
    let config = FdoConfig {
        population: 4,
        iterations: 10,
        direction: Benchmark::NegatedSphere.direction(),
        ..FdoConfig::default()
    };
    let results = run_seeds(&space, &Benchmark::NegatedSphere, &config, &[1, 2, 3]).unwrap();
    let summary = summarize_batch(&results).unwrap();
    // under maximization the best final is the largest
    assert!(summary.best >= summary.median && summary.median >= summary.worst);
    let mut buf = Vec::new();
    write_summary_json(&summary, &mut buf).unwrap();
    let value: serde_json::Value = serde_json::from_slice(&buf).unwrap();
    for key in [
        "objective", "config", "seeds", "finals", "mean", "std", "median", "best", "worst", "evaluations",
    ] {
        assert!(value.get(key).is_some(), "missing {key}");
    }
    assert_eq!(value["seeds"], serde_json::json!([1, 2, 3]));
    assert_eq!(value["objective"], "negated-sphere");
}
