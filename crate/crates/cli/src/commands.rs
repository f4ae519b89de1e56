use std::fs;
use std::io::Write;
use std::path::Path;

use fdo_core::objectives::{ClusterHeadObjective, ClusterScenario};
use fdo_core::replay::{fixture_checks, render_report, run_replay, ReplayFlags};
use fdo_core::trace::{write_runs_csv, write_summary_json, write_trace_csv_file};
use fdo_core::{
    run, run_seeds, summarize_batch, Benchmark, FdoConfig, Objective, RunResult, SearchSpace,
};

use crate::settings::{ReplayArgs, Settings};
use crate::CliError;

/// An objective together with the box it will be searched in.
pub struct Problem {
    pub objective: Box<dyn Objective>,
    pub space: SearchSpace,
}

pub fn build_problem(name: &str, settings: &Settings) -> Result<Problem, CliError> {
    let objective: Box<dyn Objective> = if name == "cluster" {
        let path = settings
            .scenario
            .as_ref()
            .ok_or_else(|| CliError::Config("the cluster objective needs --scenario".into()))?;
        let scenario = ClusterScenario::load(path).map_err(|e| match e {
            fdo_core::FdoError::Io(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => CliError::Config(other.to_string()),
        })?;
        Box::new(ClusterHeadObjective::new(scenario))
    } else {
        Box::new(Benchmark::from_name(name).map_err(|e| CliError::Config(e.to_string()))?)
    };
    let dim = match (objective.fixed_dimension(), settings.dim) {
        (Some(fixed), Some(d)) if fixed != d => {
            return Err(CliError::Config(format!(
                "{name} has dimension {fixed}, but --dim {d} was given"
            )))
        }
        (Some(fixed), _) => fixed,
        (None, d) => d.unwrap_or(2),
    };
    let space = match settings.bounds {
        Some((lo, hi)) => SearchSpace::uniform(dim, lo, hi),
        None => objective.suggested_bounds(dim),
    }
    .map_err(|e| CliError::Config(e.to_string()))?;
    Ok(Problem { objective, space })
}

fn config_for(problem: &Problem, settings: &Settings, seed: u64) -> FdoConfig {
    FdoConfig {
        direction: problem.objective.direction(),
        ..settings.fdo_config(seed)
    }
}

fn create_dir(path: &Path) -> Result<(), CliError> {
    fs::create_dir_all(path)
        .map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", path.display())))
}

fn write_json(path: &Path, results: &[RunResult]) -> Result<(), CliError> {
    let summary = summarize_batch(results)?;
    write_summary_json(&summary, fs::File::create(path)?)?;
    Ok(())
}

fn fmt_position(p: &[f64]) -> String {
    let parts: Vec<String> = p.iter().map(|x| format!("{x:.6}")).collect();
    format!("[{}]", parts.join(", "))
}

pub fn cmd_run(settings: &Settings, stdout: &mut dyn Write) -> Result<(), CliError> {
    if settings.objectives.len() != 1 {
        return Err(CliError::Config("`run` takes exactly one objective".into()));
    }
    let problem = build_problem(&settings.objectives[0], settings)?;
    let seed = settings.seeds[0];
    let result = run(&problem.space, problem.objective.as_ref(), &config_for(&problem, settings, seed))?;

    create_dir(&settings.out)?;
    write_trace_csv_file(&result.trace, &settings.out.join("trace.csv"))?;
    write_json(&settings.out.join("summary.json"), std::slice::from_ref(&result))?;

    writeln!(stdout, "objective: {}", problem.objective.name())?;
    writeln!(stdout, "evaluations: {}", result.evaluations)?;
    writeln!(stdout, "best fitness: {}", result.best_fitness)?;
    writeln!(stdout, "best position: {}", fmt_position(&result.best_position))?;
    Ok(())
}

pub fn cmd_bench(settings: &Settings, stdout: &mut dyn Write) -> Result<(), CliError> {
    let problems = settings
        .objectives
        .iter()
        .map(|name| build_problem(name, settings))
        .collect::<Result<Vec<_>, _>>()?;
    writeln!(
        stdout,
        "{:<16} {:>5} {:>14} {:>14} {:>14} {:>14} {:>14}",
        "objective", "runs", "mean", "std", "median", "best", "worst"
    )?;
    for problem in &problems {
        let config = config_for(problem, settings, 0);
        let results = run_seeds(&problem.space, problem.objective.as_ref(), &config, &settings.seeds)?;

        let dir = settings.out.join(problem.objective.name());
        create_dir(&dir)?;
        for (seed, result) in settings.seeds.iter().zip(&results) {
            write_trace_csv_file(&result.trace, &dir.join(format!("seed-{seed}.csv")))?;
        }
        write_runs_csv(&results, fs::File::create(dir.join("runs.csv"))?)?;
        write_json(&dir.join("summary.json"), &results)?;

        let s = summarize_batch(&results)?;
        writeln!(
            stdout,
            "{:<16} {:>5} {:>14.6e} {:>14.6e} {:>14.6e} {:>14.6e} {:>14.6e}",
            s.objective,
            s.finals.len(),
            s.mean,
            s.std,
            s.median,
            s.best,
            s.worst
        )?;
    }
    Ok(())
}

/// Replays the worked example; `Mismatch` when a fixture check fails.
pub fn cmd_replay_paper(
    args: &ReplayArgs,
    out: &Path,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let flags = ReplayFlags {
        paper_literal_bee3: args.paper_literal_bee3,
    };
    let result = run_replay(flags)?;
    create_dir(out)?;
    write_trace_csv_file(&result.trace, &out.join("replay_trace.csv"))?;
    let report = render_report(&result, flags);
    fs::write(out.join("replay_report.md"), &report)?;

    let checks = fixture_checks(&result, flags);
    let failed: Vec<_> = checks.iter().filter(|c| !c.passed()).collect();
    for rec in result.trace.records.iter().filter(|r| r.iteration == 1) {
        writeln!(stdout, "iteration 1 bee {}: fitness {}", rec.bee, rec.candidate_fitness)?;
    }
    writeln!(
        stdout,
        "global best: {} at {}",
        result.best_fitness,
        fmt_position(&result.best_position)
    )?;
    writeln!(
        stdout,
        "fixture checks: {} passed, {} failed",
        checks.len() - failed.len(),
        failed.len()
    )?;
    if failed.is_empty() {
        Ok(())
    } else {
        let listing = failed
            .iter()
            .map(|c| {
                format!(
                    "  {}: printed {} replay {} (tolerance {})",
                    c.name, c.expected, c.actual, c.tolerance
                )
            })
            .collect::<Vec<_>>()
            .join("\n");
        Err(CliError::Mismatch(listing))
    }
}

pub fn cmd_list_objectives(stdout: &mut dyn Write) -> Result<(), CliError> {
    writeln!(stdout, "{:<16} {:<10} {:<24} known optimum", "name", "direction", "default bounds")?;
    for b in Benchmark::ALL {
        let space = b.suggested_bounds(2)?;
        let (_, value) = b.known_optimum(2).expect("benchmarks have optima");
        writeln!(
            stdout,
            "{:<16} {:<10} {:<24} {} (at dim 2)",
            b.name(),
            format!("{:?}", b.direction()).to_lowercase(),
            format!("[{}, {}]", space.lower[0], space.upper[0]),
            value
        )?;
    }
    writeln!(
        stdout,
        "{:<16} {:<10} {:<24} centroid when k = 1 and lambda = 0",
        "cluster", "minimize", "node bounding box + 1"
    )?;
    Ok(())
}
