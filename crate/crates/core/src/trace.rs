//! Run traces, their CSV form, and batch statistics.
//!
//! The CSV trace has one row per objective evaluation: the initial
//! placements first, then for every step the fresh candidate and, when the
//! fresh candidate was rejected, the saved-pace candidate.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::engine::{Branch, Decision, StepOutcome};
use crate::error::{FdoError, Result};
use crate::types::{Direction, FdoConfig, RunResult, ScoutBee};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceMetadata {
    pub objective: String,
    pub dimension: usize,
    pub config: FdoConfig,
    pub source: String,
}

/// Per-row outcome in the CSV trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RowDecision {
    Init,
    AcceptedFresh,
    /// Fresh candidate did not improve; a saved-pace row follows.
    RejectedFresh,
    AcceptedWithSavedPace,
    Stayed,
}

impl RowDecision {
    const ALL: [RowDecision; 5] = [
        RowDecision::Init,
        RowDecision::AcceptedFresh,
        RowDecision::RejectedFresh,
        RowDecision::AcceptedWithSavedPace,
        RowDecision::Stayed,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RowDecision::Init => "Init",
            RowDecision::AcceptedFresh => "AcceptedFresh",
            RowDecision::RejectedFresh => "RejectedFresh",
            RowDecision::AcceptedWithSavedPace => "AcceptedWithSavedPace",
            RowDecision::Stayed => "Stayed",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        RowDecision::ALL.into_iter().find(|d| d.as_str() == s)
    }
}

/// One objective evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub iteration: usize,
    /// 1-based bee number.
    pub bee: usize,
    /// The evaluated point.
    pub position: Vec<f64>,
    pub pace: Vec<f64>,
    pub r: Vec<f64>,
    pub fw: Option<f64>,
    pub branch: Vec<Option<Branch>>,
    pub candidate_fitness: f64,
    pub decision: RowDecision,
    pub global_best_fitness: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BestEntry {
    pub iteration: usize,
    pub fitness: f64,
    pub position: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecordedStep {
    pub iteration: usize,
    pub outcome: StepOutcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunTrace {
    pub metadata: TraceMetadata,
    pub records: Vec<TraceRecord>,
    pub steps: Vec<RecordedStep>,
    pub best_history: Vec<BestEntry>,
}

impl RunTrace {
    pub fn new(metadata: TraceMetadata) -> Self {
        RunTrace {
            metadata,
            records: Vec::new(),
            steps: Vec::new(),
            best_history: Vec::new(),
        }
    }

    pub(crate) fn push_init(&mut self, index: usize, bee: &ScoutBee, draws: &[f64], global_best: f64) {
        let dim = bee.position.len();
        self.records.push(TraceRecord {
            iteration: 1,
            bee: index + 1,
            position: bee.position.clone(),
            pace: bee.pace.clone(),
            r: if draws.len() == dim { draws.to_vec() } else { vec![f64::NAN; dim] },
            fw: None,
            branch: vec![None; dim],
            candidate_fitness: bee.fitness,
            decision: RowDecision::Init,
            global_best_fitness: global_best,
        });
    }

    pub(crate) fn push_step(
        &mut self,
        iteration: usize,
        outcome: StepOutcome,
        best_before: f64,
        best_after: f64,
    ) {
        let bee = outcome.bee_index + 1;
        let fresh_decision = match outcome.decision {
            Decision::AcceptedFresh => RowDecision::AcceptedFresh,
            _ => RowDecision::RejectedFresh,
        };
        self.records.push(TraceRecord {
            iteration,
            bee,
            position: outcome.candidate_position.clone(),
            pace: outcome.pace.clone(),
            r: outcome.r_used.clone(),
            fw: Some(outcome.fw_used),
            branch: outcome.branch.iter().copied().map(Some).collect(),
            candidate_fitness: outcome.candidate_fitness,
            decision: fresh_decision,
            global_best_fitness: if fresh_decision == RowDecision::AcceptedFresh {
                best_after
            } else {
                best_before
            },
        });
        if let Some(saved) = &outcome.saved_attempt {
            self.records.push(TraceRecord {
                iteration,
                bee,
                position: saved.position.clone(),
                pace: saved.pace.clone(),
                r: outcome.r_used.clone(),
                fw: Some(outcome.fw_used),
                branch: vec![None; saved.pace.len()],
                candidate_fitness: saved.fitness,
                decision: match outcome.decision {
                    Decision::AcceptedWithSavedPace => RowDecision::AcceptedWithSavedPace,
                    _ => RowDecision::Stayed,
                },
                global_best_fitness: best_after,
            });
        }
        self.steps.push(RecordedStep { iteration, outcome });
    }

    pub(crate) fn push_best(&mut self, entry: BestEntry) {
        self.best_history.push(entry);
    }

    pub fn direction(&self) -> Direction {
        self.metadata.config.direction
    }

    /// Index of the first best-history entry that regresses, if any.
    pub fn first_monotonicity_violation(&self) -> Option<usize> {
        let direction = self.direction();
        self.best_history
            .windows(2)
            .find(|w| !direction.is_no_worse(w[1].fitness, w[0].fitness))
            .map(|w| w[1].iteration)
    }

    pub fn check_monotone(&self) -> Result<()> {
        match self.first_monotonicity_violation() {
            Some(iteration) => Err(FdoError::NonMonotoneHistory { iteration }),
            None => Ok(()),
        }
    }
}

/// Formats like C's `%.9g`: nine significant digits, trailing zeros dropped.
pub fn format_sig9(value: f64) -> String {
    const DIGITS: i32 = 9;
    if value.is_nan() {
        return "NaN".into();
    }
    if value.is_infinite() {
        return if value > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if value == 0.0 {
        return "0".into();
    }
    // round first so that e.g. 9.999999999 picks the exponent of 10
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, value);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..DIGITS).contains(&exp) {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        trim_zeros(format!("{value:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        let t = s.trim_end_matches('0').trim_end_matches('.');
        if t == "-0" { "0".into() } else { t.to_string() }
    } else {
        s
    }
}

pub fn csv_header(dimension: usize) -> Vec<String> {
    let mut header = vec!["iteration".to_string(), "bee".to_string()];
    for prefix in ["x", "pace", "r"] {
        header.extend((0..dimension).map(|d| format!("{prefix}{d}")));
    }
    header.push("fw".into());
    header.extend((0..dimension).map(|d| format!("branch{d}")));
    header.extend(["candidate_fitness", "decision", "global_best_fitness"].map(String::from));
    header
}

/// Writes the trace as CSV. Refuses traces whose best history regresses.
pub fn write_trace_csv<W: Write>(trace: &RunTrace, destination: W) -> Result<()> {
    trace.check_monotone()?;
    let mut writer = csv::Writer::from_writer(destination);
    writer.write_record(csv_header(trace.metadata.dimension))?;
    for rec in &trace.records {
        let mut row = vec![rec.iteration.to_string(), rec.bee.to_string()];
        for values in [&rec.position, &rec.pace, &rec.r] {
            row.extend(values.iter().map(|v| format_sig9(*v)));
        }
        row.push(rec.fw.map(format_sig9).unwrap_or_default());
        row.extend(
            rec.branch
                .iter()
                .map(|b| b.map(|b| b.as_str().to_string()).unwrap_or_default()),
        );
        row.push(format_sig9(rec.candidate_fitness));
        row.push(rec.decision.as_str().to_string());
        row.push(format_sig9(rec.global_best_fitness));
        writer.write_record(&row)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn write_trace_csv_file(trace: &RunTrace, path: &Path) -> Result<()> {
    write_trace_csv(trace, File::create(path)?)
}

/// Renders the CSV trace to a string.
pub fn trace_csv_string(trace: &RunTrace) -> Result<String> {
    let mut buf = Vec::new();
    write_trace_csv(trace, &mut buf)?;
    String::from_utf8(buf).map_err(|e| FdoError::Io(e.to_string()))
}

/// Parses a CSV trace written by [`write_trace_csv`].
pub fn read_trace_csv<R: Read>(source: R) -> Result<Vec<TraceRecord>> {
    let mut reader = csv::Reader::from_reader(source);
    let header = reader.headers()?.clone();
    let dim = header.iter().filter(|h| h.starts_with("pace")).count();
    if header.len() != csv_header(dim).len() || header.iter().ne(csv_header(dim).iter()) {
        return Err(FdoError::Parse("unexpected trace header".into()));
    }
    let num = |s: &str| -> Result<f64> {
        s.parse::<f64>()
            .map_err(|e| FdoError::Parse(format!("`{s}`: {e}")))
    };
    let int = |s: &str| -> Result<usize> {
        s.parse::<usize>()
            .map_err(|e| FdoError::Parse(format!("`{s}`: {e}")))
    };
    let mut records = Vec::new();
    for row in reader.records() {
        let row = row?;
        let field = |i: usize| row.get(i).unwrap_or("");
        let vec_at = |start: usize| -> Result<Vec<f64>> {
            (start..start + dim).map(|i| num(field(i))).collect()
        };
        let fw_col = 2 + 3 * dim;
        let fw = match field(fw_col) {
            "" => None,
            s => Some(num(s)?),
        };
        let branch = (fw_col + 1..fw_col + 1 + dim)
            .map(|i| match field(i) {
                "" => Ok(None),
                s => Branch::parse(s)
                    .map(Some)
                    .ok_or_else(|| FdoError::Parse(format!("unknown branch `{s}`"))),
            })
            .collect::<Result<Vec<_>>>()?;
        let tail = fw_col + 1 + dim;
        records.push(TraceRecord {
            iteration: int(field(0))?,
            bee: int(field(1))?,
            position: vec_at(2)?,
            pace: vec_at(2 + dim)?,
            r: vec_at(2 + 2 * dim)?,
            fw,
            branch,
            candidate_fitness: num(field(tail))?,
            decision: RowDecision::parse(field(tail + 1))
                .ok_or_else(|| FdoError::Parse(format!("unknown decision `{}`", field(tail + 1))))?,
            global_best_fitness: num(field(tail + 2))?,
        });
    }
    Ok(records)
}

/// Statistics over the final best fitness of a batch of runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchSummary {
    pub objective: String,
    pub config: FdoConfig,
    pub seeds: Vec<Option<u64>>,
    pub finals: Vec<f64>,
    pub mean: f64,
    pub std: f64,
    pub median: f64,
    pub best: f64,
    pub worst: f64,
    pub evaluations: Vec<usize>,
}

/// Sample statistics (`n - 1` denominator for the standard deviation).
pub fn summarize_batch(results: &[RunResult]) -> Result<BatchSummary> {
    let first = results.first().ok_or(FdoError::EmptyBatch)?;
    let meta = &first.trace.metadata;
    let direction = meta.config.direction;
    let finals: Vec<f64> = results.iter().map(|r| r.best_fitness).collect();
    let n = finals.len() as f64;
    let mean = finals.iter().sum::<f64>() / n;
    let std = if finals.len() > 1 {
        (finals.iter().map(|f| (f - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    let mut sorted = finals.clone();
    sorted.sort_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    let median = if sorted.len().is_multiple_of(2) {
        (sorted[mid - 1] + sorted[mid]) / 2.0
    } else {
        sorted[mid]
    };
    let (lowest, highest) = (sorted[0], sorted[sorted.len() - 1]);
    let (best, worst) = match direction {
        Direction::Minimize => (lowest, highest),
        Direction::Maximize => (highest, lowest),
    };
    Ok(BatchSummary {
        objective: meta.objective.clone(),
        config: meta.config.clone(),
        seeds: results
            .iter()
            .map(|r| r.trace.metadata.config.random_mode.seed())
            .collect(),
        finals,
        mean,
        std,
        median,
        best,
        worst,
        evaluations: results.iter().map(|r| r.evaluations).collect(),
    })
}

pub fn write_summary_json<W: Write>(summary: &BatchSummary, destination: W) -> Result<()> {
    serde_json::to_writer_pretty(destination, summary)?;
    Ok(())
}

/// `seed,initial_best,final_best,evaluations`, one row per run.
pub fn write_runs_csv<W: Write>(results: &[RunResult], destination: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(destination);
    writer.write_record(["seed", "initial_best", "final_best", "evaluations"])?;
    for r in results {
        let seed = r
            .trace
            .metadata
            .config
            .random_mode
            .seed()
            .map(|s| s.to_string())
            .unwrap_or_default();
        writer.write_record([
            seed,
            format_sig9(r.initial_best_fitness()),
            format_sig9(r.best_fitness),
            r.evaluations.to_string(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::run;
    use crate::objectives::Benchmark;
    use crate::types::{RandomMode, SearchSpace};
    use proptest::prelude::*;

    #[test]
    fn sig9_formatting() {
        assert_eq!(format_sig9(4610.0), "4610");
        assert_eq!(format_sig9(8117.2624), "8117.2624");
        assert_eq!(format_sig9(0.6915401301518438), "0.69154013");
        assert_eq!(format_sig9(-26.235411471321697), "-26.2354115");
        assert_eq!(format_sig9(1.0e-7), "1e-7");
        assert_eq!(format_sig9(123456789012.0), "1.23456789e11");
        assert_eq!(format_sig9(9.9999999999), "10");
        assert_eq!(format_sig9(-0.0), "0");
    }

    fn empty_trace(dimension: usize) -> RunTrace {
        RunTrace::new(TraceMetadata {
            objective: "sphere".into(),
            dimension,
            config: FdoConfig::default(),
            source: "test".into(),
        })
    }

    #[test]
    fn empty_trace_is_header_only() {
        let csv = trace_csv_string(&empty_trace(2)).unwrap();
        assert_eq!(
            csv,
            "iteration,bee,x0,x1,pace0,pace1,r0,r1,fw,branch0,branch1,candidate_fitness,decision,global_best_fitness\n"
        );
    }

    #[test]
    fn regressing_history_is_refused() {
        let mut trace = empty_trace(1);
        for (iteration, fitness) in [(1, 5.0), (2, 6.0)] {
            trace.push_best(BestEntry {
                iteration,
                fitness,
                position: vec![0.0],
            });
        }
        assert_eq!(
            trace_csv_string(&trace),
            Err(FdoError::NonMonotoneHistory { iteration: 2 })
        );
    }

    #[test]
    fn summary_of_one_two_three() {
        let space = SearchSpace::uniform(2, -1.0, 1.0).unwrap();
        let base = run(&space, &Benchmark::Sphere, &FdoConfig { iterations: 1, population: 1, ..FdoConfig::default() }).unwrap();
        let results: Vec<RunResult> = [1.0, 2.0, 3.0]
            .iter()
            .map(|f| RunResult { best_fitness: *f, ..base.clone() })
            .collect();
        let s = summarize_batch(&results).unwrap();
        assert_eq!((s.mean, s.median, s.best, s.worst), (2.0, 2.0, 1.0, 3.0));
        assert_eq!(s.std, 1.0);
        assert_eq!(summarize_batch(&[]), Err(FdoError::EmptyBatch));
    }

    #[test]
    fn identical_runs_have_zero_spread() {
        let space = SearchSpace::uniform(3, -5.0, 5.0).unwrap();
        let config = FdoConfig {
            population: 5,
            iterations: 20,
            random_mode: RandomMode::SeededUniform { seed: 9 },
            ..FdoConfig::default()
        };
        let results: Vec<_> = (0..5)
            .map(|_| run(&space, &Benchmark::Sphere, &config).unwrap())
            .collect();
        let s = summarize_batch(&results).unwrap();
        assert_eq!(s.std, 0.0);
        assert_eq!(s.seeds, vec![Some(9); 5]);
    }

    proptest! {
        #[test]
        fn csv_round_trip(seed in 0u64..500, dim in 1usize..4, pop in 1usize..5) {
            let space = SearchSpace::uniform(dim, -10.0, 10.0).unwrap();
            let config = FdoConfig {
                population: pop,
                iterations: 6,
                random_mode: RandomMode::SeededUniform { seed },
                ..FdoConfig::default()
            };
            let result = run(&space, &Benchmark::Rastrigin, &config).unwrap();
            let text = trace_csv_string(&result.trace).unwrap();
            let parsed = read_trace_csv(text.as_bytes()).unwrap();
            prop_assert_eq!(parsed.len(), result.trace.records.len());
            // nine significant digits bound the relative error by 5e-9
            let close = |a: f64, b: f64| (a - b).abs() <= 1e-8 * a.abs().max(b.abs()).max(1e-300) || a == b;
            for (p, o) in parsed.iter().zip(&result.trace.records) {
                prop_assert_eq!((p.iteration, p.bee, p.decision), (o.iteration, o.bee, o.decision));
                prop_assert_eq!(&p.branch, &o.branch);
                for (a, b) in p.position.iter().chain(&p.pace).chain(&p.r)
                    .zip(o.position.iter().chain(&o.pace).chain(&o.r)) {
                    prop_assert!(close(*a, *b), "{} vs {}", a, b);
                }
                prop_assert!(close(p.candidate_fitness, o.candidate_fitness));
                prop_assert!(close(p.global_best_fitness, o.global_best_fitness));
                prop_assert_eq!(p.fw.is_some(), o.fw.is_some());
                if let (Some(a), Some(b)) = (p.fw, o.fw) {
                    prop_assert!(close(a, b));
                }
            }
        }
    }
}
