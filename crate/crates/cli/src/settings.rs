//! Flag parsing and resolution of flags, config file and environment into one
//! validated set of run settings.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use fdo_core::{BoundaryPolicy, FdoConfig, InitRule, RandomMode};

use crate::CliError;

/// Environment variable that overrides the output directory.
pub const OUT_DIR_ENV: &str = "FDO_OUT_DIR";
pub const DEFAULT_OUT_DIR: &str = "fdo-out";

const DEFAULTS: &str = "Defaults when unspecified: --pop 30, --iters 500, --wf 0, \
--random uniform, --boundary clamp, --dim 2, bounds from the objective. \
A --config file holds key=value lines named like the flags; flags override it. \
The output directory is taken from --out, then $FDO_OUT_DIR, then the file, then `fdo-out`. \
Exit codes: 0 success, 1 replay fixture mismatch, 2 invalid configuration, 3 runtime failure.";

#[derive(Debug, Parser)]
#[command(name = "fdo", version, about = "Fitness Dependent Optimizer experiments", after_help = DEFAULTS)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one optimization and write its trace and summary
    Run(RunArgs),
    /// Run a batch of seeds over one or more objectives
    Bench(RunArgs),
    /// Replay the two-iteration sphere example against its printed values
    ReplayPaper(ReplayArgs),
    /// List the available objectives
    ListObjectives,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RandomKind {
    Uniform,
    Levy,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundaryKind {
    Clamp,
    None,
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// key=value file with defaults for any of the flags below
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Objective name; `bench` accepts a comma-separated list
    #[arg(long)]
    pub objective: Option<String>,
    #[arg(long)]
    pub dim: Option<usize>,
    /// Scalar bounds applied to every dimension
    #[arg(long, num_args = 2, value_names = ["LOWER", "UPPER"], allow_negative_numbers = true)]
    pub bounds: Option<Vec<f64>>,
    /// Number of scout bees [default: 30]
    #[arg(long)]
    pub pop: Option<usize>,
    /// Iteration budget, initialization included [default: 500]
    #[arg(long)]
    pub iters: Option<usize>,
    /// Weight factor, 0 or 1 [default: 0]
    #[arg(long, allow_negative_numbers = true)]
    pub wf: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Seed list for `bench`, e.g. `1,2,3` or `0..30`
    #[arg(long)]
    pub seeds: Option<String>,
    /// Source of the random walk [default: uniform]
    #[arg(long, value_enum)]
    pub random: Option<RandomKind>,
    /// Levy stability exponent [default: 1.5]
    #[arg(long)]
    pub beta: Option<f64>,
    /// [default: clamp]
    #[arg(long, value_enum)]
    pub boundary: Option<BoundaryKind>,
    /// Cluster scenario file for the `cluster` objective
    #[arg(long)]
    pub scenario: Option<PathBuf>,
    /// Output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ReplayArgs {
    /// Reproduce the printed zero-pace handling of bee 3
    #[arg(long)]
    pub paper_literal_bee3: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Fully resolved run settings.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub objectives: Vec<String>,
    pub dim: Option<usize>,
    pub bounds: Option<(f64, f64)>,
    pub population: usize,
    pub iterations: usize,
    pub wf: f64,
    pub seeds: Vec<u64>,
    pub random: RandomKind,
    pub beta: f64,
    pub boundary: BoundaryKind,
    pub scenario: Option<PathBuf>,
    pub out: PathBuf,
}

impl Settings {
    /// Engine configuration for one seed; direction is filled in per objective.
    pub fn fdo_config(&self, seed: u64) -> FdoConfig {
        FdoConfig {
            population: self.population,
            iterations: self.iterations,
            wf: self.wf,
            direction: Default::default(),
            random_mode: match self.random {
                RandomKind::Uniform => RandomMode::SeededUniform { seed },
                RandomKind::Levy => RandomMode::Levy {
                    seed,
                    beta: self.beta,
                },
                RandomKind::Table => RandomMode::TableReplay,
            },
            boundary_policy: match self.boundary {
                BoundaryKind::Clamp => BoundaryPolicy::Clamp,
                BoundaryKind::None => BoundaryPolicy::None,
            },
            init_rule: InitRule::UniformBox,
        }
    }
}

/// Parses `1,2,3`, `0..30` (end exclusive) or a mix of both.
pub fn parse_seeds(text: &str) -> Result<Vec<u64>, CliError> {
    let bad = |s: &str| CliError::Config(format!("bad seed list `{s}`"));
    let mut seeds = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((a, b)) = part.split_once("..") {
            let a: u64 = a.trim().parse().map_err(|_| bad(part))?;
            let b: u64 = b.trim().parse().map_err(|_| bad(part))?;
            seeds.extend(a..b);
        } else {
            seeds.push(part.parse().map_err(|_| bad(part))?);
        }
    }
    if seeds.is_empty() {
        return Err(CliError::Config("at least one seed is required".into()));
    }
    Ok(seeds)
}

const KNOWN_KEYS: [&str; 13] = [
    "objective", "dim", "bounds", "pop", "iters", "wf", "seed", "seeds", "random", "beta",
    "boundary", "scenario", "out",
];

/// Reads a flat `key=value` file. `#` starts a comment line.
pub fn parse_config_file(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("config line {}: expected key=value", n + 1)))?;
        let key = key.trim().trim_start_matches("--").replace('_', "-");
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(CliError::Config(format!("config line {}: unknown key `{key}`", n + 1)));
        }
        map.insert(key, value.trim().to_string());
    }
    Ok(map)
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value
        .parse()
        .map_err(|_| CliError::Config(format!("invalid value `{value}` for {key}")))
}

fn parse_enum<T: ValueEnum>(key: &str, value: &str) -> Result<T, CliError> {
    T::from_str(value, true).map_err(|_| CliError::Config(format!("invalid value `{value}` for {key}")))
}

/// Merges flags over the config file, then validates what can be checked
/// without touching an objective.
pub fn resolve(args: &RunArgs, env_out: Option<PathBuf>, default_seeds: &str) -> Result<Settings, CliError> {
    let file = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
            parse_config_file(&text)?
        }
        None => BTreeMap::new(),
    };
    let get = |key: &str| file.get(key).map(String::as_str);

    let objective = match (&args.objective, get("objective")) {
        (Some(o), _) => o.clone(),
        (None, Some(o)) => o.to_string(),
        (None, None) => "sphere".to_string(),
    };
    let objectives: Vec<String> = objective
        .split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect();
    if objectives.is_empty() {
        return Err(CliError::Config("no objective given".into()));
    }

    let dim = match (args.dim, get("dim")) {
        (Some(d), _) => Some(d),
        (None, Some(v)) => Some(parse_value("dim", v)?),
        _ => None,
    };
    let bounds = match (&args.bounds, get("bounds")) {
        (Some(b), _) => Some((b[0], b[1])),
        (None, Some(v)) => {
            let parts: Vec<&str> = v.split_whitespace().collect();
            if parts.len() != 2 {
                return Err(CliError::Config(format!("bounds needs two numbers, got `{v}`")));
            }
            Some((parse_value("bounds", parts[0])?, parse_value("bounds", parts[1])?))
        }
        _ => None,
    };
    let population = match (args.pop, get("pop")) {
        (Some(p), _) => p,
        (None, Some(v)) => parse_value("pop", v)?,
        _ => 30,
    };
    let iterations = match (args.iters, get("iters")) {
        (Some(i), _) => i,
        (None, Some(v)) => parse_value("iters", v)?,
        _ => 500,
    };
    let wf = match (args.wf, get("wf")) {
        (Some(w), _) => w,
        (None, Some(v)) => parse_value("wf", v)?,
        _ => 0.0,
    };
    let seeds = if let Some(s) = &args.seeds {
        parse_seeds(s)?
    } else if let Some(s) = args.seed {
        vec![s]
    } else if let Some(v) = get("seeds") {
        parse_seeds(v)?
    } else if let Some(v) = get("seed") {
        vec![parse_value("seed", v)?]
    } else {
        parse_seeds(default_seeds)?
    };
    let random = match (args.random, get("random")) {
        (Some(r), _) => r,
        (None, Some(v)) => parse_enum("random", v)?,
        _ => RandomKind::Uniform,
    };
    let beta = match (args.beta, get("beta")) {
        (Some(b), _) => b,
        (None, Some(v)) => parse_value("beta", v)?,
        _ => fdo_core::random::DEFAULT_LEVY_BETA,
    };
    let boundary = match (args.boundary, get("boundary")) {
        (Some(b), _) => b,
        (None, Some(v)) => parse_enum("boundary", v)?,
        _ => BoundaryKind::Clamp,
    };
    let scenario = args
        .scenario
        .clone()
        .or_else(|| get("scenario").map(PathBuf::from));
    let out = args
        .out
        .clone()
        .or(env_out)
        .or_else(|| get("out").map(PathBuf::from))
        .unwrap_or_else(|| Path::new(DEFAULT_OUT_DIR).to_path_buf());

    let settings = Settings {
        objectives,
        dim,
        bounds,
        population,
        iterations,
        wf,
        seeds,
        random,
        beta,
        boundary,
        scenario,
        out,
    };
    settings
        .fdo_config(0)
        .validate()
        .map_err(|e| CliError::Config(e.to_string()))?;
    Ok(settings)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_lists() {
        assert_eq!(parse_seeds("1,2, 3").unwrap(), vec![1, 2, 3]);
        assert_eq!(parse_seeds("0..3,7").unwrap(), vec![0, 1, 2, 7]);
        assert!(parse_seeds("").is_err());
        assert!(parse_seeds("a..b").is_err());
    }

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("exp.conf");
        std::fs::write(&path, "# experiment\nobjective=rastrigin\ndim=5\npop=12\nbounds=-3 3\nout=from-file\n").unwrap();
        let args = RunArgs {
            config: Some(path),
            pop: Some(7),
            ..RunArgs::default()
        };
        let s = resolve(&args, None, "0").unwrap();
        assert_eq!(s.objectives, vec!["rastrigin"]);
        assert_eq!(s.dim, Some(5));
        assert_eq!(s.population, 7);
        assert_eq!(s.bounds, Some((-3.0, 3.0)));
        assert_eq!(s.out, PathBuf::from("from-file"));

        let s = resolve(&args, Some("from-env".into()), "0").unwrap();
        assert_eq!(s.out, PathBuf::from("from-env"));
    }

    #[test]
    fn unknown_config_key_is_rejected() {
        assert!(parse_config_file("speed=3\n").is_err());
        assert!(parse_config_file("no equals sign\n").is_err());
    }

    #[test]
    fn defaults() {
        let s = resolve(&RunArgs::default(), None, "0..30").unwrap();
        assert_eq!((s.population, s.iterations, s.wf), (30, 500, 0.0));
        assert_eq!(s.random, RandomKind::Uniform);
        assert_eq!(s.boundary, BoundaryKind::Clamp);
        assert_eq!(s.seeds.len(), 30);
    }

    #[test]
    fn invalid_population_is_config_error() {
        let args = RunArgs {
            pop: Some(0),
            ..RunArgs::default()
        };
        assert!(matches!(resolve(&args, None, "0"), Err(CliError::Config(_))));
    }
}
