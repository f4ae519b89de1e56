//! Objective functions: the sphere of the worked example, a handful of
//! textbook benchmarks, and a cluster-head placement cost for sensor networks.

use std::f64::consts::{E, PI};
use std::path::Path;

use crate::error::{FdoError, Result};
use crate::types::{Direction, SearchSpace};

/// A black-box function the optimizer can drive.
pub trait Objective: Sync {
    fn name(&self) -> &str;

    fn evaluate(&self, position: &[f64]) -> f64;

    fn direction(&self) -> Direction {
        Direction::Minimize
    }

    /// Required dimension, if the objective only makes sense at one.
    fn fixed_dimension(&self) -> Option<usize> {
        None
    }

    fn suggested_bounds(&self, dimension: usize) -> Result<SearchSpace>;

    /// `(position, value)` of a known optimum, used as a test oracle.
    fn known_optimum(&self, _dimension: usize) -> Option<(Vec<f64>, f64)> {
        None
    }
}

pub fn sphere(position: &[f64]) -> f64 {
    position.iter().map(|x| x * x).sum()
}

pub fn rosenbrock(position: &[f64]) -> f64 {
    position
        .windows(2)
        .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (1.0 - w[0]).powi(2))
        .sum()
}

pub fn rastrigin(position: &[f64]) -> f64 {
    10.0 * position.len() as f64
        + position
            .iter()
            .map(|x| x * x - 10.0 * (2.0 * PI * x).cos())
            .sum::<f64>()
}

pub fn ackley(position: &[f64]) -> f64 {
    let n = position.len() as f64;
    let sq = position.iter().map(|x| x * x).sum::<f64>() / n;
    let cs = position.iter().map(|x| (2.0 * PI * x).cos()).sum::<f64>() / n;
    -20.0 * (-0.2 * sq.sqrt()).exp() - cs.exp() + 20.0 + E
}

/// `100 * D - sum(x^2)`: positive on its suggested box, maximized at the origin.
pub fn negated_sphere(position: &[f64]) -> f64 {
    100.0 * position.len() as f64 - sphere(position)
}

/// The built-in analytic benchmarks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Benchmark {
    Sphere,
    Rosenbrock,
    Rastrigin,
    Ackley,
    NegatedSphere,
}

impl Benchmark {
    pub const ALL: [Benchmark; 5] = [
        Benchmark::Sphere,
        Benchmark::Rosenbrock,
        Benchmark::Rastrigin,
        Benchmark::Ackley,
        Benchmark::NegatedSphere,
    ];

    pub fn from_name(name: &str) -> Result<Self> {
        Benchmark::ALL
            .into_iter()
            .find(|b| b.name() == name)
            .ok_or_else(|| FdoError::UnknownObjective(name.to_string()))
    }

    pub fn name(self) -> &'static str {
        match self {
            Benchmark::Sphere => "sphere",
            Benchmark::Rosenbrock => "rosenbrock",
            Benchmark::Rastrigin => "rastrigin",
            Benchmark::Ackley => "ackley",
            Benchmark::NegatedSphere => "negated-sphere",
        }
    }

    fn half_width(self) -> f64 {
        match self {
            Benchmark::Sphere => 100.0,
            Benchmark::Rosenbrock => 30.0,
            Benchmark::Rastrigin => 5.12,
            Benchmark::Ackley => 32.768,
            Benchmark::NegatedSphere => 10.0,
        }
    }

    fn min_dimension(self) -> usize {
        match self {
            Benchmark::Rosenbrock => 2,
            _ => 1,
        }
    }
}

/// Evaluates a benchmark by name.
pub fn benchmark(name: &str, position: &[f64]) -> Result<f64> {
    Ok(Benchmark::from_name(name)?.evaluate(position))
}

impl Objective for Benchmark {
    fn name(&self) -> &str {
        Benchmark::name(*self)
    }

    fn evaluate(&self, position: &[f64]) -> f64 {
        match self {
            Benchmark::Sphere => sphere(position),
            Benchmark::Rosenbrock => rosenbrock(position),
            Benchmark::Rastrigin => rastrigin(position),
            Benchmark::Ackley => ackley(position),
            Benchmark::NegatedSphere => negated_sphere(position),
        }
    }

    fn direction(&self) -> Direction {
        match self {
            Benchmark::NegatedSphere => Direction::Maximize,
            _ => Direction::Minimize,
        }
    }

    fn suggested_bounds(&self, dimension: usize) -> Result<SearchSpace> {
        if dimension < self.min_dimension() {
            return Err(FdoError::InvalidConfig(format!(
                "{} needs at least {} dimensions",
                self.name(),
                self.min_dimension()
            )));
        }
        let w = self.half_width();
        SearchSpace::uniform(dimension, -w, w)
    }

    fn known_optimum(&self, dimension: usize) -> Option<(Vec<f64>, f64)> {
        Some(match self {
            Benchmark::Rosenbrock => (vec![1.0; dimension], 0.0),
            Benchmark::NegatedSphere => (vec![0.0; dimension], 100.0 * dimension as f64),
            _ => (vec![0.0; dimension], 0.0),
        })
    }
}

/// Softening term in the head-energy penalty.
pub const ENERGY_EPSILON: f64 = 1e-6;

/// Sensor field for the cluster-head placement objective.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterScenario {
    pub node_positions: Vec<[f64; 2]>,
    pub node_energy: Vec<f64>,
    pub head_count: usize,
    pub energy_weight: f64,
}

impl ClusterScenario {
    pub fn new(
        node_positions: Vec<[f64; 2]>,
        node_energy: Vec<f64>,
        head_count: usize,
        energy_weight: f64,
    ) -> Result<Self> {
        if node_positions.is_empty() {
            return Err(FdoError::Parse("scenario needs at least one node".into()));
        }
        if node_positions.len() != node_energy.len() {
            return Err(FdoError::DimensionMismatch {
                expected: node_positions.len(),
                actual: node_energy.len(),
            });
        }
        if head_count == 0 || head_count > node_positions.len() {
            return Err(FdoError::Parse(format!(
                "head count {head_count} must lie in 1..={}",
                node_positions.len()
            )));
        }
        if !(energy_weight >= 0.0) || node_energy.iter().any(|e| !(*e >= 0.0)) {
            return Err(FdoError::Parse("energies and weight must be nonnegative".into()));
        }
        Ok(ClusterScenario {
            node_positions,
            node_energy,
            head_count,
            energy_weight,
        })
    }

    /// Parses `k lambda` followed by one `x y energy` line per node.
    /// Blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| FdoError::Parse("empty scenario".into()))?;
        let head: Vec<&str> = header.split_whitespace().collect();
        if head.len() != 2 {
            return Err(FdoError::Parse(format!("bad header `{header}`")));
        }
        let k = head[0]
            .parse::<usize>()
            .map_err(|e| FdoError::Parse(format!("head count: {e}")))?;
        let lambda = parse_f64(head[1])?;

        let mut positions = Vec::new();
        let mut energy = Vec::new();
        for line in lines {
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(FdoError::Parse(format!("bad node line `{line}`")));
            }
            positions.push([parse_f64(fields[0])?, parse_f64(fields[1])?]);
            energy.push(parse_f64(fields[2])?);
        }
        ClusterScenario::new(positions, energy, k, lambda)
    }

    pub fn load(path: &Path) -> Result<Self> {
        ClusterScenario::parse(&std::fs::read_to_string(path)?)
    }

    fn heads<'a>(&self, flat: &'a [f64]) -> impl Iterator<Item = [f64; 2]> + 'a {
        flat.chunks_exact(2).map(|c| [c[0], c[1]])
    }
}

fn parse_f64(s: &str) -> Result<f64> {
    s.parse::<f64>()
        .map_err(|e| FdoError::Parse(format!("`{s}`: {e}")))
}

fn dist2(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)
}

/// Sum of squared node-to-nearest-head distances plus `lambda` times the
/// inverse energy of the node nearest each head. Lower is better.
pub fn cluster_head_cost(scenario: &ClusterScenario, head_positions_flat: &[f64]) -> f64 {
    let heads: Vec<[f64; 2]> = scenario.heads(head_positions_flat).collect();
    let coverage: f64 = scenario
        .node_positions
        .iter()
        .map(|node| {
            heads
                .iter()
                .map(|h| dist2(*node, *h))
                .fold(f64::INFINITY, f64::min)
        })
        .sum();
    if scenario.energy_weight == 0.0 {
        return coverage;
    }
    let penalty: f64 = heads
        .iter()
        .map(|h| {
            let nearest = scenario
                .node_positions
                .iter()
                .zip(&scenario.node_energy)
                .min_by(|a, b| dist2(*a.0, *h).total_cmp(&dist2(*b.0, *h)))
                .map(|(_, e)| *e)
                .unwrap_or(0.0);
            1.0 / (ENERGY_EPSILON + nearest)
        })
        .sum();
    coverage + scenario.energy_weight * penalty
}

/// Cluster-head placement as an [`Objective`] over `2 * k` coordinates.
#[derive(Debug, Clone)]
pub struct ClusterHeadObjective {
    pub scenario: ClusterScenario,
}

impl ClusterHeadObjective {
    pub fn new(scenario: ClusterScenario) -> Self {
        ClusterHeadObjective { scenario }
    }

    pub fn dimension(&self) -> usize {
        2 * self.scenario.head_count
    }
}

impl Objective for ClusterHeadObjective {
    fn name(&self) -> &str {
        "cluster"
    }

    fn evaluate(&self, position: &[f64]) -> f64 {
        cluster_head_cost(&self.scenario, position)
    }

    fn fixed_dimension(&self) -> Option<usize> {
        Some(self.dimension())
    }

    /// Bounding box of the nodes, widened by one unit on each side.
    fn suggested_bounds(&self, dimension: usize) -> Result<SearchSpace> {
        if dimension != self.dimension() {
            return Err(FdoError::DimensionMismatch {
                expected: self.dimension(),
                actual: dimension,
            });
        }
        let nodes = &self.scenario.node_positions;
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for p in nodes {
            for a in 0..2 {
                lo[a] = lo[a].min(p[a]);
                hi[a] = hi[a].max(p[a]);
            }
        }
        let lower = (0..dimension).map(|d| lo[d % 2] - 1.0).collect();
        let upper = (0..dimension).map(|d| hi[d % 2] + 1.0).collect();
        SearchSpace::new(lower, upper)
    }

    /// Only known in closed form for a single head without energy penalty: the centroid.
    fn known_optimum(&self, _dimension: usize) -> Option<(Vec<f64>, f64)> {
        if self.scenario.head_count != 1 || self.scenario.energy_weight != 0.0 {
            return None;
        }
        let nodes = &self.scenario.node_positions;
        let n = nodes.len() as f64;
        let c = [
            nodes.iter().map(|p| p[0]).sum::<f64>() / n,
            nodes.iter().map(|p| p[1]).sum::<f64>() / n,
        ];
        let value = nodes.iter().map(|p| dist2(*p, c)).sum();
        Some((c.to_vec(), value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sphere_worked_values() {
        assert_eq!(sphere(&[-49.0, 47.0]), 4610.0);
        assert_eq!(sphere(&[0.0, 0.0]), 0.0);
        assert!((sphere(&[17.8, 88.32]) - 8117.2624).abs() < 1e-9);
    }

    #[test]
    fn benchmark_optima() {
        assert_eq!(benchmark("rosenbrock", &[1.0; 4]).unwrap(), 0.0);
        assert_eq!(benchmark("rastrigin", &[0.0; 3]).unwrap(), 0.0);
        assert!(benchmark("ackley", &[0.0; 5]).unwrap().abs() < 1e-9);
        assert_eq!(benchmark("negated-sphere", &[0.0; 5]).unwrap(), 500.0);
    }

    #[test]
    fn unknown_benchmark() {
        assert_eq!(
            benchmark("nosuch", &[0.0]),
            Err(FdoError::UnknownObjective("nosuch".into()))
        );
    }

    #[test]
    fn rosenbrock_needs_two_dimensions() {
        assert!(Benchmark::Rosenbrock.suggested_bounds(1).is_err());
        assert!(Benchmark::Rosenbrock.suggested_bounds(2).is_ok());
    }

    #[test]
    fn every_known_optimum_verifies() {
        for b in Benchmark::ALL {
            for dim in [2, 5, 10] {
                let (x, v) = b.known_optimum(dim).unwrap();
                assert!((b.evaluate(&x) - v).abs() <= 1e-12, "{} at dim {dim}", b.name());
            }
        }
    }

    #[test]
    fn negated_sphere_positive_inside_box() {
        let space = Benchmark::NegatedSphere.suggested_bounds(5).unwrap();
        assert!(negated_sphere(&space.upper) >= 0.0);
    }

    #[test]
    fn cluster_cost_examples() {
        let one = ClusterScenario::new(vec![[0.0, 0.0]], vec![1.0], 1, 0.0).unwrap();
        assert_eq!(cluster_head_cost(&one, &[0.0, 0.0]), 0.0);

        let two = ClusterScenario::new(vec![[0.0, 0.0], [10.0, 0.0]], vec![1.0, 1.0], 1, 0.0)
            .unwrap();
        assert_eq!(cluster_head_cost(&two, &[5.0, 0.0]), 50.0);
        let (opt, value) = ClusterHeadObjective::new(two).known_optimum(2).unwrap();
        assert_eq!((opt, value), (vec![5.0, 0.0], 50.0));
    }

    #[test]
    fn cluster_energy_penalty_uses_nearest_node() {
        let s = ClusterScenario::new(vec![[0.0, 0.0], [10.0, 0.0]], vec![2.0, 0.5], 1, 1.0)
            .unwrap();
        // head at (1, 0): nearest node energy 2.0
        let expected = 1.0 + 81.0 + 1.0 / (ENERGY_EPSILON + 2.0);
        assert!((cluster_head_cost(&s, &[1.0, 0.0]) - expected).abs() < 1e-12);
    }

    #[test]
    fn scenario_parsing() {
        let s = ClusterScenario::parse("# field\n1 0\n0 0 1.0\n10 0 1.0\n").unwrap();
        assert_eq!(s.head_count, 1);
        assert_eq!(s.node_positions, vec![[0.0, 0.0], [10.0, 0.0]]);
        assert!(ClusterScenario::parse("").is_err());
        assert!(ClusterScenario::parse("3 0\n0 0 1\n").is_err());
        assert!(ClusterScenario::parse("1 0\n0 0\n").is_err());
    }

    proptest! {
        #[test]
        fn sphere_is_nonnegative(xs in prop::collection::vec(-1e3f64..1e3, 1..10)) {
            let v = sphere(&xs);
            prop_assert!(v >= 0.0);
            prop_assert_eq!(v == 0.0, xs.iter().all(|x| *x == 0.0));
        }

        #[test]
        fn cluster_cost_ignores_head_order(
            nodes in prop::collection::vec((-50f64..50.0, -50f64..50.0, 0.0f64..5.0), 3..12),
            heads in prop::collection::vec((-50f64..50.0, -50f64..50.0), 3),
            lambda in 0.0f64..3.0,
        ) {
            let s = ClusterScenario::new(
                nodes.iter().map(|n| [n.0, n.1]).collect(),
                nodes.iter().map(|n| n.2).collect(),
                3,
                lambda,
            ).unwrap();
            let flat: Vec<f64> = heads.iter().flat_map(|h| [h.0, h.1]).collect();
            let rev: Vec<f64> = heads.iter().rev().flat_map(|h| [h.0, h.1]).collect();
            let (a, b) = (cluster_head_cost(&s, &flat), cluster_head_cost(&s, &rev));
            prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0));
        }
    }
}
