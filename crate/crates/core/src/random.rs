//! Sources of the random scalar `r` and of initialization draws.
//!
//! Three interchangeable modes: the fixed table of the worked example,
//! a seeded uniform generator on `[-1, 1]`, and Levy-flight steps drawn
//! with Mantegna's algorithm.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{FdoError, Result};
use crate::types::RandomMode;

pub const DEFAULT_LEVY_BETA: f64 = 1.5;

/// The worked example's random table, `(parameter 1, parameter 2)` per row.
///
/// Its caption announces fifteen sequences, yet it lists fifty rows; all
/// fifty are kept. The same data lives in `fixtures/random_table.csv`.
pub const PAPER_TABLE: [(f64, f64); 50] = [
    (-0.49, -0.47),
    ( 0.44, -0.78),
    (-0.22, -0.52),
    ( 0.82, -0.22),
    (-0.81,  0.82),
    (-0.94, -0.29),
    ( -0.1,  0.95),
    ( 0.12, -0.96),
    (-0.89,  0.08),
    ( 0.68, -0.06),
    (-0.09,  0.92),
    (  0.6, -0.45),
    (-0.15,   0.4),
    ( 0.36, -0.47),
    (-0.25,  0.61),
    ( 0.17, -0.55),
    (-0.88, -0.64),
    ( 0.13,  0.94),
    (-0.25, -0.35),
    ( 0.08,  0.63),
    ( 0.34, -0.48),
    (-0.72,  0.84),
    ( 0.82, -0.15),
    ( -0.4,  0.67),
    ( 0.77, -0.93),
    (-0.97,  0.62),
    (  0.8, -0.84),
    (-0.28,  0.63),
    ( 0.38, -0.55),
    (-0.94, -0.68),
    ( 0.64,  0.41),
    (-0.19, -0.49),
    ( 0.48,  0.31),
    (-0.04, -0.83),
    ( 0.58,  0.31),
    ( -0.1,  0.27),
    ( 0.15, -0.26),
    (-0.62,  0.38),
    ( 0.42,  -0.4),
    ( 0.72,  0.52),
    ( 0.77, -0.93),
    ( 0.48,  0.31),
    (-0.19,  0.53),
    ( 0.58,  0.71),
    (-0.18,  0.27),
    ( 0.66, -0.26),
    ( 0.58,  0.64),
    (-0.12,  0.37),
    ( 0.15, -0.26),
    (-0.98, -0.65),
];

/// Row-major cursor over [`PAPER_TABLE`]: row 1 parameter 1, row 1 parameter 2, row 2 ...
#[derive(Debug, Clone, PartialEq)]
pub struct RandomTable {
    entries: Vec<(f64, f64)>,
    cursor: usize,
}

impl Default for RandomTable {
    fn default() -> Self {
        RandomTable::new(PAPER_TABLE.to_vec())
    }
}

impl RandomTable {
    pub fn new(entries: Vec<(f64, f64)>) -> Self {
        RandomTable { entries, cursor: 0 }
    }

    pub fn capacity(&self) -> usize {
        self.entries.len() * 2
    }

    pub fn consumed(&self) -> usize {
        self.cursor
    }

    pub fn next_cell(&mut self) -> Result<f64> {
        let (row, col) = (self.cursor / 2, self.cursor % 2);
        let entry = self
            .entries
            .get(row)
            .ok_or(FdoError::TableExhausted { draws: self.cursor })?;
        self.cursor += 1;
        Ok(if col == 0 { entry.0 } else { entry.1 })
    }

    /// Renders the table as `row,param1,param2` CSV.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("row,param1,param2\n");
        for (i, (a, b)) in self.entries.iter().enumerate() {
            out.push_str(&format!("{},{},{}\n", i + 1, a, b));
        }
        out
    }
}

/// Scale of the numerator normal in Mantegna's algorithm.
pub fn mantegna_sigma(beta: f64) -> f64 {
    let num = libm::tgamma(1.0 + beta) * (std::f64::consts::PI * beta / 2.0).sin();
    let den = libm::tgamma((1.0 + beta) / 2.0) * beta * 2f64.powf((beta - 1.0) / 2.0);
    (num / den).powf(1.0 / beta)
}

#[derive(Debug, Clone)]
enum Generator {
    Table(RandomTable),
    Uniform(ChaCha8Rng),
    Levy {
        rng: ChaCha8Rng,
        beta: f64,
        sigma: f64,
    },
}

/// Single-owner supplier of random scalars for one run.
#[derive(Debug, Clone)]
pub struct RandomSource {
    generator: Generator,
    draws: usize,
}

impl RandomSource {
    pub fn new(mode: RandomMode) -> Self {
        let generator = match mode {
            RandomMode::TableReplay => Generator::Table(RandomTable::default()),
            RandomMode::SeededUniform { seed } => Generator::Uniform(ChaCha8Rng::seed_from_u64(seed)),
            RandomMode::Levy { seed, beta } => Generator::Levy {
                rng: ChaCha8Rng::seed_from_u64(seed),
                beta,
                sigma: mantegna_sigma(beta),
            },
        };
        RandomSource { generator, draws: 0 }
    }

    pub fn from_table(table: RandomTable) -> Self {
        RandomSource {
            generator: Generator::Table(table),
            draws: 0,
        }
    }

    /// Number of scalars handed out so far.
    pub fn draws(&self) -> usize {
        self.draws
    }

    pub fn describe(&self) -> String {
        match &self.generator {
            Generator::Table(_) => "table-replay".to_string(),
            Generator::Uniform(rng) => format!("seeded-uniform(stream {})", rng.get_stream()),
            Generator::Levy { beta, .. } => format!("levy(beta={beta})"),
        }
    }

    /// The random walk value `r`.
    ///
    /// Table cells come out in row-major order. Uniform draws lie in `[-1, 1]`.
    /// Levy draws are unbounded; only their sign matters to the pace branch.
    pub fn next_r(&mut self) -> Result<f64> {
        let value = match &mut self.generator {
            Generator::Table(table) => table.next_cell()?,
            Generator::Uniform(rng) => rng.random_range(-1.0..=1.0),
            Generator::Levy { rng, beta, sigma } => mantegna_step(rng, *beta, *sigma),
        };
        self.draws += 1;
        Ok(value)
    }

    /// A draw on `[-1, 1]` for placing bees. In Levy mode this comes from the
    /// underlying uniform stream, since heavy-tailed draws cannot be mapped into a box.
    pub fn next_init_draw(&mut self) -> Result<f64> {
        let value = match &mut self.generator {
            Generator::Table(table) => table.next_cell()?,
            Generator::Uniform(rng) | Generator::Levy { rng, .. } => rng.random_range(-1.0..=1.0),
        };
        self.draws += 1;
        Ok(value)
    }

    /// One Mantegna step. Fails with `InvalidConfig` outside Levy mode.
    pub fn levy_step(&mut self) -> Result<f64> {
        match &mut self.generator {
            Generator::Levy { rng, beta, sigma } => {
                let value = mantegna_step(rng, *beta, *sigma);
                self.draws += 1;
                Ok(value)
            }
            _ => Err(FdoError::InvalidConfig(
                "levy_step requires a levy random source".into(),
            )),
        }
    }
}

fn mantegna_step(rng: &mut ChaCha8Rng, beta: f64, sigma: f64) -> f64 {
    let u: f64 = StandardNormal.sample(rng);
    let v: f64 = StandardNormal.sample(rng);
    u * sigma / v.abs().powf(1.0 / beta)
}
