//! Benchmark grids over the generator parameters.
//!
//! A [`BenchConfig`] lists values for every parameter; the grid is their
//! product, except that radii only apply to the dispersed-degree model and
//! low-part probabilities only to the two split weight models. Every cell
//! is generated `repetitions` times with seeds
//! `seed_base + hash(cell) + repetition`, and every enabled solver runs on
//! each instance. Solvers must agree on the optimal weight; a disagreement
//! aborts the run.
//!
//! Timings cover the solve only. Instance generation, the feasibility
//! precheck and building the balanced graph for unbalanced instances are
//! excluded; solving the larger balanced graph is included.
//!
//! Config schema (TOML, `version = 1`):
//!
//! ```toml
//! version = 1
//! edge_models = ["erdos_renyi", "dispersed_degree"]
//! cost_models = ["uniform", "uniform_low_high", "low_or_high"]
//! n_values = [100, 200]
//! s_rules = ["log_n", "sqrt_n", "n"]   # log_n is log2(n), rounded
//! densities = [0.1, 0.5, 1.0]
//! r_norms = [0.1, 0.5, 1.0]
//! p_lows = [0.1, 0.5, 0.9]
//! repetitions = 10
//! algorithms = ["auction", "gk", "hungarian"]
//! seed_base = 0
//! time_limit_secs = 60.0                # optional
//! alpha = 5.0                           # optional
//! reduction = "double"                  # optional: double | pad
//! parallel = false                      # optional
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::time::{Duration, Instant};

use log::warn;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::auction::scaling_auction_balanced;
use crate::error::{Error, Result};
use crate::feasibility::feasibility_precheck;
use crate::gen::{EdgeModel, GenSpec, WeightModel};
use crate::gk::goldberg_kennedy_balanced;
use crate::graph::{Matching, WeightedBipartiteGraph};
use crate::hungarian::hungarian_with_duals;
use crate::reduction::{project_matching, reduce, ReductionMap};
use crate::solve::{Algorithm, ReductionKind, SolveOptions};
use crate::trace::NullSink;

pub const CONFIG_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SizeRule {
    #[serde(rename = "log_n", alias = "log2_n")]
    Log2N,
    #[serde(rename = "sqrt_n")]
    SqrtN,
    #[serde(rename = "n")]
    N,
}

impl SizeRule {
    /// Right side size for `n` left vertices.
    pub fn right_size(self, n: usize) -> usize {
        let s = match self {
            SizeRule::Log2N => (n as f64).log2().round() as usize,
            SizeRule::SqrtN => (n as f64).sqrt().round() as usize,
            SizeRule::N => n,
        };
        s.clamp(1, n.max(1))
    }

    pub fn name(self) -> &'static str {
        match self {
            SizeRule::Log2N => "log2_n",
            SizeRule::SqrtN => "sqrt_n",
            SizeRule::N => "n",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    pub version: u32,
    pub edge_models: Vec<EdgeModel>,
    pub cost_models: Vec<WeightModel>,
    pub n_values: Vec<usize>,
    pub s_rules: Vec<SizeRule>,
    pub densities: Vec<f64>,
    #[serde(default)]
    pub r_norms: Vec<f64>,
    #[serde(default)]
    pub p_lows: Vec<f64>,
    #[serde(default = "default_repetitions")]
    pub repetitions: usize,
    pub algorithms: Vec<Algorithm>,
    #[serde(default)]
    pub seed_base: u64,
    #[serde(default)]
    pub time_limit_secs: Option<f64>,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default)]
    pub reduction: ReductionKind,
    #[serde(default)]
    pub parallel: bool,
}

fn default_repetitions() -> usize {
    10
}

fn default_alpha() -> f64 {
    5.0
}

impl BenchConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.version != CONFIG_VERSION {
            return bad(format!("unsupported config version {}", self.version));
        }
        if self.repetitions < 1 {
            return bad("repetitions must be at least 1".into());
        }
        if self.edge_models.is_empty()
            || self.cost_models.is_empty()
            || self.n_values.is_empty()
            || self.s_rules.is_empty()
            || self.densities.is_empty()
            || self.algorithms.is_empty()
        {
            return bad("every parameter list must be non-empty".into());
        }
        if self.n_values.contains(&0) {
            return bad("n values must be positive".into());
        }
        let unit = |xs: &[f64]| xs.iter().all(|x| (0.0..=1.0).contains(x));
        if !unit(&self.densities) || !unit(&self.r_norms) || !unit(&self.p_lows) {
            return bad("densities, r_norms and p_lows must lie in [0, 1]".into());
        }
        if self.edge_models.contains(&EdgeModel::DispersedDegree) && self.r_norms.is_empty() {
            return bad("dispersed_degree needs at least one r_norm".into());
        }
        if self.cost_models.iter().any(|c| c.uses_p_low()) && self.p_lows.is_empty() {
            return bad("split cost models need at least one p_low".into());
        }
        if !(self.alpha.is_finite() && self.alpha > 1.0) {
            return bad(format!("alpha must exceed 1, got {}", self.alpha));
        }
        if let Some(t) = self.time_limit_secs {
            if !(t.is_finite() && t > 0.0) {
                return bad(format!("time limit must be positive, got {t}"));
            }
        }
        Ok(())
    }

    /// All parameter combinations, in config order.
    pub fn cells(&self) -> Vec<Cell> {
        let mut cells = Vec::new();
        for &edge_model in &self.edge_models {
            let radii: Vec<Option<f64>> = match edge_model {
                EdgeModel::DispersedDegree => self.r_norms.iter().copied().map(Some).collect(),
                EdgeModel::ErdosRenyi => vec![None],
            };
            for &cost_model in &self.cost_models {
                let lows: Vec<Option<f64>> = if cost_model.uses_p_low() {
                    self.p_lows.iter().copied().map(Some).collect()
                } else {
                    vec![None]
                };
                for &n in &self.n_values {
                    for &s_rule in &self.s_rules {
                        for &density in &self.densities {
                            for &r_norm in &radii {
                                for &p_low in &lows {
                                    cells.push(Cell {
                                        edge_model,
                                        cost_model,
                                        n,
                                        s_rule,
                                        s: s_rule.right_size(n),
                                        density,
                                        r_norm,
                                        p_low,
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
        cells
    }
}

/// One fixed parameter combination.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub edge_model: EdgeModel,
    pub cost_model: WeightModel,
    pub n: usize,
    pub s_rule: SizeRule,
    pub s: usize,
    pub density: f64,
    pub r_norm: Option<f64>,
    pub p_low: Option<f64>,
}

impl Cell {
    fn key(&self) -> String {
        format!(
            "{}|{}|{}|{}|{}|{}|{}",
            self.edge_model.name(),
            self.cost_model.name(),
            self.n,
            self.s_rule.name(),
            self.density,
            opt(self.r_norm),
            opt(self.p_low)
        )
    }

    /// Stable 64-bit digest of the cell parameters.
    pub fn hash(&self) -> u64 {
        let digest = Sha256::digest(self.key().as_bytes());
        u64::from_le_bytes(digest[..8].try_into().expect("sha256 has 32 bytes"))
    }

    pub fn seed(&self, seed_base: u64, repetition: usize) -> u64 {
        seed_base
            .wrapping_add(self.hash())
            .wrapping_add(repetition as u64)
    }

    pub fn spec(&self, seed: u64) -> GenSpec {
        GenSpec {
            model: self.edge_model,
            n: self.n,
            s: self.s,
            d: self.density,
            r_norm: self.r_norm.unwrap_or(0.0),
            weight_model: self.cost_model,
            p_low: self.p_low.unwrap_or(0.0),
            seed,
        }
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Timeout,
    Infeasible,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Ok => "ok",
            Status::Timeout => "timeout",
            Status::Infeasible => "infeasible",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub cell: Cell,
    pub repetition: usize,
    pub seed: u64,
    pub algorithm: Algorithm,
    pub weight: Option<i64>,
    pub millis: f64,
    pub status: Status,
}

pub const CSV_COLUMNS: [&str; 13] = [
    "edge_model",
    "cost_model",
    "n",
    "s_rule",
    "s",
    "density",
    "r_norm",
    "p_low",
    "repetition",
    "algorithm",
    "weight",
    "millis",
    "status",
];

impl BenchRow {
    fn record(&self) -> [String; 13] {
        [
            self.cell.edge_model.name().to_string(),
            self.cell.cost_model.name().to_string(),
            self.cell.n.to_string(),
            self.cell.s_rule.name().to_string(),
            self.cell.s.to_string(),
            self.cell.density.to_string(),
            opt(self.cell.r_norm),
            opt(self.cell.p_low),
            self.repetition.to_string(),
            self.algorithm.name().to_string(),
            self.weight.map(|w| w.to_string()).unwrap_or_default(),
            format!("{:.3}", self.millis),
            self.status.to_string(),
        ]
    }
}

/// An instance prepared for timing: the balanced graph the scaling solvers
/// work on is built once, outside the timed region.
pub struct PreparedInstance {
    pub graph: WeightedBipartiteGraph,
    balanced: Option<(WeightedBipartiteGraph, ReductionMap)>,
}

impl PreparedInstance {
    pub fn new(graph: WeightedBipartiteGraph, reduction: ReductionKind) -> Result<Self> {
        let balanced = if graph.is_balanced() {
            None
        } else {
            Some(reduce(&graph, reduction)?)
        };
        Ok(Self { graph, balanced })
    }

    fn scaling_input(&self) -> &WeightedBipartiteGraph {
        self.balanced.as_ref().map_or(&self.graph, |(g, _)| g)
    }

    fn project(&self, m: Matching) -> Result<Matching> {
        match &self.balanced {
            Some((_, map)) => project_matching(&m, map),
            None => Ok(m),
        }
    }

    /// Runs `algo` on a feasible instance and returns the optimal weight
    /// with the elapsed solve time.
    pub fn timed_solve(&self, algo: Algorithm, opts: &SolveOptions) -> Result<(i64, Duration)> {
        let start = Instant::now();
        let matching = match algo {
            Algorithm::Auction => {
                let out = scaling_auction_balanced(self.scaling_input(), opts, &mut NullSink)?;
                self.project(out.matching)?
            }
            Algorithm::GoldbergKennedy => {
                let out = goldberg_kennedy_balanced(self.scaling_input(), opts, &mut NullSink)?;
                self.project(out.matching)?
            }
            Algorithm::Hungarian => hungarian_with_duals(&self.graph, opts)?.matching,
        };
        let elapsed = start.elapsed();
        Ok((self.graph.matching_weight(&matching), elapsed))
    }
}

fn run_cell(config: &BenchConfig, cell: &Cell) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::with_capacity(config.repetitions * config.algorithms.len());
    for repetition in 0..config.repetitions {
        let seed = cell.seed(config.seed_base, repetition);
        let graph = cell.spec(seed).generate()?;
        let feasible = feasibility_precheck(&graph);
        let prepared = if feasible {
            Some(PreparedInstance::new(graph, config.reduction)?)
        } else {
            None
        };
        let mut reference: Option<(Algorithm, i64)> = None;
        for &algorithm in &config.algorithms {
            let mut row = BenchRow {
                cell: *cell,
                repetition,
                seed,
                algorithm,
                weight: None,
                millis: 0.0,
                status: Status::Infeasible,
            };
            if let Some(inst) = &prepared {
                let opts = SolveOptions {
                    alpha: config.alpha,
                    check_invariants: false,
                    deadline: config
                        .time_limit_secs
                        .map(|t| Instant::now() + Duration::from_secs_f64(t)),
                    reduction: config.reduction,
                };
                match inst.timed_solve(algorithm, &opts) {
                    Ok((weight, elapsed)) => {
                        if let Some((other, w)) = reference {
                            if w != weight {
                                return Err(Error::WeightMismatch {
                                    instance: format!("{} rep {repetition} seed {seed}", cell.key()),
                                    detail: format!("{other} found {w}, {algorithm} found {weight}"),
                                });
                            }
                        } else {
                            reference = Some((algorithm, weight));
                        }
                        row.weight = Some(weight);
                        row.millis = elapsed.as_secs_f64() * 1e3;
                        row.status = Status::Ok;
                    }
                    Err(Error::TimedOut) => {
                        row.millis = config.time_limit_secs.unwrap_or(0.0) * 1e3;
                        row.status = Status::Timeout;
                    }
                    Err(e) => return Err(e),
                }
            }
            rows.push(row);
        }
    }
    Ok(rows)
}

/// Runs every cell of the grid. Cells run on the rayon pool when
/// `config.parallel` is set, sequentially otherwise.
pub fn run_grid(config: &BenchConfig) -> Result<Vec<BenchRow>> {
    config.validate()?;
    let cells = config.cells();
    let per_cell: Vec<Vec<BenchRow>> = if config.parallel {
        cells
            .par_iter()
            .map(|c| run_cell(config, c))
            .collect::<Result<_>>()?
    } else {
        cells
            .iter()
            .map(|c| run_cell(config, c))
            .collect::<Result<_>>()?
    };
    Ok(per_cell.into_iter().flatten().collect())
}

pub fn write_results<W: std::io::Write>(rows: &[BenchRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_COLUMNS)?;
    for row in rows {
        w.write_record(row.record())?;
    }
    w.flush()?;
    Ok(())
}

/// Timing statistics over the completed solves sharing one parameter
/// value.
#[derive(Debug, Clone, PartialEq)]
pub struct SliceSummary {
    pub parameter: &'static str,
    pub value: String,
    pub algorithm: Algorithm,
    pub count: usize,
    pub mean_millis: f64,
    pub min_millis: f64,
    pub max_millis: f64,
}

pub const SLICE_PARAMETERS: [&str; 7] = [
    "edge_model",
    "cost_model",
    "n",
    "s_rule",
    "density",
    "r_norm",
    "p_low",
];

fn slice_value(cell: &Cell, parameter: &str) -> Option<String> {
    match parameter {
        "edge_model" => Some(cell.edge_model.name().into()),
        "cost_model" => Some(cell.cost_model.name().into()),
        "n" => Some(cell.n.to_string()),
        "s_rule" => Some(cell.s_rule.name().into()),
        "density" => Some(cell.density.to_string()),
        "r_norm" => cell.r_norm.map(|x| x.to_string()),
        "p_low" => cell.p_low.map(|x| x.to_string()),
        _ => None,
    }
}

/// Groups completed rows by each single parameter and algorithm. Groups
/// whose solves all timed out or were infeasible are omitted with a
/// warning.
pub fn aggregate(rows: &[BenchRow]) -> Vec<SliceSummary> {
    let mut out = Vec::new();
    for parameter in SLICE_PARAMETERS {
        let mut groups: BTreeMap<(String, Algorithm), Vec<f64>> = BTreeMap::new();
        let mut seen: BTreeSet<(String, Algorithm)> = BTreeSet::new();
        for row in rows {
            let Some(value) = slice_value(&row.cell, parameter) else {
                continue;
            };
            seen.insert((value.clone(), row.algorithm));
            if row.status == Status::Ok {
                groups.entry((value, row.algorithm)).or_default().push(row.millis);
            }
        }
        for key in &seen {
            if !groups.contains_key(key) {
                warn!(
                    "no completed solves for {parameter}={} with {}; slice omitted",
                    key.0, key.1
                );
            }
        }
        for ((value, algorithm), times) in groups {
            let count = times.len();
            out.push(SliceSummary {
                parameter,
                value,
                algorithm,
                count,
                mean_millis: times.iter().sum::<f64>() / count as f64,
                min_millis: times.iter().copied().fold(f64::INFINITY, f64::min),
                max_millis: times.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            });
        }
    }
    out
}

/// Mean solve time per cell and algorithm over the completed repetitions.
pub fn cell_means(rows: &[BenchRow]) -> Vec<(Cell, Algorithm, usize, f64)> {
    let mut out: Vec<(Cell, Algorithm, usize, f64)> = Vec::new();
    for row in rows.iter().filter(|r| r.status == Status::Ok) {
        match out
            .iter_mut()
            .find(|(c, a, _, _)| *c == row.cell && *a == row.algorithm)
        {
            Some(entry) => {
                entry.2 += 1;
                entry.3 += row.millis;
            }
            None => out.push((row.cell, row.algorithm, 1, row.millis)),
        }
    }
    for entry in &mut out {
        entry.3 /= entry.2 as f64;
    }
    out
}

pub fn write_slices<W: std::io::Write>(slices: &[SliceSummary], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "parameter",
        "value",
        "algorithm",
        "count",
        "mean_millis",
        "min_millis",
        "max_millis",
    ])?;
    for s in slices {
        w.write_record([
            s.parameter.to_string(),
            s.value.clone(),
            s.algorithm.name().to_string(),
            s.count.to_string(),
            format!("{:.3}", s.mean_millis),
            format!("{:.3}", s.min_millis),
            format!("{:.3}", s.max_millis),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Whitespace-separated columns, one block per parameter, for plotting
/// tools that read column files.
pub fn write_slices_columns<W: std::io::Write>(slices: &[SliceSummary], mut out: W) -> Result<()> {
    let mut current = "";
    for s in slices {
        if s.parameter != current {
            if !current.is_empty() {
                writeln!(out, "\n")?;
            }
            writeln!(out, "# {} value algorithm count mean_ms min_ms max_ms", s.parameter)?;
            current = s.parameter;
        }
        writeln!(
            out,
            "{} {} {} {:.3} {:.3} {:.3}",
            s.value,
            s.algorithm.name(),
            s.count,
            s.mean_millis,
            s.min_millis,
            s.max_millis
        )?;
    }
    out.flush()?;
    Ok(())
}

/// Runs the grid and writes `results.csv`, `cells.csv`, `slices.csv` and
/// `slices.dat` into `out_dir`.
pub fn run_bench(config: &BenchConfig, out_dir: impl AsRef<Path>) -> Result<Vec<BenchRow>> {
    let dir = out_dir.as_ref();
    std::fs::create_dir_all(dir)?;
    let rows = run_grid(config)?;
    write_results(&rows, std::fs::File::create(dir.join("results.csv"))?)?;

    let mut w = csv::Writer::from_path(dir.join("cells.csv"))?;
    w.write_record([
        "edge_model", "cost_model", "n", "s_rule", "s", "density", "r_norm", "p_low", "algorithm",
        "count", "mean_millis",
    ])?;
    for (cell, algo, count, mean) in cell_means(&rows) {
        w.write_record([
            cell.edge_model.name().to_string(),
            cell.cost_model.name().to_string(),
            cell.n.to_string(),
            cell.s_rule.name().to_string(),
            cell.s.to_string(),
            cell.density.to_string(),
            opt(cell.r_norm),
            opt(cell.p_low),
            algo.name().to_string(),
            count.to_string(),
            format!("{mean:.3}"),
        ])?;
    }
    w.flush()?;

    let slices = aggregate(&rows);
    write_slices(&slices, std::fs::File::create(dir.join("slices.csv"))?)?;
    write_slices_columns(&slices, std::io::BufWriter::new(std::fs::File::create(dir.join("slices.dat"))?))?;
    Ok(rows)
}
