//! Experiment runner: replicated runs of one method on one benchmark, RMSE
//! checkpoints against a shared uniform test set, and CSV output.

use std::fmt;
use std::fs;
use std::ops::ControlFlow;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::baselines::{lhs_maximin, MiceConfig};
use crate::benchfns::{test_grid, BenchFunction, FunctionId, TestGrid, DEFAULT_TEST_POINTS};
use crate::error::{Error, Result};
use crate::gp::{DesignSet, FitOptions, GpModel};
use crate::sampler::{evaluate_design, Sampler, SamplerConfig, SamplerError, Strategy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    EsLoo,
    EsLooBatch,
    EiOnly,
    Mse,
    Eigf,
    Mice,
    Lhs,
    EigfRf,
    MseRf,
}

impl Method {
    pub const ALL: [Method; 9] = [
        Method::EsLoo,
        Method::EsLooBatch,
        Method::EiOnly,
        Method::Mse,
        Method::Eigf,
        Method::Mice,
        Method::Lhs,
        Method::EigfRf,
        Method::MseRf,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::EsLoo => "esloo",
            Method::EsLooBatch => "esloo-batch",
            Method::EiOnly => "ei-only",
            Method::Mse => "mse",
            Method::Eigf => "eigf",
            Method::Mice => "mice",
            Method::Lhs => "lhs",
            Method::EigfRf => "eigf-rf",
            Method::MseRf => "mse-rf",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Method::EsLoo => "ES-LOO with pseudo expected improvement, one point per iteration",
            Method::EsLooBatch => "ES-LOO with pseudo expected improvement, batches (default q = 4)",
            Method::EiOnly => "ES-LOO surrogate maximised by plain expected improvement",
            Method::Mse => "maximum predictive variance",
            Method::Eigf => "expected improvement for global fit",
            Method::Mice => "mutual information with nugget over maximin candidates",
            Method::Lhs => "one-shot maximin Latin hypercube at every size",
            Method::EigfRf => "EIGF times repulsion at the design points",
            Method::MseRf => "MSE times repulsion at the design points",
        }
    }

    pub fn default_batch(self) -> usize {
        if self == Method::EsLooBatch {
            4
        } else {
            1
        }
    }

    fn strategy(self, d: usize) -> Option<Strategy> {
        Some(match self {
            Method::EsLoo | Method::EsLooBatch => Strategy::EsLoo,
            Method::EiOnly => Strategy::EiOnly,
            Method::Mse => Strategy::Mse,
            Method::Eigf => Strategy::Eigf,
            Method::Mice => Strategy::Mice(MiceConfig::for_dim(d)),
            Method::EigfRf => Strategy::EigfRf,
            Method::MseRf => Strategy::MseRf,
            Method::Lhs => return None,
        })
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown method id `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub function: FunctionId,
    pub method: Method,
    pub init_size: usize,
    pub budget: usize,
    pub batch: usize,
    pub replications: usize,
    pub test_points: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
    /// Wall-clock seconds in the CSV; zero when disabled so output is
    /// byte-reproducible.
    pub record_timing: bool,
    /// Stop a replication once its RMSE falls below this value.
    pub stop_rmse: Option<f64>,
}

impl ExperimentConfig {
    /// Defaults: initial size `3 d`, budget `30 d`, ten replications and
    /// 3000 test points.
    pub fn new(function: FunctionId, method: Method) -> Self {
        let d = function.dim();
        Self {
            function,
            method,
            init_size: 3 * d,
            budget: 30 * d,
            batch: method.default_batch(),
            replications: 10,
            test_points: DEFAULT_TEST_POINTS,
            seed: 0,
            out: None,
            record_timing: true,
            stop_rmse: None,
        }
    }

    /// Parses `key = value` lines; `#` starts a comment. `function` and
    /// `method` are required, other keys override the defaults.
    pub fn from_kv_str(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key=value, got `{raw}`", lineno + 1)))?;
            pairs.push((k.trim().replace('-', "_"), v.trim().to_string()));
        }
        let lookup = |key: &str| pairs.iter().rev().find(|(k, _)| k == key).map(|(_, v)| v.as_str());
        let function: FunctionId = lookup("function")
            .ok_or_else(|| Error::Config("missing `function`".into()))?
            .parse()?;
        let method: Method = lookup("method")
            .ok_or_else(|| Error::Config("missing `method`".into()))?
            .parse()?;
        let mut cfg = Self::new(function, method);
        for (k, v) in &pairs {
            cfg.set(k, v)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_kv_file(path: &Path) -> Result<Self> {
        Self::from_kv_str(&fs::read_to_string(path)?)
    }

    /// Sets one option by its config-file key.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: FromStr>(key: &str, v: &str) -> Result<T> {
            v.parse()
                .map_err(|_| Error::Config(format!("invalid value `{v}` for `{key}`")))
        }
        match key {
            "function" => {
                let f: FunctionId = value.parse()?;
                if f != self.function {
                    let method = self.method;
                    *self = Self { out: self.out.take(), seed: self.seed, ..Self::new(f, method) };
                }
            }
            "method" => {
                let m: Method = value.parse()?;
                if self.batch == self.method.default_batch() {
                    self.batch = m.default_batch();
                }
                self.method = m;
            }
            "init_size" => self.init_size = num(key, value)?,
            "budget" => self.budget = num(key, value)?,
            "batch" => self.batch = num(key, value)?,
            "replications" => self.replications = num(key, value)?,
            "test_points" => self.test_points = num(key, value)?,
            "seed" => self.seed = num(key, value)?,
            "out" => self.out = Some(PathBuf::from(value)),
            "timing" => self.record_timing = num(key, value)?,
            "stop_rmse" => self.stop_rmse = Some(num(key, value)?),
            other => return Err(Error::Config(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.init_size == 0 {
            return Err(Error::Config("init_size must be positive".into()));
        }
        if self.init_size > self.budget {
            return Err(Error::Config(format!(
                "init_size {} exceeds budget {}",
                self.init_size, self.budget
            )));
        }
        if self.replications == 0 {
            return Err(Error::Config("replications must be at least 1".into()));
        }
        if self.test_points == 0 {
            return Err(Error::Config("test_points must be at least 1".into()));
        }
        if self.batch == 0 {
            return Err(Error::Config("batch must be at least 1".into()));
        }
        Ok(())
    }
}

/// One RMSE checkpoint.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RmseRecord {
    pub replication: usize,
    pub method: String,
    pub function: String,
    pub n: usize,
    pub rmse: f64,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MedianRow {
    pub function: String,
    pub method: String,
    pub n: usize,
    pub median_rmse: f64,
}

#[derive(Debug, Clone)]
pub struct ReplicationFailure {
    pub replication: usize,
    pub message: String,
}

#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    pub records: Vec<RmseRecord>,
    pub failures: Vec<ReplicationFailure>,
    /// Final design of each successful replication.
    pub designs: Vec<(usize, DesignSet)>,
}

/// Root mean squared difference.
pub fn rmse(predictions: &[f64], truths: &[f64]) -> Result<f64> {
    if predictions.is_empty() || predictions.len() != truths.len() {
        return Err(Error::InvalidArgument(format!(
            "rmse needs equal non-empty lengths, got {} and {}",
            predictions.len(),
            truths.len()
        )));
    }
    let sse: f64 = predictions.iter().zip(truths).map(|(m, f)| (m - f) * (m - f)).sum();
    Ok((sse / predictions.len() as f64).sqrt())
}

/// RMSE of a model's predictive mean over a test set.
pub fn model_rmse(model: &GpModel, grid: &TestGrid) -> Result<f64> {
    let preds = grid.points.iter().map(|x| model.predict_mean(x)).collect::<Result<Vec<f64>>>()?;
    rmse(&preds, &grid.values)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn fnv1a(s: &str) -> u64 {
    s.bytes()
        .fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3))
}

/// Seed of the shared test set for `function`.
pub fn test_grid_seed(master: u64, function: FunctionId) -> u64 {
    splitmix64(splitmix64(master) ^ fnv1a(function.as_str()))
}

/// Seed of replication `r`; independent of the method so every method sees
/// the same initial designs.
pub fn replication_seed(master: u64, function: FunctionId, r: usize) -> u64 {
    splitmix64(test_grid_seed(master, function) ^ splitmix64(r as u64 + 1))
}

/// Maximin LHS initial design of replication `r`, evaluated.
pub fn initial_design(cfg: &ExperimentConfig, r: usize) -> Result<DesignSet> {
    let f = BenchFunction::new(cfg.function);
    let mut rng = ChaCha8Rng::seed_from_u64(replication_seed(cfg.seed, cfg.function, r));
    evaluate_design(&f, lhs_maximin(cfg.init_size, f.dim(), &mut rng)?)
}

struct Replication {
    records: Vec<RmseRecord>,
    design: DesignSet,
}

fn run_replication(cfg: &ExperimentConfig, grid: &TestGrid, r: usize) -> Result<Replication> {
    let started = Instant::now();
    let f = BenchFunction::new(cfg.function);
    let d = f.dim();
    let seconds = || if cfg.record_timing { started.elapsed().as_secs_f64() } else { 0.0 };
    let record = |n: usize, rmse: f64, seconds: f64| RmseRecord {
        replication: r,
        method: cfg.method.as_str().to_string(),
        function: cfg.function.as_str().to_string(),
        n,
        rmse,
        seconds,
    };
    let init = initial_design(cfg, r)?;
    let seed = replication_seed(cfg.seed, cfg.function, r);
    let sampler_seed = splitmix64(seed ^ 0x5EED);

    let Some(strategy) = cfg.method.strategy(d) else {
        // one-shot designs at init, init + d, ..., budget
        let mut sizes: Vec<usize> = (cfg.init_size..=cfg.budget).step_by(d).collect();
        if sizes.last() != Some(&cfg.budget) {
            sizes.push(cfg.budget);
        }
        let mut records = Vec::new();
        let mut last = init.clone();
        for n in sizes {
            let design = if n == cfg.init_size {
                init.clone()
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(seed ^ n as u64));
                evaluate_design(&f, lhs_maximin(n, d, &mut rng)?)?
            };
            // at the initial size, fit exactly as the adaptive samplers do
            let fit_seed = if n == cfg.init_size {
                ChaCha8Rng::seed_from_u64(sampler_seed).next_u64()
            } else {
                splitmix64(seed) ^ n as u64
            };
            let model = GpModel::fit(design.clone(), &FitOptions::new(d).seed(fit_seed))?;
            let value = model_rmse(&model, grid)?;
            records.push(record(n, value, seconds()));
            last = design;
            if cfg.stop_rmse.is_some_and(|t| value < t) {
                break;
            }
        }
        return Ok(Replication { records, design: last });
    };

    let sampler_cfg = SamplerConfig::new(strategy, cfg.budget)
        .batch_size(cfg.batch)
        .seed(sampler_seed);
    let sampler = Sampler::new(&f, init, sampler_cfg)?;
    let mut records = Vec::new();
    let mut failure = None;
    let result = sampler.run(|state| match model_rmse(&state.main_model, grid) {
        Ok(value) => {
            records.push(record(state.design.len(), value, seconds()));
            if cfg.stop_rmse.is_some_and(|t| value < t) {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        }
        Err(e) => {
            failure = Some(e);
            ControlFlow::Break(())
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    match result {
        Ok(state) => Ok(Replication {
            records,
            design: state.design,
        }),
        Err(SamplerError::Setup(e)) => Err(e),
        Err(SamplerError::Aborted { source, .. }) => Err(source),
    }
}

/// Runs every replication. A failing replication is reported in
/// `failures` and contributes no records; the others still run.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutcome> {
    cfg.validate()?;
    let f = BenchFunction::new(cfg.function);
    let grid = test_grid(&f, cfg.test_points, test_grid_seed(cfg.seed, cfg.function))?;
    let results: Vec<(usize, Result<Replication>)> = (0..cfg.replications)
        .into_par_iter()
        .map(|r| (r, run_replication(cfg, &grid, r)))
        .collect();
    let mut outcome = ExperimentOutcome {
        records: Vec::new(),
        failures: Vec::new(),
        designs: Vec::new(),
    };
    for (r, res) in results {
        match res {
            Ok(rep) => {
                outcome.records.extend(rep.records);
                outcome.designs.push((r, rep.design));
            }
            Err(e) => outcome.failures.push(ReplicationFailure {
                replication: r,
                message: e.to_string(),
            }),
        }
    }
    Ok(outcome)
}

/// Median RMSE across replications at every design size, per
/// (function, method).
pub fn median_table(records: &[RmseRecord]) -> Vec<MedianRow> {
    let mut keys: Vec<(String, String, usize)> = records
        .iter()
        .map(|r| (r.function.clone(), r.method.clone(), r.n))
        .collect();
    keys.sort();
    keys.dedup();
    keys.into_iter()
        .map(|(function, method, n)| {
            let mut vals: Vec<f64> = records
                .iter()
                .filter(|r| r.function == function && r.method == method && r.n == n)
                .map(|r| r.rmse)
                .collect();
            MedianRow {
                median_rmse: median(&mut vals),
                function,
                method,
                n,
            }
        })
        .collect()
}

pub fn median(vals: &mut [f64]) -> f64 {
    vals.sort_by(f64::total_cmp);
    let k = vals.len();
    if k == 0 {
        f64::NAN
    } else if k % 2 == 1 {
        vals[k / 2]
    } else {
        0.5 * (vals[k / 2 - 1] + vals[k / 2])
    }
}

/// Header `replication,method,function,n,rmse,seconds`.
pub fn write_records_csv<W: std::io::Write>(writer: W, records: &[RmseRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    if records.is_empty() {
        w.write_record(["replication", "method", "function", "n", "rmse", "seconds"])?;
    }
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Header `function,method,n,median_rmse`.
pub fn write_median_csv<W: std::io::Write>(writer: W, rows: &[MedianRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    if rows.is_empty() {
        w.write_record(["function", "method", "n", "median_rmse"])?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Design as CSV with columns `x1..xd,y`.
pub fn write_design_csv<W: std::io::Write>(writer: W, design: &DesignSet) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header: Vec<String> = (1..=design.dim()).map(|j| format!("x{j}")).collect();
    header.push("y".into());
    w.write_record(&header)?;
    for (x, y) in design.points().zip(design.responses()) {
        let mut row: Vec<String> = x.iter().map(|v| v.to_string()).collect();
        row.push(y.to_string());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_design_csv<R: std::io::Read>(reader: R) -> Result<DesignSet> {
    let mut rd = csv::Reader::from_reader(reader);
    let header = rd.headers()?.clone();
    let d = header.len().saturating_sub(1);
    let expected: Vec<String> = (1..=d).map(|j| format!("x{j}")).chain(["y".to_string()]).collect();
    if d == 0 || header.iter().ne(expected.iter().map(String::as_str)) {
        return Err(Error::Config(format!("design header must be x1..xd,y, got {header:?}")));
    }
    let mut points = Vec::new();
    let mut responses = Vec::new();
    for row in rd.records() {
        let row = row?;
        let vals = row
            .iter()
            .map(|v| v.trim().parse::<f64>().map_err(|_| Error::Config(format!("invalid number `{v}`"))))
            .collect::<Result<Vec<f64>>>()?;
        responses.push(vals[d]);
        points.push(vals[..d].to_vec());
    }
    DesignSet::new(points, responses)
}

/// Companion paths of an output CSV: `<stem>_median.csv` and
/// `<stem>_design_r<k>.csv`.
pub fn median_path(out: &Path) -> PathBuf {
    sibling(out, "median")
}

pub fn design_path(out: &Path, replication: usize) -> PathBuf {
    sibling(out, &format!("design_r{replication}"))
}

fn sibling(out: &Path, suffix: &str) -> PathBuf {
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("results");
    out.with_file_name(format!("{stem}_{suffix}.csv"))
}

/// Writes the records, the median table and the final designs next to
/// `out`.
pub fn write_outputs(out: &Path, outcome: &ExperimentOutcome) -> Result<()> {
    if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    write_records_csv(fs::File::create(out)?, &outcome.records)?;
    write_median_csv(fs::File::create(median_path(out))?, &median_table(&outcome.records))?;
    for (r, design) in &outcome.designs {
        write_design_csv(fs::File::create(design_path(out, *r))?, design)?;
    }
    Ok(())
}
