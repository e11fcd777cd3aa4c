//! Python bindings for the `esloo` crate.

use std::ops::ControlFlow;

use esloo::acquisition::{self, RepulsionSet};
use esloo::baselines;
use esloo::benchfns::{BenchFunction, FunctionId};
use esloo::esloo as scores;
use esloo::harness::{self, ExperimentConfig, Method};
use esloo::sampler::{self, SamplerConfig, Strategy};
use esloo::{DesignSet, FitOptions, GpModel, KernelKind, KernelParams};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn kernel(name: &str) -> PyResult<KernelKind> {
    match name {
        "matern32" => Ok(KernelKind::Matern32),
        "sqexp" | "squared_exponential" => Ok(KernelKind::SquaredExponential),
        other => Err(PyValueError::new_err(format!("unknown kernel `{other}`"))),
    }
}

fn strategy(name: &str, d: usize) -> PyResult<Strategy> {
    Ok(match name {
        "esloo" => Strategy::EsLoo,
        "ei-only" => Strategy::EiOnly,
        "mse" => Strategy::Mse,
        "eigf" => Strategy::Eigf,
        "mice" => Strategy::Mice(baselines::MiceConfig::for_dim(d)),
        "eigf-rf" => Strategy::EigfRf,
        "mse-rf" => Strategy::MseRf,
        other => return Err(PyValueError::new_err(format!("unknown strategy `{other}`"))),
    })
}

/// Ordinary-kriging model with a tensor-product kernel.
#[pyclass(name = "GpModel", module = "pyesloo")]
struct PyGpModel {
    inner: GpModel,
}

#[pymethods]
impl PyGpModel {
    /// Fits length scales by maximum likelihood.
    #[staticmethod]
    #[pyo3(signature = (points, y, kernel_name = "matern32", seed = 0))]
    fn fit(points: Vec<Vec<f64>>, y: Vec<f64>, kernel_name: &str, seed: u64) -> PyResult<Self> {
        let design = DesignSet::new(points, y).map_err(err)?;
        let opts = FitOptions::new(design.dim()).kind(kernel(kernel_name)?).seed(seed);
        Ok(Self {
            inner: GpModel::fit(design, &opts).map_err(err)?,
        })
    }

    /// Builds a model with fixed variance and length scales.
    #[staticmethod]
    #[pyo3(signature = (points, y, variance, length_scales, kernel_name = "matern32"))]
    fn with_params(points: Vec<Vec<f64>>, y: Vec<f64>, variance: f64, length_scales: Vec<f64>, kernel_name: &str) -> PyResult<Self> {
        let design = DesignSet::new(points, y).map_err(err)?;
        let params = KernelParams::new(variance, length_scales, kernel(kernel_name)?).map_err(err)?;
        Ok(Self {
            inner: GpModel::with_params(design, params).map_err(err)?,
        })
    }

    /// `(mean, variance)` at `x`.
    fn predict(&self, x: Vec<f64>) -> PyResult<(f64, f64)> {
        let p = self.inner.predict(&x).map_err(err)?;
        Ok((p.mean, p.variance))
    }

    /// Leave-one-out `(mean, variance)` at every design point.
    fn loo(&self) -> PyResult<Vec<(f64, f64)>> {
        Ok(self.inner.loo().map_err(err)?.into_iter().map(|r| (r.loo_mean, r.loo_var)).collect())
    }

    /// ES-LOO score at every design point.
    fn esloo_scores(&self) -> PyResult<Vec<f64>> {
        Ok(scores::esloo_scores(&self.inner).map_err(err)?.into_iter().map(|s| s.value).collect())
    }

    #[getter]
    fn mean(&self) -> f64 {
        self.inner.mean()
    }

    #[getter]
    fn variance(&self) -> f64 {
        self.inner.params().variance
    }

    #[getter]
    fn length_scales(&self) -> Vec<f64> {
        self.inner.params().length_scales.clone()
    }

    #[getter]
    fn log_likelihood(&self) -> f64 {
        self.inner.log_likelihood()
    }

    #[getter]
    fn jitter(&self) -> f64 {
        self.inner.jitter()
    }

    fn __len__(&self) -> usize {
        self.inner.design().len()
    }
}

/// GP on log ES-LOO scores, used through pseudo expected improvement.
#[pyclass(name = "ErrorSurrogate", module = "pyesloo")]
struct PyErrorSurrogate {
    inner: scores::ErrorSurrogate,
}

#[pymethods]
impl PyErrorSurrogate {
    #[staticmethod]
    #[pyo3(signature = (model, seed = 0))]
    fn fit(model: &PyGpModel, seed: u64) -> PyResult<Self> {
        let design = model.inner.design();
        let s = scores::esloo_scores(&model.inner).map_err(err)?;
        let opts = FitOptions::new(design.dim()).seed(seed);
        Ok(Self {
            inner: scores::fit_error_surrogate(design, &s, &opts).map_err(err)?,
        })
    }

    /// Expected improvement times the repulsion function of `centers`.
    fn pei(&self, x: Vec<f64>, centers: Vec<Vec<f64>>) -> PyResult<f64> {
        let reps = RepulsionSet::for_surrogate(&self.inner).with_centers(&centers).map_err(err)?;
        acquisition::pei(&x, &self.inner, &reps).map_err(err)
    }

    #[getter]
    fn best(&self) -> f64 {
        self.inner.best()
    }

    #[getter]
    fn length_scales(&self) -> Vec<f64> {
        self.inner.length_scales().to_vec()
    }
}

#[pyfunction]
fn expected_improvement(mean: f64, sd: f64, best: f64) -> f64 {
    acquisition::expected_improvement(mean, sd, best)
}

#[pyfunction]
fn pseudo_points(d: usize, init: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    acquisition::pseudo_points(d, &init)
}

#[pyfunction]
#[pyo3(signature = (n, d, seed = 0))]
fn lhs_maximin(n: usize, d: usize, seed: u64) -> PyResult<Vec<Vec<f64>>> {
    baselines::lhs_maximin(n, d, &mut ChaCha8Rng::seed_from_u64(seed)).map_err(err)
}

#[pyfunction]
fn bench_eval(function: &str, x: Vec<f64>) -> PyResult<f64> {
    let id: FunctionId = function.parse().map_err(err)?;
    BenchFunction::new(id).eval(&x).map_err(err)
}

#[pyfunction]
fn list_functions() -> Vec<(&'static str, usize)> {
    FunctionId::ALL.iter().map(|f| (f.as_str(), f.dim())).collect()
}

#[pyfunction]
fn list_methods() -> Vec<&'static str> {
    Method::ALL.iter().map(|m| m.as_str()).collect()
}

/// Adaptive design on a benchmark function. Returns the final points and
/// responses.
#[pyfunction]
#[pyo3(signature = (function, init_points, strategy_name, budget, batch = 1, seed = 0))]
fn run_adaptive(
    py: Python<'_>,
    function: &str,
    init_points: Vec<Vec<f64>>,
    strategy_name: &str,
    budget: usize,
    batch: usize,
    seed: u64,
) -> PyResult<(Vec<Vec<f64>>, Vec<f64>)> {
    let f = BenchFunction::new(function.parse().map_err(err)?);
    let strat = strategy(strategy_name, f.dim())?;
    py.detach(|| {
        let init = sampler::evaluate_design(&f, init_points).map_err(err)?;
        let cfg = SamplerConfig::new(strat, budget).batch_size(batch).seed(seed);
        let state = sampler::Sampler::new(&f, init, cfg)
            .map_err(err)?
            .run(|_| ControlFlow::Continue(()))
            .map_err(err)?;
        let pts = state.design.points().map(<[f64]>::to_vec).collect();
        Ok((pts, state.design.responses().to_vec()))
    })
}

type ResultRow = (usize, String, String, usize, f64, f64);

/// Replicated experiment; rows are `(replication, method, function, n,
/// rmse, seconds)`.
#[pyfunction]
#[pyo3(signature = (function, method, init_size = None, budget = None, batch = None, replications = 10, test_points = 3000, seed = 0, timing = true))]
#[allow(clippy::too_many_arguments)]
fn run_experiment(
    py: Python<'_>,
    function: &str,
    method: &str,
    init_size: Option<usize>,
    budget: Option<usize>,
    batch: Option<usize>,
    replications: usize,
    test_points: usize,
    seed: u64,
    timing: bool,
) -> PyResult<Vec<ResultRow>> {
    let mut cfg = ExperimentConfig::new(function.parse().map_err(err)?, method.parse().map_err(err)?);
    cfg.init_size = init_size.unwrap_or(cfg.init_size);
    cfg.budget = budget.unwrap_or(cfg.budget);
    cfg.batch = batch.unwrap_or(cfg.batch);
    cfg.replications = replications;
    cfg.test_points = test_points;
    cfg.seed = seed;
    cfg.record_timing = timing;
    let out = py.detach(|| harness::run_experiment(&cfg)).map_err(err)?;
    if let Some(f) = out.failures.first() {
        return Err(PyValueError::new_err(format!("replication {} failed: {}", f.replication, f.message)));
    }
    Ok(out
        .records
        .into_iter()
        .map(|r| (r.replication, r.method, r.function, r.n, r.rmse, r.seconds))
        .collect())
}

#[pymodule]
fn pyesloo(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGpModel>()?;
    m.add_class::<PyErrorSurrogate>()?;
    m.add_function(wrap_pyfunction!(expected_improvement, m)?)?;
    m.add_function(wrap_pyfunction!(pseudo_points, m)?)?;
    m.add_function(wrap_pyfunction!(lhs_maximin, m)?)?;
    m.add_function(wrap_pyfunction!(bench_eval, m)?)?;
    m.add_function(wrap_pyfunction!(list_functions, m)?)?;
    m.add_function(wrap_pyfunction!(list_methods, m)?)?;
    m.add_function(wrap_pyfunction!(run_adaptive, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    Ok(())
}
