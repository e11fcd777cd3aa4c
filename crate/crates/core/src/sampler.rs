//! The adaptive sampling loop, sequential and batch.
//!
//! Each outer iteration refits the main GP, computes ES-LOO scores at every
//! design point, fits the error surrogate on their logarithm and then picks
//! `q` points by maximising PEI, adding every pick to the repulsion set
//! before the next one. Only then is the oracle called.

use std::ops::ControlFlow;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error as ThisError;

use crate::acquisition::{pei, pseudo_points, RepulsionSet};
use crate::baselines::{eigf, mice_next, mse_criterion, MiceConfig};
use crate::benchfns::BenchFunction;
use crate::error::{Error, Result};
use crate::esloo::{esloo_scores, fit_error_surrogate, ErrorSurrogate};
use crate::gp::{sq_dist, DesignSet, FitOptions, GpModel, KernelKind, DUPLICATE_TOL};
use crate::optimizer::{de_maximize, DeConfig};

/// A deterministic function on `[0, 1]^d`.
pub trait Oracle: Sync {
    fn dim(&self) -> usize;
    fn evaluate(&self, x: &[f64]) -> std::result::Result<f64, String>;
}

impl Oracle for BenchFunction {
    fn dim(&self) -> usize {
        BenchFunction::dim(self)
    }

    fn evaluate(&self, x: &[f64]) -> std::result::Result<f64, String> {
        self.eval(x).map_err(|e| e.to_string())
    }
}

/// Wraps a closure as an [`Oracle`].
pub struct FnOracle<F> {
    dim: usize,
    f: F,
}

impl<F: Fn(&[f64]) -> f64 + Sync> FnOracle<F> {
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<F: Fn(&[f64]) -> f64 + Sync> Oracle for FnOracle<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn evaluate(&self, x: &[f64]) -> std::result::Result<f64, String> {
        Ok((self.f)(x))
    }
}

/// How the next points are chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Strategy {
    /// PEI on the log ES-LOO surrogate with design and pseudo points as
    /// repulsion centres.
    EsLoo,
    /// Plain EI on the log ES-LOO surrogate, no repulsion.
    EiOnly,
    /// Maximum predictive variance.
    Mse,
    /// Expected improvement for global fit.
    Eigf,
    /// Mutual information over a regenerated candidate set.
    Mice(MiceConfig),
    /// EIGF times a repulsion function centred at the design points.
    EigfRf,
    /// MSE times a repulsion function centred at the design points.
    MseRf,
}

impl Strategy {
    fn has_repulsion(self) -> bool {
        matches!(self, Strategy::EsLoo | Strategy::EigfRf | Strategy::MseRf)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SamplerConfig {
    pub strategy: Strategy,
    /// Final design size.
    pub budget: usize,
    /// Points chosen per outer iteration.
    pub batch_size: usize,
    pub kernel: KernelKind,
    /// Overrides the `10 d` / `50 d` differential-evolution defaults.
    pub de: Option<DeConfig>,
    /// DE reruns with fresh seeds when a pick duplicates an existing point.
    pub duplicate_retries: usize,
    pub seed: u64,
}

impl SamplerConfig {
    pub fn new(strategy: Strategy, budget: usize) -> Self {
        Self {
            strategy,
            budget,
            batch_size: 1,
            kernel: KernelKind::Matern32,
            de: None,
            duplicate_retries: 5,
            seed: 0,
        }
    }

    pub fn batch_size(mut self, q: usize) -> Self {
        self.batch_size = q;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// One oracle call.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    /// Outer iteration, starting at 1.
    pub iteration: usize,
    pub point: Vec<f64>,
    pub response: f64,
}

#[derive(Debug, Clone)]
pub struct SamplerState {
    pub design: DesignSet,
    pub main_model: GpModel,
    /// Error surrogate of the last iteration, for the ES-LOO strategies.
    pub surrogate: Option<ErrorSurrogate>,
    /// Repulsion set of the last iteration including its picks.
    pub reps: Option<RepulsionSet>,
    pub pseudo_points: Vec<Vec<f64>>,
    pub history: Vec<Evaluation>,
    pub initial_size: usize,
    pub iteration: usize,
}

#[derive(Debug, ThisError)]
pub enum SamplerError {
    #[error(transparent)]
    Setup(#[from] Error),
    #[error("sampling aborted after {} evaluations: {source}", .state.history.len())]
    Aborted {
        state: Box<SamplerState>,
        #[source]
        source: Error,
    },
}

enum Acquisition {
    Surrogate(ErrorSurrogate, Option<RepulsionSet>),
    Main(Option<RepulsionSet>),
    Mice(MiceConfig),
}

/// Drives the loop one outer iteration at a time.
pub struct Sampler<'o, O: Oracle + ?Sized> {
    oracle: &'o O,
    cfg: SamplerConfig,
    state: SamplerState,
    rng: ChaCha8Rng,
}

impl<'o, O: Oracle + ?Sized> Sampler<'o, O> {
    pub fn new(oracle: &'o O, init: DesignSet, cfg: SamplerConfig) -> Result<Self> {
        if init.dim() != oracle.dim() {
            return Err(Error::DimensionMismatch {
                expected: oracle.dim(),
                got: init.dim(),
            });
        }
        if cfg.budget < init.len() {
            return Err(Error::InvalidArgument(format!(
                "budget {} below initial design size {}",
                cfg.budget,
                init.len()
            )));
        }
        if cfg.batch_size == 0 {
            return Err(Error::InvalidArgument("batch size must be at least 1".into()));
        }
        if cfg.batch_size > 1 && !cfg.strategy.has_repulsion() {
            return Err(Error::InvalidArgument(format!(
                "{:?} has no repulsion term and cannot select batches",
                cfg.strategy
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let d = init.dim();
        let init_points: Vec<Vec<f64>> = init.points().map(<[f64]>::to_vec).collect();
        let opts = FitOptions::new(d).kind(cfg.kernel).seed(rng.next_u64());
        let main_model = GpModel::fit(init.clone(), &opts)?;
        let state = SamplerState {
            initial_size: init.len(),
            design: init,
            main_model,
            surrogate: None,
            reps: None,
            pseudo_points: pseudo_points(d, &init_points),
            history: Vec::new(),
            iteration: 0,
        };
        Ok(Self { oracle, cfg, state, rng })
    }

    pub fn state(&self) -> &SamplerState {
        &self.state
    }

    pub fn into_state(self) -> SamplerState {
        self.state
    }

    pub fn remaining(&self) -> usize {
        self.cfg.budget - self.state.design.len()
    }

    fn de_config(&mut self) -> DeConfig {
        let d = self.state.design.dim();
        self.cfg.de.clone().unwrap_or_else(|| DeConfig::for_dim(d)).seed(self.rng.next_u64())
    }

    fn build_acquisition(&mut self) -> Result<Acquisition> {
        let d = self.state.design.dim();
        let main = &self.state.main_model;
        Ok(match self.cfg.strategy {
            Strategy::EsLoo | Strategy::EiOnly => {
                let scores = esloo_scores(main)?;
                let warm = self.state.surrogate.as_ref().map(|s| s.length_scales().to_vec());
                let opts = FitOptions::new(d).kind(self.cfg.kernel).seed(self.rng.next_u64()).warm_start(warm);
                let surrogate = fit_error_surrogate(&self.state.design, &scores, &opts)?;
                let reps = if self.cfg.strategy == Strategy::EsLoo {
                    Some(
                        RepulsionSet::for_surrogate(&surrogate)
                            .with_centers(self.state.design.points())?
                            .with_centers(&self.state.pseudo_points)?,
                    )
                } else {
                    None
                };
                self.state.surrogate = Some(surrogate.clone());
                Acquisition::Surrogate(surrogate, reps)
            }
            Strategy::Mse | Strategy::Eigf => Acquisition::Main(None),
            Strategy::MseRf | Strategy::EigfRf => {
                let p = main.params();
                let reps = RepulsionSet::new(p.kind, p.length_scales.clone()).with_centers(self.state.design.points())?;
                Acquisition::Main(Some(reps))
            }
            Strategy::Mice(cfg) => Acquisition::Mice(cfg),
        })
    }

    fn is_duplicate(&self, x: &[f64], pending: &[Vec<f64>]) -> bool {
        let tol2 = DUPLICATE_TOL * DUPLICATE_TOL;
        self.state.design.nearest_within(x, DUPLICATE_TOL).is_some() || pending.iter().any(|p| sq_dist(p, x) <= tol2)
    }

    fn maximize_pick(&mut self, acq: &Acquisition, reps: Option<&RepulsionSet>, pending: &[Vec<f64>]) -> Result<Vec<f64>> {
        let d = self.state.design.dim();
        if let Acquisition::Mice(cfg) = acq {
            return mice_next(&self.state.main_model, cfg, &mut self.rng);
        }
        for _ in 0..=self.cfg.duplicate_retries {
            let de = self.de_config();
            let result = match acq {
                Acquisition::Surrogate(surrogate, _) => match reps {
                    Some(r) => de_maximize(|x| pei(x, surrogate, r).unwrap_or(f64::NEG_INFINITY), d, &de)?,
                    None => {
                        let empty = RepulsionSet::for_surrogate(surrogate);
                        de_maximize(|x| pei(x, surrogate, &empty).unwrap_or(f64::NEG_INFINITY), d, &de)?
                    }
                },
                Acquisition::Main(_) => {
                    let model = &self.state.main_model;
                    let crit = |x: &[f64]| -> f64 {
                        let v = match self.cfg.strategy {
                            Strategy::Mse | Strategy::MseRf => mse_criterion(model, x),
                            _ => eigf(model, x),
                        };
                        v.unwrap_or(f64::NEG_INFINITY)
                    };
                    match reps {
                        Some(r) => de_maximize(crate::baselines::repulsion_modified(crit, r), d, &de)?,
                        None => de_maximize(crit, d, &de)?,
                    }
                }
                Acquisition::Mice(_) => unreachable!(),
            };
            if !self.is_duplicate(&result.point, pending) {
                return Ok(result.point);
            }
        }
        // the criterion has collapsed onto existing points; fall back to a fresh uniform point
        loop {
            let x: Vec<f64> = (0..d).map(|_| self.rng.random::<f64>()).collect();
            if !self.is_duplicate(&x, pending) {
                return Ok(x);
            }
        }
    }

    /// Chooses `q` new points without calling the oracle. Every pick joins
    /// the repulsion set before the next one is chosen.
    pub fn propose_batch(&mut self, q: usize) -> Result<Vec<Vec<f64>>> {
        let acq = self.build_acquisition()?;
        let mut reps = match &acq {
            Acquisition::Surrogate(_, r) | Acquisition::Main(r) => r.clone(),
            Acquisition::Mice(_) => None,
        };
        let mut picks: Vec<Vec<f64>> = Vec::with_capacity(q);
        for _ in 0..q {
            let x = self.maximize_pick(&acq, reps.as_ref(), &picks)?;
            if let Some(r) = reps.as_mut() {
                r.push(&x)?;
            }
            picks.push(x);
        }
        self.state.reps = reps;
        Ok(picks)
    }

    /// One outer iteration: propose, evaluate, append and refit.
    /// Returns the number of points added, zero once the budget is spent.
    pub fn step(&mut self) -> Result<usize> {
        let q = self.cfg.batch_size.min(self.remaining());
        if q == 0 {
            return Ok(0);
        }
        let picks = self.propose_batch(q)?;
        let mut responses = Vec::with_capacity(q);
        for x in &picks {
            match self.oracle.evaluate(x) {
                Ok(y) if y.is_finite() => responses.push(y),
                Ok(y) => {
                    return Err(Error::Oracle {
                        point: x.clone(),
                        reason: format!("non-finite response {y}"),
                    })
                }
                Err(reason) => {
                    return Err(Error::Oracle {
                        point: x.clone(),
                        reason,
                    })
                }
            }
        }
        self.state.iteration += 1;
        for (x, y) in picks.into_iter().zip(responses) {
            self.state.design.push(&x, y)?;
            self.state.history.push(Evaluation {
                iteration: self.state.iteration,
                point: x,
                response: y,
            });
        }
        let d = self.state.design.dim();
        let opts = FitOptions::new(d)
            .kind(self.cfg.kernel)
            .seed(self.rng.next_u64())
            .warm_start(Some(self.state.main_model.params().length_scales.clone()));
        self.state.main_model = GpModel::fit(self.state.design.clone(), &opts)?;
        Ok(q)
    }

    /// Runs to the budget. `observer` sees the state after the initial fit
    /// and after every batch; returning `Break` stops early.
    pub fn run<F>(mut self, mut observer: F) -> std::result::Result<SamplerState, SamplerError>
    where
        F: FnMut(&SamplerState) -> ControlFlow<()>,
    {
        if observer(&self.state).is_break() {
            return Ok(self.state);
        }
        while self.remaining() > 0 {
            if let Err(source) = self.step() {
                return Err(SamplerError::Aborted {
                    state: Box::new(self.state),
                    source,
                });
            }
            if observer(&self.state).is_break() {
                break;
            }
        }
        Ok(self.state)
    }
}

/// Extends `init` to `cfg.budget` points.
pub fn run_adaptive<O: Oracle + ?Sized>(
    oracle: &O,
    init: DesignSet,
    cfg: SamplerConfig,
) -> std::result::Result<SamplerState, SamplerError> {
    Sampler::new(oracle, init, cfg)?.run(|_| ControlFlow::Continue(()))
}

/// Evaluates `oracle` on `points`, producing a design.
pub fn evaluate_design<O: Oracle + ?Sized>(oracle: &O, points: Vec<Vec<f64>>) -> Result<DesignSet> {
    let responses = points
        .iter()
        .map(|x| {
            oracle.evaluate(x).map_err(|reason| Error::Oracle {
                point: x.clone(),
                reason,
            })
        })
        .collect::<Result<Vec<f64>>>()?;
    DesignSet::new(points, responses)
}
