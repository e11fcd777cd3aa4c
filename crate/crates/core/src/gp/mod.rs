//! Ordinary kriging: kernels, maximum-likelihood fitting, prediction and
//! fast leave-one-out predictions.

mod design;
mod kernel;
mod mle;

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use design::{min_pairwise_distance, sq_dist, DesignSet, DUPLICATE_TOL};
pub use kernel::{matern32, sqexp_corr, KernelKind, KernelParams};
pub use mle::{profile_log_likelihood, JITTER_SCHEDULE};

use crate::error::{check_dim, Error, Result};
use mle::{forward_solve, Profiled};

/// Per-dimension interval for the length scales.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaBounds {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl ThetaBounds {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        check_dim(lower.len(), upper.len())?;
        for (lo, hi) in lower.iter().zip(&upper) {
            if !(*lo > 0.0 && lo <= hi && hi.is_finite()) {
                return Err(Error::InvalidArgument(format!("invalid length-scale bounds [{lo}, {hi}]")));
            }
        }
        Ok(Self { lower, upper })
    }

    /// Same interval in every dimension.
    pub fn uniform(d: usize, lower: f64, upper: f64) -> Result<Self> {
        Self::new(vec![lower; d], vec![upper; d])
    }

    /// `[1e-2, 2]` per normalised dimension.
    pub fn default_for(d: usize) -> Self {
        Self::uniform(d, 1e-2, 2.0).expect("valid default bounds")
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }
}

/// Settings for [`GpModel::fit`].
#[derive(Debug, Clone)]
pub struct FitOptions {
    pub kind: KernelKind,
    pub bounds: ThetaBounds,
    /// Number of quasi-Newton starts; the first is replaced by `warm_start`.
    pub starts: usize,
    pub warm_start: Option<Vec<f64>>,
    pub seed: u64,
}

impl FitOptions {
    pub fn new(d: usize) -> Self {
        Self {
            kind: KernelKind::Matern32,
            bounds: ThetaBounds::default_for(d),
            starts: 5,
            warm_start: None,
            seed: 0,
        }
    }

    pub fn kind(mut self, kind: KernelKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn bounds(mut self, bounds: ThetaBounds) -> Self {
        self.bounds = bounds;
        self
    }

    pub fn warm_start(mut self, theta: Option<Vec<f64>>) -> Self {
        self.warm_start = theta;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// Predictive mean and variance at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub mean: f64,
    pub variance: f64,
}

/// Leave-one-out prediction at a design point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LooRecord {
    pub index: usize,
    pub loo_mean: f64,
    pub loo_var: f64,
    pub abs_error: f64,
}

/// A fitted ordinary-kriging model. Immutable once built.
#[derive(Debug, Clone)]
pub struct GpModel {
    design: DesignSet,
    params: KernelParams,
    mean: f64,
    jitter: f64,
    log_likelihood: f64,
    chol_l: DMatrix<f64>,
    r_inv: DMatrix<f64>,
    alpha: DVector<f64>,
    r_inv_one: DVector<f64>,
    one_r_inv_one: f64,
}

impl GpModel {
    /// Fits length scales by maximising the profile likelihood; the process
    /// variance and constant mean take their closed-form estimates.
    pub fn fit(design: DesignSet, opts: &FitOptions) -> Result<Self> {
        let d = design.dim();
        check_dim(d, opts.bounds.dim())?;
        let lo: Vec<f64> = opts.bounds.lower.iter().map(|v| v.ln()).collect();
        let hi: Vec<f64> = opts.bounds.upper.iter().map(|v| v.ln()).collect();

        let mut starts: Vec<Vec<f64>> = if design.len() == 1 {
            Vec::new()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            crate::lhs::random_lhs(opts.starts.max(1), d, &mut rng)
                .into_iter()
                .map(|u| (0..d).map(|j| lo[j] + u[j] * (hi[j] - lo[j])).collect())
                .collect()
        };
        if let Some(warm) = &opts.warm_start {
            check_dim(d, warm.len())?;
            let warm: Vec<f64> = warm.iter().map(|t| t.max(1e-300).ln()).collect();
            if starts.is_empty() {
                starts.push(warm);
            } else {
                starts[0] = warm;
            }
        }

        let mut best: Option<(Vec<f64>, f64)> = None;
        for start in &starts {
            let found = mle::maximize_in_box(
                |lt| mle::value_and_gradient(&design, opts.kind, lt),
                start,
                &lo,
                &hi,
            );
            if let Some((x, v)) = found {
                if best.as_ref().is_none_or(|(_, bv)| v > *bv) {
                    best = Some((x, v));
                }
            }
        }
        let theta: Vec<f64> = match best {
            Some((lt, _)) => lt.iter().map(|v| v.exp()).collect(),
            // a single point carries no information about the length scales
            None if design.len() == 1 => (0..d).map(|j| ((lo[j] + hi[j]) / 2.0).exp()).collect(),
            None => {
                return Err(Error::Numerical(
                    "likelihood undefined at every optimisation start".into(),
                ))
            }
        };
        let prof = Profiled::new(&design, opts.kind, &theta)?;
        let params = KernelParams::new(prof.variance_hat, theta, opts.kind)?;
        Ok(Self::assemble(design, params, prof))
    }

    /// Builds a model with fixed kernel hyperparameters; only the constant
    /// mean is estimated.
    pub fn with_params(design: DesignSet, params: KernelParams) -> Result<Self> {
        check_dim(design.dim(), params.dim())?;
        let prof = Profiled::new(&design, params.kind, &params.length_scales)?;
        Ok(Self::assemble(design, params, prof))
    }

    fn assemble(design: DesignSet, params: KernelParams, prof: Profiled) -> Self {
        let log_likelihood = prof.log_likelihood(design.len());
        let r_inv = prof.chol.inverse();
        Self {
            chol_l: prof.chol.l(),
            r_inv,
            mean: prof.mean,
            jitter: prof.jitter,
            log_likelihood,
            alpha: prof.alpha,
            r_inv_one: prof.r_inv_one,
            one_r_inv_one: prof.one_r_inv_one,
            design,
            params,
        }
    }

    pub fn design(&self) -> &DesignSet {
        &self.design
    }

    pub fn params(&self) -> &KernelParams {
        &self.params
    }

    /// Estimated constant mean.
    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Relative jitter added to the diagonal of the correlation matrix.
    pub fn jitter(&self) -> f64 {
        self.jitter
    }

    /// Profile log-likelihood at the fitted length scales.
    pub fn log_likelihood(&self) -> f64 {
        self.log_likelihood
    }

    pub fn dim(&self) -> usize {
        self.design.dim()
    }

    /// Correlation of the underlying process between two points.
    pub fn correlation(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        self.params.kind.correlation(x, y, &self.params.length_scales)
    }

    fn corr_vector(&self, x: &[f64]) -> Vec<f64> {
        let kind = self.params.kind;
        self.design
            .points()
            .map(|p| kind.correlation_unchecked(x, p, &self.params.length_scales))
            .collect()
    }

    /// Ordinary-kriging predictive mean and variance at `x`.
    ///
    /// The variance includes the term for the uncertainty of the estimated
    /// mean and is clamped at zero.
    pub fn predict(&self, x: &[f64]) -> Result<Prediction> {
        check_dim(self.dim(), x.len())?;
        let mut r = self.corr_vector(x);
        let mean = self.mean + r.iter().zip(self.alpha.iter()).map(|(a, b)| a * b).sum::<f64>();
        let u = 1.0 - r.iter().zip(self.r_inv_one.iter()).map(|(a, b)| a * b).sum::<f64>();
        forward_solve(&self.chol_l, &mut r);
        let quad: f64 = r.iter().map(|v| v * v).sum();
        let variance = self.params.variance * (1.0 - quad + u * u / self.one_r_inv_one);
        Ok(Prediction {
            mean,
            variance: variance.max(0.0),
        })
    }

    pub fn predict_mean(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.dim(), x.len())?;
        let r = self.corr_vector(x);
        Ok(self.mean + r.iter().zip(self.alpha.iter()).map(|(a, b)| a * b).sum::<f64>())
    }

    /// Leave-one-out predictions at every design point with the kernel
    /// hyperparameters held fixed and the mean re-estimated per fold.
    ///
    /// Uses the bordered-system identity: with
    /// `Q = R^-1 - R^-1 1 1' R^-1 / (1' R^-1 1)`, the deleted residual is
    /// `(Q y)_i / Q_ii` and the deleted variance is `sigma^2 / Q_ii`.
    pub fn loo(&self) -> Result<Vec<LooRecord>> {
        let n = self.design.len();
        if n < 2 {
            return Err(Error::InvalidArgument(format!(
                "leave-one-out needs at least two points, got {n}"
            )));
        }
        let y = self.design.responses();
        (0..n)
            .map(|i| {
                let q_ii = self.r_inv[(i, i)] - self.r_inv_one[i] * self.r_inv_one[i] / self.one_r_inv_one;
                if !(q_ii > 0.0 && q_ii.is_finite()) {
                    return Err(Error::Numerical(format!("degenerate leave-one-out pivot at {i}")));
                }
                // Q y equals alpha = R^-1 (y - mu 1)
                let resid = self.alpha[i] / q_ii;
                let loo_mean = y[i] - resid;
                Ok(LooRecord {
                    index: i,
                    loo_mean,
                    loo_var: (self.params.variance / q_ii).max(0.0),
                    abs_error: (loo_mean - y[i]).abs(),
                })
            })
            .collect()
    }
}
