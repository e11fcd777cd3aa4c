//! Comparison strategies: maximum variance (MSE), expected improvement for
//! global fit (EIGF), mutual information with a nugget (MICE) and one-shot
//! maximin Latin hypercubes.

use nalgebra::DMatrix;
use rand::Rng;

use crate::acquisition::{repulsion, RepulsionSet};
use crate::error::{Error, Result};
use crate::gp::{GpModel, KernelParams, DUPLICATE_TOL};

pub use crate::lhs::{lhs_maximin, lhs_maximin_with, random_lhs, MaximinOptions};

/// Predictive variance of the main GP.
pub fn mse_criterion(model: &GpModel, x: &[f64]) -> Result<f64> {
    Ok(model.predict(x)?.variance)
}

/// `(m_n(x) - f(x*))^2 + s_n^2(x)` with `x*` the nearest design point.
pub fn eigf(model: &GpModel, x: &[f64]) -> Result<f64> {
    let p = model.predict(x)?;
    let design = model.design();
    let nearest = design.responses()[design.nearest(x)];
    Ok((p.mean - nearest).powi(2) + p.variance)
}

/// Multiplies a pointwise criterion by the repulsion function.
pub fn repulsion_modified<'a, F>(criterion: F, reps: &'a RepulsionSet) -> impl Fn(&[f64]) -> f64 + 'a
where
    F: Fn(&[f64]) -> f64 + 'a,
{
    move |x| {
        let rf = repulsion(x, reps);
        if rf == 0.0 {
            0.0
        } else {
            criterion(x) * rf
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MiceConfig {
    /// Candidates drawn per iteration.
    pub grid_size: usize,
    /// Nugget added to the candidate correlation matrix.
    pub nugget: f64,
}

impl MiceConfig {
    /// `100 d` candidates and unit nugget.
    pub fn for_dim(d: usize) -> Self {
        Self {
            grid_size: 100 * d,
            nugget: 1.0,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.grid_size == 0 {
            return Err(Error::InvalidArgument("MICE grid size must be positive".into()));
        }
        if !(self.nugget > 0.0 && self.nugget.is_finite()) {
            return Err(Error::InvalidArgument(format!("MICE nugget must be positive, got {}", self.nugget)));
        }
        Ok(())
    }
}

/// Numerator and denominator of the MICE ratio at one candidate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MiceScore {
    /// Predictive variance of the main GP.
    pub variance: f64,
    /// Variance at the candidate of a zero-mean GP with the main GP's
    /// hyperparameters and nugget `tau^2`, conditioned on the other candidates.
    pub complement_variance: f64,
}

impl MiceScore {
    pub fn ratio(&self) -> f64 {
        self.variance / self.complement_variance
    }
}

/// Scores every candidate. The complement variances come from one inverse:
/// with `B = R_cand + tau^2 I`, conditioning a noisy candidate on the rest
/// leaves variance `1 / (B^-1)_kk`, of which `tau^2` is the nugget.
pub fn mice_scores(model: &GpModel, candidates: &[Vec<f64>], nugget: f64) -> Result<Vec<MiceScore>> {
    let params: &KernelParams = model.params();
    let m = candidates.len();
    let mut b = DMatrix::<f64>::identity(m, m) * (1.0 + nugget);
    for i in 0..m {
        for j in 0..i {
            let c = params.kind.correlation(&candidates[i], &candidates[j], &params.length_scales)?;
            b[(i, j)] = c;
            b[(j, i)] = c;
        }
    }
    let chol = b
        .cholesky()
        .ok_or_else(|| Error::Numerical("MICE candidate matrix not positive definite".into()))?;
    let b_inv = chol.inverse();
    candidates
        .iter()
        .enumerate()
        .map(|(k, x)| {
            let complement = params.variance * (1.0 / b_inv[(k, k)] - nugget);
            Ok(MiceScore {
                variance: model.predict(x)?.variance,
                complement_variance: complement,
            })
        })
        .collect()
}

/// One MICE step: draws a fresh maximin candidate set, drops candidates
/// that coincide with the design and returns the best variance ratio.
pub fn mice_next<R: Rng + ?Sized>(model: &GpModel, cfg: &MiceConfig, rng: &mut R) -> Result<Vec<f64>> {
    cfg.validate()?;
    let design = model.design();
    let candidates: Vec<Vec<f64>> = lhs_maximin(cfg.grid_size, design.dim(), rng)?
        .into_iter()
        .filter(|c| design.nearest_within(c, DUPLICATE_TOL).is_none())
        .collect();
    if candidates.is_empty() {
        return Err(Error::Numerical("every MICE candidate coincides with the design".into()));
    }
    let scores = mice_scores(model, &candidates, cfg.nugget)?;
    let mut best = 0;
    for k in 1..scores.len() {
        if scores[k].ratio() > scores[best].ratio() {
            best = k;
        }
    }
    Ok(candidates[best].clone())
}
