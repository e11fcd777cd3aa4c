//! Normalised expected squared leave-one-out errors and the second GP that
//! models their logarithm over the input space.

use crate::error::{Error, Result};
use crate::gp::{DesignSet, FitOptions, GpModel, LooRecord, Prediction, ThetaBounds};

/// Variance floor, relative to the process variance, for zero-variance folds.
pub const LOO_VAR_FLOOR: f64 = 1e-12;

/// Minimum correlation at unit distance that fixes [`theta_lower_bound`].
pub const MIN_CORRELATION: f64 = 1e-8;

/// Smallest admissible error-surrogate length scale on the unit cube:
/// `sqrt(-0.5 / ln 1e-8)`, the squared-exponential length scale whose
/// correlation at distance one is `1e-8`.
pub fn theta_lower_bound() -> f64 {
    (-0.5 / MIN_CORRELATION.ln()).sqrt()
}

/// Upper length-scale bound shared with the main GP.
pub const THETA_UPPER: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EsLooScore {
    pub index: usize,
    pub value: f64,
    pub log_value: f64,
}

/// `E[(Z - f)^2]` for `Z ~ N(m, s2)`.
pub fn expected_squared_error(s2: f64, e: f64) -> f64 {
    s2 + e * e
}

/// `Var[(Z - f)^2]` for `Z ~ N(m, s2)`.
pub fn variance_squared_error(s2: f64, e: f64) -> f64 {
    2.0 * s2 * s2 + 4.0 * s2 * e * e
}

/// Normalised ES-LOO score at one design point.
///
/// `process_variance` scales the floor applied to vanishing LOO variances.
pub fn esloo_score(loo: &LooRecord, y_i: f64, process_variance: f64) -> EsLooScore {
    let e = loo.loo_mean - y_i;
    let s2 = loo.loo_var.max(LOO_VAR_FLOOR * process_variance);
    let value = expected_squared_error(s2, e) / variance_squared_error(s2, e).sqrt();
    EsLooScore {
        index: loo.index,
        value,
        log_value: value.ln(),
    }
}

/// Scores at every design point of a fitted model.
pub fn esloo_scores(model: &GpModel) -> Result<Vec<EsLooScore>> {
    let y = model.design().responses();
    let variance = model.params().variance;
    let scores: Vec<EsLooScore> = model
        .loo()?
        .iter()
        .map(|r| esloo_score(r, y[r.index], variance))
        .collect();
    if let Some(s) = scores.iter().find(|s| !(s.value > 0.0 && s.value.is_finite())) {
        return Err(Error::Numerical(format!("non-finite ES-LOO score at point {}", s.index)));
    }
    Ok(scores)
}

/// GP fitted to log ES-LOO scores with a lower bound on its length scales.
#[derive(Debug, Clone)]
pub struct ErrorSurrogate {
    model: GpModel,
    best: f64,
    theta_lb: f64,
}

impl ErrorSurrogate {
    pub fn model(&self) -> &GpModel {
        &self.model
    }

    pub fn length_scales(&self) -> &[f64] {
        &self.model.params().length_scales
    }

    pub fn theta_lb(&self) -> f64 {
        self.theta_lb
    }

    /// Largest observed log score.
    pub fn best(&self) -> f64 {
        self.best
    }

    pub fn predict(&self, x: &[f64]) -> Result<Prediction> {
        self.model.predict(x)
    }
}

/// Fits the error surrogate on `(X, ln E_L)`.
///
/// `opts` supplies the kernel family, seed and warm start; its bounds are
/// replaced by `[theta_lower_bound(), 2]` in every dimension.
pub fn fit_error_surrogate(design: &DesignSet, scores: &[EsLooScore], opts: &FitOptions) -> Result<ErrorSurrogate> {
    if design.len() < 2 {
        return Err(Error::InvalidArgument("error surrogate needs at least two points".into()));
    }
    if scores.len() != design.len() {
        return Err(Error::DimensionMismatch {
            expected: design.len(),
            got: scores.len(),
        });
    }
    if let Some(s) = scores.iter().find(|s| !(s.value > 0.0)) {
        return Err(Error::InvalidArgument(format!("non-positive score {}", s.value)));
    }
    let log_values: Vec<f64> = scores.iter().map(|s| s.log_value).collect();
    let best = log_values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let theta_lb = theta_lower_bound();
    let bounds = ThetaBounds::uniform(design.dim(), theta_lb, THETA_UPPER)?;
    let warm = opts
        .warm_start
        .as_ref()
        .map(|w| w.iter().map(|t| t.clamp(theta_lb, THETA_UPPER)).collect());
    let opts = opts.clone().bounds(bounds).warm_start(warm);
    let model = GpModel::fit(design.with_responses(log_values)?, &opts)?;
    Ok(ErrorSurrogate { model, best, theta_lb })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gp::{KernelKind, KernelParams};

    fn record(loo_mean: f64, loo_var: f64) -> LooRecord {
        LooRecord {
            index: 0,
            loo_mean,
            loo_var,
            abs_error: loo_mean.abs(),
        }
    }

    #[test]
    fn exact_fold_gives_inverse_sqrt_two() {
        for s2 in [1e-6, 0.3, 4.0] {
            let s = esloo_score(&record(2.0, s2), 2.0, 1.0);
            assert!((s.value - 0.5f64.sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn unit_standardised_error() {
        let s = esloo_score(&record(1.5, 0.25), 1.0, 1.0);
        assert!((s.value - 2.0 / 6f64.sqrt()).abs() < 1e-15);
        assert_eq!(s.log_value, s.value.ln());
    }

    #[test]
    fn zero_variance_is_floored() {
        let s = esloo_score(&record(1.0, 0.0), 1.0, 2.0);
        assert!(s.value.is_finite() && s.value > 0.0);
        let s = esloo_score(&record(1.1, 0.0), 1.0, 2.0);
        assert!(s.value.is_finite() && s.value > 0.0);
    }

    #[test]
    fn monotone_in_standardised_error() {
        let mut prev = 0.0;
        for k in 0..=90 {
            let t = 1.0 + 0.1 * k as f64;
            let v = esloo_score(&record(t * 0.5, 0.25), 0.0, 1.0).value;
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn lower_bound_value() {
        // mpmath, 30 digits: 0.164752557245565202968969052816
        assert!((theta_lower_bound() - 0.164_752_557_245_565_2).abs() < 1e-15);
    }

    #[test]
    fn constant_scores_give_constant_surrogate() {
        let pts = vec![vec![0.1, 0.1], vec![0.9, 0.2], vec![0.4, 0.8], vec![0.6, 0.5]];
        let design = DesignSet::new(pts, vec![0.0; 4]).unwrap();
        let scores: Vec<EsLooScore> = (0..4)
            .map(|i| EsLooScore {
                index: i,
                value: 0.9,
                log_value: 0.9f64.ln(),
            })
            .collect();
        let sur = fit_error_surrogate(&design, &scores, &FitOptions::new(2)).unwrap();
        for x in [[0.0, 0.0], [0.5, 0.5], [1.0, 0.3]] {
            assert!((sur.predict(&x).unwrap().mean - 0.9f64.ln()).abs() < 1e-8);
        }
        assert!(sur.length_scales().iter().all(|t| *t >= theta_lower_bound()));
    }

    #[test]
    fn scores_from_fixed_model() {
        let pts: Vec<Vec<f64>> = [0.0, 0.25, 0.5, 0.75, 1.0].iter().map(|x| vec![*x]).collect();
        let y = vec![0.0, 1.0, 0.0, -1.0, 0.0];
        let params = KernelParams::new(1.0, vec![0.3], KernelKind::Matern32).unwrap();
        let m = GpModel::with_params(DesignSet::new(pts, y).unwrap(), params).unwrap();
        let scores = esloo_scores(&m).unwrap();
        assert_eq!(scores.len(), 5);
        assert!(scores.iter().all(|s| s.value >= 0.5f64.sqrt() - 1e-12));
    }
}
