//! Stationary correlation functions on the unit cube.
//!
//! Both kernels are separable: the correlation between two points is the
//! product of one-dimensional correlations, each with its own length scale.

use crate::error::{check_dim, Error, Result};

const SQRT3: f64 = 1.732_050_807_568_877_2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum KernelKind {
    /// Matérn with smoothness 3/2.
    #[default]
    Matern32,
    /// Squared exponential (Gaussian).
    SquaredExponential,
}

impl KernelKind {
    /// One-dimensional correlation at scaled distance `r = |x - x'| / theta`.
    #[inline]
    pub fn corr_1d(self, r: f64) -> f64 {
        match self {
            KernelKind::Matern32 => {
                let s = SQRT3 * r;
                (1.0 + s) * (-s).exp()
            }
            KernelKind::SquaredExponential => (-0.5 * r * r).exp(),
        }
    }

    /// `d corr_1d / d ln(theta)` divided by `corr_1d`, as a function of `r`.
    #[inline]
    pub(crate) fn dlog_corr_dlog_theta(self, r: f64) -> f64 {
        match self {
            KernelKind::Matern32 => 3.0 * r * r / (1.0 + SQRT3 * r),
            KernelKind::SquaredExponential => r * r,
        }
    }

    /// Correlation between `x` and `y`; no dimension checks.
    #[inline]
    pub fn correlation_unchecked(self, x: &[f64], y: &[f64], length_scales: &[f64]) -> f64 {
        match self {
            KernelKind::Matern32 => x
                .iter()
                .zip(y)
                .zip(length_scales)
                .map(|((a, b), t)| self.corr_1d((a - b).abs() / t))
                .product(),
            // a single exp is both faster and avoids underflow of the factors
            KernelKind::SquaredExponential => {
                let q: f64 = x
                    .iter()
                    .zip(y)
                    .zip(length_scales)
                    .map(|((a, b), t)| {
                        let r = (a - b) / t;
                        r * r
                    })
                    .sum();
                (-0.5 * q).exp()
            }
        }
    }

    pub fn correlation(self, x: &[f64], y: &[f64], length_scales: &[f64]) -> Result<f64> {
        check_dim(length_scales.len(), x.len())?;
        check_dim(length_scales.len(), y.len())?;
        Ok(self.correlation_unchecked(x, y, length_scales))
    }

    pub fn name(self) -> &'static str {
        match self {
            KernelKind::Matern32 => "matern32",
            KernelKind::SquaredExponential => "sqexp",
        }
    }
}

/// Kernel hyperparameters: process variance, per-dimension length scales and
/// the correlation family.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelParams {
    pub variance: f64,
    pub length_scales: Vec<f64>,
    pub kind: KernelKind,
}

impl KernelParams {
    pub fn new(variance: f64, length_scales: Vec<f64>, kind: KernelKind) -> Result<Self> {
        if !(variance > 0.0 && variance.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "process variance must be positive, got {variance}"
            )));
        }
        if length_scales.is_empty() {
            return Err(Error::InvalidArgument("no length scales".into()));
        }
        if let Some(t) = length_scales.iter().find(|t| !(**t > 0.0 && t.is_finite())) {
            return Err(Error::InvalidArgument(format!(
                "length scales must be positive, got {t}"
            )));
        }
        Ok(Self {
            variance,
            length_scales,
            kind,
        })
    }

    pub fn dim(&self) -> usize {
        self.length_scales.len()
    }

    pub fn covariance(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        Ok(self.variance * self.kind.correlation(x, y, &self.length_scales)?)
    }
}

/// Matérn 3/2 covariance in tensor-product form.
pub fn matern32(x: &[f64], y: &[f64], params: &KernelParams) -> Result<f64> {
    Ok(params.variance * KernelKind::Matern32.correlation(x, y, &params.length_scales)?)
}

/// Squared-exponential correlation `exp(-sum_j (x_j - y_j)^2 / (2 theta_j^2))`.
pub fn sqexp_corr(x: &[f64], y: &[f64], length_scales: &[f64]) -> Result<f64> {
    KernelKind::SquaredExponential.correlation(x, y, length_scales)
}
