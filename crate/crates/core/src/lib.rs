//! Adaptive sampling for Gaussian process emulators.
//!
//! The main GP is fitted by ordinary kriging; expected squared leave-one-out
//! (ES-LOO) errors are computed at the design points and modelled by a second
//! GP on their logarithm. New points maximise the pseudo expected improvement
//! of that second GP, i.e. expected improvement damped by a repulsion
//! function that vanishes at the existing design, at boundary pseudo points
//! and at points already chosen for the current batch.

pub mod acquisition;
pub mod baselines;
pub mod benchfns;
pub mod error;
pub mod esloo;
pub mod gp;
pub mod harness;
pub mod lhs;
pub mod optimizer;
pub mod sampler;

pub use error::{Error, Result};
pub use gp::{DesignSet, FitOptions, GpModel, KernelKind, KernelParams, LooRecord, Prediction, ThetaBounds};
