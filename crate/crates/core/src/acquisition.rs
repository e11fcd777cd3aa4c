//! Expected improvement, the repulsion function and pseudo expected
//! improvement (PEI), plus the boundary pseudo points.

use libm::erfc;

use crate::error::{check_dim, Result};
use crate::esloo::ErrorSurrogate;
use crate::gp::{sq_dist, KernelKind, DUPLICATE_TOL};

const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

pub fn normal_pdf(u: f64) -> f64 {
    FRAC_1_SQRT_2PI * (-0.5 * u * u).exp()
}

pub fn normal_cdf(u: f64) -> f64 {
    0.5 * erfc(-u / std::f64::consts::SQRT_2)
}

/// Expected improvement of `N(m, s^2)` over `best`; exactly zero when `s = 0`.
pub fn expected_improvement(m: f64, s: f64, best: f64) -> f64 {
    if !(s > 0.0) {
        return 0.0;
    }
    let u = (m - best) / s;
    let ei = (m - best) * normal_cdf(u) + s * normal_pdf(u);
    if ei.is_finite() {
        ei.max(0.0)
    } else {
        0.0
    }
}

/// Centres of the repulsion function together with the correlation that
/// measures closeness to them.
#[derive(Debug, Clone)]
pub struct RepulsionSet {
    centers: Vec<Vec<f64>>,
    kind: KernelKind,
    length_scales: Vec<f64>,
}

impl RepulsionSet {
    /// Empty set; [`repulsion`] is then identically one.
    pub fn new(kind: KernelKind, length_scales: Vec<f64>) -> Self {
        Self {
            centers: Vec::new(),
            kind,
            length_scales,
        }
    }

    /// Uses the fitted correlation of the error surrogate.
    pub fn for_surrogate(surrogate: &ErrorSurrogate) -> Self {
        let params = surrogate.model().params();
        Self::new(params.kind, params.length_scales.clone())
    }

    /// Adds centres, skipping any within `DUPLICATE_TOL` of an existing one.
    pub fn with_centers<I, P>(mut self, centers: I) -> Result<Self>
    where
        I: IntoIterator<Item = P>,
        P: AsRef<[f64]>,
    {
        for c in centers {
            self.push(c.as_ref())?;
        }
        Ok(self)
    }

    /// Inserts a centre; returns `false` when it duplicates an existing one,
    /// in which case the repulsion there is already zero.
    pub fn push(&mut self, x: &[f64]) -> Result<bool> {
        check_dim(self.length_scales.len(), x.len())?;
        let tol2 = DUPLICATE_TOL * DUPLICATE_TOL;
        if self.centers.iter().any(|c| sq_dist(c, x) <= tol2) {
            return Ok(false);
        }
        self.centers.push(x.to_vec());
        Ok(true)
    }

    pub fn centers(&self) -> &[Vec<f64>] {
        &self.centers
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    pub fn kind(&self) -> KernelKind {
        self.kind
    }

    pub fn length_scales(&self) -> &[f64] {
        &self.length_scales
    }

    pub fn dim(&self) -> usize {
        self.length_scales.len()
    }
}

/// `prod_i [1 - corr(x, c_i)]` over all centres.
pub fn repulsion(x: &[f64], reps: &RepulsionSet) -> f64 {
    let mut rf = 1.0;
    for c in &reps.centers {
        rf *= 1.0 - reps.kind.correlation_unchecked(x, c, &reps.length_scales);
        if rf <= 0.0 {
            return 0.0;
        }
    }
    rf.clamp(0.0, 1.0)
}

/// Returns `reps` with `x_new` as an extra centre.
pub fn update_repulsion(mut reps: RepulsionSet, x_new: &[f64]) -> Result<RepulsionSet> {
    reps.push(x_new)?;
    Ok(reps)
}

/// Pseudo expected improvement: EI of the error surrogate over its best
/// observed log score, times the repulsion function.
pub fn pei(x: &[f64], surrogate: &ErrorSurrogate, reps: &RepulsionSet) -> Result<f64> {
    let rf = repulsion(x, reps);
    if rf == 0.0 {
        check_dim(surrogate.model().dim(), x.len())?;
        return Ok(0.0);
    }
    let p = surrogate.predict(x)?;
    Ok(expected_improvement(p.mean, p.variance.sqrt(), surrogate.best()) * rf)
}

/// The `2^d` corners of the unit cube followed by, for each of the `2d`
/// faces, the initial-design point nearest that face projected onto it.
/// No deduplication.
pub fn pseudo_points_raw(d: usize, init: &[Vec<f64>]) -> Vec<Vec<f64>> {
    assert!(d < usize::BITS as usize, "dimension too large for corner enumeration");
    let mut out = Vec::with_capacity((1 << d) + 2 * d);
    for mask in 0..(1usize << d) {
        out.push((0..d).map(|j| ((mask >> j) & 1) as f64).collect());
    }
    if init.is_empty() {
        return out;
    }
    for j in 0..d {
        for bound in [0.0, 1.0] {
            let mut nearest = &init[0];
            for p in init {
                if (p[j] - bound).abs() < (nearest[j] - bound).abs() {
                    nearest = p;
                }
            }
            let mut face = nearest.clone();
            face[j] = bound;
            out.push(face);
        }
    }
    out
}

/// [`pseudo_points_raw`] with points closer than `DUPLICATE_TOL` merged.
pub fn pseudo_points(d: usize, init: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let tol2 = DUPLICATE_TOL * DUPLICATE_TOL;
    let mut out: Vec<Vec<f64>> = Vec::new();
    for p in pseudo_points_raw(d, init) {
        if !out.iter().any(|q| sq_dist(q, &p) <= tol2) {
            out.push(p);
        }
    }
    out
}
