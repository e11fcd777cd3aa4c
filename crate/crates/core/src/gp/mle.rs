//! Concentrated likelihood of ordinary kriging and its maximisation over
//! log length scales.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use super::design::DesignSet;
use super::kernel::KernelKind;
use crate::error::{Error, Result};

/// Relative diagonal jitter schedule applied to the correlation matrix.
pub const JITTER_SCHEDULE: [f64; 5] = [1e-10, 1e-9, 1e-8, 1e-7, 1e-6];

const LN_2PI: f64 = 1.837_877_066_409_345_5;

pub(crate) fn correlation_matrix(design: &DesignSet, kind: KernelKind, theta: &[f64]) -> DMatrix<f64> {
    let n = design.len();
    let mut r = DMatrix::<f64>::identity(n, n);
    for i in 0..n {
        let xi = design.point(i);
        for j in 0..i {
            let c = kind.correlation_unchecked(xi, design.point(j), theta);
            r[(i, j)] = c;
            r[(j, i)] = c;
        }
    }
    r
}

/// Cholesky factor of `R + jitter I` with the smallest jitter that works.
pub(crate) fn factor_with_jitter(r: &DMatrix<f64>) -> Result<(Cholesky<f64, Dyn>, f64)> {
    for jitter in JITTER_SCHEDULE {
        let mut m = r.clone();
        for i in 0..m.nrows() {
            m[(i, i)] += jitter;
        }
        if let Some(chol) = Cholesky::new(m) {
            if chol.l_dirty().diagonal().iter().all(|p| *p > 0.0 && p.is_finite()) {
                return Ok((chol, jitter));
            }
        }
    }
    Err(Error::Numerical(format!(
        "correlation matrix of size {} not positive definite after jitter {:e}",
        r.nrows(),
        JITTER_SCHEDULE[JITTER_SCHEDULE.len() - 1]
    )))
}

/// Column-oriented forward substitution `L v = b`.
pub(crate) fn forward_solve(l: &DMatrix<f64>, b: &mut [f64]) {
    let n = b.len();
    for k in 0..n {
        let col = l.column(k);
        let vk = b[k] / col[k];
        b[k] = vk;
        for i in k + 1..n {
            b[i] -= col[i] * vk;
        }
    }
}

/// Generalised-least-squares quantities for a fixed correlation matrix.
pub(crate) struct Profiled {
    pub chol: Cholesky<f64, Dyn>,
    pub jitter: f64,
    pub mean: f64,
    pub variance_hat: f64,
    pub alpha: DVector<f64>,
    pub r_inv_one: DVector<f64>,
    pub one_r_inv_one: f64,
    pub log_det: f64,
}

impl Profiled {
    pub fn new(design: &DesignSet, kind: KernelKind, theta: &[f64]) -> Result<Self> {
        let n = design.len();
        let r = correlation_matrix(design, kind, theta);
        let (chol, jitter) = factor_with_jitter(&r)?;
        let y = DVector::from_column_slice(design.responses());
        let ones = DVector::from_element(n, 1.0);
        let r_inv_one = chol.solve(&ones);
        let r_inv_y = chol.solve(&y);
        let one_r_inv_one = r_inv_one.sum();
        if !(one_r_inv_one > 0.0 && one_r_inv_one.is_finite()) {
            return Err(Error::Numerical("1' R^-1 1 is not positive".into()));
        }
        let mean = r_inv_y.sum() / one_r_inv_one;
        let alpha = r_inv_y - &r_inv_one * mean;
        let resid = y.add_scalar(-mean);
        let quad = resid.dot(&alpha).max(0.0);
        let mean_sq = design.responses().iter().map(|v| v * v).sum::<f64>() / n as f64;
        let variance_hat = (quad / n as f64).max(1e-14 * (1.0 + mean_sq));
        let log_det = 2.0 * chol.l_dirty().diagonal().iter().map(|p| p.ln()).sum::<f64>();
        Ok(Self {
            chol,
            jitter,
            mean,
            variance_hat,
            alpha,
            r_inv_one,
            one_r_inv_one,
            log_det,
        })
    }

    pub fn log_likelihood(&self, n: usize) -> f64 {
        let n = n as f64;
        -0.5 * (n * self.variance_hat.ln() + self.log_det + n * (LN_2PI + 1.0))
    }
}

/// Profile log-likelihood at `theta` with mean and variance concentrated out.
pub fn profile_log_likelihood(design: &DesignSet, kind: KernelKind, theta: &[f64]) -> Result<f64> {
    crate::error::check_dim(design.dim(), theta.len())?;
    Ok(Profiled::new(design, kind, theta)?.log_likelihood(design.len()))
}

/// Log-likelihood and its gradient with respect to `ln theta`.
pub(crate) fn value_and_gradient(
    design: &DesignSet,
    kind: KernelKind,
    log_theta: &[f64],
) -> Option<(f64, Vec<f64>)> {
    let theta: Vec<f64> = log_theta.iter().map(|v| v.exp()).collect();
    let prof = Profiled::new(design, kind, &theta).ok()?;
    let ll = prof.log_likelihood(design.len());
    if !ll.is_finite() {
        return None;
    }
    let n = design.len();
    let d = design.dim();
    let r_inv = prof.chol.inverse();
    let a = &prof.alpha;
    let mut grad = vec![0.0; d];
    for i in 0..n {
        let xi = design.point(i);
        for k in 0..i {
            let xk = design.point(k);
            let c = kind.correlation_unchecked(xi, xk, &theta);
            if c == 0.0 {
                continue;
            }
            // symmetric pair counted twice
            let w = 2.0 * (0.5 * a[i] * a[k] / prof.variance_hat - 0.5 * r_inv[(i, k)]) * c;
            for j in 0..d {
                let r = (xi[j] - xk[j]).abs() / theta[j];
                grad[j] += w * kind.dlog_corr_dlog_theta(r);
            }
        }
    }
    if grad.iter().all(|g| g.is_finite()) {
        Some((ll, grad))
    } else {
        None
    }
}

/// Projected quasi-Newton ascent inside a box.
///
/// Returns the best point found and its value, or `None` when the objective
/// is undefined at the starting point.
pub(crate) fn maximize_in_box<F>(mut f: F, x0: &[f64], lo: &[f64], hi: &[f64]) -> Option<(Vec<f64>, f64)>
where
    F: FnMut(&[f64]) -> Option<(f64, Vec<f64>)>,
{
    const MAX_ITER: usize = 100;
    const MAX_STEP: f64 = 2.0;
    let d = x0.len();
    let clamp = |x: &mut [f64]| {
        for j in 0..d {
            x[j] = x[j].clamp(lo[j], hi[j]);
        }
    };
    let mut x = x0.to_vec();
    clamp(&mut x);
    // minimise the negated objective
    let (v, g) = f(&x)?;
    let mut fx = -v;
    let mut g: Vec<f64> = g.iter().map(|v| -v).collect();
    let mut h = DMatrix::<f64>::identity(d, d);

    for _ in 0..MAX_ITER {
        let free: Vec<bool> = (0..d)
            .map(|j| !((x[j] <= lo[j] && g[j] > 0.0) || (x[j] >= hi[j] && g[j] < 0.0)))
            .collect();
        let pg = (0..d).filter(|j| free[*j]).map(|j| g[j].abs()).fold(0.0, f64::max);
        if pg < 1e-6 {
            break;
        }
        let mut p = vec![0.0; d];
        for j in (0..d).filter(|j| free[*j]) {
            p[j] = -(0..d).filter(|k| free[*k]).map(|k| h[(j, k)] * g[k]).sum::<f64>();
        }
        if p.iter().zip(&g).map(|(a, b)| a * b).sum::<f64>() >= 0.0 {
            h = DMatrix::identity(d, d);
            for j in 0..d {
                p[j] = if free[j] { -g[j] } else { 0.0 };
            }
        }
        let pmax = p.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if pmax > MAX_STEP {
            p.iter_mut().for_each(|v| *v *= MAX_STEP / pmax);
        }

        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..30 {
            let mut xn: Vec<f64> = x.iter().zip(&p).map(|(a, b)| a + t * b).collect();
            clamp(&mut xn);
            let decrease: f64 = g.iter().zip(xn.iter().zip(&x)).map(|(gi, (a, b))| gi * (a - b)).sum();
            if let Some((vn, gn)) = f(&xn) {
                let fnew = -vn;
                if fnew <= fx + 1e-4 * decrease {
                    accepted = Some((xn, fnew, gn.iter().map(|v| -v).collect::<Vec<f64>>()));
                    break;
                }
            }
            t *= 0.5;
        }
        let Some((xn, fnew, gn)) = accepted else { break };

        let s: Vec<f64> = xn.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = gn.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy: f64 = s.iter().zip(&y).map(|(a, b)| a * b).sum();
        if sy > 1e-10 {
            let rho = 1.0 / sy;
            let s_v = DVector::from_vec(s);
            let y_v = DVector::from_vec(y);
            let eye = DMatrix::<f64>::identity(d, d);
            let left = &eye - &s_v * y_v.transpose() * rho;
            let right = &eye - &y_v * s_v.transpose() * rho;
            h = left * h * right + &s_v * s_v.transpose() * rho;
        }
        let done = (fx - fnew).abs() <= 1e-10 * (1.0 + fx.abs());
        x = xn;
        fx = fnew;
        g = gn;
        if done {
            break;
        }
    }
    Some((x, -fx))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_ascent_finds_interior_and_boundary_maxima() {
        let f = |x: &[f64]| {
            let v = -(x[0] - 0.3).powi(2) - 2.0 * (x[1] - 5.0).powi(2);
            Some((v, vec![-2.0 * (x[0] - 0.3), -4.0 * (x[1] - 5.0)]))
        };
        let (x, _) = maximize_in_box(f, &[0.0, 0.0], &[-1.0, -1.0], &[1.0, 1.0]).unwrap();
        assert!((x[0] - 0.3).abs() < 1e-5, "{x:?}");
        assert_eq!(x[1], 1.0);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let pts = vec![vec![0.1, 0.2], vec![0.5, 0.9], vec![0.8, 0.3], vec![0.35, 0.55], vec![0.95, 0.7]];
        let y = vec![0.3, -1.2, 0.8, 0.1, 2.0];
        let design = DesignSet::new(pts, y).unwrap();
        for kind in [KernelKind::Matern32, KernelKind::SquaredExponential] {
            let lt = [(0.3f64).ln(), (0.6f64).ln()];
            let (_, g) = value_and_gradient(&design, kind, &lt).unwrap();
            for j in 0..2 {
                let h = 1e-6;
                let mut up = lt;
                up[j] += h;
                let mut dn = lt;
                dn[j] -= h;
                let fd = (value_and_gradient(&design, kind, &up).unwrap().0
                    - value_and_gradient(&design, kind, &dn).unwrap().0)
                    / (2.0 * h);
                assert!((fd - g[j]).abs() < 1e-5 * (1.0 + fd.abs()), "{kind:?} {j}: {fd} vs {}", g[j]);
            }
        }
    }
}
