//! Brute-force reference computations shared by the integration tests.
//! Nothing here calls into the library's linear algebra.
#![allow(dead_code)]

pub mod bench_goldens;

use esloo::GpModel;

/// Inverse by Gauss-Jordan elimination with partial pivoting.
pub fn gauss_jordan_inverse(a: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap();
        m.swap(col, piv);
        let p = m[col][col];
        assert!(p != 0.0, "singular matrix");
        for v in m[col].iter_mut() {
            *v /= p;
        }
        for i in 0..n {
            if i != col {
                let f = m[i][col];
                if f != 0.0 {
                    for j in 0..2 * n {
                        m[i][j] -= f * m[col][j];
                    }
                }
            }
        }
    }
    m.into_iter().map(|r| r[n..].to_vec()).collect()
}

pub fn mat_vec(a: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    a.iter().map(|r| r.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Tensor-product Matérn 3/2 correlation written out directly.
pub fn matern_ref(x: &[f64], y: &[f64], theta: &[f64]) -> f64 {
    let s3 = 3f64.sqrt();
    x.iter()
        .zip(y)
        .zip(theta)
        .map(|((a, b), t)| {
            let r = (a - b).abs() / t;
            (1.0 + s3 * r) * (-s3 * r).exp()
        })
        .product()
}

/// Ordinary-kriging prediction from an explicit inverse. `diag` is the
/// diagonal of the training correlation matrix (one plus any jitter).
pub fn ok_predict(points: &[Vec<f64>], y: &[f64], theta: &[f64], sigma2: f64, diag: f64, x: &[f64]) -> (f64, f64) {
    let n = points.len();
    let r: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { diag } else { matern_ref(&points[i], &points[j], theta) })
                .collect()
        })
        .collect();
    let rinv = gauss_jordan_inverse(&r);
    let ones = vec![1.0; n];
    let rinv1 = mat_vec(&rinv, &ones);
    let denom = dot(&ones, &rinv1);
    let mu = dot(&rinv1, y) / denom;
    let resid: Vec<f64> = y.iter().map(|v| v - mu).collect();
    let k: Vec<f64> = points.iter().map(|p| matern_ref(p, x, theta)).collect();
    let rinvk = mat_vec(&rinv, &k);
    let mean = mu + dot(&rinvk, &resid);
    let u = 1.0 - dot(&ones, &rinvk);
    let var = sigma2 * (1.0 - dot(&k, &rinvk) + u * u / denom);
    (mean, var)
}

/// Leave-one-out by refitting the constant mean on each reduced design.
/// The held-out point keeps prior variance `diag` as well.
pub fn naive_loo(points: &[Vec<f64>], y: &[f64], theta: &[f64], sigma2: f64, diag: f64) -> Vec<(f64, f64)> {
    (0..points.len())
        .map(|i| {
            let pts: Vec<Vec<f64>> = points.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, p)| p.clone()).collect();
            let ys: Vec<f64> = y.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, v)| *v).collect();
            let (m, v) = ok_predict(&pts, &ys, theta, sigma2, diag, &points[i]);
            (m, v + sigma2 * (diag - 1.0))
        })
        .collect()
}

/// E[max(Z - best, 0)] for Z ~ N(m, s^2) by composite Simpson.
pub fn ei_quadrature(m: f64, s: f64, best: f64) -> f64 {
    let lo = ((best - m) / s).max(-40.0);
    let hi = 40.0f64.max(lo + 1.0);
    let n = 200_000;
    let h = (hi - lo) / n as f64;
    let g = |u: f64| (m + s * u - best).max(0.0) * (-0.5 * u * u).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let mut acc = g(lo) + g(hi);
    for k in 1..n {
        acc += g(lo + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}

/// Checks that a model reproduces its data: mean within `1e-6 * range(y)`
/// and variance below `1e-6 * sigma^2` at every design point.
pub fn check_interpolation(model: &GpModel) -> Result<(), String> {
    let design = model.design();
    let y = design.responses();
    let lo = y.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = y.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let range = hi - lo;
    let s2 = model.params().variance;
    for (i, x) in design.points().enumerate() {
        let p = model.predict(x).map_err(|e| e.to_string())?;
        let err = (p.mean - y[i]).abs();
        // a constant response has zero range; exact reproduction is then required up to rounding
        if err > 1e-6 * range.max(f64::MIN_POSITIVE) && err > 1e-12 * (1.0 + y[i].abs()) {
            return Err(format!("point {i}: |m - y| = {err:e}, range {range:e}"));
        }
        if p.variance >= 1e-6 * s2 {
            return Err(format!("point {i}: variance {:e} vs sigma2 {s2:e}", p.variance));
        }
    }
    Ok(())
}
