//! Latin hypercube designs on the unit cube.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::gp::min_pairwise_distance;

/// Tuning for the exchange optimisation of [`lhs_maximin`].
#[derive(Debug, Clone, Copy)]
pub struct MaximinOptions {
    /// Upper bound on proposed column swaps.
    pub max_swaps: usize,
    /// Stop after this many consecutive rejected swaps.
    pub patience: usize,
    /// Exponent of the Morris-Mitchell criterion.
    pub power: f64,
}

impl Default for MaximinOptions {
    fn default() -> Self {
        Self {
            max_swaps: 10_000,
            patience: 2_000,
            power: 20.0,
        }
    }
}

/// Random Latin hypercube: each column has one point per stratum `[k/n, (k+1)/n)`.
pub fn random_lhs<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Vec<Vec<f64>> {
    let mut points = vec![vec![0.0; d]; n];
    let mut perm: Vec<usize> = (0..n).collect();
    for j in 0..d {
        perm.shuffle(rng);
        for (i, p) in perm.iter().enumerate() {
            let u: f64 = rng.random();
            // keep inside [k/n, (k+1)/n) even when u rounds up
            points[i][j] = ((*p as f64 + u) / n as f64).min((*p as f64 + 1.0) / n as f64 - f64::EPSILON).max(0.0);
        }
    }
    points
}

/// Maximin-improved Latin hypercube with the default exchange budget.
pub fn lhs_maximin<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Result<Vec<Vec<f64>>> {
    lhs_maximin_with(n, d, rng, MaximinOptions::default())
}

/// Starts from a random LHS and applies within-column pairwise exchanges,
/// accepting a swap only when it lowers the Morris-Mitchell `phi_p`
/// criterion. The spread (minimum pairwise distance) of the result never
/// falls below that of the starting design.
pub fn lhs_maximin_with<R: Rng + ?Sized>(
    n: usize,
    d: usize,
    rng: &mut R,
    opts: MaximinOptions,
) -> Result<Vec<Vec<f64>>> {
    if n == 0 || d == 0 {
        return Err(Error::InvalidArgument(format!("cannot build an LHS with n={n}, d={d}")));
    }
    let start = random_lhs(n, d, rng);
    if n < 3 {
        // every swap leaves the only pairwise distance unchanged
        return Ok(start);
    }
    let mut x = start.clone();
    let half_p = 0.5 * opts.power;
    let mut d2 = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..i {
            let v = crate::gp::sq_dist(&x[i], &x[k]).max(1e-300);
            d2[i * n + k] = v;
            d2[k * n + i] = v;
        }
    }
    let term = |v: f64| v.powf(-half_p);
    let mut new_a = vec![0.0; n];
    let mut new_b = vec![0.0; n];
    let mut rejected = 0;
    for _ in 0..opts.max_swaps {
        if rejected >= opts.patience {
            break;
        }
        let j = rng.random_range(0..d);
        let a = rng.random_range(0..n);
        let mut b = rng.random_range(0..n - 1);
        if b >= a {
            b += 1;
        }
        let (xa, xb) = (x[a][j], x[b][j]);
        let mut delta = 0.0;
        for k in 0..n {
            if k == a || k == b {
                continue;
            }
            let xk = x[k][j];
            let va = (d2[a * n + k] - (xa - xk).powi(2) + (xb - xk).powi(2)).max(1e-300);
            let vb = (d2[b * n + k] - (xb - xk).powi(2) + (xa - xk).powi(2)).max(1e-300);
            delta += term(va) - term(d2[a * n + k]) + term(vb) - term(d2[b * n + k]);
            new_a[k] = va;
            new_b[k] = vb;
        }
        if delta < 0.0 {
            x[a][j] = xb;
            x[b][j] = xa;
            for k in 0..n {
                if k == a || k == b {
                    continue;
                }
                d2[a * n + k] = new_a[k];
                d2[k * n + a] = new_a[k];
                d2[b * n + k] = new_b[k];
                d2[k * n + b] = new_b[k];
            }
            rejected = 0;
        } else {
            rejected += 1;
        }
    }
    if min_pairwise_distance(&x) >= min_pairwise_distance(&start) {
        Ok(x)
    } else {
        Ok(start)
    }
}
