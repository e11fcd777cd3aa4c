//! Differential evolution (rand/1/bin) maximiser on the unit cube.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct DeConfig {
    pub population: usize,
    pub generations: usize,
    /// Differential weight.
    pub f: f64,
    /// Crossover probability.
    pub cr: f64,
    pub seed: u64,
}

impl DeConfig {
    /// Population `10 d`, `50 d` generations, `F = 0.8`, `CR = 0.9`.
    pub fn for_dim(d: usize) -> Self {
        Self {
            population: (10 * d).max(4),
            generations: 50 * d,
            f: 0.8,
            cr: 0.9,
            seed: 0,
        }
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.population < 4 {
            return Err(Error::InvalidArgument(format!(
                "population must be at least 4, got {}",
                self.population
            )));
        }
        if !(self.f > 0.0 && self.f < 2.0) {
            return Err(Error::InvalidArgument(format!("step size F={} outside (0, 2)", self.f)));
        }
        if !(0.0..=1.0).contains(&self.cr) {
            return Err(Error::InvalidArgument(format!("crossover CR={} outside [0, 1]", self.cr)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeResult {
    pub point: Vec<f64>,
    pub value: f64,
    /// Best value after initialisation and after each generation.
    pub best_per_generation: Vec<f64>,
}

#[inline]
fn sanitize(v: f64) -> f64 {
    if v.is_nan() || v == f64::INFINITY {
        // +inf is as meaningless as NaN for a criterion
        f64::NEG_INFINITY
    } else {
        v
    }
}

/// Maximises `objective` over `[0, 1]^d`.
///
/// Trial vectors of a generation are built sequentially from the seeded RNG
/// and then scored in parallel, so the result depends only on the seed.
pub fn de_maximize<F>(objective: F, d: usize, cfg: &DeConfig) -> Result<DeResult>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    if d == 0 {
        return Err(Error::InvalidArgument("zero-dimensional search space".into()));
    }
    cfg.validate()?;
    let np = cfg.population;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut pop: Vec<Vec<f64>> = (0..np).map(|_| (0..d).map(|_| rng.random::<f64>()).collect()).collect();
    let mut fit: Vec<f64> = pop.par_iter().map(|x| sanitize(objective(x))).collect();

    let best_index = |fit: &[f64]| {
        let mut b = 0;
        for i in 1..fit.len() {
            if fit[i] > fit[b] {
                b = i;
            }
        }
        b
    };
    let mut history = Vec::with_capacity(cfg.generations + 1);
    history.push(fit[best_index(&fit)]);

    for _ in 0..cfg.generations {
        let trials: Vec<Vec<f64>> = (0..np)
            .map(|i| {
                let a = pick(&mut rng, np, &[i]);
                let b = pick(&mut rng, np, &[i, a]);
                let c = pick(&mut rng, np, &[i, a, b]);
                let jrand = rng.random_range(0..d);
                (0..d)
                    .map(|j| {
                        if j == jrand || rng.random::<f64>() < cfg.cr {
                            (pop[a][j] + cfg.f * (pop[b][j] - pop[c][j])).clamp(0.0, 1.0)
                        } else {
                            pop[i][j]
                        }
                    })
                    .collect()
            })
            .collect();
        let scores: Vec<f64> = trials.par_iter().map(|x| sanitize(objective(x))).collect();
        for (i, (trial, score)) in trials.into_iter().zip(scores).enumerate() {
            if score >= fit[i] {
                pop[i] = trial;
                fit[i] = score;
            }
        }
        history.push(fit[best_index(&fit)]);
    }
    let b = best_index(&fit);
    Ok(DeResult {
        point: pop[b].clone(),
        value: fit[b],
        best_per_generation: history,
    })
}

fn pick<R: Rng>(rng: &mut R, n: usize, exclude: &[usize]) -> usize {
    loop {
        let k = rng.random_range(0..n);
        if !exclude.contains(&k) {
            return k;
        }
    }
}
