//! Benchmark functions on the unit cube.
//!
//! `franke`, `hartman3`, `friedman5` and `gramacylee6` are defined directly on
//! `[0, 1]^d`; `otl` and `piston` map the unit cube affinely onto their
//! physical input ranges first.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{check_dim, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FunctionId {
    Franke,
    Hartman3,
    Friedman5,
    GramacyLee6,
    Otl,
    Piston,
}

impl FunctionId {
    pub const ALL: [FunctionId; 6] = [
        FunctionId::Franke,
        FunctionId::Hartman3,
        FunctionId::Friedman5,
        FunctionId::GramacyLee6,
        FunctionId::Otl,
        FunctionId::Piston,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FunctionId::Franke => "franke",
            FunctionId::Hartman3 => "hartman3",
            FunctionId::Friedman5 => "friedman5",
            FunctionId::GramacyLee6 => "gramacylee6",
            FunctionId::Otl => "otl",
            FunctionId::Piston => "piston",
        }
    }

    pub fn dim(self) -> usize {
        match self {
            FunctionId::Franke => 2,
            FunctionId::Hartman3 => 3,
            FunctionId::Friedman5 => 5,
            FunctionId::GramacyLee6 | FunctionId::Otl => 6,
            FunctionId::Piston => 7,
        }
    }

    /// Physical range of each input; the unit interval for the analytic ones.
    pub fn native_bounds(self) -> Vec<(f64, f64)> {
        match self {
            FunctionId::Otl => OTL_BOUNDS.to_vec(),
            FunctionId::Piston => PISTON_BOUNDS.to_vec(),
            _ => vec![(0.0, 1.0); self.dim()],
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            FunctionId::Franke => "Franke's function",
            FunctionId::Hartman3 => "Hartman function, 3 inputs",
            FunctionId::Friedman5 => "Friedman function",
            FunctionId::GramacyLee6 => "Gramacy & Lee function, last two inputs inert",
            FunctionId::Otl => "OTL circuit midpoint voltage",
            FunctionId::Piston => "piston cycle time",
        }
    }
}

impl fmt::Display for FunctionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FunctionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FunctionId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown function id `{s}`")))
    }
}

/// Rb1, Rb2, Rf, Rc1, Rc2, beta.
pub const OTL_BOUNDS: [(f64, f64); 6] = [(50.0, 150.0), (25.0, 70.0), (0.5, 3.0), (1.2, 2.5), (0.25, 1.2), (50.0, 300.0)];

/// M, S, V0, k, P0, Ta, T0.
pub const PISTON_BOUNDS: [(f64, f64); 7] = [
    (30.0, 60.0),
    (0.005, 0.020),
    (0.002, 0.010),
    (1000.0, 5000.0),
    (90000.0, 110000.0),
    (290.0, 296.0),
    (340.0, 360.0),
];

const HARTMAN_ALPHA: [f64; 4] = [1.0, 1.2, 3.0, 3.2];
const HARTMAN_A: [[f64; 3]; 4] = [[3.0, 10.0, 30.0], [0.1, 10.0, 35.0], [3.0, 10.0, 30.0], [0.1, 10.0, 35.0]];
const HARTMAN_P: [[f64; 3]; 4] = [
    [0.3689, 0.1170, 0.2673],
    [0.4699, 0.4387, 0.7470],
    [0.1091, 0.8732, 0.5547],
    [0.0381, 0.5743, 0.8828],
];

pub fn franke(x: &[f64]) -> f64 {
    let (a, b) = (9.0 * x[0], 9.0 * x[1]);
    0.75 * (-(a - 2.0).powi(2) / 4.0 - (b - 2.0).powi(2) / 4.0).exp()
        + 0.75 * (-(a + 1.0).powi(2) / 49.0 - (b + 1.0) / 10.0).exp()
        + 0.5 * (-(a - 7.0).powi(2) / 4.0 - (b - 3.0).powi(2) / 4.0).exp()
        - 0.2 * (-(a - 4.0).powi(2) - (b - 7.0).powi(2)).exp()
}

pub fn hartman3(x: &[f64]) -> f64 {
    -HARTMAN_ALPHA
        .iter()
        .zip(HARTMAN_A.iter().zip(&HARTMAN_P))
        .map(|(alpha, (a, p))| {
            let inner: f64 = (0..3).map(|j| a[j] * (x[j] - p[j]).powi(2)).sum();
            alpha * (-inner).exp()
        })
        .sum::<f64>()
}

pub fn friedman5(x: &[f64]) -> f64 {
    10.0 * (PI * x[0] * x[1]).sin() + 20.0 * (x[2] - 0.5).powi(2) + 10.0 * x[3] + 5.0 * x[4]
}

pub fn gramacylee6(x: &[f64]) -> f64 {
    (0.9 * (x[0] + 0.48)).powi(10).sin().exp() + x[1] * x[2] + x[3]
}

/// OTL circuit in physical units: Rb1, Rb2, Rf, Rc1, Rc2, beta.
pub fn otl_native(v: &[f64]) -> f64 {
    let (rb1, rb2, rf, rc1, rc2, beta) = (v[0], v[1], v[2], v[3], v[4], v[5]);
    let vb1 = 12.0 * rb2 / (rb1 + rb2);
    let g = beta * (rc2 + 9.0);
    let den = g + rf;
    (vb1 + 0.74) * g / den + 11.35 * rf / den + 0.74 * rf * g / (den * rc1)
}

/// Piston cycle time in physical units: M, S, V0, k, P0, Ta, T0.
pub fn piston_native(v: &[f64]) -> f64 {
    let (m, s, v0, k, p0, ta, t0) = (v[0], v[1], v[2], v[3], v[4], v[5], v[6]);
    let a = p0 * s + 19.62 * m - k * v0 / s;
    let vol = s / (2.0 * k) * ((a * a + 4.0 * k * p0 * v0 / t0 * ta).sqrt() - a);
    2.0 * PI * (m / (k + s * s * p0 * v0 * ta / (t0 * vol * vol))).sqrt()
}

/// Affine image of a unit-cube point in `bounds`.
pub fn to_native(x: &[f64], bounds: &[(f64, f64)]) -> Vec<f64> {
    x.iter().zip(bounds).map(|(u, (lo, hi))| lo + u * (hi - lo)).collect()
}

/// A benchmark addressed by id and evaluated on the unit cube.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchFunction {
    id: FunctionId,
}

impl BenchFunction {
    pub fn new(id: FunctionId) -> Self {
        Self { id }
    }

    pub fn id(&self) -> FunctionId {
        self.id
    }

    pub fn dim(&self) -> usize {
        self.id.dim()
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.dim(), x.len())?;
        Ok(match self.id {
            FunctionId::Franke => franke(x),
            FunctionId::Hartman3 => hartman3(x),
            FunctionId::Friedman5 => friedman5(x),
            FunctionId::GramacyLee6 => gramacylee6(x),
            FunctionId::Otl => otl_native(&to_native(x, &OTL_BOUNDS)),
            FunctionId::Piston => piston_native(&to_native(x, &PISTON_BOUNDS)),
        })
    }
}

impl FromStr for BenchFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(Self::new(s.parse()?))
    }
}

/// Uniform random test points and their responses.
#[derive(Debug, Clone, PartialEq)]
pub struct TestGrid {
    pub points: Vec<Vec<f64>>,
    pub values: Vec<f64>,
}

pub const DEFAULT_TEST_POINTS: usize = 3000;

pub fn test_grid(f: &BenchFunction, n: usize, seed: u64) -> Result<TestGrid> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<Vec<f64>> = (0..n).map(|_| (0..f.dim()).map(|_| rng.random::<f64>()).collect()).collect();
    let values = points.iter().map(|p| f.eval(p)).collect::<Result<Vec<f64>>>()?;
    Ok(TestGrid { points, values })
}
