use crate::error::{check_dim, Error, Result};

/// Minimum Euclidean distance under which two points are treated as equal.
pub const DUPLICATE_TOL: f64 = 1e-9;

/// Training inputs in `[0, 1]^d` together with their responses.
///
/// Points are stored row-major in a flat buffer.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignSet {
    dim: usize,
    points: Vec<f64>,
    responses: Vec<f64>,
}

impl DesignSet {
    pub fn new(points: Vec<Vec<f64>>, responses: Vec<f64>) -> Result<Self> {
        let dim = points
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::InvalidArgument("empty design".into()))?;
        if dim == 0 {
            return Err(Error::InvalidArgument("zero-dimensional design".into()));
        }
        if points.len() != responses.len() {
            return Err(Error::InvalidArgument(format!(
                "{} points but {} responses",
                points.len(),
                responses.len()
            )));
        }
        let mut design = Self {
            dim,
            points: Vec::with_capacity(points.len() * dim),
            responses: Vec::with_capacity(responses.len()),
        };
        for (x, y) in points.iter().zip(responses) {
            design.push(x, y)?;
        }
        Ok(design)
    }

    /// Appends a point, rejecting duplicates and coordinates outside `[0, 1]`.
    pub fn push(&mut self, x: &[f64], y: f64) -> Result<()> {
        check_dim(self.dim, x.len())?;
        if let Some(c) = x.iter().find(|c| !(0.0..=1.0).contains(*c)) {
            return Err(Error::InvalidArgument(format!(
                "coordinate {c} outside the unit cube"
            )));
        }
        if !y.is_finite() {
            return Err(Error::InvalidArgument(format!("non-finite response {y}")));
        }
        if let Some(i) = self.nearest_within(x, 0.0) {
            return Err(Error::InvalidArgument(format!(
                "point {x:?} duplicates design point {i}"
            )));
        }
        self.points.extend_from_slice(x);
        self.responses.push(y);
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.responses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.responses.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.points.chunks_exact(self.dim)
    }

    pub fn responses(&self) -> &[f64] {
        &self.responses
    }

    /// Same inputs with new responses.
    pub fn with_responses(&self, responses: Vec<f64>) -> Result<Self> {
        check_dim(self.len(), responses.len())?;
        if responses.iter().any(|y| !y.is_finite()) {
            return Err(Error::InvalidArgument("non-finite response".into()));
        }
        Ok(Self {
            dim: self.dim,
            points: self.points.clone(),
            responses,
        })
    }

    /// Index of the design point nearest to `x`, ties broken by lowest index.
    pub fn nearest(&self, x: &[f64]) -> usize {
        let mut best = (0, f64::INFINITY);
        for (i, p) in self.points().enumerate() {
            let d = sq_dist(p, x);
            if d < best.1 {
                best = (i, d);
            }
        }
        best.0
    }

    /// Index of some design point within Euclidean distance `tol` of `x`.
    pub fn nearest_within(&self, x: &[f64], tol: f64) -> Option<usize> {
        let tol2 = tol * tol;
        self.points().position(|p| sq_dist(p, x) <= tol2)
    }

    pub fn min_pairwise_distance(&self) -> f64 {
        min_pairwise_distance(&self.points().collect::<Vec<_>>())
    }
}

#[inline]
pub fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

pub fn min_pairwise_distance<P: AsRef<[f64]>>(points: &[P]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            best = best.min(sq_dist(points[i].as_ref(), points[j].as_ref()));
        }
    }
    best.sqrt()
}
