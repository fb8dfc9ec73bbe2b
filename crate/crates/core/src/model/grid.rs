use crate::error::{Error, Result};

/// Uniform spatial grid `lo + i·dx`, `i = 0..=intervals`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformGrid {
    pub lo: f64,
    pub dx: f64,
    pub intervals: usize,
}

impl UniformGrid {
    /// Grid with spacing `dx` starting at `lo` whose right end is the first
    /// node at or beyond `hi`.
    pub fn covering(lo: f64, hi: f64, dx: f64) -> Result<Self> {
        if !(dx > 0.0) || !(hi > lo) {
            return Err(Error::InvalidGrid(format!(
                "need lo < hi and dx > 0 (lo={lo}, hi={hi}, dx={dx})"
            )));
        }
        let raw = (hi - lo) / dx;
        let intervals = (raw - 1e-9).ceil().max(1.0) as usize;
        Self::new(lo, dx, intervals)
    }

    /// Grid with `nodes` points spanning exactly `[lo, hi]`.
    pub fn with_nodes(lo: f64, hi: f64, nodes: usize) -> Result<Self> {
        if nodes < 3 || !(hi > lo) {
            return Err(Error::InvalidGrid(format!(
                "need at least 3 nodes on a non-empty interval (got {nodes} on [{lo}, {hi}])"
            )));
        }
        Self::new(lo, (hi - lo) / (nodes - 1) as f64, nodes - 1)
    }

    fn new(lo: f64, dx: f64, intervals: usize) -> Result<Self> {
        if intervals < 2 {
            return Err(Error::InvalidGrid("fewer than 3 nodes".into()));
        }
        Ok(Self { lo, dx, intervals })
    }

    pub fn len(&self) -> usize {
        self.intervals + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn hi(&self) -> f64 {
        self.node(self.intervals)
    }

    pub fn node(&self, i: usize) -> f64 {
        self.lo + i as f64 * self.dx
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.node(i)).collect()
    }

    pub fn function<F: Fn(f64) -> f64>(&self, f: F) -> GridFunction {
        let xs = self.nodes();
        let vals = xs.iter().map(|&x| f(x)).collect();
        GridFunction {
            xs,
            vals,
            dx: Some(self.dx),
        }
    }
}

/// Nodal values of a price function at one time level.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    xs: Vec<f64>,
    vals: Vec<f64>,
    dx: Option<f64>,
}

impl GridFunction {
    /// Builds a grid function, detecting uniform spacing.
    pub fn new(xs: Vec<f64>, vals: Vec<f64>) -> Result<Self> {
        if xs.len() != vals.len() {
            return Err(Error::InvalidGrid(format!(
                "{} nodes but {} values",
                xs.len(),
                vals.len()
            )));
        }
        if xs.len() < 3 {
            return Err(Error::InvalidGrid("fewer than 3 nodes".into()));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidGrid("nodes not strictly increasing".into()));
        }
        let dx = (xs[xs.len() - 1] - xs[0]) / (xs.len() - 1) as f64;
        let uniform = xs
            .windows(2)
            .all(|w| ((w[1] - w[0]) - dx).abs() < 1e-12 * dx);
        Ok(Self {
            xs,
            vals,
            dx: uniform.then_some(dx),
        })
    }

    pub fn on(grid: &UniformGrid, vals: Vec<f64>) -> Result<Self> {
        if vals.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "{} nodes but {} values",
                grid.len(),
                vals.len()
            )));
        }
        Ok(Self {
            xs: grid.nodes(),
            vals,
            dx: Some(grid.dx),
        })
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn vals(&self) -> &[f64] {
        &self.vals
    }

    pub fn into_vals(self) -> Vec<f64> {
        self.vals
    }

    /// Spacing when the grid is uniform.
    pub fn dx(&self) -> Option<f64> {
        self.dx
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn lo(&self) -> f64 {
        self.xs[0]
    }

    pub fn hi(&self) -> f64 {
        self.xs[self.xs.len() - 1]
    }

    /// Same nodes, new values.
    pub fn with_vals(&self, vals: Vec<f64>) -> Self {
        assert_eq!(vals.len(), self.xs.len(), "value count must match grid");
        Self {
            xs: self.xs.clone(),
            vals,
            dx: self.dx,
        }
    }

    pub fn map<F: Fn(f64, f64) -> f64>(&self, f: F) -> Self {
        let vals = self.xs.iter().zip(&self.vals).map(|(&x, &v)| f(x, v)).collect();
        self.with_vals(vals)
    }

    /// Piecewise-linear interpolation; `None` outside the grid.
    pub fn interpolate(&self, x: f64) -> Option<f64> {
        if x < self.lo() || x > self.hi() {
            return None;
        }
        let k = self.xs.partition_point(|&n| n <= x).clamp(1, self.xs.len() - 1);
        let (x0, x1) = (self.xs[k - 1], self.xs[k]);
        let w = (x - x0) / (x1 - x0);
        Some(self.vals[k - 1] * (1.0 - w) + self.vals[k] * w)
    }

    /// Indices of nodes inside `[lo, hi]` (with a rounding allowance).
    pub fn indices_in(&self, lo: f64, hi: f64) -> std::ops::Range<usize> {
        let eps = 1e-9 * self.dx.unwrap_or(1.0);
        let start = self.xs.partition_point(|&x| x < lo - eps);
        let end = self.xs.partition_point(|&x| x <= hi + eps);
        start..end.max(start)
    }
}
