use std::io::{self, Write};

use crate::error::{domain, Result};

/// A uniform grid on `[lower, upper]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    lower: f64,
    upper: f64,
    nodes: usize,
    spacing: f64,
}

impl Grid {
    pub fn new(lower: f64, upper: f64, nodes: usize) -> Result<Self> {
        if !(lower.is_finite() && upper.is_finite() && lower < upper) {
            return domain(format!("grid bounds [{lower}, {upper}] must be finite and increasing"));
        }
        if nodes < 3 {
            return domain(format!("grid needs at least 3 nodes, got {nodes}"));
        }
        let spacing = (upper - lower) / (nodes - 1) as f64;
        Ok(Grid { lower, upper, nodes, spacing })
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn node(&self, i: usize) -> f64 {
        if i + 1 == self.nodes {
            self.upper
        } else {
            self.lower + i as f64 * self.spacing
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.nodes).map(|i| self.node(i)).collect()
    }
}

/// `[-L, L]` with `L = max(50, 20 (1 + scale))` and 4001 nodes.
pub fn default_grid(scale: f64) -> Grid {
    let half = (20.0 * (1.0 + scale.abs())).max(50.0);
    Grid::new(-half, half, 4001).expect("valid default grid")
}

/// Nonnegative weights on the nodes of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridMeasure {
    grid: Grid,
    weights: Vec<f64>,
    mass: f64,
}

impl GridMeasure {
    pub fn new(grid: Grid, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != grid.nodes() {
            return domain(format!("{} weights for {} nodes", weights.len(), grid.nodes()));
        }
        if let Some(w) = weights.iter().find(|w| !(**w >= 0.0 && w.is_finite())) {
            return domain(format!("weight {w} is not a finite nonnegative number"));
        }
        let mass = weights.iter().sum();
        Ok(GridMeasure { grid, weights, mass })
    }

    /// Samples a density at the nodes, `w_i = f(x_i) h`, clipping negative
    /// values to zero.
    pub fn from_density(grid: Grid, f: impl Fn(f64) -> f64) -> Result<Self> {
        let h = grid.spacing();
        let weights = grid.points().into_iter().map(|x| (f(x) * h).max(0.0)).collect();
        Self::new(grid, weights)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn density(&self, i: usize) -> f64 {
        self.weights[i] / self.grid.spacing()
    }

    pub fn max_weight(&self) -> f64 {
        self.weights.iter().copied().fold(0.0, f64::max)
    }

    /// `W(x_i) = sum_{j <= i} w_j`.
    pub fn cumulative(&self) -> Vec<f64> {
        self.weights
            .iter()
            .scan(0.0, |acc, w| {
                *acc += w;
                Some(*acc)
            })
            .collect()
    }

    /// CSV with header `x,weight,density`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "x,weight,density")?;
        for (i, w) in self.weights.iter().enumerate() {
            writeln!(out, "{:.15e},{:.15e},{:.15e}", self.grid.node(i), w, self.density(i))?;
        }
        Ok(())
    }
}
