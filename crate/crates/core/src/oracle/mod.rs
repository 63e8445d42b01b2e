//! Grid-discretized weighted-energy minimizer and Frostman verifier.
//!
//! A measure is represented by nonnegative weights on the nodes of a uniform
//! grid. The discrete energy `w^T K w + 2 q^T w` with the Toeplitz kernel
//! `K_ij = -log|x_i - x_j|` is minimized over the scaled simplex, and the
//! result is checked against the Frostman inequalities. Nothing here uses
//! the closed forms of the pair, so it serves as an independent check.

mod frostman;
mod grid;
mod kernel;
mod minimize;
mod simplex;
mod support;

pub use frostman::{
    frostman_residual, frostman_residual_with, grid_energy, grid_energy_with, grid_potential,
    FrostmanResidual,
};
pub use grid::{default_grid, Grid, GridMeasure};
pub use kernel::{SelfTerm, ToeplitzKernel};
pub use minimize::{minimize, minimize_with, MinimizeReport, OracleOptions};
pub use simplex::project_simplex;
pub use support::{cumulative_monotone, mass_monotonicity_check, mass_monotonicity_check_with, support_estimate};
