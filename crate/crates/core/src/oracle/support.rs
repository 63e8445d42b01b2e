use crate::charges::ChargeSet;
use crate::error::Result;
use crate::signed::{Interval, SupportSet};

use super::grid::{Grid, GridMeasure};
use super::minimize::{minimize_with, OracleOptions};

/// Maximal runs of nodes with weight above `threshold * max(w)`, merged
/// across single-node gaps, as closed intervals between node positions.
pub fn support_estimate(m: &GridMeasure, threshold: f64) -> SupportSet {
    let cut = threshold * m.max_weight();
    let on: Vec<bool> = m.weights().iter().map(|&w| w > cut).collect();
    let n = on.len();
    let mut runs: Vec<(usize, usize)> = Vec::new();
    let mut i = 0;
    while i < n {
        if !on[i] {
            i += 1;
            continue;
        }
        let start = i;
        while i < n && on[i] {
            i += 1;
        }
        let end = i - 1;
        match runs.last_mut() {
            Some(last) if start == last.1 + 2 => last.1 = end,
            _ => runs.push((start, end)),
        }
    }
    let grid = m.grid();
    SupportSet::new(
        runs.into_iter()
            .map(|(a, b)| Interval::new(grid.node(a), grid.node(b)))
            .collect(),
    )
}

/// True when the cumulative weights of consecutive measures never decrease
/// by more than `tol` at any node.
pub fn cumulative_monotone(measures: &[GridMeasure], tol: f64) -> bool {
    measures.windows(2).all(|pair| {
        let (lo, hi) = (pair[0].cumulative(), pair[1].cumulative());
        lo.iter().zip(&hi).all(|(a, b)| *a <= b + tol)
    })
}

/// Monotonicity of the equilibrium measure in its mass: oracle runs at the
/// increasing `masses` must have nested cumulative weights within `1e-4`.
pub fn mass_monotonicity_check(charges: &ChargeSet, masses: &[f64], grid: &Grid) -> Result<bool> {
    mass_monotonicity_check_with(charges, masses, grid, 1e-4, &OracleOptions::default())
}

pub fn mass_monotonicity_check_with(
    charges: &ChargeSet,
    masses: &[f64],
    grid: &Grid,
    tol: f64,
    opts: &OracleOptions,
) -> Result<bool> {
    let runs = crate::par::par_map(masses, |&t| minimize_with(charges, t, grid, opts));
    let measures = runs
        .into_iter()
        .map(|r| r.map(|rep| rep.measure))
        .collect::<Result<Vec<_>>>()?;
    Ok(cumulative_monotone(&measures, tol))
}
