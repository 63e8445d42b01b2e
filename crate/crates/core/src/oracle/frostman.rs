use crate::charges::{field_eval, ChargeSet};

use super::grid::GridMeasure;
use super::kernel::{SelfTerm, ToeplitzKernel};

/// Discrete weighted energy with the default self term.
pub fn grid_energy(m: &GridMeasure, charges: &ChargeSet) -> f64 {
    grid_energy_with(m, charges, SelfTerm::default())
}

/// `sum_{i != j} w_i w_j (-log|x_i - x_j|) + sum_i w_i^2 s(h) + 2 sum_i w_i Q(x_i)`.
pub fn grid_energy_with(m: &GridMeasure, charges: &ChargeSet, self_term: SelfTerm) -> f64 {
    let grid = m.grid();
    let kernel = ToeplitzKernel::new(grid, self_term);
    let w = m.weights();
    let mut kw = vec![0.0; w.len()];
    kernel.apply(w, &mut kw);
    let mut e = 0.0;
    for (i, (&wi, &ki)) in w.iter().zip(&kw).enumerate() {
        if wi > 0.0 {
            e += wi * (ki + 2.0 * field_eval(charges, grid.node(i)));
        }
    }
    e
}

/// Antiderivative of `-log|u|`.
fn neg_log_primitive(u: f64) -> f64 {
    if u == 0.0 {
        0.0
    } else {
        u - u * u.abs().ln()
    }
}

fn potential_at(m: &GridMeasure, x: f64) -> f64 {
    let grid = m.grid();
    let h = grid.spacing();
    let mut v = 0.0;
    for (j, &w) in m.weights().iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        let c = grid.node(j);
        let (lo, hi) = (c - 0.5 * h, c + 0.5 * h);
        v += w * (neg_log_primitive(x - lo) - neg_log_primitive(x - hi));
    }
    v / h
}

/// Logarithmic potential `V(x) = -int log|x - y| dm(y)` of the measure
/// spread uniformly over each node's cell.
///
/// The cell integrals are exact, so points that coincide with a node need
/// no special treatment.
pub fn grid_potential(m: &GridMeasure, points: &[f64]) -> Vec<f64> {
    crate::par::par_map(points, |&x| potential_at(m, x))
}

/// Grid estimates of the Frostman inequalities `V + Q >= c` everywhere and
/// `V + Q <= c` on the support.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrostmanResidual {
    /// Minimum of `V + Q` over the support nodes.
    pub c_est: f64,
    /// `max (c_est - (V + Q))` over all nodes.
    pub max_lower_violation: f64,
    /// `max ((V + Q) - c_est)` over the support nodes.
    pub max_upper_violation: f64,
}

/// Frostman residual with support threshold `1e-6` relative to the largest
/// weight.
pub fn frostman_residual(m: &GridMeasure, charges: &ChargeSet) -> FrostmanResidual {
    frostman_residual_with(m, charges, 1e-6, None)
}

/// Frostman residual, optionally restricted to nodes inside `window`.
pub fn frostman_residual_with(
    m: &GridMeasure,
    charges: &ChargeSet,
    support_threshold: f64,
    window: Option<(f64, f64)>,
) -> FrostmanResidual {
    let grid = m.grid();
    let xs: Vec<f64> = grid
        .points()
        .into_iter()
        .filter(|&x| window.is_none_or(|(lo, hi)| lo <= x && x <= hi))
        .collect();
    let first = xs.first().map(|&x0| ((x0 - grid.lower()) / grid.spacing()).round() as usize).unwrap_or(0);
    let v = grid_potential(m, &xs);
    let cut = support_threshold * m.max_weight();
    let total: Vec<f64> = xs.iter().zip(&v).map(|(&x, &v)| v + field_eval(charges, x)).collect();
    let on_support = |k: usize| m.weights()[first + k] > cut;

    let mut c_est = f64::INFINITY;
    let mut top = f64::NEG_INFINITY;
    for (k, &u) in total.iter().enumerate() {
        if on_support(k) {
            c_est = c_est.min(u);
            top = top.max(u);
        }
    }
    let lower = total.iter().map(|&u| c_est - u).fold(0.0, f64::max);
    FrostmanResidual {
        c_est,
        max_lower_violation: lower,
        max_upper_violation: (top - c_est).max(0.0),
    }
}
