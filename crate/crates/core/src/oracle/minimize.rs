use crate::charges::{field_eval, ChargeSet};
use crate::error::{domain, Error, Result};

use super::grid::{Grid, GridMeasure};
use super::kernel::{SelfTerm, ToeplitzKernel};
use super::simplex::project_simplex;

/// Settings of the oracle minimizer.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleOptions {
    pub self_term: SelfTerm,
    /// Stop when the discrete Frostman (KKT) residual drops below this.
    pub tol: f64,
    pub max_iter: usize,
    /// Relative weight above which a node counts as carrying mass.
    pub support_threshold: f64,
    /// Keep the energy of every accepted iterate.
    pub record_energy: bool,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            self_term: SelfTerm::Quadrature,
            tol: 1e-6,
            max_iter: 50_000,
            support_threshold: 1e-6,
            record_energy: false,
        }
    }
}

/// Outcome of [`minimize_with`].
#[derive(Debug, Clone)]
pub struct MinimizeReport {
    pub measure: GridMeasure,
    pub iterations: usize,
    /// Discrete Frostman residual of the returned weights.
    pub residual: f64,
    pub energy: f64,
    pub converged: bool,
    /// Energies of the accepted iterates when recording was requested.
    pub energy_trace: Vec<f64>,
}

/// Minimizer of the discrete weighted energy over measures of mass `t`.
/// Fails with [`Error::NonConvergence`] if the residual target is missed.
pub fn minimize(charges: &ChargeSet, t: f64, grid: &Grid) -> Result<GridMeasure> {
    let rep = minimize_with(charges, t, grid, &OracleOptions::default())?;
    if !rep.converged {
        return Err(Error::NonConvergence {
            method: "oracle minimizer",
            residual: rep.residual,
            iterations: rep.iterations,
        });
    }
    Ok(rep.measure)
}

struct Problem {
    q: Vec<f64>,
    active: Vec<bool>,
}

impl Problem {
    fn energy(&self, w: &[f64], kw: &[f64]) -> f64 {
        w.iter()
            .zip(kw)
            .zip(&self.q)
            .filter(|(_, q)| q.is_finite())
            .map(|((w, k), q)| w * (k + 2.0 * q))
            .sum()
    }

    /// `max(max_S g - c, max_all (c - g))` with `g = K w + q` and
    /// `c = min_S g` over the support `S`.
    fn kkt(&self, w: &[f64], kw: &[f64], rel: f64) -> f64 {
        let wmax = w.iter().copied().fold(0.0, f64::max);
        let cut = rel * wmax;
        let mut c = f64::INFINITY;
        let mut top = f64::NEG_INFINITY;
        for i in 0..w.len() {
            if w[i] > cut {
                let g = kw[i] + self.q[i];
                c = c.min(g);
                top = top.max(g);
            }
        }
        let mut low = 0.0f64;
        for i in 0..w.len() {
            if self.active[i] {
                low = low.max(c - (kw[i] + self.q[i]));
            }
        }
        (top - c).max(low)
    }
}

/// Monotone accelerated projected gradient with backtracking and adaptive
/// restart on `w^T K w + 2 q^T w` over `{w >= 0, sum w = t}`. Nodes where
/// `Q = +inf` carry no weight.
pub fn minimize_with(charges: &ChargeSet, t: f64, grid: &Grid, opts: &OracleOptions) -> Result<MinimizeReport> {
    if !(t > 0.0 && t <= charges.total_mass() * (1.0 + 1e-12)) {
        return domain(format!("mass t = {t} must lie in (0, {}]", charges.total_mass()));
    }
    let n = grid.nodes();
    let kernel = ToeplitzKernel::new(grid, opts.self_term);
    let q: Vec<f64> = grid.points().into_iter().map(|x| field_eval(charges, x)).collect();
    let active: Vec<bool> = q.iter().map(|v| v.is_finite()).collect();
    let n_active = active.iter().filter(|&&a| a).count();
    if n_active == 0 {
        return domain("no grid node has a finite field value");
    }
    let prob = Problem { q, active };

    let mut w: Vec<f64> = prob.active.iter().map(|&a| if a { t / n_active as f64 } else { 0.0 }).collect();
    let mut kw = vec![0.0; n];
    kernel.apply(&w, &mut kw);
    let mut e_w = prob.energy(&w, &kw);
    let mut y = w.clone();
    let mut ky = kw.clone();
    let mut theta = 1.0f64;
    let mut lip = 1.0f64;

    let mut grad = vec![0.0; n];
    let mut step = vec![0.0; n];
    let mut wn = vec![0.0; n];
    let mut kwn = vec![0.0; n];
    let mut trace = Vec::new();
    if opts.record_energy {
        trace.push(e_w);
    }
    let mut residual = prob.kkt(&w, &kw, opts.support_threshold);
    let mut iterations = 0;

    while residual >= opts.tol && iterations < opts.max_iter {
        iterations += 1;
        for i in 0..n {
            grad[i] = if prob.active[i] { 2.0 * (ky[i] + prob.q[i]) } else { 0.0 };
        }
        // energy differences are formed from d = wn - y directly; the raw
        // energies agree to rounding near convergence
        loop {
            for i in 0..n {
                step[i] = y[i] - grad[i] / lip;
            }
            project_simplex(&step, t, &prob.active, &mut wn);
            kernel.apply(&wn, &mut kwn);
            let (mut curv, mut sq) = (0.0, 0.0);
            for i in 0..n {
                let d = wn[i] - y[i];
                curv += d * (kwn[i] - ky[i]);
                sq += d * d;
            }
            if curv <= 0.5 * lip * sq || lip > 1e300 {
                break;
            }
            lip *= 2.0;
        }
        let mut delta = 0.0;
        for i in 0..n {
            if prob.active[i] {
                delta += (wn[i] - w[i]) * (kwn[i] + kw[i] + 2.0 * prob.q[i]);
            }
        }
        if delta > 0.0 {
            // non-monotone step: restart the momentum from the last iterate
            theta = 1.0;
            y.copy_from_slice(&w);
            ky.copy_from_slice(&kw);
            continue;
        }
        let theta_next = 0.5 * (1.0 + (1.0 + 4.0 * theta * theta).sqrt());
        let mut beta = (theta - 1.0) / theta_next;
        let mut up = 0.0;
        for i in 0..n {
            up += grad[i] * (wn[i] - w[i]);
        }
        let restart = up > 0.0;
        if restart {
            beta = 0.0;
        }
        for i in 0..n {
            y[i] = wn[i] + beta * (wn[i] - w[i]);
            ky[i] = kwn[i] + beta * (kwn[i] - kw[i]);
        }
        theta = if restart { 1.0 } else { theta_next };
        std::mem::swap(&mut w, &mut wn);
        std::mem::swap(&mut kw, &mut kwn);
        e_w += delta;
        if opts.record_energy {
            trace.push(prob.energy(&w, &kw));
        }
        lip *= 0.9;
        residual = prob.kkt(&w, &kw, opts.support_threshold);
    }

    let measure = GridMeasure::new(*grid, w)?;
    Ok(MinimizeReport {
        measure,
        iterations,
        residual,
        energy: e_w,
        converged: residual < opts.tol,
        energy_trace: trace,
    })
}
