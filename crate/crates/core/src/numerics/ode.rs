//! Dormand–Prince 5(4) integrator with dense sampling at requested times.

use crate::error::{Error, Result};

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Step control for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    /// Initial step magnitude; zero picks one from the span.
    pub h0: f64,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self { rtol: 1e-9, atol: 1e-12, max_steps: 200_000, h0: 0.0 }
    }
}

/// Integrates `y' = rhs(t, y)` from `t0` through each time in `outputs`
/// (monotone in the direction of travel) and returns the state at each.
///
/// Steps are chosen adaptively and clipped to land on every output time.
pub fn integrate<F>(
    mut rhs: F,
    t0: f64,
    y0: &[f64],
    outputs: &[f64],
    opts: &OdeOptions,
) -> Result<Vec<Vec<f64>>>
where
    F: FnMut(f64, &[f64], &mut [f64]) -> Result<()>,
{
    let n = y0.len();
    let Some(&t_end) = outputs.last() else {
        return Ok(vec![]);
    };
    let dir = if t_end >= t0 { 1.0 } else { -1.0 };
    let span = (t_end - t0).abs();
    let mut h = if opts.h0 > 0.0 { opts.h0 } else { (span * 1e-3).max(1e-12) };

    let mut t = t0;
    let mut y = y0.to_vec();
    let mut k = vec![vec![0.0; n]; 7];
    let mut tmp = vec![0.0; n];
    let mut y5 = vec![0.0; n];
    let mut out = Vec::with_capacity(outputs.len());
    let mut steps = 0usize;
    let mut last_err = 0.0;

    for &target in outputs {
        if (target - t) * dir < 0.0 {
            return Err(Error::Domain("output times must be monotone".into()));
        }
        while (target - t) * dir > 0.0 {
            steps += 1;
            if steps > opts.max_steps {
                return Err(Error::NonConvergence {
                    method: "dopri5",
                    residual: last_err,
                    iterations: steps,
                });
            }
            let remaining = (target - t).abs();
            let clipped = h >= remaining;
            let step = if clipped { remaining } else { h };
            let hs = dir * step;

            rhs(t, &y, &mut k[0])?;
            for s in 1..7 {
                for i in 0..n {
                    let mut acc = 0.0;
                    for j in 0..s {
                        acc += A[s][j] * k[j][i];
                    }
                    tmp[i] = y[i] + hs * acc;
                }
                rhs(t + C[s] * hs, &tmp, &mut k[s])?;
            }
            let mut err: f64 = 0.0;
            for i in 0..n {
                let mut s5 = 0.0;
                let mut s4 = 0.0;
                for s in 0..7 {
                    s5 += B5[s] * k[s][i];
                    s4 += B4[s] * k[s][i];
                }
                y5[i] = y[i] + hs * s5;
                let sc = opts.atol + opts.rtol * y[i].abs().max(y5[i].abs());
                err = err.max((hs * (s5 - s4)).abs() / sc);
            }
            last_err = err;
            if !err.is_finite() {
                h = step * 0.1;
                if h < 1e-300 {
                    return Err(Error::NonConvergence { method: "dopri5", residual: err, iterations: steps });
                }
                continue;
            }
            if err <= 1.0 {
                t = if clipped { target } else { t + hs };
                y.copy_from_slice(&y5);
                let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                if !clipped || fac < 1.0 {
                    h = step * fac;
                }
            } else {
                h = step * (0.9 * err.powf(-0.2)).clamp(0.1, 1.0);
                if h <= span * 1e-16 {
                    return Err(Error::NonConvergence { method: "dopri5", residual: err, iterations: steps });
                }
            }
        }
        out.push(y.clone());
    }
    Ok(out)
}
