//! Adaptive Gauss-Kronrod quadrature, with tangent substitutions for
//! half-lines and the whole line.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::extended::ExtReal;

// 15-point Kronrod abscissae (non-negative half) and weights; the embedded
// 7-point Gauss rule uses every other abscissa.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

const MAX_SEGMENTS: usize = 20_000;

struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk15<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Segment {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Segment {
        lo,
        hi,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

/// Integral of `f` over the finite interval `[lo, hi]` to absolute
/// accuracy `tol`, by global adaptive bisection.
pub fn integrate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    if lo == hi {
        return Ok(0.0);
    }
    if hi < lo {
        return integrate(f, hi, lo, tol).map(|v| -v);
    }
    let mut heap = BinaryHeap::new();
    let first = gk15(&f, lo, hi);
    let mut total = first.value;
    let mut error = first.error;
    heap.push(first);
    while error > tol {
        if heap.len() >= MAX_SEGMENTS {
            return Err(Error::NonConvergence {
                method: "adaptive quadrature",
                residual: error,
                iterations: heap.len(),
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            // interval at machine resolution; accept what we have
            heap.push(worst);
            break;
        }
        let left = gk15(&f, worst.lo, mid);
        let right = gk15(&f, mid, worst.hi);
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        if !total.is_finite() {
            return Err(Error::NonConvergence {
                method: "adaptive quadrature",
                residual: f64::NAN,
                iterations: heap.len(),
            });
        }
    }
    // re-sum to shed the drift of the running updates
    Ok(heap.iter().map(|s| s.value).sum())
}

/// Integral over the whole real line through `x = center + scale tan(theta)`.
pub fn integrate_line<F: Fn(f64) -> f64>(f: F, center: f64, scale: f64, tol: f64) -> Result<f64> {
    let g = |theta: f64| {
        let c = theta.cos();
        f(center + scale * theta.tan()) * scale / (c * c)
    };
    integrate(g, -FRAC_PI_2, FRAC_PI_2, tol)
}

/// Integral over `[lo, hi]` where either end may be infinite. Infinite ends
/// are mapped with a tangent substitution of length `scale`.
pub fn integrate_ext<F: Fn(f64) -> f64>(
    f: F,
    lo: ExtReal,
    hi: ExtReal,
    scale: f64,
    tol: f64,
) -> Result<f64> {
    match (lo, hi) {
        (ExtReal::Finite(a), ExtReal::Finite(b)) => integrate(f, a, b, tol),
        (ExtReal::Finite(a), ExtReal::PosInf) => {
            let g = |theta: f64| {
                let c = theta.cos();
                f(a + scale * theta.tan()) * scale / (c * c)
            };
            integrate(g, 0.0, FRAC_PI_2, tol)
        }
        (ExtReal::NegInf, ExtReal::Finite(b)) => {
            let g = |theta: f64| {
                let c = theta.cos();
                f(b - scale * theta.tan()) * scale / (c * c)
            };
            integrate(g, 0.0, FRAC_PI_2, tol)
        }
        (ExtReal::NegInf, ExtReal::PosInf) => integrate_line(f, 0.0, scale, tol),
        _ => Err(Error::Domain(format!("empty integration range [{lo}, {hi}]"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_is_exact() {
        let v = integrate(|x| x.powi(5) - 3.0 * x * x, -1.0, 2.0, 1e-14).unwrap();
        assert!((v - (64.0 / 6.0 - 1.0 / 6.0 - 9.0)).abs() < 1e-13);
    }

    #[test]
    fn square_root_endpoint() {
        let v = integrate(|x: f64| (x * (1.0 - x)).sqrt(), 0.0, 1.0, 1e-12).unwrap();
        assert!((v - PI / 8.0).abs() < 1e-11);
    }

    #[test]
    fn unbounded_ranges() {
        let cauchy = |x: f64| 1.0 / (PI * (1.0 + x * x));
        let v = integrate_line(cauchy, 3.0, 0.5, 1e-12).unwrap();
        assert!((v - 1.0).abs() < 1e-11);
        let right = integrate_ext(cauchy, ExtReal::Finite(0.0), ExtReal::PosInf, 1.0, 1e-12).unwrap();
        assert!((right - 0.5).abs() < 1e-11);
        let left = integrate_ext(cauchy, ExtReal::NegInf, ExtReal::Finite(1.0), 1.0, 1e-12).unwrap();
        assert!((left - 0.75).abs() < 1e-11);
    }
}
