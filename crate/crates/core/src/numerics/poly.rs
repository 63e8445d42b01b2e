//! Real roots of low-degree polynomials.

use std::f64::consts::PI;

/// Real roots of `a x^2 + b x + c`, ascending, with the relative
/// discriminant threshold `double_tol` deciding double roots (returned
/// twice).
pub fn quadratic_real_roots(a: f64, b: f64, c: f64, double_tol: f64) -> Vec<f64> {
    if a == 0.0 {
        return if b == 0.0 { vec![] } else { vec![-c / b] };
    }
    let disc = b * b - 4.0 * a * c;
    let scale = b * b + (4.0 * a * c).abs();
    if disc.abs() <= double_tol * scale {
        let r = -b / (2.0 * a);
        return vec![r, r];
    }
    if disc < 0.0 {
        return vec![];
    }
    let sq = disc.sqrt();
    // avoid cancellation
    let q = -0.5 * (b + b.signum() * sq);
    let (r1, r2) = if q == 0.0 {
        (sq / (2.0 * a), -sq / (2.0 * a))
    } else {
        (q / a, c / q)
    };
    if r1 <= r2 {
        vec![r1, r2]
    } else {
        vec![r2, r1]
    }
}

fn horner(coef: &[f64; 4], x: f64) -> (f64, f64) {
    let mut p = coef[0];
    let mut dp = 0.0;
    for &c in &coef[1..] {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

/// Real roots of `c[0] x^3 + c[1] x^2 + c[2] x + c[3]` (ascending).
///
/// Closed-form classification by the sign of the discriminant (trigonometric
/// form for three real roots, Cardano otherwise), then one Newton step per
/// root. Falls back to the quadratic when the leading coefficient vanishes.
pub fn cubic_real_roots(c: [f64; 4], double_tol: f64) -> Vec<f64> {
    if c[0] == 0.0 {
        return quadratic_real_roots(c[1], c[2], c[3], double_tol);
    }
    let (b, cc, d) = (c[1] / c[0], c[2] / c[0], c[3] / c[0]);
    // x = t - b/3, t^3 + p t + q = 0
    let shift = b / 3.0;
    let p = cc - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * cc / 3.0 + d;
    let disc = (q / 2.0).powi(2) + (p / 3.0).powi(3);
    let scale = (q / 2.0).powi(2) + (p / 3.0).abs().powi(3);
    let mut roots = if disc.abs() <= double_tol * scale && scale > 0.0 {
        // double root
        let t1 = 3.0 * q / p;
        let t2 = -3.0 * q / (2.0 * p);
        vec![t1 - shift, t2 - shift, t2 - shift]
    } else if disc < 0.0 {
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        (0..3)
            .map(|k| m * (theta - 2.0 * PI * k as f64 / 3.0).cos() - shift)
            .collect()
    } else if scale == 0.0 {
        vec![-shift, -shift, -shift]
    } else {
        let s = disc.sqrt();
        let u = (-q / 2.0 + s).cbrt();
        let v = (-q / 2.0 - s).cbrt();
        vec![u + v - shift]
    };
    for r in roots.iter_mut() {
        let (f, df) = horner(&c, *r);
        if df != 0.0 && df.is_finite() {
            let polished = *r - f / df;
            if polished.is_finite() && horner(&c, polished).0.abs() <= f.abs() {
                *r = polished;
            }
        }
    }
    roots.sort_by(f64::total_cmp);
    roots
}

/// Value and derivative of the cubic `c` at `x`.
pub fn cubic_eval(c: &[f64; 4], x: f64) -> (f64, f64) {
    horner(c, x)
}
