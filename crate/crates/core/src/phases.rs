//! Circle geometry, phase thresholds and phase classification for the
//! attractor/repellent pair.
//!
//! The circle through `z1` and `z2` centred on the real axis meets the axis
//! at `x1 < x2`. Along `gamma` the support of the equilibrium measure moves
//! from the whole line (below `Gamma1`) to two rays (between `Gamma1` and
//! `Gamma2`) to a segment (above `Gamma2`).

use std::fmt;

use crate::charges::PairConfig;
use crate::config::Tolerances;
use crate::error::{domain, Result};
use crate::numerics::poly::{cubic_eval, cubic_real_roots};
use crate::numerics::roots::bisect_predicate;

/// The circle through `z1`, `z2` centred at `x0` on the real axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry {
    pub x0: f64,
    pub x1: f64,
    pub x2: f64,
    pub radius: f64,
}

/// Circle geometry of a non-symmetric pair. For `beta2 = 0` this is the
/// limit circle through `z1` and the real repellent, with `x2 = 1`.
pub fn geometry(pair: &PairConfig) -> Geometry {
    let (b1s, b2s) = (pair.beta1 * pair.beta1, pair.beta2 * pair.beta2);
    let x0 = 0.25 * (b2s - b1s);
    let radius = (x0 * x0 + 0.5 * (b1s + b2s + 2.0)).sqrt();
    // x2 - 1 and x1 + 1 in cancellation-free form
    let x2 = 1.0 + b2s / (radius + 1.0 - x0);
    let x1 = -1.0 - b1s / (x0 + 1.0 + radius);
    Geometry { x0, x1, x2, radius }
}

/// Phase of the pair along the `gamma` axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    /// Support is the whole line and the equilibrium measure equals the
    /// signed one.
    Phase1,
    /// Double zero of the density at `x2`.
    Transition1,
    /// Two rays `(-inf, a1] u [a2, inf)`.
    Phase2,
    /// The right ray has escaped to infinity.
    Transition2,
    /// A bounded segment `[a1, a2]`.
    Phase3,
}

impl Phase {
    pub fn label(self) -> &'static str {
        match self {
            Phase::Phase1 => "Phase1",
            Phase::Transition1 => "Transition1",
            Phase::Phase2 => "Phase2",
            Phase::Transition2 => "Transition2",
            Phase::Phase3 => "Phase3",
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Phase label together with the thresholds and the circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseClassification {
    pub phase: Phase,
    pub gamma1: f64,
    pub gamma2: f64,
    /// `None` for the symmetric configuration, where no such circle exists.
    pub geometry: Option<Geometry>,
}

/// `|z1 - x2|^2` and `|z2 - x2|^2 / beta2^2`; the latter stays finite as
/// `beta2 -> 0`.
fn x2_distances(pair: &PairConfig, g: &Geometry) -> (f64, f64) {
    let d1 = (g.x2 + 1.0).powi(2) + pair.beta1 * pair.beta1;
    let t = pair.beta2 / (g.radius + 1.0 - g.x0);
    (d1, 1.0 + t * t)
}

fn symmetric_threshold(pair: &PairConfig) -> Result<(f64, f64)> {
    let (b1, b2) = (pair.beta1, pair.beta2);
    if b1 > b2 {
        Ok((b2 / b1, 1.0))
    } else if b1 < b2 {
        Ok((b1 / b2, b1 / b2))
    } else {
        domain("symmetric pair with beta1 = beta2 has no phase structure")
    }
}

/// First threshold: the small root of
/// `beta1 beta2 g^2 - (4 + beta1^2 + beta2^2) g + beta1 beta2`.
pub fn gamma1(pair: &PairConfig) -> Result<f64> {
    if pair.symmetric {
        return Ok(symmetric_threshold(pair)?.0);
    }
    if pair.beta2 == 0.0 {
        return domain("gamma1 needs beta2 > 0 (it vanishes in the limit)");
    }
    let p = pair.beta1 * pair.beta2;
    let s = 4.0 + pair.beta1 * pair.beta1 + pair.beta2 * pair.beta2;
    Ok(2.0 * p / (s + (s * s - 4.0 * p * p).sqrt()))
}

/// `Gamma1` from the circle: `(beta1/beta2) |z2 - x2|^2 / |z1 - x2|^2`.
pub fn gamma1_geometric(pair: &PairConfig) -> Result<f64> {
    if pair.symmetric || pair.beta2 == 0.0 {
        return domain("geometric form needs a non-symmetric pair with beta2 > 0");
    }
    let g = geometry(pair);
    let (d1, d2n) = x2_distances(pair, &g);
    Ok(pair.beta1 * pair.beta2 * d2n / d1)
}

/// Second threshold `(beta1/beta2) |z2 - x2| / |z1 - x2|`.
pub fn gamma2(pair: &PairConfig) -> Result<f64> {
    if pair.symmetric {
        return Ok(symmetric_threshold(pair)?.1);
    }
    if pair.beta2 == 0.0 {
        return domain("gamma2 needs beta2 > 0 (its limit is beta1/sqrt(4 + beta1^2))");
    }
    Ok(gamma2_unchecked(pair))
}

fn gamma2_unchecked(pair: &PairConfig) -> f64 {
    let g = geometry(pair);
    let (d1, d2n) = x2_distances(pair, &g);
    pair.beta1 * (d2n / d1).sqrt()
}

/// `(Gamma1, Gamma2)` including the `beta2 = 0` limit `(0, beta1/sqrt(4 + beta1^2))`.
pub fn thresholds(pair: &PairConfig) -> Result<(f64, f64)> {
    if pair.symmetric {
        return symmetric_threshold(pair);
    }
    if pair.beta2 == 0.0 {
        return Ok((0.0, gamma2_unchecked(pair)));
    }
    Ok((gamma1(pair)?, gamma2_unchecked(pair)))
}

/// Phase classification with the default tolerances.
pub fn classify(pair: &PairConfig) -> Result<PhaseClassification> {
    classify_with(pair, &Tolerances::default())
}

pub fn classify_with(pair: &PairConfig, tol: &Tolerances) -> Result<PhaseClassification> {
    let (g1, g2) = thresholds(pair)?;
    let g = pair.gamma;
    let eps = tol.transition;
    let geometry = (!pair.symmetric).then(|| geometry(pair));
    let phase = if g == 0.0 || g < g1 - eps {
        Phase::Phase1
    } else if pair.symmetric && g1 == g2 {
        // single threshold: full line straight to a segment
        if (g - g1).abs() <= eps {
            Phase::Transition2
        } else {
            Phase::Phase3
        }
    } else if (g - g1).abs() <= eps {
        Phase::Transition1
    } else if pair.symmetric || g < g2 - eps {
        Phase::Phase2
    } else if (g - g2).abs() <= eps {
        Phase::Transition2
    } else {
        Phase::Phase3
    };
    Ok(PhaseClassification { phase, gamma1: g1, gamma2: g2, geometry })
}

/// Coefficients (highest degree first) of the cubic `N` with
/// `Q'(x) = N(x) / D(x)`.
pub fn field_derivative_numerator(pair: &PairConfig) -> [f64; 4] {
    let (p, q) = (pair.re1(), pair.re2());
    let (b1s, b2s, g) = (pair.beta1 * pair.beta1, pair.beta2 * pair.beta2, pair.gamma);
    [
        1.0 - g,
        -(2.0 * q + p) + g * (2.0 * p + q),
        (q * q + b2s + 2.0 * p * q) - g * (p * p + b1s + 2.0 * p * q),
        -p * (q * q + b2s) + g * q * (p * p + b1s),
    ]
}

/// Real local minima of the pair's field, ascending.
pub fn field_minima(pair: &PairConfig) -> Vec<f64> {
    field_minima_with(pair, &Tolerances::default())
}

pub fn field_minima_with(pair: &PairConfig, tol: &Tolerances) -> Vec<f64> {
    let n = field_derivative_numerator(pair);
    let mut roots = cubic_real_roots(n, tol.double_root);
    roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-9 * (1.0 + a.abs()));
    roots
        .into_iter()
        .filter(|&x| pair.denominator(x) > 0.0)
        .filter(|&x| cubic_eval(&n, x).1 > 0.0)
        .collect()
}

/// `Gamma0`, the strength above which the field has two real minima,
/// located by bisection on the minima count. `None` when the count does
/// not jump from one to two inside `(0, 1)`.
pub fn minima_threshold(pair: &PairConfig) -> Option<f64> {
    minima_threshold_with(pair, &Tolerances::default())
}

pub fn minima_threshold_with(pair: &PairConfig, tol: &Tolerances) -> Option<f64> {
    let two = |g: f64| {
        pair.with_gamma(g)
            .map(|p| field_minima_with(&p, tol).len() >= 2)
            .unwrap_or(false)
    };
    let (lo, hi) = (1e-12, 1.0 - 1e-12);
    if two(lo) || !two(hi) {
        return None;
    }
    let (a, b) = bisect_predicate(two, lo, hi, tol.minima_threshold);
    Some(0.5 * (a + b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn pair(b1: f64, b2: f64, g: f64) -> PairConfig {
        PairConfig::new(b1, b2, g).unwrap()
    }

    #[test]
    fn geometry_examples() {
        let g = geometry(&pair(3.0, 4.0, 0.5));
        assert_eq!(g.x0, 1.75);
        assert!(g.x1 < g.x0 && g.x0 < g.x2);
        let s = geometry(&pair(2.0, 2.0, 0.5));
        assert_eq!(s.x0, 0.0);
        assert!((s.x1 + s.x2).abs() < 1e-15);
    }

    #[test]
    fn gamma1_examples() {
        let g = gamma1(&pair(3.0, 6.0, 0.0)).unwrap();
        assert!((g - 0.4377350).abs() < 1e-7, "{g}");
        assert!((gamma1(&pair(1.0, 0.3, 0.0)).unwrap() - 0.0591453).abs() < 1e-7);
        let sym = PairConfig::symmetric(1.0, 3.0, 0.5).unwrap();
        assert_eq!(gamma1(&sym).unwrap(), 1.0 / 3.0);
        assert!(gamma1(&pair(1.0, 0.0, 0.5)).is_err());
    }

    #[test]
    fn gamma1_is_a_discriminant_zero() {
        // the signed-density quadratic has a double root at gamma1
        let p = pair(3.0, 6.0, 0.0);
        let g = gamma1(&p).unwrap();
        let [a, b, c] = crate::signed::signed_quadratic(&p.with_gamma(g).unwrap());
        assert!((b * b - 4.0 * a * c).abs() < 1e-12 * (b * b));
    }

    #[test]
    fn gamma2_examples() {
        assert!((gamma2(&pair(3.0, 4.0, 0.0)).unwrap() - 0.6305052).abs() < 1e-6);
        let sym = PairConfig::symmetric(3.0, 1.0, 0.5).unwrap();
        assert_eq!(gamma2(&sym).unwrap(), 1.0);
        assert!(gamma2(&pair(1.0, 0.0, 0.5)).is_err());
        let (g1, g2) = thresholds(&pair(1.0, 0.0, 0.5)).unwrap();
        assert_eq!(g1, 0.0);
        assert!((g2 - 1.0 / 5f64.sqrt()).abs() < 1e-15);
        // continuity as beta2 -> 0
        let near = gamma2(&pair(1.0, 1e-7, 0.0)).unwrap();
        assert!((near - 1.0 / 5f64.sqrt()).abs() < 1e-6);
    }

    #[test]
    fn symmetric_equal_heights_rejected() {
        assert!(gamma1(&PairConfig::symmetric(2.0, 2.0, 0.5).unwrap()).is_err());
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify(&pair(3.0, 4.0, 0.0)).unwrap().phase, Phase::Phase1);
        assert_eq!(classify(&pair(3.0, 4.0, 0.9)).unwrap().phase, Phase::Phase3);
        assert_eq!(classify(&pair(3.0, 4.0, 0.6)).unwrap().phase, Phase::Phase2);
        let g1 = gamma1(&pair(3.0, 6.0, 0.0)).unwrap();
        assert_eq!(classify(&pair(3.0, 6.0, g1)).unwrap().phase, Phase::Transition1);
        for g in [0.01, 0.2, 0.44] {
            assert_eq!(classify(&pair(1.0, 0.0, g)).unwrap().phase, Phase::Phase2);
        }
        let sym = PairConfig::symmetric(1.0, 3.0, 0.5).unwrap();
        let c = classify(&sym).unwrap();
        assert_eq!(c.phase, Phase::Phase3);
        assert!(c.geometry.is_none());
        let sym = PairConfig::symmetric(3.0, 1.0, 0.5).unwrap();
        assert_eq!(classify(&sym).unwrap().phase, Phase::Phase2);
    }

    #[test]
    fn minima_counts() {
        let near_one = field_minima(&pair(1.0, 0.3, 0.99));
        assert_eq!(near_one.len(), 2);
        assert!(near_one[0] < -1.0 && near_one[1] > 1.0);
        assert_eq!(field_minima(&pair(1.0, 0.3, 0.01)).len(), 1);
    }

    #[test]
    fn minima_threshold_value() {
        let p = pair(1.0, 0.3, 0.5);
        let g0 = minima_threshold(&p).unwrap();
        assert!((g0 - 0.218443).abs() < 1e-6, "{g0}");
        // the cubic has a double root there
        let n = field_derivative_numerator(&p.with_gamma(g0).unwrap());
        let roots = cubic_real_roots(n, 1e-10);
        let min_slope = roots
            .iter()
            .map(|&x| cubic_eval(&n, x).1.abs())
            .fold(f64::INFINITY, f64::min);
        assert!(min_slope < 1e-3, "{min_slope}");
    }

    #[test]
    fn minima_threshold_brute_force() {
        let p = pair(1.0, 0.3, 0.5);
        let g0 = minima_threshold(&p).unwrap();
        let count = |g: f64| {
            let set = p.with_gamma(g).unwrap().charge_set().unwrap();
            let xs: Vec<f64> = (0..40001).map(|i| -20.0 + 1e-3 * i as f64).collect();
            let q: Vec<f64> = xs.iter().map(|&x| crate::charges::field_eval(&set, x)).collect();
            (1..q.len() - 1).filter(|&i| q[i] < q[i - 1] && q[i] < q[i + 1]).count()
        };
        assert_eq!(count(g0 - 1e-3), 1);
        assert_eq!(count(g0 + 1e-3), 2);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn threshold_ordering(b1 in 0.01f64..10.0, b2 in 0.01f64..10.0) {
                let p = pair(b1, b2, 0.0);
                let g1 = gamma1(&p).unwrap();
                let g2 = gamma2(&p).unwrap();
                prop_assert!(0.0 < g1 && g1 < g2 && g2 < 1.0);
                prop_assert!(g2 < (b1 / b2).min(1.0));
                let alt = gamma1_geometric(&p).unwrap();
                prop_assert!((g1 - alt).abs() <= 1e-10 * g1);
            }

            #[test]
            fn circle_passes_through_charges(b1 in 0.01f64..10.0, b2 in 0.0f64..10.0) {
                let p = pair(b1, b2, 0.0);
                let g = geometry(&p);
                let r = g.radius;
                let c = Complex64::new(g.x0, 0.0);
                prop_assert!(((p.z1() - c).norm() - r).abs() <= 1e-12 * r);
                prop_assert!(((p.z2() - c).norm() - r).abs() <= 1e-12 * r);
                prop_assert!(((g.x2 - g.x0) - r).abs() <= 1e-12 * r);
                prop_assert!(((g.x0 - g.x1) - r).abs() <= 1e-12 * r);
            }
        }
    }
}
