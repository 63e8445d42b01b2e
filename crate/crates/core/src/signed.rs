//! Signed equilibrium density, the compactness criterion and the support of
//! the positive part for the pair.
//!
//! For charges off the real axis the signed equilibrium measure of mass `T`
//! is the balayage of `sum_j gamma_j delta_{z_j}`, with density
//! `eta'(x) = (1/pi) sum_j gamma_j |Im z_j| / |x - z_j|^2`.

use std::f64::consts::PI;
use std::fmt;

use crate::charges::{ChargeSet, PairConfig};
use crate::config::Tolerances;
use crate::error::{domain, Result};
use crate::extended::ExtReal;
use crate::numerics::poly::quadratic_real_roots;

/// A closed interval of the extended real line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: ExtReal,
    pub hi: ExtReal,
}

impl Interval {
    pub fn new(lo: impl Into<ExtReal>, hi: impl Into<ExtReal>) -> Self {
        Interval { lo: lo.into(), hi: hi.into() }
    }

    pub fn whole_line() -> Self {
        Interval { lo: ExtReal::NegInf, hi: ExtReal::PosInf }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo.to_f64() <= x && x <= self.hi.to_f64()
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    /// True when `self` lies inside `other` up to `slack` at finite ends.
    pub fn within(&self, other: &Interval, slack: f64) -> bool {
        let lo_ok = match (other.lo, self.lo) {
            (ExtReal::NegInf, _) => true,
            (_, ExtReal::NegInf) => false,
            (o, s) => s.to_f64() >= o.to_f64() - slack,
        };
        let hi_ok = match (other.hi, self.hi) {
            (ExtReal::PosInf, _) => true,
            (_, ExtReal::PosInf) => false,
            (o, s) => s.to_f64() <= o.to_f64() + slack,
        };
        lo_ok && hi_ok
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// A union of at most two sorted, disjoint closed intervals.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SupportSet {
    intervals: Vec<Interval>,
}

impl SupportSet {
    pub fn new(intervals: Vec<Interval>) -> Self {
        debug_assert!(intervals.windows(2).all(|w| w[0].hi.to_f64() <= w[1].lo.to_f64()));
        SupportSet { intervals }
    }

    pub fn empty() -> Self {
        SupportSet::default()
    }

    pub fn whole_line() -> Self {
        SupportSet::new(vec![Interval::whole_line()])
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn components(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_bounded(&self) -> bool {
        self.intervals.iter().all(Interval::is_bounded)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.intervals.iter().any(|i| i.contains(x))
    }

    /// True when every component of `self` sits inside some component of
    /// `other`, with `slack` allowed at finite endpoints.
    pub fn is_subset_of(&self, other: &SupportSet, slack: f64) -> bool {
        self.intervals
            .iter()
            .all(|s| other.intervals.iter().any(|o| s.within(o, slack)))
    }
}

impl fmt::Display for SupportSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            return write!(f, "{{}}");
        }
        for (i, iv) in self.intervals.iter().enumerate() {
            if i > 0 {
                write!(f, " u ")?;
            }
            write!(f, "{iv}")?;
        }
        Ok(())
    }
}

/// The signed equilibrium measure of a charge set.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedDensity {
    charges: ChargeSet,
}

impl SignedDensity {
    pub fn new(charges: ChargeSet) -> Result<Self> {
        charges.require_off_axis()?;
        Ok(SignedDensity { charges })
    }

    pub fn charges(&self) -> &ChargeSet {
        &self.charges
    }

    pub fn eval(&self, x: f64) -> f64 {
        eval_unchecked(&self.charges, x)
    }

    pub fn tail_coefficient(&self) -> f64 {
        self.charges
            .charges()
            .iter()
            .map(|c| c.strength() * c.location().im.abs())
            .sum()
    }
}

fn eval_unchecked(charges: &ChargeSet, x: f64) -> f64 {
    let mut s = 0.0;
    for c in charges.charges() {
        let z = c.location();
        let dx = x - z.re;
        s += c.strength() * z.im.abs() / (dx * dx + z.im * z.im);
    }
    s / PI
}

/// `eta'(x)`; negative values are allowed.
pub fn signed_density_eval(charges: &ChargeSet, x: f64) -> Result<f64> {
    charges.require_off_axis()?;
    Ok(eval_unchecked(charges, x))
}

/// `sum_j gamma_j |Im z_j|`, the coefficient of `1/(pi x^2)` in the tail of
/// the signed density.
pub fn tail_coefficient(charges: &ChargeSet) -> Result<f64> {
    Ok(SignedDensity::new(charges.clone())?.tail_coefficient())
}

/// True iff the tail coefficient is negative, which guarantees a compact
/// equilibrium support.
pub fn compact_support_criterion(charges: &ChargeSet) -> Result<bool> {
    Ok(tail_coefficient(charges)? < 0.0)
}

/// Coefficients `[a, b, c]` of the numerator `q(x) = a x^2 + b x + c` of
/// the pair's signed density, `eta'(x) = q(x) / (pi D(x))`.
pub fn signed_quadratic(pair: &PairConfig) -> [f64; 3] {
    let (b1, b2, g) = (pair.beta1, pair.beta2, pair.gamma);
    let (r1, r2) = (pair.re1(), pair.re2());
    [
        b1 - g * b2,
        -2.0 * (b1 * r2 - g * b2 * r1),
        b1 * (r2 * r2 + b2 * b2) - g * b2 * (r1 * r1 + b1 * b1),
    ]
}

/// Real zeros of the signed-density numerator, ascending; a double zero is
/// listed twice, a degenerate linear numerator gives at most one zero.
pub fn positive_part_boundary(pair: &PairConfig, tol: &Tolerances) -> Vec<f64> {
    let [a, b, c] = signed_quadratic(pair);
    if a.abs() < tol.linear_degeneracy * (pair.beta1 + pair.gamma * pair.beta2) {
        return if b == 0.0 { vec![] } else { vec![-c / b] };
    }
    quadratic_real_roots(a, b, c, tol.double_root)
}

/// Support of the positive part of the pair's signed equilibrium measure,
/// with the default tolerances.
pub fn positive_part_support(pair: &PairConfig) -> Result<SupportSet> {
    positive_part_support_with(pair, &Tolerances::default())
}

pub fn positive_part_support_with(pair: &PairConfig, tol: &Tolerances) -> Result<SupportSet> {
    if pair.beta2 == 0.0 {
        return domain("positive part support needs beta2 > 0");
    }
    let [a, b, c] = signed_quadratic(pair);
    let roots = positive_part_boundary(pair, tol);
    let linear = a.abs() < tol.linear_degeneracy * (pair.beta1 + pair.gamma * pair.beta2);
    let set = if linear {
        match roots.as_slice() {
            // q decreases through its zero in the generic configuration
            [r] if b < 0.0 => SupportSet::new(vec![Interval::new(ExtReal::NegInf, *r)]),
            [r] => SupportSet::new(vec![Interval::new(*r, ExtReal::PosInf)]),
            _ if c >= 0.0 => SupportSet::whole_line(),
            _ => SupportSet::empty(),
        }
    } else if a > 0.0 {
        match roots.as_slice() {
            [r1, r2] if r1 < r2 => SupportSet::new(vec![
                Interval::new(ExtReal::NegInf, *r1),
                Interval::new(*r2, ExtReal::PosInf),
            ]),
            _ => SupportSet::whole_line(),
        }
    } else {
        match roots.as_slice() {
            [r1, r2] => SupportSet::new(vec![Interval::new(*r1, *r2)]),
            _ => SupportSet::empty(),
        }
    };
    Ok(set)
}
