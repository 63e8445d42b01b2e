//! Pointwise charges and the external field they create on the real line.
//!
//! A charge of strength `gamma > 0` attracts the free charge on the real
//! axis, a charge with `gamma < 0` repels it. The field is
//! `Q(x) = sum_j gamma_j log|x - z_j|`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, Error, Result};

/// A point of the complex plane.
pub type ComplexPoint = Complex64;

/// A single pointwise charge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Charge {
    location: ComplexPoint,
    strength: f64,
}

impl Charge {
    /// Builds a charge, rejecting zero strength and attractors on the real
    /// axis (the field would not be lower semi-continuous there).
    pub fn new(location: ComplexPoint, strength: f64) -> Result<Self> {
        if !location.re.is_finite() || !location.im.is_finite() || !strength.is_finite() {
            return domain("charge location and strength must be finite");
        }
        if strength == 0.0 {
            return domain("charge strength must be non-zero");
        }
        if strength > 0.0 && location.im == 0.0 {
            return domain(format!(
                "attractor at {} lies on the real axis",
                location.re
            ));
        }
        Ok(Charge { location, strength })
    }

    pub fn location(&self) -> ComplexPoint {
        self.location
    }

    pub fn strength(&self) -> f64 {
        self.strength
    }

    pub fn is_real(&self) -> bool {
        self.location.im == 0.0
    }
}

/// An ordered list of charges with positive total strength.
#[derive(Debug, Clone, PartialEq)]
pub struct ChargeSet {
    charges: Vec<Charge>,
    total_mass: f64,
}

impl ChargeSet {
    /// Builds a charge set. Charges at identical locations are merged by
    /// summing their strengths; merged charges that cancel are dropped.
    pub fn new(charges: impl IntoIterator<Item = Charge>) -> Result<Self> {
        let mut merged: Vec<(ComplexPoint, f64)> = Vec::new();
        for c in charges {
            match merged.iter_mut().find(|(z, _)| *z == c.location) {
                Some(entry) => entry.1 += c.strength,
                None => merged.push((c.location, c.strength)),
            }
        }
        let charges = merged
            .into_iter()
            .filter(|&(_, s)| s != 0.0)
            .map(|(z, s)| Charge::new(z, s))
            .collect::<Result<Vec<_>>>()?;
        let total_mass: f64 = charges.iter().map(|c| c.strength).sum();
        if !(total_mass > 0.0) {
            return domain(format!("total strength {total_mass} must be positive"));
        }
        Ok(ChargeSet {
            charges,
            total_mass,
        })
    }

    pub fn charges(&self) -> &[Charge] {
        &self.charges
    }

    /// `T`, the sum of the strengths.
    pub fn total_mass(&self) -> f64 {
        self.total_mass
    }

    /// True when no charge sits on the real axis.
    pub fn all_off_axis(&self) -> bool {
        self.charges.iter().all(|c| !c.is_real())
    }

    pub(crate) fn require_off_axis(&self) -> Result<()> {
        match self.charges.iter().find(|c| c.is_real()) {
            Some(c) => domain(format!(
                "charge at {} lies on the real axis; its balayage is singular",
                c.location.re
            )),
            None => Ok(()),
        }
    }
}

/// The attractor/repellent pair `-delta_{z1} + gamma delta_{z2}`.
///
/// In the generic configuration `z1 = -1 + i beta1` and `z2 = 1 + i beta2`;
/// with `symmetric` set both charges sit on the imaginary axis,
/// `z1 = i beta1`, `z2 = i beta2`. `beta2 = 0` puts the repellent on the
/// real axis at `1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairConfig {
    pub beta1: f64,
    pub beta2: f64,
    pub gamma: f64,
    pub symmetric: bool,
}

impl PairConfig {
    pub fn new(beta1: f64, beta2: f64, gamma: f64) -> Result<Self> {
        Self::build(beta1, beta2, gamma, false)
    }

    pub fn symmetric(beta1: f64, beta2: f64, gamma: f64) -> Result<Self> {
        Self::build(beta1, beta2, gamma, true)
    }

    fn build(beta1: f64, beta2: f64, gamma: f64, symmetric: bool) -> Result<Self> {
        if !(beta1 > 0.0 && beta1.is_finite()) {
            return domain(format!("beta1 = {beta1} must be positive"));
        }
        if !(beta2 >= 0.0 && beta2.is_finite()) {
            return domain(format!("beta2 = {beta2} must be non-negative"));
        }
        if !(0.0..=1.0).contains(&gamma) {
            return domain(format!("gamma = {gamma} must lie in [0, 1]"));
        }
        if symmetric && beta2 == 0.0 {
            return domain("symmetric pair needs beta2 > 0");
        }
        Ok(PairConfig {
            beta1,
            beta2,
            gamma,
            symmetric,
        })
    }

    /// Same geometry, different repellent strength.
    pub fn with_gamma(&self, gamma: f64) -> Result<Self> {
        Self::build(self.beta1, self.beta2, gamma, self.symmetric)
    }

    /// Real part of the attractor.
    pub fn re1(&self) -> f64 {
        if self.symmetric {
            0.0
        } else {
            -1.0
        }
    }

    /// Real part of the repellent.
    pub fn re2(&self) -> f64 {
        if self.symmetric {
            0.0
        } else {
            1.0
        }
    }

    pub fn z1(&self) -> ComplexPoint {
        Complex64::new(self.re1(), self.beta1)
    }

    pub fn z2(&self) -> ComplexPoint {
        Complex64::new(self.re2(), self.beta2)
    }

    /// `T = 1 - gamma`.
    pub fn total_mass(&self) -> f64 {
        1.0 - self.gamma
    }

    /// The pair as a general charge set (attractor strength 1, repellent
    /// strength `-gamma`).
    pub fn charge_set(&self) -> Result<ChargeSet> {
        let mut charges = vec![Charge::new(self.z1(), 1.0)?];
        if self.gamma > 0.0 {
            charges.push(Charge::new(self.z2(), -self.gamma)?);
        }
        ChargeSet::new(charges)
    }

    /// `D(x) = |x - z1|^2 |x - z2|^2`.
    pub fn denominator(&self, x: f64) -> f64 {
        let (r1, r2) = (x - self.re1(), x - self.re2());
        (r1 * r1 + self.beta1 * self.beta1) * (r2 * r2 + self.beta2 * self.beta2)
    }
}

/// `Q(x) = sum_j gamma_j log|x - z_j|`.
///
/// Returns `+inf` exactly when `x` is the location of a repellent on the
/// real axis.
pub fn field_eval(charges: &ChargeSet, x: f64) -> f64 {
    let mut q = 0.0;
    for c in &charges.charges {
        let dist = (x - c.location.re).hypot(c.location.im);
        if dist == 0.0 {
            // only repellents may sit on the axis
            return f64::INFINITY;
        }
        q += c.strength * dist.ln();
    }
    q
}

/// `Q'(x) = sum_j gamma_j (x - Re z_j) / |x - z_j|^2`.
pub fn field_derivative(charges: &ChargeSet, x: f64) -> Result<f64> {
    let mut dq = 0.0;
    for c in &charges.charges {
        let dx = x - c.location.re;
        let r2 = dx * dx + c.location.im * c.location.im;
        if r2 == 0.0 {
            return Err(Error::Pole { x });
        }
        dq += c.strength * dx / r2;
    }
    Ok(dq)
}

/// Density of the balayage of the unit point mass at `z` onto the real
/// line: the Cauchy density `|Im z| / (pi |x - z|^2)`.
pub fn balayage_point_density(z: ComplexPoint, x: f64) -> Result<f64> {
    if z.im == 0.0 {
        return domain("balayage onto the real line needs Im z != 0");
    }
    let dx = x - z.re;
    Ok(z.im.abs() / (PI * (dx * dx + z.im * z.im)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::quadrature::integrate_line;

    fn c(re: f64, im: f64, s: f64) -> Charge {
        Charge::new(Complex64::new(re, im), s).unwrap()
    }

    pub(crate) fn four_charges() -> ChargeSet {
        ChargeSet::new([
            c(-2.0, 1.0, 1.0),
            c(0.0, 3.0, -1.0),
            c(1.0, 1.0, 2.0),
            c(4.0, 0.5, -1.5),
        ])
        .unwrap()
    }

    #[test]
    fn charge_validation() {
        assert!(Charge::new(Complex64::new(1.0, 0.0), 1.0).is_err());
        assert!(Charge::new(Complex64::new(1.0, 0.0), -1.0).is_ok());
        assert!(Charge::new(Complex64::new(0.0, 1.0), 0.0).is_err());
        assert!(Charge::new(Complex64::new(f64::NAN, 1.0), 1.0).is_err());
        assert!(ChargeSet::new([c(0.0, 1.0, 1.0), c(0.0, 2.0, -1.0)]).is_err());
    }

    #[test]
    fn coincident_charges_merge() {
        let set = ChargeSet::new([c(0.0, 1.0, 1.0), c(2.0, 1.0, 0.5), c(0.0, 1.0, 0.25)]).unwrap();
        assert_eq!(set.charges().len(), 2);
        assert_eq!(set.charges()[0].strength(), 1.25);
        assert_eq!(set.total_mass(), 1.75);
    }

    #[test]
    fn field_at_unit_distance_vanishes() {
        let set = ChargeSet::new([c(0.0, 1.0, 1.0)]).unwrap();
        assert_eq!(field_eval(&set, 0.0), 0.0);
        assert_eq!(field_derivative(&set, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn pair_field_and_derivative_at_origin() {
        let pair = PairConfig::new(1.0, 0.3, 0.5).unwrap();
        let set = pair.charge_set().unwrap();
        // log sqrt 2 - 0.5 log sqrt 1.09
        let expected = 0.5 * 2f64.ln() - 0.25 * 1.09f64.ln();
        assert!((field_eval(&set, 0.0) - expected).abs() < 1e-15);
        assert!((field_eval(&set, 0.0) - 0.3250292).abs() < 1e-7);
        let dq = field_derivative(&set, 0.0).unwrap();
        let h = 1e-6;
        let fd = (field_eval(&set, h) - field_eval(&set, -h)) / (2.0 * h);
        assert!((dq - fd).abs() < 1e-8);
        assert!((dq - 0.958716).abs() < 1e-6);
    }

    #[test]
    fn field_grows_like_total_mass_log() {
        let set = four_charges();
        assert_eq!(set.total_mass(), 0.5);
        let x = 1e6;
        let tail = field_eval(&set, x) - 0.5 * x.ln();
        assert!(tail.abs() < 1e-5, "tail = {tail}");
    }

    #[test]
    fn real_repellent_gives_infinite_field_and_pole() {
        let set = ChargeSet::new([c(0.0, 1.0, 1.0), c(1.0, 0.0, -0.5)]).unwrap();
        assert_eq!(field_eval(&set, 1.0), f64::INFINITY);
        assert!(field_eval(&set, 1.0 + 1e-9).is_finite());
        assert_eq!(field_derivative(&set, 1.0), Err(Error::Pole { x: 1.0 }));
    }

    #[test]
    fn balayage_examples() {
        let i = Complex64::new(0.0, 1.0);
        assert!((balayage_point_density(i, 0.0).unwrap() - 1.0 / PI).abs() < 1e-16);
        let z = Complex64::new(-2.0, 1.0);
        assert!((balayage_point_density(z, -2.0).unwrap() - 1.0 / PI).abs() < 1e-16);
        assert!(balayage_point_density(Complex64::new(3.0, 0.0), 0.0).is_err());
    }

    #[test]
    fn balayage_has_unit_mass() {
        for z in [
            Complex64::new(0.0, 1.0),
            Complex64::new(-3.0, 0.01),
            Complex64::new(5.0, -20.0),
        ] {
            let m = integrate_line(
                |x| balayage_point_density(z, x).unwrap(),
                z.re,
                z.im.abs(),
                1e-12,
            )
            .unwrap();
            assert!((m - 1.0).abs() < 1e-8, "mass {m} for {z}");
        }
    }

    #[test]
    fn pair_denominator_matches_distances() {
        let pair = PairConfig::new(3.0, 4.0, 0.2).unwrap();
        let x = 0.7;
        let d = (Complex64::new(x, 0.0) - pair.z1()).norm_sqr()
            * (Complex64::new(x, 0.0) - pair.z2()).norm_sqr();
        assert!((pair.denominator(x) - d).abs() < 1e-12 * d);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn derivative_matches_central_differences(x in -20.0f64..20.0) {
                let set = four_charges();
                let h = 1e-5;
                let fd = (field_eval(&set, x + h) - field_eval(&set, x - h)) / (2.0 * h);
                let dq = field_derivative(&set, x).unwrap();
                prop_assert!((dq - fd).abs() < 1e-7);
            }

            #[test]
            fn balayage_is_conjugation_invariant(re in -10.0f64..10.0, im in 0.01f64..10.0, x in -50.0f64..50.0) {
                let z = Complex64::new(re, im);
                let a = balayage_point_density(z, x).unwrap();
                let b = balayage_point_density(z.conj(), x).unwrap();
                prop_assert_eq!(a, b);
            }

            #[test]
            fn field_is_finite_off_charges(x in -100.0f64..100.0) {
                prop_assert!(field_eval(&four_charges(), x).is_finite());
            }
        }
    }
}
