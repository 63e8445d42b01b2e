//! Closed-form equilibrium measure of the attractor/repellent pair.
//!
//! In every phase the density has the form
//! `(d/pi) sqrt|A(x)| |B(x)| / D(x)` with `A(x) = (x - a1)(x - a2)` built from
//! the finite support endpoints and `B` of degree at most two. The
//! endpoints come from the Apollonius relation between `a1`, `a2` and the
//! circle through the charges; the constant `d` from the residue of the
//! Cauchy transform at `z1`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::charges::{ComplexPoint, PairConfig};
use crate::config::Tolerances;
use crate::error::{domain, Error, Result};
use crate::extended::ExtReal;
use crate::numerics::ode::{integrate, OdeOptions};
use crate::numerics::quadrature::{integrate_ext, integrate_line};
use crate::numerics::roots::bisect_polish;
use crate::phases::{classify_with, geometry, thresholds, Geometry, Phase};
use crate::signed::{signed_quadratic, Interval, SupportSet};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// The polynomial `B` in the density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BFactor {
    /// `B(z) = (z - b)(z - conj b)`, `b` in the upper half plane.
    Conjugate(ComplexPoint),
    /// `B(z) = z - b` with `b` real.
    Real(f64),
    /// `B = 1`.
    Constant,
}

impl BFactor {
    pub fn at(&self, z: Complex64) -> Complex64 {
        match *self {
            BFactor::Conjugate(b) => (z - b) * (z - b.conj()),
            BFactor::Real(b) => z - b,
            BFactor::Constant => Complex64::new(1.0, 0.0),
        }
    }

    /// The root in the closed upper half plane, if any.
    pub fn root(&self) -> Option<ComplexPoint> {
        match *self {
            BFactor::Conjugate(b) => Some(b),
            BFactor::Real(b) => Some(Complex64::new(b, 0.0)),
            BFactor::Constant => None,
        }
    }
}

/// Closed-form description of the equilibrium density for one `gamma`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityFn {
    pub phase: Phase,
    pub a1: ExtReal,
    pub a2: ExtReal,
    pub b: BFactor,
    pub d: f64,
    pub pair: PairConfig,
    support: SupportSet,
}

/// Intersections of the internal and external bisectors of the angle
/// `a1 z2 a2` with the real axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BisectorPoints {
    pub h: f64,
    pub k: f64,
}

/// The residue constant `c` read off at each charge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidueConstants {
    /// From the residue at `z1`.
    pub c1: Complex64,
    /// From the residue at `z2`; `None` when the repellent is absent or on
    /// the real axis.
    pub c2: Option<Complex64>,
    /// `+1` if the principal branch of `sqrt A` was kept, `-1` if its
    /// negative was taken.
    pub branch: f64,
}

fn finite_ends(a1: ExtReal, a2: ExtReal) -> impl Iterator<Item = f64> {
    [a1, a2].into_iter().filter_map(ExtReal::finite)
}

/// `sqrt A(z)` as the product of principal roots of `z - a` over the finite
/// endpoints.
pub fn sqrt_a(z: Complex64, a1: ExtReal, a2: ExtReal) -> Complex64 {
    finite_ends(a1, a2).fold(Complex64::new(1.0, 0.0), |acc, a| acc * (z - a).sqrt())
}

/// `sqrt A(z)` up to a positive factor, with an endpoint at `+inf`
/// contributing `i` and one at `-inf` contributing `1`.
fn sqrt_a_direction(z: Complex64, a1: ExtReal, a2: ExtReal) -> Complex64 {
    [a1, a2].into_iter().fold(Complex64::new(1.0, 0.0), |acc, a| match a {
        ExtReal::Finite(a) => acc * (z - a).sqrt(),
        ExtReal::PosInf => acc * I,
        ExtReal::NegInf => acc,
    })
}

fn abs_a(x: f64, a1: ExtReal, a2: ExtReal) -> f64 {
    finite_ends(a1, a2).map(|a| x - a).product::<f64>().abs()
}

/// `B` for the current phase: conjugate roots in Phase 1, `x2` afterwards.
pub fn b_factor(pair: &PairConfig) -> Result<BFactor> {
    b_factor_with(pair, &Tolerances::default())
}

fn b_factor_with(pair: &PairConfig, tol: &Tolerances) -> Result<BFactor> {
    let class = classify_with(pair, tol)?;
    if class.phase == Phase::Phase1 {
        let [a, b, c] = signed_quadratic(pair);
        let re = -b / (2.0 * a);
        let im = (c / a - re * re).max(0.0).sqrt();
        return Ok(BFactor::Conjugate(Complex64::new(re, im)));
    }
    if pair.symmetric {
        return Ok(if pair.beta1 > pair.beta2 { BFactor::Real(0.0) } else { BFactor::Constant });
    }
    Ok(BFactor::Real(geometry(pair).x2))
}

/// The root `b` of `B` in the closed upper half plane: on the circle
/// between `z2` and `x2` in Phase 1, `x2` afterwards.
pub fn b_root(pair: &PairConfig) -> Result<ComplexPoint> {
    b_factor(pair)?
        .root()
        .ok_or_else(|| Error::Degenerate("B is constant in this configuration".into()))
}

/// Closed-form endpoint of the symmetric pair, `S = [-a, a]` or the
/// complement of `(-a, a)`.
pub fn symmetric_endpoint(pair: &PairConfig) -> Result<f64> {
    if !pair.symmetric {
        return domain("symmetric_endpoint needs a symmetric pair");
    }
    let (b1, b2, g) = (pair.beta1, pair.beta2, pair.gamma);
    let (num, den) = if b1 > b2 {
        (g * g * b1 * b1 - b2 * b2, 1.0 - g * g)
    } else if b1 < b2 {
        (1.0 - g * g, g * g * b2 * b2 - b1 * b1)
    } else {
        return domain("symmetric pair with beta1 = beta2");
    };
    if num < 0.0 || den < 0.0 {
        return domain(format!("gamma = {g} lies below the symmetric threshold"));
    }
    let root = (num / den).sqrt();
    Ok(if b1 > b2 { root } else { b1 * b2 * root })
}

/// Support endpoints with the default tolerances.
pub fn solve_endpoints(pair: &PairConfig) -> Result<(ExtReal, ExtReal)> {
    solve_endpoints_with(pair, &Tolerances::default())
}

/// Support endpoints `(a1, a2)` for `gamma` past the first threshold.
///
/// In Phase 2 the support is `(-inf, a1] u [a2, inf)`, in Phase 3 it is
/// `[a1, a2]`. The endpoint inside the circle is found by bracketed root
/// finding on the Apollonius ratio and its partner by inversion in the
/// circle.
pub fn solve_endpoints_with(pair: &PairConfig, tol: &Tolerances) -> Result<(ExtReal, ExtReal)> {
    let class = classify_with(pair, tol)?;
    if pair.symmetric {
        return symmetric_endpoints(pair, class.phase);
    }
    let geo = geometry(pair);
    let Geometry { x0, x1, x2, radius: r } = geo;
    let ends = match class.phase {
        Phase::Phase1 => {
            return domain(format!(
                "gamma = {} is below Gamma1 = {}; the support is the whole line",
                pair.gamma, class.gamma1
            ))
        }
        Phase::Transition1 => (x2.into(), x2.into()),
        Phase::Transition2 => (x0.into(), ExtReal::PosInf),
        Phase::Phase2 => {
            let a1 = apollonius_root(pair, &geo, x0, x2, tol)?;
            (a1.into(), (x0 + r * r / (a1 - x0)).into())
        }
        Phase::Phase3 if pair.gamma >= 1.0 => (x1.into(), x1.into()),
        Phase::Phase3 => {
            let a2 = apollonius_root(pair, &geo, x1, x0, tol)?;
            ((x0 - r * r / (x0 - a2)).into(), a2.into())
        }
    };
    Ok(ends)
}

fn symmetric_endpoints(pair: &PairConfig, phase: Phase) -> Result<(ExtReal, ExtReal)> {
    match phase {
        Phase::Phase1 => domain("gamma is below the symmetric threshold; the support is the whole line"),
        Phase::Transition1 => Ok((0.0.into(), 0.0.into())),
        Phase::Transition2 => Ok((ExtReal::NegInf, ExtReal::PosInf)),
        _ => {
            let a = symmetric_endpoint(pair)?;
            Ok(if a.is_finite() { ((-a).into(), a.into()) } else { (ExtReal::NegInf, ExtReal::PosInf) })
        }
    }
}

/// Squared target ratio `rho*^2` of `|z2 - a| / |z1 - a|` at the endpoints.
fn apollonius_ratio_sq(pair: &PairConfig, geo: &Geometry) -> f64 {
    // (gamma beta2 / beta1) |z1 - x2| / |z2 - x2| with beta2 / |z2 - x2|
    // written so that it stays finite as beta2 -> 0
    let d1 = (geo.x2 + 1.0).powi(2) + pair.beta1 * pair.beta1;
    let t = pair.beta2 / (geo.radius + 1.0 - geo.x0);
    let rho = pair.gamma * (d1 / (1.0 + t * t)).sqrt() / pair.beta1;
    rho * rho
}

/// `|z2 - a|^2 - rho*^2 |z1 - a|^2` and its derivative.
fn apollonius_residual(pair: &PairConfig, rho_sq: f64, a: f64) -> (f64, f64) {
    let (r1, r2) = (a - pair.re1(), a - pair.re2());
    let f = r2 * r2 + pair.beta2 * pair.beta2 - rho_sq * (r1 * r1 + pair.beta1 * pair.beta1);
    (f, 2.0 * r2 - 2.0 * rho_sq * r1)
}

fn apollonius_root(pair: &PairConfig, geo: &Geometry, lo: f64, hi: f64, tol: &Tolerances) -> Result<f64> {
    let rho_sq = apollonius_ratio_sq(pair, geo);
    let xtol = tol.root_x * geo.radius.max(1.0);
    bisect_polish(|a| apollonius_residual(pair, rho_sq, a), lo, hi, xtol)
}

/// Coefficients `[p, q, s]` of the quadratic `p a^2 + q a + s` whose two
/// roots are both support endpoints (the Apollonius circle condition).
pub fn apollonius_quadratic(pair: &PairConfig) -> [f64; 3] {
    let rho_sq = apollonius_ratio_sq(pair, &geometry(pair));
    let (p1, p2) = (pair.re1(), pair.re2());
    [
        1.0 - rho_sq,
        -2.0 * (p2 - rho_sq * p1),
        p2 * p2 + pair.beta2 * pair.beta2 - rho_sq * (p1 * p1 + pair.beta1 * pair.beta1),
    ]
}

/// Support of the equilibrium measure for any `gamma`.
pub fn equilibrium_support(pair: &PairConfig) -> Result<SupportSet> {
    let df = density_fn(pair)?;
    Ok(df.support)
}

fn support_from(phase: Phase, a1: ExtReal, a2: ExtReal, symmetric: bool) -> SupportSet {
    let segment = matches!(phase, Phase::Phase3) || (symmetric && phase == Phase::Transition2);
    match phase {
        Phase::Phase1 | Phase::Transition1 => SupportSet::whole_line(),
        _ if segment => SupportSet::new(vec![Interval { lo: a1, hi: a2 }]),
        _ => {
            let mut parts = Vec::new();
            if a1 != ExtReal::NegInf {
                parts.push(Interval { lo: ExtReal::NegInf, hi: a1 });
            }
            if a2 != ExtReal::PosInf {
                parts.push(Interval { lo: a2, hi: ExtReal::PosInf });
            }
            SupportSet::new(parts)
        }
    }
}

/// `d = beta1 |z1 - z2| |z1 - conj z2| / (|sqrt A(z1)| |B(z1)|)`.
pub fn normalization_d(pair: &PairConfig, a1: ExtReal, a2: ExtReal, b: BFactor) -> Result<f64> {
    let z1 = pair.z1();
    let z2 = pair.z2();
    let den = sqrt_a(z1, a1, a2).norm() * b.at(z1).norm();
    if !(den > 0.0) {
        return Err(Error::Degenerate("sqrt A(z1) B(z1) vanishes".into()));
    }
    Ok(pair.beta1 * (z1 - z2).norm() * (z1 - z2.conj()).norm() / den)
}

/// The constant `c` of the density from both residue equations.
///
/// The branch of `sqrt A` is fixed post hoc: `c` must lie on `i R+` when
/// the support is unbounded and on `R-` when it is a segment.
pub fn residue_constants(
    pair: &PairConfig,
    phase: Phase,
    a1: ExtReal,
    a2: ExtReal,
    b: BFactor,
) -> Result<ResidueConstants> {
    residues(pair, phase, a1, a2, b, true)
}

fn residues(
    pair: &PairConfig,
    phase: Phase,
    a1: ExtReal,
    a2: ExtReal,
    b: BFactor,
    strict: bool,
) -> Result<ResidueConstants> {
    let (z1, z2) = (pair.z1(), pair.z2());
    let num1 = I * pair.beta1 * (z1 - z2) * (z1 - z2.conj());
    let den1 = sqrt_a(z1, a1, a2) * b.at(z1);
    if den1.norm() == 0.0 {
        return Err(Error::Degenerate("sqrt A(z1) B(z1) vanishes".into()));
    }
    let principal = num1 / den1;
    let branch = if pair.symmetric {
        1.0
    } else if phase == Phase::Phase3 {
        if principal.re <= 0.0 { 1.0 } else { -1.0 }
    } else if principal.im >= 0.0 {
        1.0
    } else {
        -1.0
    };
    let c1 = principal * branch;
    if strict && !pair.symmetric {
        let off = if phase == Phase::Phase3 { c1.im.abs() } else { c1.re.abs() };
        if off > 1e-6 * c1.norm() {
            return Err(Error::Degenerate(format!(
                "residue constant {c1} is off its expected ray in {phase}"
            )));
        }
    }
    let c2 = if pair.gamma > 0.0 && pair.beta2 > 0.0 {
        let num2 = -I * pair.gamma * pair.beta2 * (z2 - z1) * (z2 - z1.conj());
        let den2 = branch * sqrt_a(z2, a1, a2) * b.at(z2);
        (den2.norm() > 0.0).then(|| num2 / den2)
    } else {
        None
    };
    Ok(ResidueConstants { c1, c2, branch })
}

/// Density descriptor with the default tolerances.
pub fn density_fn(pair: &PairConfig) -> Result<DensityFn> {
    density_fn_with(pair, &Tolerances::default())
}

pub fn density_fn_with(pair: &PairConfig, tol: &Tolerances) -> Result<DensityFn> {
    let phase = classify_with(pair, tol)?.phase;
    let (a1, a2) = match phase {
        Phase::Phase1 => (ExtReal::NegInf, ExtReal::PosInf),
        _ => solve_endpoints_with(pair, tol)?,
    };
    let b = b_factor_with(pair, tol)?;
    let d = normalization_d(pair, a1, a2, b)?;
    let support = support_from(phase, a1, a2, pair.symmetric);
    Ok(DensityFn { phase, a1, a2, b, d, pair: *pair, support })
}

impl DensityFn {
    pub fn support(&self) -> &SupportSet {
        &self.support
    }

    /// Value of the density; zero off the support.
    pub fn eval(&self, x: f64) -> f64 {
        if !self.support.contains(x) {
            return 0.0;
        }
        let b = self.b.at(Complex64::new(x, 0.0)).norm();
        self.d / PI * abs_a(x, self.a1, self.a2).sqrt() * b / self.pair.denominator(x)
    }

    /// Total mass by adaptive quadrature over the support.
    pub fn mass(&self, tol: f64) -> Result<f64> {
        let p = &self.pair;
        let scale = p.beta1.max(p.beta2).max(1.0);
        let f = |x: f64| self.eval(x);
        let mut total = 0.0;
        for iv in self.support.intervals() {
            total += match (iv.lo, iv.hi) {
                (ExtReal::NegInf, ExtReal::PosInf) => integrate_line(f, p.re1(), scale, tol)?,
                (lo, hi) if lo == hi => 0.0,
                (lo, hi) => integrate_ext(f, lo, hi, scale, tol)?,
            };
        }
        Ok(total)
    }
}

/// `(d/pi) sqrt|A(x)| |B(x)| / D(x)` on the support, zero elsewhere.
pub fn density_eval(df: &DensityFn, x: f64) -> f64 {
    df.eval(x)
}

/// Bisector points `h` and `k` of the angle `a1 z2 a2`. An infinite
/// endpoint is handled by its limiting direction.
pub fn bisector_points(pair: &PairConfig, a1: ExtReal, a2: ExtReal) -> Result<BisectorPoints> {
    let z2 = pair.z2();
    let s = sqrt_a_direction(z2, a1, a2);
    let w = z2.conj() * s;
    if s.im == 0.0 || s.re == 0.0 {
        return Err(Error::Degenerate("collapsed support: sqrt A(z2) is real or imaginary".into()));
    }
    Ok(BisectorPoints { h: w.im / s.im, k: w.re / s.re })
}

/// One sample of an endpoint trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowSample {
    pub gamma: f64,
    pub a1: f64,
    pub a2: f64,
    /// `|db/dgamma|` with `b` held at `x2`, relative to the largest endpoint
    /// speed; vanishes when `x2` is stationary.
    pub b_residual: f64,
}

/// Endpoint trajectory over a `gamma` range inside one phase.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub phase: Phase,
    pub samples: Vec<FlowSample>,
}

impl Trajectory {
    pub fn max_b_residual(&self) -> f64 {
        self.samples.iter().map(|s| s.b_residual).fold(0.0, f64::max)
    }
}

struct FlowField {
    pair: PairConfig,
    segment: bool,
    x2: f64,
}

impl FlowField {
    fn c(&self, a1: f64, a2: f64) -> Result<Complex64> {
        let phase = if self.segment { Phase::Phase3 } else { Phase::Phase2 };
        // stage states sit slightly off the manifold, so the ray is not enforced
        let rc = residues(&self.pair, phase, a1.into(), a2.into(), BFactor::Real(self.x2), false)?;
        Ok(rc.c1 * rc.branch)
    }

    /// `Im` or `Re` part of `(x - conj z2) sqrt A(z2)` as the numerator
    /// factor of the flow, for the gap or the segment respectively.
    fn numerator(&self, x: f64, s: Complex64) -> Complex64 {
        let w = (x - self.pair.z2().conj()) * s;
        if self.segment {
            Complex64::new(w.re, 0.0)
        } else {
            I * w.im
        }
    }

    fn rates(&self, a1: f64, a2: f64) -> Result<([f64; 2], f64)> {
        let c = self.c(a1, a2)?;
        let s = sqrt_a(self.pair.z2(), a1.into(), a2.into());
        let z1 = self.pair.z1();
        let mut out = [0.0; 2];
        for (j, (a, other)) in [(a1, a2), (a2, a1)].into_iter().enumerate() {
            let dist = (a - z1).norm_sqr();
            let v = 2.0 * self.numerator(a, s) * dist / (c * (a - other) * (a - self.x2));
            out[j] = v.re;
        }
        let b = self.x2;
        let ab = (b - a1) * (b - a2);
        let db = self.numerator(b, s) * (b - z1).norm_sqr() / (c * ab);
        let scale = out[0].abs().max(out[1].abs());
        Ok((out, db.norm() / scale))
    }
}

/// Integrates the endpoint flow in `gamma` and samples it at `steps + 1`
/// equally spaced values from `gamma_from` to `gamma_to`.
///
/// The flow starts at the collision point of the phase (`Gamma1` at `x2`
/// for Phase 2, `gamma = 1` at `x1` for Phase 3) from a split of
/// `ode_split * r` and is integrated with an adaptive Dormand-Prince pair.
/// `d` is recomputed from the residue at `z1` on every evaluation.
pub fn endpoint_flow(pair: &PairConfig, gamma_from: f64, gamma_to: f64, steps: usize) -> Result<Trajectory> {
    endpoint_flow_with(pair, gamma_from, gamma_to, steps, &Tolerances::default())
}

pub fn endpoint_flow_with(
    pair: &PairConfig,
    gamma_from: f64,
    gamma_to: f64,
    steps: usize,
    tol: &Tolerances,
) -> Result<Trajectory> {
    if pair.symmetric {
        return domain("endpoint flow is defined for the non-symmetric pair");
    }
    let p_from = classify_with(&pair.with_gamma(gamma_from)?, tol)?.phase;
    let p_to = classify_with(&pair.with_gamma(gamma_to)?, tol)?.phase;
    if p_from != p_to || !matches!(p_from, Phase::Phase2 | Phase::Phase3) {
        return domain(format!(
            "gamma range [{gamma_from}, {gamma_to}] must lie inside one of Phase2, Phase3"
        ));
    }
    let segment = p_from == Phase::Phase3;
    let geo = geometry(pair);
    let Geometry { x0, x1, x2, radius: r } = geo;
    let field = FlowField { pair: *pair, segment, x2 };
    let delta = tol.ode_split * r;
    let (g0, y0) = if segment {
        let a2 = x1 + delta;
        (1.0, [x0 - r * r / (x0 - a2), a2])
    } else {
        let a1 = x2 - delta;
        (thresholds(pair)?.0, [a1, x0 + r * r / (a1 - x0)])
    };

    let n = steps.max(1);
    let gammas: Vec<f64> = (0..=n)
        .map(|i| gamma_from + (gamma_to - gamma_from) * i as f64 / n as f64)
        .collect();
    let mut order: Vec<usize> = (0..gammas.len()).collect();
    // integrate away from the collision point
    order.sort_by(|&i, &j| {
        let (a, b) = ((gammas[i] - g0).abs(), (gammas[j] - g0).abs());
        a.total_cmp(&b)
    });
    let outputs: Vec<f64> = order.iter().map(|&i| gammas[i]).collect();

    let opts = OdeOptions {
        rtol: tol.ode_rtol,
        atol: tol.ode_rtol * 1e-3 * r,
        max_steps: 1_000_000,
        h0: (delta / r).powi(2),
    };
    let states = integrate(
        |_, y, dy| {
            let (rates, _) = field.rates(y[0], y[1])?;
            dy.copy_from_slice(&rates);
            Ok(())
        },
        g0,
        &y0,
        &outputs,
        &opts,
    )?;

    let mut samples = vec![None; gammas.len()];
    for (&i, y) in order.iter().zip(states) {
        let (_, b_residual) = field.rates(y[0], y[1])?;
        samples[i] = Some(FlowSample { gamma: gammas[i], a1: y[0], a2: y[1], b_residual });
    }
    Ok(Trajectory {
        phase: p_from,
        samples: samples.into_iter().map(|s| s.expect("every sample integrated")).collect(),
    })
}
