/// Centralized numerical tolerances.
///
/// Every routine that compares, detects a transition or stops an iteration
/// takes its threshold from here, so a whole run can be tightened or relaxed
/// from one place.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Default absolute/relative comparison tolerance.
    pub compare: f64,
    /// Half-width in gamma of the band labelled as a phase transition.
    pub transition: f64,
    /// Relative discriminant threshold for double-root detection.
    pub double_root: f64,
    /// Relative size of the leading coefficient below which the signed-density
    /// quadratic is treated as linear.
    pub linear_degeneracy: f64,
    /// Absolute tolerance on endpoint coordinates for the bracketed solver.
    pub root_x: f64,
    /// Relative tolerance of the adaptive Runge-Kutta integrator.
    pub ode_rtol: f64,
    /// Initial split of a collided endpoint pair, relative to the circle radius.
    pub ode_split: f64,
    /// Absolute tolerance for the bisection locating the two-minima threshold.
    pub minima_threshold: f64,
    /// Target absolute error of adaptive quadrature.
    pub quadrature: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            compare: 1e-9,
            transition: 1e-9,
            double_root: 1e-10,
            linear_degeneracy: 1e-12,
            root_x: 1e-12,
            ode_rtol: 1e-9,
            ode_split: 1e-6,
            minima_threshold: 1e-8,
            quadrature: 1e-11,
        }
    }
}
