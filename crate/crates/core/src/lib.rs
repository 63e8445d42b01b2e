//! Equilibrium and signed equilibrium measures on the real line in the
//! external field of finitely many pointwise charges.
//!
//! The crate covers three layers:
//!
//! * general charge sets: the field `Q`, its derivative, the balayage of a
//!   point mass and the signed equilibrium density ([`charges`], [`signed`]);
//! * the attractor/repellent pair: circle geometry, phase thresholds and
//!   classification ([`phases`]), closed-form supports, densities and the
//!   endpoint flow ([`solver`]);
//! * an independent grid-discretized energy minimizer used to check the
//!   closed forms ([`oracle`]).
//!
//! With the `parallel` feature (on by default) the oracle's kernel products
//! and the sweep helpers in [`par`] run on rayon; without it they run
//! sequentially with identical results.

pub mod charges;
pub mod config;
pub mod error;
pub mod extended;
pub mod numerics;
pub mod oracle;
pub mod par;
pub mod phases;
pub mod signed;
pub mod solver;

pub use charges::{
    balayage_point_density, field_derivative, field_eval, Charge, ChargeSet, ComplexPoint,
    PairConfig,
};
pub use config::Tolerances;
pub use error::{Error, Result};
pub use extended::ExtReal;
pub use phases::{classify, gamma1, gamma2, geometry, Geometry, Phase, PhaseClassification};
pub use signed::{
    compact_support_criterion, positive_part_support, signed_density_eval, tail_coefficient,
    Interval, SupportSet,
};
pub use solver::{
    bisector_points, density_eval, density_fn, endpoint_flow, normalization_d, solve_endpoints,
    symmetric_endpoint, BisectorPoints, DensityFn,
};
